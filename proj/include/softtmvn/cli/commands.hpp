#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "softtmvn/chain.hpp"
#include "softtmvn/cli/config.hpp"

namespace softtmvn::cli {

struct CommonOptions {
  std::string config_path;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> replicates;
};

// Each command writes its outputs under out_dir and returns the process exit
// code. Outputs other than timing.json depend only on the config and seed.
//
//   sample  : draws.csv, report.json, timing.json
//   compare : report.json, timing.json
//   msim    : report.json, timing.json
//   bench   : report.json (grid and config), timing.json (measurements)
int cmd_sample(const CommonOptions& opts);
int cmd_compare(const CommonOptions& opts);
int cmd_msim(const CommonOptions& opts);
int cmd_bench(const CommonOptions& opts);

/// Runs one sampler on a problem; the chain seed comes from spec.chain.seed.
SampleBatch run_sampler(const Problem& problem, double eta, const SamplerSpec& spec);

/// Fraction of draws satisfying every hard constraint.
double hard_fraction(const RowMatrix& draws, const ConstraintSet& c);

/// Resolved sampler settings as JSON, for embedding in reports.
nlohmann::ordered_json describe_sampler(const SamplerSpec& spec);

/// Pretty-printed JSON with a trailing newline, written atomically.
void write_json_report(const std::filesystem::path& path, const nlohmann::ordered_json& j);

/// Seed precedence: --seed flag, then the config's "seed", then 0.
std::uint64_t resolve_seed(const CommonOptions& opts, const FieldReader& cfg);

/// Runs body(i) for i in [0, n) on up to `threads` worker threads.
/// The first exception thrown by any call is rethrown.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace softtmvn::cli

namespace softtmvn::cli {

/// Timing grid for sample_posterior with a diagonal Σ: d varies at fixed r,
/// then r varies at fixed d.
struct BenchSpec {
  std::uint64_t fixed_r = 50;
  std::vector<std::uint64_t> d_grid{500, 1000, 2000, 4000};
  std::uint64_t fixed_d = 2000;
  std::vector<std::uint64_t> r_grid{25, 50, 100, 200};
  std::uint64_t repeats = 15;
  std::uint64_t seed = 0;
};

struct BenchRow {
  std::uint64_t r;
  std::uint64_t d;
  double micros;  // median per call, prior draw excluded
};

struct BenchResult {
  std::vector<BenchRow> d_rows;
  std::vector<BenchRow> r_rows;
  double slope_d;
  double slope_r;
};

BenchResult run_bench(const BenchSpec& spec);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace softtmvn::cli
