#pragma once

// JSON config parsing for the experiment CLI. Every object is read through
// FieldReader, which records the path of each field so errors name it
// ("config.chain.thin: expected a positive integer") and which rejects keys
// it was never asked about.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "softtmvn/chain.hpp"
#include "softtmvn/constraints.hpp"
#include "softtmvn/covariance.hpp"
#include "softtmvn/msim.hpp"

namespace softtmvn::cli {

/// Schema violation; the message starts with the offending field path.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class FieldReader {
 public:
  FieldReader(const nlohmann::json& obj, std::string path);

  const std::string& path() const noexcept { return path_; }
  bool has(const std::string& key) const;

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  std::uint64_t count(const std::string& key) const;
  std::uint64_t count(const std::string& key, std::uint64_t fallback) const;
  std::string string(const std::string& key) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  Vector vector(const std::string& key) const;
  Matrix matrix(const std::string& key) const;
  FieldReader object(const std::string& key) const;
  const nlohmann::json& raw(const std::string& key) const;

  /// Throws ConfigError naming the first key that was never read.
  void finish() const;

  [[noreturn]] void fail(const std::string& key, const std::string& message) const;

 private:
  const nlohmann::json& get(const std::string& key) const;

  const nlohmann::json* obj_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

nlohmann::json load_json_file(const std::string& path);

/// Target distribution: explicit parameters or a generated scenario.
struct Problem {
  Vector mu;
  CovStructure cov;
  ConstraintSet constraints;
  nlohmann::ordered_json description;
};

/// Reads "distribution" or "scenario" from `cfg`. Scenario seeds default to
/// derive_seed(seed, scenario_stream).
Problem read_problem(const FieldReader& cfg, std::uint64_t seed, std::uint64_t scenario_stream);

enum class Target { kSoft, kHardGibbs, kHardRejection, kLmc };

Target parse_target(const std::string& name);
const char* target_name(Target t);

struct SamplerSpec {
  Target target = Target::kSoft;
  ChainSpec chain;  // seed is filled in by the command
  double lmc_h = 1e-3;
  std::uint64_t max_tries = 1000000;
};

/// Fields "target", "chain", "lmc_h", "max_tries" of `cfg`.
SamplerSpec read_sampler(const FieldReader& cfg, Eigen::Index dim);

ChainSpec read_chain(const FieldReader& chain, Eigen::Index dim);

/// The "model" block of an msim config; the prior field may also be "both"
/// (returned in `priors`).
struct MsimModelSpec {
  MsimConfig base;
  std::vector<MsimPrior> priors;
};
MsimModelSpec read_msim_model(const FieldReader& model);

}  // namespace softtmvn::cli
