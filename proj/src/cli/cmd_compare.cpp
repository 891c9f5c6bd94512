#include <chrono>
#include <cmath>
#include <iostream>
#include <thread>
#include <vector>

#include "softtmvn/cli/commands.hpp"
#include "softtmvn/diagnostics.hpp"
#include "softtmvn/random.hpp"
#include "softtmvn/sample_io.hpp"

namespace softtmvn::cli {

namespace {

constexpr std::uint64_t kScenarioStream = 1000;
constexpr std::uint64_t kChainStream = 100000;

struct ReplicateResult {
  double d = 0.0;
  double xi = 0.0;
  std::vector<double> w1;
  double hard_a = 0.0;
  double hard_b = 0.0;
  Vector ess_a;
  Vector ess_b;
  double wall = 0.0;
};

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

}  // namespace

int cmd_compare(const CommonOptions& opts) {
  const nlohmann::json doc = load_json_file(opts.config_path);
  const FieldReader cfg(doc, "config");
  const std::uint64_t seed = resolve_seed(opts, cfg);
  const std::uint64_t replicates = opts.replicates.value_or(cfg.count("replicates", 1));
  if (replicates < 1) cfg.fail("replicates", "must be at least 1");
  const double eta = cfg.number("eta", 100.0);
  if (!(eta > 0.0)) cfg.fail("eta", "must be positive");
  const bool resample = cfg.boolean("resample_scenario", true);
  const auto threads = static_cast<unsigned>(cfg.count("threads", std::max(1U, std::thread::hardware_concurrency())));

  std::vector<Problem> problems;
  for (std::uint64_t r = 0; r < replicates; ++r) {
    const std::uint64_t stream = resample ? kScenarioStream + r : kScenarioStream;
    if (r == 0 || (resample && cfg.has("scenario"))) {
      problems.push_back(read_problem(cfg, seed, stream));
    } else {
      problems.push_back(problems.front());
    }
  }
  const Eigen::Index dim = problems.front().mu.size();
  const FieldReader a_cfg = cfg.object("a");
  const FieldReader b_cfg = cfg.object("b");
  const SamplerSpec a_spec = read_sampler(a_cfg, dim);
  const SamplerSpec b_spec = read_sampler(b_cfg, dim);
  a_cfg.finish();
  b_cfg.finish();
  cfg.finish();

  std::vector<ReplicateResult> results(replicates);
  std::vector<SamplerSpec> a_specs(replicates, a_spec);
  std::vector<SamplerSpec> b_specs(replicates, b_spec);
  for (std::uint64_t r = 0; r < replicates; ++r) {
    a_specs[r].chain.seed = derive_seed(seed, kChainStream + 2 * r);
    b_specs[r].chain.seed = derive_seed(seed, kChainStream + 2 * r + 1);
  }

  parallel_for(replicates, threads, [&](std::size_t r) {
    const auto start = std::chrono::steady_clock::now();
    const Problem& problem = problems[r];
    const SampleBatch a = run_sampler(problem, eta, a_specs[r]);
    const SampleBatch b = run_sampler(problem, eta, b_specs[r]);
    ReplicateResult& out = results[r];
    out.w1 = per_coordinate_w1(a.draws, b.draws);
    out.d = metric_d(a.draws, b.draws);
    out.xi = metric_xi(a.draws, b.draws);
    out.hard_a = hard_fraction(a.draws, problem.constraints);
    out.hard_b = hard_fraction(b.draws, problem.constraints);
    out.ess_a = a.ess;
    out.ess_b = b.ess;
    out.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });

  nlohmann::ordered_json report;
  report["command"] = "compare";
  report["seed"] = seed;
  report["replicates"] = replicates;
  report["config"] = nlohmann::ordered_json::parse(doc.dump());
  report["eta"] = eta;
  report["a"] = describe_sampler(a_spec);
  report["b"] = describe_sampler(b_spec);
  auto per = nlohmann::ordered_json::array();
  std::vector<double> ds;
  std::vector<double> xis;
  nlohmann::ordered_json timing;
  timing["command"] = "compare";
  auto walls = nlohmann::ordered_json::array();
  for (std::uint64_t r = 0; r < replicates; ++r) {
    const ReplicateResult& res = results[r];
    nlohmann::ordered_json rep;
    rep["replicate"] = r;
    rep["problem"] = problems[r].description;
    rep["seed_a"] = a_specs[r].chain.seed;
    rep["seed_b"] = b_specs[r].chain.seed;
    rep["D"] = res.d;
    rep["xi"] = res.xi;
    rep["per_coord_w1"] = res.w1;
    rep["hard_constraint_fraction_a"] = res.hard_a;
    rep["hard_constraint_fraction_b"] = res.hard_b;
    rep["ess_per_coord_a"] = to_json_array(res.ess_a);
    rep["ess_per_coord_b"] = to_json_array(res.ess_b);
    per.push_back(rep);
    ds.push_back(res.d);
    xis.push_back(res.xi);
    walls.push_back(res.wall);
  }
  report["per_replicate"] = per;
  report["summary"] = {{"D_mean", mean(ds)}, {"D_sd", sd(ds)}, {"xi_mean", mean(xis)}, {"xi_sd", sd(xis)}};
  std::filesystem::create_directories(opts.out_dir);
  write_json_report(opts.out_dir / "report.json", report);
  timing["replicate_wall_seconds"] = walls;
  write_json_report(opts.out_dir / "timing.json", timing);

  std::cout << "compare: " << replicates << " replicate(s), D mean " << mean(ds) << ", xi mean " << mean(xis) << "\n";
  return 0;
}

}  // namespace softtmvn::cli
