#include <chrono>
#include <iostream>

#include "softtmvn/cli/commands.hpp"
#include "softtmvn/random.hpp"
#include "softtmvn/sample_io.hpp"

namespace softtmvn::cli {

double hard_fraction(const RowMatrix& draws, const ConstraintSet& c) {
  if (draws.rows() == 0) return 0.0;
  Eigen::Index inside = 0;
  for (Eigen::Index i = 0; i < draws.rows(); ++i) inside += hard_indicator(c, draws.row(i).transpose()) ? 1 : 0;
  return static_cast<double>(inside) / static_cast<double>(draws.rows());
}

int cmd_sample(const CommonOptions& opts) {
  const nlohmann::json doc = load_json_file(opts.config_path);
  const FieldReader cfg(doc, "config");
  const std::uint64_t seed = resolve_seed(opts, cfg);
  const double eta = cfg.number("eta", 100.0);
  if (!(eta > 0.0)) cfg.fail("eta", "must be positive");
  const Problem problem = read_problem(cfg, seed, 1);
  SamplerSpec spec = read_sampler(cfg, problem.mu.size());
  cfg.finish();
  spec.chain.seed = derive_seed(seed, 0);

  const auto start = std::chrono::steady_clock::now();
  const SampleBatch batch = run_sampler(problem, eta, spec);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::filesystem::create_directories(opts.out_dir);
  write_file_atomic(opts.out_dir / "draws.csv", draws_csv(batch.draws));

  nlohmann::ordered_json report;
  report["command"] = "sample";
  report["seed"] = seed;
  report["config"] = nlohmann::ordered_json::parse(doc.dump());
  report["problem"] = problem.description;
  if (spec.target == Target::kSoft || spec.target == Target::kLmc) report["eta"] = eta;
  report["sampler"] = describe_sampler(spec);
  report["summary"] = summary_json(batch);
  report["hard_constraint_fraction"] = hard_fraction(batch.draws, problem.constraints);
  write_json_report(opts.out_dir / "report.json", report);

  nlohmann::ordered_json timing;
  timing["command"] = "sample";
  timing["wall_seconds"] = wall;
  write_json_report(opts.out_dir / "timing.json", timing);

  std::cout << "sample: " << batch.draws.rows() << " draws of dimension " << batch.draws.cols() << " ("
            << target_name(spec.target) << ") written to " << (opts.out_dir / "draws.csv").string() << "\n";
  return 0;
}

}  // namespace softtmvn::cli
