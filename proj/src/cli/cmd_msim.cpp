#include <chrono>
#include <cmath>
#include <iostream>
#include <vector>

#include "softtmvn/cli/commands.hpp"
#include "softtmvn/random.hpp"
#include "softtmvn/sample_io.hpp"

namespace softtmvn::cli {
namespace {

constexpr std::uint64_t kDataStream = 2000;
constexpr std::uint64_t kHoldoutStream = 3000;
constexpr std::uint64_t kChainStream = 4000;

struct MsimRun {
  MsimPrior prior = MsimPrior::kSoft;
  std::uint64_t replicate = 0;
  double mse = 0.0;
  double mse_signal = 0.0;
  double acceptance = 0.0;
  double ess_alpha = 0.0;
  double ess_psi = 0.0;
  double sigma2_mean = 0.0;
  double violation = 0.0;
  Vector alpha_hat;
  Vector alpha_true;
  double wall = 0.0;
};

const char* prior_name(MsimPrior p) { return p == MsimPrior::kSoft ? "soft" : "hard"; }

struct Stats {
  double mean;
  double sd;
};

Stats stats(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return {m, v.size() > 1 ? std::sqrt(s / static_cast<double>(v.size() - 1)) : 0.0};
}

}  // namespace

int cmd_msim(const CommonOptions& opts) {
  const nlohmann::json doc = load_json_file(opts.config_path);
  const FieldReader cfg(doc, "config");
  const std::uint64_t seed = resolve_seed(opts, cfg);
  const std::uint64_t replicates = opts.replicates.value_or(cfg.count("replicates", 30));
  if (replicates < 1) cfg.fail("replicates", "must be at least 1");
  const auto threads = static_cast<unsigned>(cfg.count("threads", 1));

  Eigen::Index n = 800;
  Eigen::Index p = 5;
  Eigen::Index n_test = 200;
  if (cfg.has("data")) {
    const FieldReader data = cfg.object("data");
    n = static_cast<Eigen::Index>(data.count("n", 800));
    p = static_cast<Eigen::Index>(data.count("p", 5));
    n_test = static_cast<Eigen::Index>(data.count("n_test", 200));
    data.finish();
    if (n < 1 || p < 1 || n_test < 1) throw ConfigError("config.data: n, p and n_test must be positive");
  }
  const MsimModelSpec model = cfg.has("model") ? read_msim_model(cfg.object("model")) : MsimModelSpec{{}, {MsimPrior::kSoft}};
  cfg.finish();

  std::vector<MsimRun> runs;
  for (std::uint64_t r = 0; r < replicates; ++r) {
    for (MsimPrior prior : model.priors) {
      MsimRun run;
      run.prior = prior;
      run.replicate = r;
      runs.push_back(std::move(run));
    }
  }

  parallel_for(runs.size(), threads, [&](std::size_t k) {
    MsimRun& run = runs[k];
    const std::uint64_t r = run.replicate;
    // Both priors of a replicate see the same data and chain seed.
    const MsimDataset train = gen_msim_data(n, p, model.base.m, derive_seed(seed, kDataStream + r));
    const MsimHoldout test = gen_msim_holdout(train.truth, n_test, train.data.c, derive_seed(seed, kHoldoutStream + r));
    MsimConfig config = model.base;
    config.prior = run.prior;
    config.seed = derive_seed(seed, kChainStream + r);

    const auto start = std::chrono::steady_clock::now();
    const MsimFit fit = fit_msim(train.data, config);
    run.wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const Vector pred = msim_predict(fit, test.data);
    run.mse = mean_squared_error(pred, test.data.y);
    run.mse_signal = mean_squared_error(pred, test.signal);
    run.acceptance = fit.acceptance_rate;
    run.ess_alpha = fit.ess_alpha;
    run.ess_psi = fit.ess_psi;
    run.sigma2_mean = fit.sigma2.mean();
    run.violation = monotonicity_violation_fraction(fit.psi);
    run.alpha_hat = column_means(fit.alpha);
    run.alpha_true = train.truth.alpha;
  });

  nlohmann::ordered_json report;
  report["command"] = "msim";
  report["seed"] = seed;
  report["replicates"] = replicates;
  report["config"] = nlohmann::ordered_json::parse(doc.dump());
  auto per = nlohmann::ordered_json::array();
  nlohmann::ordered_json timing;
  timing["command"] = "msim";
  auto per_time = nlohmann::ordered_json::array();
  for (const MsimRun& run : runs) {
    nlohmann::ordered_json j;
    j["replicate"] = run.replicate;
    j["prior"] = prior_name(run.prior);
    j["data_seed"] = derive_seed(seed, kDataStream + run.replicate);
    j["chain_seed"] = derive_seed(seed, kChainStream + run.replicate);
    j["prediction_mse"] = run.mse;
    j["prediction_mse_signal"] = run.mse_signal;
    j["beta_acceptance_rate"] = run.acceptance;
    j["ess_alpha"] = run.ess_alpha;
    j["ess_psi"] = run.ess_psi;
    j["sigma2_mean"] = run.sigma2_mean;
    j["monotonicity_violation_fraction"] = run.violation;
    j["alpha_hat"] = to_json_array(run.alpha_hat);
    j["alpha_true"] = to_json_array(run.alpha_true);
    per.push_back(j);
    per_time.push_back({{"replicate", run.replicate}, {"prior", prior_name(run.prior)}, {"wall_seconds", run.wall}});
  }
  report["per_replicate"] = per;
  timing["per_replicate"] = per_time;

  auto summary = nlohmann::ordered_json::array();
  auto time_summary = nlohmann::ordered_json::array();
  for (MsimPrior prior : model.priors) {
    std::vector<double> mse, mse_signal, acc, ess_a, ess_p, viol, wall;
    for (const MsimRun& run : runs) {
      if (run.prior != prior) continue;
      mse.push_back(run.mse);
      mse_signal.push_back(run.mse_signal);
      acc.push_back(run.acceptance);
      ess_a.push_back(run.ess_alpha);
      ess_p.push_back(run.ess_psi);
      viol.push_back(run.violation);
      wall.push_back(run.wall);
    }
    const Stats m = stats(mse);
    const Stats w = stats(wall);
    nlohmann::ordered_json row;
    row["prior"] = prior_name(prior);
    row["alpha_ess_mean"] = stats(ess_a).mean;
    row["psi_ess_mean"] = stats(ess_p).mean;
    row["prediction_mse_mean"] = m.mean;
    row["prediction_mse_sd"] = m.sd;
    row["prediction_mse_signal_mean"] = stats(mse_signal).mean;
    row["beta_acceptance_rate_mean"] = stats(acc).mean;
    row["monotonicity_violation_fraction_mean"] = stats(viol).mean;
    summary.push_back(row);
    time_summary.push_back({{"prior", prior_name(prior)}, {"wall_seconds_mean", w.mean}, {"wall_seconds_sd", w.sd}});
    std::cout << "msim " << prior_name(prior) << ": alpha-ESS " << stats(ess_a).mean << ", psi-ESS "
              << stats(ess_p).mean << ", run-time " << w.mean << " s (sd " << w.sd << "), MSE " << m.mean << " (sd "
              << m.sd << ")\n";
  }
  report["summary"] = summary;
  timing["summary"] = time_summary;
  std::filesystem::create_directories(opts.out_dir);
  write_json_report(opts.out_dir / "report.json", report);
  write_json_report(opts.out_dir / "timing.json", timing);
  return 0;
}

}  // namespace softtmvn::cli
