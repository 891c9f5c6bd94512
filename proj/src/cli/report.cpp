#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "softtmvn/cli/commands.hpp"
#include "softtmvn/errors.hpp"
#include "softtmvn/gibbs.hpp"
#include "softtmvn/reference.hpp"
#include "softtmvn/sample_io.hpp"

namespace softtmvn::cli {

void write_json_report(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

std::uint64_t resolve_seed(const CommonOptions& opts, const FieldReader& cfg) {
  const std::uint64_t from_config = cfg.count("seed", 0);
  return opts.seed.value_or(from_config);
}

SampleBatch run_sampler(const Problem& problem, double eta, const SamplerSpec& spec) {
  switch (spec.target) {
    case Target::kSoft:
      return run_chain(SoftTmvnParams(problem.mu, problem.cov, problem.constraints, eta), spec.chain);
    case Target::kLmc:
      return run_lmc_chain(SoftTmvnParams(problem.mu, problem.cov, problem.constraints, eta), spec.lmc_h, spec.chain);
    case Target::kHardGibbs:
      return gibbs_tmvn(problem.mu, problem.cov.to_dense(), problem.constraints, spec.chain);
    case Target::kHardRejection:
      return rejection_tmvn_batch(problem.mu, problem.cov, problem.constraints, spec.chain, spec.max_tries);
  }
  throw std::logic_error("unhandled sampler target");
}

nlohmann::ordered_json describe_sampler(const SamplerSpec& spec) {
  nlohmann::ordered_json j;
  j["target"] = target_name(spec.target);
  j["burn_in"] = spec.chain.burn_in;
  j["thin"] = spec.chain.thin;
  j["n_samples"] = spec.chain.n_samples;
  j["seed"] = spec.chain.seed;
  switch (spec.chain.init) {
    case InitMode::kDefault:
      j["init"] = "default";
      break;
    case InitMode::kOrigin:
      j["init"] = "origin";
      break;
    case InitMode::kExplicit:
      j["init"] = to_json_array(spec.chain.init_theta);
      break;
  }
  if (spec.target == Target::kLmc) j["lmc_h"] = spec.lmc_h;
  if (spec.target == Target::kHardRejection) j["max_tries"] = spec.max_tries;
  return j;
}

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body) {
  const unsigned workers = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          const std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace softtmvn::cli
