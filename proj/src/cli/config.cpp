#include "softtmvn/cli/config.hpp"

#include <cmath>
#include <fstream>

#include "softtmvn/random.hpp"
#include "softtmvn/scenarios.hpp"

namespace softtmvn::cli {

FieldReader::FieldReader(const nlohmann::json& obj, std::string path) : obj_(&obj), path_(std::move(path)) {
  if (!obj.is_object()) throw ConfigError(path_ + ": expected an object");
}

bool FieldReader::has(const std::string& key) const {
  if (!obj_->contains(key)) return false;
  seen_.insert(key);
  return true;
}

const nlohmann::json& FieldReader::get(const std::string& key) const {
  if (!obj_->contains(key)) fail(key, "missing required field");
  seen_.insert(key);
  return obj_->at(key);
}

void FieldReader::fail(const std::string& key, const std::string& message) const {
  throw ConfigError(path_ + "." + key + ": " + message);
}

double FieldReader::number(const std::string& key) const {
  const auto& v = get(key);
  if (!v.is_number()) fail(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(key, "expected a finite number");
  return x;
}

double FieldReader::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

std::uint64_t FieldReader::count(const std::string& key) const {
  const auto& v = get(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  fail(key, "expected a non-negative integer");
}

std::uint64_t FieldReader::count(const std::string& key, std::uint64_t fallback) const {
  return has(key) ? count(key) : fallback;
}

std::string FieldReader::string(const std::string& key) const {
  const auto& v = get(key);
  if (!v.is_string()) fail(key, "expected a string");
  return v.get<std::string>();
}

std::string FieldReader::string(const std::string& key, const std::string& fallback) const {
  return has(key) ? string(key) : fallback;
}

bool FieldReader::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto& v = get(key);
  if (!v.is_boolean()) fail(key, "expected true or false");
  return v.get<bool>();
}

Vector FieldReader::vector(const std::string& key) const {
  const auto& v = get(key);
  if (!v.is_array()) fail(key, "expected an array of numbers");
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number()) fail(key + "[" + std::to_string(i) + "]", "expected a number");
    out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
  }
  return out;
}

Matrix FieldReader::matrix(const std::string& key) const {
  const auto& v = get(key);
  if (!v.is_array() || v.empty() || !v[0].is_array()) fail(key, "expected an array of rows");
  const std::size_t cols = v[0].size();
  Matrix out(static_cast<Eigen::Index>(v.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string row = key + "[" + std::to_string(i) + "]";
    if (!v[i].is_array() || v[i].size() != cols) fail(row, "expected " + std::to_string(cols) + " numbers");
    for (std::size_t j = 0; j < cols; ++j) {
      if (!v[i][j].is_number()) fail(row + "[" + std::to_string(j) + "]", "expected a number");
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v[i][j].get<double>();
    }
  }
  return out;
}

FieldReader FieldReader::object(const std::string& key) const { return FieldReader(get(key), path_ + "." + key); }

const nlohmann::json& FieldReader::raw(const std::string& key) const { return get(key); }

void FieldReader::finish() const {
  for (const auto& [key, value] : obj_->items()) {
    if (!seen_.count(key)) throw ConfigError(path_ + "." + key + ": unknown key");
  }
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config: invalid JSON in " + path + ": " + e.what());
  }
}

namespace {

template <class F>
auto rethrow_with_path(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

CovStructure read_covariance(const FieldReader& sigma) {
  const bool dense = sigma.has("dense");
  const bool diagonal = sigma.has("diagonal");
  const bool block = sigma.has("probit_block");
  if (dense + diagonal + block != 1) {
    throw ConfigError(sigma.path() + ": expected exactly one of \"dense\", \"diagonal\", \"probit_block\"");
  }
  CovStructure cov = [&] {
    if (dense) {
      Matrix m = sigma.matrix("dense");
      return rethrow_with_path(sigma.path() + ".dense", [&] { return CovStructure::dense(std::move(m)); });
    }
    if (diagonal) {
      Vector v = sigma.vector("diagonal");
      return rethrow_with_path(sigma.path() + ".diagonal", [&] { return CovStructure::diagonal(std::move(v)); });
    }
    const FieldReader pb = sigma.object("probit_block");
    RowMatrix h = pb.matrix("H");
    Vector l = pb.vector("L");
    pb.finish();
    return rethrow_with_path(pb.path(), [&] { return CovStructure::probit_block(std::move(h), std::move(l)); });
  }();
  sigma.finish();
  return cov;
}

}  // namespace

Problem read_problem(const FieldReader& cfg, std::uint64_t seed, std::uint64_t scenario_stream) {
  const bool explicit_dist = cfg.has("distribution");
  const bool scenario = cfg.has("scenario");
  if (explicit_dist == scenario) {
    throw ConfigError(cfg.path() + ": expected exactly one of \"distribution\" and \"scenario\"");
  }
  if (explicit_dist) {
    const FieldReader dist = cfg.object("distribution");
    Vector mu = dist.vector("mu");
    CovStructure cov = read_covariance(dist.object("sigma"));
    const std::string cpath = dist.path() + ".constraints";
    ConstraintSet c = dist.has("constraints")
                          ? rethrow_with_path(cpath, [&] { return constraints_from_json(dist.raw("constraints")); })
                          : ConstraintSet(mu.size());
    dist.finish();
    if (mu.size() != cov.dim() || mu.size() != c.dim()) {
      throw ConfigError(dist.path() + ": mu, sigma and constraints disagree on dimension");
    }
    nlohmann::ordered_json desc;
    desc["kind"] = "explicit";
    desc["dim"] = mu.size();
    return {std::move(mu), std::move(cov), std::move(c), std::move(desc)};
  }

  const FieldReader sc = cfg.object("scenario");
  const std::string family = sc.string("family");
  const std::uint64_t sc_seed = sc.count("seed", derive_seed(seed, scenario_stream));
  if (family == "probit_gp") {
    const auto n = static_cast<Eigen::Index>(sc.count("n", 100));
    const double nu = sc.number("nu", 0.6);
    const double scale = sc.number("scale", 1.0);
    sc.finish();
    auto inst = rethrow_with_path(sc.path(), [&] { return gen_probit_gp(n, nu, scale, sc_seed); });
    nlohmann::ordered_json desc;
    desc["kind"] = "probit_gp";
    desc["n"] = n;
    desc["nu"] = nu;
    desc["scale"] = scale;
    desc["seed"] = sc_seed;
    desc["l1"] = inst.l1;
    desc["l2"] = inst.l2;
    return {Vector::Zero(n), std::move(inst.cov), std::move(inst.constraints), std::move(desc)};
  }
  if (family == "probit_gauss") {
    const auto big_n = static_cast<Eigen::Index>(sc.count("N", 100));
    const auto p = static_cast<Eigen::Index>(sc.count("P", 400));
    const double lo = sc.number("lambda_lo", 1.0 / 15.0);
    const double hi = sc.number("lambda_hi", 1.0 / 5.0);
    sc.finish();
    auto inst = rethrow_with_path(sc.path(), [&] { return gen_probit_gauss(big_n, p, sc_seed, lo, hi); });
    nlohmann::ordered_json desc;
    desc["kind"] = "probit_gauss";
    desc["N"] = big_n;
    desc["P"] = p;
    desc["lambda_lo"] = lo;
    desc["lambda_hi"] = hi;
    desc["seed"] = sc_seed;
    return {Vector::Zero(big_n + p), std::move(inst.cov), std::move(inst.constraints), std::move(desc)};
  }
  sc.fail("family", "expected \"probit_gp\" or \"probit_gauss\", got \"" + family + "\"");
}

Target parse_target(const std::string& name) {
  if (name == "soft") return Target::kSoft;
  if (name == "hard-gibbs") return Target::kHardGibbs;
  if (name == "hard-rejection") return Target::kHardRejection;
  if (name == "lmc") return Target::kLmc;
  throw ConfigError("unknown target \"" + name + "\" (expected soft, hard-gibbs, hard-rejection or lmc)");
}

const char* target_name(Target t) {
  switch (t) {
    case Target::kSoft:
      return "soft";
    case Target::kHardGibbs:
      return "hard-gibbs";
    case Target::kHardRejection:
      return "hard-rejection";
    case Target::kLmc:
      return "lmc";
  }
  return "?";
}

ChainSpec read_chain(const FieldReader& chain, Eigen::Index dim) {
  ChainSpec spec;
  spec.burn_in = chain.count("burn_in", spec.burn_in);
  spec.thin = chain.count("thin", spec.thin);
  spec.n_samples = chain.count("n_samples", spec.n_samples);
  if (spec.thin < 1) chain.fail("thin", "must be at least 1");
  if (spec.n_samples < 1) chain.fail("n_samples", "must be at least 1");
  if (chain.has("init")) {
    const auto& init = chain.raw("init");
    if (init.is_string()) {
      const auto mode = init.get<std::string>();
      if (mode == "default") {
        spec.init = InitMode::kDefault;
      } else if (mode == "origin") {
        spec.init = InitMode::kOrigin;
      } else {
        chain.fail("init", "expected \"default\", \"origin\" or an array of numbers");
      }
    } else {
      spec.init = InitMode::kExplicit;
      spec.init_theta = chain.vector("init");
      if (spec.init_theta.size() != dim) chain.fail("init", "expected " + std::to_string(dim) + " numbers");
    }
  }
  chain.finish();
  return spec;
}

SamplerSpec read_sampler(const FieldReader& cfg, Eigen::Index dim) {
  SamplerSpec s;
  try {
    s.target = parse_target(cfg.string("target"));
  } catch (const ConfigError& e) {
    cfg.fail("target", e.what());
  }
  s.chain = cfg.has("chain") ? read_chain(cfg.object("chain"), dim) : ChainSpec{};
  s.lmc_h = cfg.number("lmc_h", s.lmc_h);
  if (!(s.lmc_h > 0.0)) cfg.fail("lmc_h", "must be positive");
  s.max_tries = cfg.count("max_tries", s.max_tries);
  if (s.max_tries < 1) cfg.fail("max_tries", "must be at least 1");
  return s;
}

MsimModelSpec read_msim_model(const FieldReader& model) {
  MsimModelSpec spec;
  MsimConfig& c = spec.base;
  c.m = static_cast<int>(model.count("M", static_cast<std::uint64_t>(c.m)));
  const std::string prior = model.string("prior", "soft");
  if (prior == "soft") {
    spec.priors = {MsimPrior::kSoft};
  } else if (prior == "hard") {
    spec.priors = {MsimPrior::kHard};
  } else if (prior == "both") {
    spec.priors = {MsimPrior::kSoft, MsimPrior::kHard};
  } else {
    model.fail("prior", "expected \"soft\", \"hard\" or \"both\"");
  }
  c.eta = model.number("eta", c.eta);
  c.prior_variance = model.number("prior_variance", c.prior_variance);
  c.inner_steps = static_cast<int>(model.count("inner_steps", static_cast<std::uint64_t>(c.inner_steps)));
  c.hard_sweeps = static_cast<int>(model.count("hard_sweeps", static_cast<std::uint64_t>(c.hard_sweeps)));
  c.sigma2_shape = model.number("sigma2_shape", c.sigma2_shape);
  c.sigma2_rate = model.number("sigma2_rate", c.sigma2_rate);
  c.proposal_sd = model.number("proposal_sd", c.proposal_sd);
  c.burn_in = model.count("burn_in", c.burn_in);
  c.thin = model.count("thin", c.thin);
  c.n_samples = model.count("n_samples", c.n_samples);
  model.finish();
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(model.path() + ": " + e.what());
  }
  return spec;
}

}  // namespace softtmvn::cli
