#include "softtmvn/sample_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace softtmvn {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_draws_csv(std::ostream& out, const RowMatrix& draws) {
  for (Eigen::Index j = 0; j < draws.cols(); ++j) out << (j ? "," : "") << "theta_" << j;
  out << '\n';
  for (Eigen::Index i = 0; i < draws.rows(); ++i) {
    for (Eigen::Index j = 0; j < draws.cols(); ++j) out << (j ? "," : "") << format_double(draws(i, j));
    out << '\n';
  }
}

std::string draws_csv(const RowMatrix& draws) {
  std::ostringstream out;
  write_draws_csv(out, draws);
  return out.str();
}

Vector column_means(const RowMatrix& draws) { return draws.colwise().mean().transpose(); }

Vector column_sds(const RowMatrix& draws) {
  const Eigen::Index n = draws.rows();
  if (n < 2) return Vector::Constant(draws.cols(), std::nan(""));
  const Eigen::RowVectorXd mean = draws.colwise().mean();
  return ((draws.rowwise() - mean).array().square().colwise().sum() / static_cast<double>(n - 1)).sqrt().transpose();
}

nlohmann::ordered_json to_json_array(const Vector& v) {
  auto out = nlohmann::ordered_json::array();
  for (double x : v) {
    if (std::isfinite(x)) {
      out.push_back(x);
    } else {
      out.push_back(nullptr);
    }
  }
  return out;
}

nlohmann::ordered_json summary_json(const SampleBatch& batch) {
  nlohmann::ordered_json j;
  j["sampler"] = batch.sampler;
  j["n_samples"] = batch.draws.rows();
  j["dim"] = batch.draws.cols();
  j["iterations"] = batch.iterations;
  j["seed"] = batch.spec.seed;
  j["burn_in"] = batch.spec.burn_in;
  j["thin"] = batch.spec.thin;
  j["mean"] = to_json_array(column_means(batch.draws));
  j["sd"] = to_json_array(column_sds(batch.draws));
  j["ess_per_coord"] = to_json_array(batch.ess);
  return j;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

}  // namespace softtmvn
