#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include <json.hpp>

#include "softtmvn/chain.hpp"

namespace softtmvn {

/// Shortest-round-trip-safe decimal text: 17 significant digits.
std::string format_double(double v);

/// CSV with header "theta_0,…,theta_{d−1}" and one row per draw; LF endings.
void write_draws_csv(std::ostream& out, const RowMatrix& draws);
std::string draws_csv(const RowMatrix& draws);

/// {"sampler", "n_samples", "dim", "iterations", "seed", "burn_in", "thin",
///  "mean", "sd", "ess_per_coord"}; undefined ESS entries are null.
nlohmann::ordered_json summary_json(const SampleBatch& batch);

/// Column means and standard deviations (n − 1 denominator).
Vector column_means(const RowMatrix& draws);
Vector column_sds(const RowMatrix& draws);

/// JSON array of numbers; non-finite entries become null.
nlohmann::ordered_json to_json_array(const Vector& v);

/// Writes `contents` to a temporary file next to `path`, then renames it over
/// `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace softtmvn
