#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lsts/empirical_spectral.hpp"
#include "lsts/likelihoods.hpp"
#include "lsts/local_moments.hpp"
#include "lsts/process_models.hpp"
#include "lsts/spectral_estimation.hpp"

namespace lsts {

using Json = nlohmann::ordered_json;

// Unreadable or malformed data file.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Model JSON that violates the schema; `diagnostics` lists every problem found.
class SchemaError : public std::invalid_argument {
 public:
  explicit SchemaError(std::vector<std::string> diagnostics);
  const std::vector<std::string>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

inline constexpr int kSchemaVersion = 1;

// Realizations: one value per line, optional non-numeric header line, blank lines ignored.
Realization read_realization_csv(const std::string& path);
void write_realization_csv(const std::string& path, const Realization& data);

//! Curve descriptors: a bare number, or {"kind": "constant"|"polynomial"|"trig"|"logistic"|"sampled", ...}.
Json curve_to_json(const ParameterCurve& c);
ParameterCurve curve_from_json(const Json& j, const std::string& where = "curve");

//! {"schema": 1, "family", "alpha": [...], "beta": [...], "sigma", "mu",
//!  "innovations": {"law", "kappa4"}, "seed"?, "T"?}
Json spec_to_json(const TvModelSpec& spec);
TvModelSpec spec_from_json(const Json& j);

struct SpecFile {
  TvModelSpec spec;
  std::optional<std::uint64_t> seed;
  std::optional<long> T;
};
SpecFile read_spec_file(const std::string& path);

Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

Json to_json(const FitResult& fit);
Json to_json(const LocalEstimate& est);
Json to_json(const StationarityReport& report);
Json to_json(const CurveModel& model);
//! {"schema": 1, "p", "alpha_orders", "sigma2_order"?, "mean_order"?, "fixed_sigma2"?}
CurveModel curve_model_from_json(const Json& j);

//! Plain-text verdict table, one row per level.
std::string verdict_table(const StationarityReport& report);

//! Long-format CSV u,lambda,<quantity>[,<extra names>...]; every extra grid must share the axes.
void write_spectral_grid_csv(const std::string& path, const SpectralGrid& grid,
                             const std::vector<const SpectralGrid*>& extra = {});
Json spectral_grid_header(const SpectralGrid& grid);

//! p,K_1..K_pmax,sigma2,aic,best
void write_scan_csv(const std::string& path, const ModelScan& scan);

//! u,<name_1>,...: parameter curves of a fitted curve model at n+1 equispaced u.
void write_curve_csv(const std::string& path, const CurveModel& model, const Eigen::VectorXd& eta,
                     int n = 200);

}  // namespace lsts
