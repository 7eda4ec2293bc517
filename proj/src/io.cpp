#include "lsts/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lsts/errors.hpp"

namespace lsts {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  const auto r = std::from_chars(first, last, out);
  return r.ec == std::errc() && r.ptr == last;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) rows.push_back(to_vector(m.row(i).transpose()));
  return rows;
}

// Collects schema problems instead of stopping at the first.
struct Checker {
  std::vector<std::string> errors;

  const Json* field(const Json& j, const std::string& key, const std::string& where, bool required) {
    if (!j.is_object()) {
      errors.push_back(where + ": expected an object");
      return nullptr;
    }
    const auto it = j.find(key);
    if (it == j.end()) {
      if (required) errors.push_back(where + "." + key + ": missing");
      return nullptr;
    }
    return &*it;
  }
  double number(const Json& j, const std::string& key, const std::string& where, double fallback,
                bool required = true) {
    const Json* f = field(j, key, where, required);
    if (!f) return fallback;
    if (!f->is_number()) {
      errors.push_back(where + "." + key + ": expected a number");
      return fallback;
    }
    return f->get<double>();
  }
  std::vector<double> numbers(const Json& j, const std::string& key, const std::string& where) {
    const Json* f = field(j, key, where, true);
    std::vector<double> out;
    if (!f) return out;
    if (!f->is_array()) {
      errors.push_back(where + "." + key + ": expected an array of numbers");
      return out;
    }
    for (const auto& v : *f) {
      if (!v.is_number()) {
        errors.push_back(where + "." + key + ": expected an array of numbers");
        return {};
      }
      out.push_back(v.get<double>());
    }
    return out;
  }
};

ParameterCurve curve_checked(const Json& j, const std::string& where, Checker& c) {
  if (j.is_number()) return ParameterCurve::constant(j.get<double>());
  const Json* k = c.field(j, "kind", where, true);
  if (!k) return {};
  if (!k->is_string()) {
    c.errors.push_back(where + ".kind: expected a string");
    return {};
  }
  const std::string kind = k->get<std::string>();
  const std::size_t before = c.errors.size();
  try {
    if (kind == "constant") {
      const double v = c.number(j, "value", where, 0.0);
      return c.errors.size() == before ? ParameterCurve::constant(v) : ParameterCurve{};
    }
    if (kind == "polynomial") {
      auto co = c.numbers(j, "coefficients", where);
      if (c.errors.size() == before && co.empty()) c.errors.push_back(where + ".coefficients: empty");
      return c.errors.size() == before ? ParameterCurve::polynomial(std::move(co)) : ParameterCurve{};
    }
    if (kind == "trig") {
      ParameterCurve::Trig t;
      t.offset = c.number(j, "offset", where, 0.0, false);
      t.amplitude = c.number(j, "amplitude", where, 1.0, false);
      t.frequency = c.number(j, "frequency", where, 0.0, false);
      t.phase = c.number(j, "phase", where, 0.0, false);
      t.inner_amplitude = c.number(j, "inner_amplitude", where, 0.0, false);
      t.inner_frequency = c.number(j, "inner_frequency", where, 0.0, false);
      t.inner_phase = c.number(j, "inner_phase", where, 0.0, false);
      return c.errors.size() == before ? ParameterCurve::trig(t) : ParameterCurve{};
    }
    if (kind == "logistic") {
      ParameterCurve::Logistic l{c.number(j, "start", where, 0.0), c.number(j, "end", where, 0.0),
                                 c.number(j, "gamma", where, 0.0), c.number(j, "location", where, 0.0)};
      return c.errors.size() == before ? ParameterCurve(l) : ParameterCurve{};
    }
    if (kind == "sampled") {
      auto values = c.numbers(j, "values", where);
      if (c.errors.size() != before) return {};
      if (j.contains("nodes")) {
        auto nodes = c.numbers(j, "nodes", where);
        if (c.errors.size() != before) return {};
        return ParameterCurve::sampled(std::move(nodes), std::move(values));
      }
      return ParameterCurve::sampled(std::move(values));
    }
    c.errors.push_back(where + ".kind: unknown curve kind '" + kind + "'");
  } catch (const std::exception& e) {
    c.errors.push_back(where + ": " + e.what());
  }
  return {};
}

}  // namespace

SchemaError::SchemaError(std::vector<std::string> diagnostics)
    : std::invalid_argument([&] {
        std::string s = "invalid model JSON";
        for (const auto& d : diagnostics) s += "\n  " + d;
        return s;
      }()),
      diagnostics_(std::move(diagnostics)) {}

Realization read_realization_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  std::vector<double> v;
  std::string line;
  long lineno = 0;
  bool header_allowed = true;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty()) continue;
    double x;
    if (!parse_double(s, x)) {
      if (header_allowed) {
        header_allowed = false;
        continue;
      }
      throw DataError(path + ":" + std::to_string(lineno) + ": not a number: '" + s + "'");
    }
    if (!std::isfinite(x)) throw DataError(path + ":" + std::to_string(lineno) + ": non-finite value");
    header_allowed = false;
    v.push_back(x);
  }
  if (v.empty()) throw DataError(path + ": no observations");
  Realization r;
  r.values = Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
  r.origin = Realization::Origin::ingested;
  return r;
}

void write_realization_csv(const std::string& path, const Realization& data) {
  auto out = open_out(path);
  out << "x\n";
  for (Eigen::Index t = 0; t < data.T(); ++t) out << num(data.values[t]) << '\n';
}

Json curve_to_json(const ParameterCurve& c) {
  return std::visit(
      [](const auto& r) -> Json {
        using R = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<R, ParameterCurve::Constant>) {
          return {{"kind", "constant"}, {"value", r.value}};
        } else if constexpr (std::is_same_v<R, ParameterCurve::Polynomial>) {
          return {{"kind", "polynomial"}, {"coefficients", r.coefficients}};
        } else if constexpr (std::is_same_v<R, ParameterCurve::Trig>) {
          return {{"kind", "trig"},
                  {"offset", r.offset},
                  {"amplitude", r.amplitude},
                  {"frequency", r.frequency},
                  {"phase", r.phase},
                  {"inner_amplitude", r.inner_amplitude},
                  {"inner_frequency", r.inner_frequency},
                  {"inner_phase", r.inner_phase}};
        } else if constexpr (std::is_same_v<R, ParameterCurve::Logistic>) {
          return {{"kind", "logistic"},
                  {"start", r.start},
                  {"end", r.end},
                  {"gamma", r.gamma},
                  {"location", r.location}};
        } else {
          return {{"kind", "sampled"}, {"nodes", r.nodes}, {"values", r.values}};
        }
      },
      c.representation());
}

ParameterCurve curve_from_json(const Json& j, const std::string& where) {
  Checker c;
  ParameterCurve out = curve_checked(j, where, c);
  if (!c.errors.empty()) throw SchemaError(c.errors);
  return out;
}

Json spec_to_json(const TvModelSpec& spec) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["family"] = to_string(spec.family);
  j["alpha"] = Json::array();
  for (const auto& a : spec.alpha) j["alpha"].push_back(curve_to_json(a));
  j["beta"] = Json::array();
  for (const auto& b : spec.beta) j["beta"].push_back(curve_to_json(b));
  j["sigma"] = curve_to_json(spec.sigma);
  j["mu"] = curve_to_json(spec.mu);
  j["innovations"] = {
      {"law", spec.innovations.law == InnovationSpec::Law::gaussian ? "gaussian" : "moments"},
      {"kappa4", spec.innovations.kappa4}};
  return j;
}

TvModelSpec spec_from_json(const Json& j) {
  Checker c;
  TvModelSpec spec;
  if (!j.is_object()) throw SchemaError({"model: expected a JSON object"});
  const Json* schema = c.field(j, "schema", "model", true);
  if (schema && !(schema->is_number_integer() && schema->get<int>() == kSchemaVersion))
    c.errors.push_back("model.schema: expected " + std::to_string(kSchemaVersion));
  if (const Json* f = c.field(j, "family", "model", true)) {
    try {
      spec.family = family_from_string(f->is_string() ? f->get<std::string>() : "");
    } catch (const std::exception&) {
      c.errors.push_back("model.family: expected one of tvAR, tvARMA, tvARCH");
    }
  }
  auto curves = [&](const char* key, bool required) {
    std::vector<ParameterCurve> out;
    const Json* f = c.field(j, key, "model", required);
    if (!f) return out;
    if (!f->is_array()) {
      c.errors.push_back(std::string("model.") + key + ": expected an array of curves");
      return out;
    }
    for (std::size_t i = 0; i < f->size(); ++i)
      out.push_back(curve_checked((*f)[i], std::string("model.") + key + "[" + std::to_string(i) + "]", c));
    return out;
  };
  spec.alpha = curves("alpha", true);
  spec.beta = curves("beta", false);
  if (const Json* f = c.field(j, "sigma", "model", false)) spec.sigma = curve_checked(*f, "model.sigma", c);
  if (const Json* f = c.field(j, "mu", "model", false)) spec.mu = curve_checked(*f, "model.mu", c);
  if (const Json* f = c.field(j, "innovations", "model", false)) {
    const Json* law = c.field(*f, "law", "model.innovations", true);
    if (law) {
      const std::string l = law->is_string() ? law->get<std::string>() : "";
      if (l == "gaussian") {
        spec.innovations.law = InnovationSpec::Law::gaussian;
      } else if (l == "moments") {
        spec.innovations.law = InnovationSpec::Law::moments;
      } else {
        c.errors.push_back("model.innovations.law: expected 'gaussian' or 'moments'");
      }
    }
    spec.innovations.kappa4 = c.number(*f, "kappa4", "model.innovations", 0.0, false);
    if (spec.innovations.kappa4 < -2.0) c.errors.push_back("model.innovations.kappa4: must be >= -2");
  }
  if (spec.family != Family::tvARMA && !spec.beta.empty())
    c.errors.push_back("model.beta: only tvARMA takes MA curves");
  if (spec.family == Family::tvARCH && spec.alpha.empty())
    c.errors.push_back("model.alpha: tvARCH needs alpha_0");
  if (!c.errors.empty()) throw SchemaError(c.errors);
  return spec;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw SchemaError({path + ": " + e.what()});
  }
}

void write_json_file(const std::string& path, const Json& j) {
  auto out = open_out(path);
  out << j.dump(2) << '\n';
}

SpecFile read_spec_file(const std::string& path) {
  const Json j = read_json_file(path);
  SpecFile f{spec_from_json(j), std::nullopt, std::nullopt};
  std::vector<std::string> errors;
  if (j.contains("seed")) {
    if (j["seed"].is_number_unsigned() || (j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0))
      f.seed = j["seed"].get<std::uint64_t>();
    else
      errors.push_back("model.seed: expected a nonnegative integer");
  }
  if (j.contains("T")) {
    if (j["T"].is_number_integer() && j["T"].get<long>() > 0)
      f.T = j["T"].get<long>();
    else
      errors.push_back("model.T: expected a positive integer");
  }
  if (!errors.empty()) throw SchemaError(errors);
  return f;
}

Json to_json(const FitResult& fit) {
  Json j;
  j["method"] = fit.method;
  j["names"] = fit.names;
  j["eta"] = to_vector(fit.eta);
  j["objective"] = fit.objective;
  j["initial_objective"] = fit.initial_objective;
  j["converged"] = fit.converged;
  j["iterations"] = fit.iterations;
  j["aic"] = fit.aic ? Json(*fit.aic) : Json(nullptr);
  j["sigma2"] = fit.sigma2 ? Json(*fit.sigma2) : Json(nullptr);
  j["covariance"] = fit.covariance ? matrix_json(*fit.covariance) : Json(nullptr);
  if (fit.local_coefficients) j["local_coefficients"] = matrix_json(*fit.local_coefficients);
  return j;
}

Json to_json(const LocalEstimate& est) {
  Json j;
  j["estimator"] = est.estimator;
  j["u0"] = est.u0;
  j["value"] = to_vector(est.value);
  j["bandwidth"] = est.bandwidth;
  j["stderr"] = est.standard_error ? Json(to_vector(*est.standard_error)) : Json(nullptr);
  j["window"] = {est.window_lo, est.window_hi};
  j["edge"] = est.edge;
  if (est.sigma2) j["sigma2"] = *est.sigma2;
  return j;
}

Json to_json(const StationarityReport& r) {
  Json j;
  j["T"] = r.T;
  j["statistic"] = r.statistic;
  j["u_at_max"] = r.u_at_max;
  j["lambda_at_max"] = r.lambda_at_max;
  j["rho2_at_max"] = r.rho2_at_max;
  j["p_value"] = r.p_value;
  Json levels = Json::array();
  for (const auto& [level, crit] : r.critical_values)
    levels.push_back({{"level", level}, {"critical_value", crit}, {"reject", r.reject.at(level)}});
  j["levels"] = levels;
  j["grid"] = {{"u_points", r.u_points}, {"lambda_points", r.lambda_points}};
  j["calibration"] = {{"method", r.calibration.description},
                      {"replications", r.calibration.replications},
                      {"seed", r.calibration.seed},
                      {"ar_order", r.calibration.ar_order},
                      {"ar_coefficients", to_vector(r.calibration.ar_coefficients)},
                      {"sigma2", r.calibration.sigma2}};
  return j;
}

Json to_json(const CurveModel& m) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["p"] = m.p();
  j["alpha_orders"] = m.alpha_orders();
  j["sigma2_order"] = m.sigma2_order();
  j["mean_order"] = m.mean_order();
  j["fixed_sigma2"] = m.fixed_sigma2() ? Json(*m.fixed_sigma2()) : Json(nullptr);
  return j;
}

CurveModel curve_model_from_json(const Json& j) {
  Checker c;
  if (!j.is_object()) throw SchemaError({"curve model: expected a JSON object"});
  const Json* schema = c.field(j, "schema", "curve model", true);
  if (schema && !(schema->is_number_integer() && schema->get<int>() == kSchemaVersion))
    c.errors.push_back("curve model.schema: expected " + std::to_string(kSchemaVersion));
  auto integer = [&](const char* key, int fallback, bool required) {
    const Json* f = c.field(j, key, "curve model", required);
    if (!f) return fallback;
    if (!f->is_number_integer()) {
      c.errors.push_back(std::string("curve model.") + key + ": expected an integer");
      return fallback;
    }
    return f->get<int>();
  };
  const int p = integer("p", 0, true);
  const int s_order = integer("sigma2_order", 0, false);
  const int m_order = integer("mean_order", -1, false);
  std::vector<int> orders;
  if (const Json* f = c.field(j, "alpha_orders", "curve model", true)) {
    if (!f->is_array()) {
      c.errors.push_back("curve model.alpha_orders: expected an array of integers");
    } else {
      for (const auto& v : *f) {
        if (!v.is_number_integer()) {
          c.errors.push_back("curve model.alpha_orders: expected an array of integers");
          break;
        }
        orders.push_back(v.get<int>());
      }
    }
  }
  std::optional<double> fixed;
  if (const Json* f = c.field(j, "fixed_sigma2", "curve model", false); f && !f->is_null()) {
    if (f->is_number())
      fixed = f->get<double>();
    else
      c.errors.push_back("curve model.fixed_sigma2: expected a number or null");
  }
  if (!c.errors.empty()) throw SchemaError(c.errors);
  try {
    return CurveModel(p, orders, s_order, m_order, fixed);
  } catch (const std::exception& e) {
    throw SchemaError({std::string("curve model: ") + e.what()});
  }
}

std::string verdict_table(const StationarityReport& r) {
  std::ostringstream os;
  char line[160];
  std::snprintf(line, sizeof line, "statistic %.6g at u=%.4f lambda=%.4f  (T=%ld, R=%d, p-value %.4f)\n",
                r.statistic, r.u_at_max, r.lambda_at_max, r.T, r.calibration.replications, r.p_value);
  os << line;
  os << "level    critical   verdict\n";
  for (const auto& [level, crit] : r.critical_values) {
    std::snprintf(line, sizeof line, "%-8.3g %-10.6g %s\n", level, crit,
                  r.reject.at(level) ? "reject" : "fail to reject");
    os << line;
  }
  return os.str();
}

void write_spectral_grid_csv(const std::string& path, const SpectralGrid& grid,
                             const std::vector<const SpectralGrid*>& extra) {
  for (const SpectralGrid* g : extra)
    if (g->values.rows() != grid.values.rows() || g->values.cols() != grid.values.cols())
      throw ArgumentError("spectral grids have different shapes");
  auto out = open_out(path);
  out << "u,lambda," << grid.quantity;
  for (const SpectralGrid* g : extra) out << ',' << g->quantity;
  out << '\n';
  for (Eigen::Index i = 0; i < grid.u.size(); ++i)
    for (Eigen::Index k = 0; k < grid.lambda.size(); ++k) {
      out << num(grid.u[i]) << ',' << num(grid.lambda[k]) << ',' << num(grid.values(i, k));
      for (const SpectralGrid* g : extra) out << ',' << num(g->values(i, k));
      out << '\n';
    }
}

Json spectral_grid_header(const SpectralGrid& g) {
  Json j;
  j["quantity"] = g.quantity;
  j["u"] = {{"count", g.u.size()}, {"min", g.u.size() ? g.u.minCoeff() : 0.0},
            {"max", g.u.size() ? g.u.maxCoeff() : 0.0}};
  j["lambda"] = {{"count", g.lambda.size()}, {"min", g.lambda.size() ? g.lambda.minCoeff() : 0.0},
                 {"max", g.lambda.size() ? g.lambda.maxCoeff() : 0.0}};
  j["b_t"] = g.b_t;
  j["b_f"] = g.b_f;
  j["taper"] = g.taper;
  j["kernel_t"] = g.kernel_t;
  j["kernel_f"] = g.kernel_f;
  return j;
}

void write_scan_csv(const std::string& path, const ModelScan& scan) {
  std::size_t width = 0;
  for (const auto& e : scan.table) width = std::max(width, e.orders.size());
  auto out = open_out(path);
  out << 'p';
  for (std::size_t j = 1; j <= width; ++j) out << ",K_" << j;
  out << ",sigma2,aic,best\n";
  for (std::size_t i = 0; i < scan.table.size(); ++i) {
    const auto& e = scan.table[i];
    out << e.p;
    for (std::size_t j = 0; j < width; ++j) {
      out << ',';
      if (j < e.orders.size()) out << e.orders[j];
    }
    out << ',' << num(e.sigma2) << ',' << num(e.aic) << ',' << (i == scan.best ? 1 : 0) << '\n';
  }
}

void write_curve_csv(const std::string& path, const CurveModel& model, const Eigen::VectorXd& eta,
                     int n) {
  if (n < 1) throw ArgumentError("curve grid needs at least two points");
  auto out = open_out(path);
  out << 'u';
  for (int j = 1; j <= model.p(); ++j) out << ",alpha_" << j;
  out << ",sigma2";
  if (model.has_mean()) out << ",mu";
  out << '\n';
  for (int i = 0; i <= n; ++i) {
    const double u = static_cast<double>(i) / n;
    out << num(u);
    const Eigen::VectorXd th = model.theta(eta, u);
    for (Eigen::Index j = 0; j < th.size(); ++j) out << ',' << num(th[j]);
    if (model.has_mean()) out << ',' << num(model.mean(eta, u));
    out << '\n';
  }
}

}  // namespace lsts
