#include <cstdio>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lsts/empirical_spectral.hpp"
#include "lsts/errors.hpp"
#include "lsts/io.hpp"
#include "lsts/likelihoods.hpp"
#include "lsts/local_moments.hpp"
#include "lsts/parallel.hpp"
#include "lsts/process_models.hpp"
#include "lsts/spectral_estimation.hpp"

namespace fs = std::filesystem;
using namespace lsts;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitData = 4;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::string command;
  std::string input;
  std::string model;
  std::string method;
  std::optional<int> p;
  std::vector<int> orders;
  int sigma2_order = 0;
  int mean_order = -1;
  int k_max = 6;
  std::optional<long> N;
  std::optional<long> S;
  std::optional<double> b;
  std::optional<double> bt;
  std::optional<double> bf;
  std::string kernel = "canonical-quadratic";
  std::string taper = "sine-squared";
  std::optional<int> grid_u;
  std::optional<int> grid_l;
  std::optional<std::uint64_t> seed;
  int reps = 500;
  std::string out = ".";
  unsigned threads = 0;
  std::optional<long> T;
  std::vector<long> T_grid{64, 128, 256};
  std::string family = "tvAR";
  int degree = 0;

  Json to_json() const {
    Json j;
    j["command"] = command;
    if (!input.empty()) j["input"] = input;
    if (!model.empty()) j["model"] = model;
    if (!method.empty()) j["method"] = method;
    if (p) j["p"] = *p;
    if (!orders.empty()) j["orders"] = orders;
    if (N) j["N"] = *N;
    if (S) j["S"] = *S;
    if (b) j["b"] = *b;
    if (bt) j["bt"] = *bt;
    if (bf) j["bf"] = *bf;
    j["kernel"] = kernel;
    j["taper"] = taper;
    if (grid_u) j["grid_u"] = *grid_u;
    if (grid_l) j["grid_l"] = *grid_l;
    if (seed) j["seed"] = *seed;
    j["reps"] = reps;
    j["threads"] = threads;
    return j;
  }
};

fs::path output_dir(const RunConfig& c) {
  fs::path dir(c.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + c.out);
  return dir;
}

void write_run_metadata(const fs::path& dir, const RunConfig& c, const Json& extra = Json::object()) {
  Json j = c.to_json();
  for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
  write_json_file((dir / "run.json").string(), j);
}

Realization load_input(const RunConfig& c) {
  if (c.input.empty()) throw UsageError("--input is required");
  return read_realization_csv(c.input);
}

int cmd_simulate(const RunConfig& c) {
  if (c.model.empty()) throw UsageError("--model is required");
  const SpecFile file = read_spec_file(c.model);
  const long T = c.T ? *c.T : file.T.value_or(0);
  if (T <= 0) throw UsageError("T must be a positive integer (--T or \"T\" in the model file)");
  const std::uint64_t seed = c.seed ? *c.seed : file.seed.value_or(1);
  Realization x;
  try {
    x = simulate(file.spec, T, seed);
  } catch (const StabilityError& e) {
    throw SchemaError({std::string("model: ") + e.what()});
  }
  const fs::path dir = output_dir(c);
  write_realization_csv((dir / "realization.csv").string(), x);
  Json spec = spec_to_json(file.spec);
  spec["seed"] = seed;
  spec["T"] = T;
  write_json_file((dir / "spec.json").string(), spec);
  write_run_metadata(dir, c, {{"seed", seed}, {"T", T}});
  return 0;
}

CurveModel curve_model_of(const RunConfig& c) {
  if (!c.model.empty()) return curve_model_from_json(read_json_file(c.model));
  const int p = c.p.value_or(static_cast<int>(c.orders.size()));
  std::vector<int> orders = c.orders;
  if (orders.empty()) orders.assign(static_cast<std::size_t>(p), 0);
  if (static_cast<int>(orders.size()) != p) throw UsageError("--orders needs one entry per AR coefficient");
  try {
    return CurveModel(p, orders, c.sigma2_order, c.mean_order);
  } catch (const ArgumentError& e) {
    throw UsageError(e.what());
  }
}

Eigen::VectorXd local_points(const RunConfig& c) {
  const int n = c.grid_u.value_or(20);
  if (n < 1) throw UsageError("--grid-u must be positive");
  Eigen::VectorXd u(n);
  for (int i = 0; i < n; ++i) u[i] = (i + 0.5) / n;
  return u;
}

int fit_local(const RunConfig& c, const Realization& x) {
  const int p = c.p.value_or(1);
  if (p < 0) throw UsageError("--p must be nonnegative");
  const Eigen::VectorXd u = local_points(c);
  const Taper taper = Taper::from_name(c.taper);
  const Kernel kernel = Kernel::from_name(c.kernel);
  Json records = Json::array();
  std::vector<Eigen::VectorXd> rows;
  std::vector<std::string> names;
  bool all_converged = true;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const double u0 = u[i];
    Json rec;
    Eigen::VectorXd theta;
    if (c.method == "local-yw") {
      LocalEstimate est;
      if (c.N)
        est = local_yule_walker(x, u0, p, TaperWindow{*c.N, taper});
      else if (c.b)
        est = local_yule_walker(x, u0, p, KernelWindow{*c.b, kernel});
      else
        throw UsageError("local-yw needs --N (tapered segment) or --b (kernel)");
      rec = to_json(est);
      theta.resize(p + 1);
      theta << est.value, est.sigma2.value_or(0.0);
      names.clear();
      for (int j = 1; j <= p; ++j) names.push_back("alpha_" + std::to_string(j));
      names.push_back("sigma2");
    } else {
      FitResult fit;
      if (c.method == "local-whittle") {
        if (!c.N) throw UsageError("local-whittle needs --N");
        fit = local_whittle_fit(x, u0, LocalSpectralModel::tvar(p), *c.N, taper);
      } else if (c.method == "local-gw") {
        if (!c.b) throw UsageError("local-gw needs --b");
        fit = local_generalized_whittle_fit(x, u0, LocalSpectralModel::tvar(p), *c.b, kernel);
      } else {
        if (!c.b) throw UsageError("local-conditional needs --b");
        ConditionalFamily fam;
        if (c.family == "tvAR")
          fam = ConditionalFamily::tvAR;
        else if (c.family == "tvARCH")
          fam = ConditionalFamily::tvARCH;
        else
          throw UsageError("--family must be tvAR or tvARCH");
        fit = local_conditional_fit(x, u0, *c.b, kernel, fam, p, c.degree);
      }
      all_converged = all_converged && fit.converged;
      rec = to_json(fit);
      rec["u0"] = u0;
      theta = fit.eta;
      names = fit.names;
    }
    records.push_back(rec);
    rows.push_back(theta);
  }
  const fs::path dir = output_dir(c);
  write_json_file((dir / "fit.json").string(), Json{{"method", c.method}, {"estimates", records}});
  {
    std::ofstream out((dir / "curves.csv").string());
    if (!out) throw DataError("cannot write curves.csv");
    out << 'u';
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    char buf[32];
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", u[i]);
      out << buf;
      for (Eigen::Index j = 0; j < rows[i].size(); ++j) {
        std::snprintf(buf, sizeof buf, "%.17g", rows[i][j]);
        out << ',' << buf;
      }
      out << '\n';
    }
  }
  write_run_metadata(dir, c, {{"T", x.T()}});
  return all_converged ? 0 : kExitNoConvergence;
}

int fit_scan(const RunConfig& c, const Realization& x) {
  if (!c.N || !c.S) throw UsageError("scan needs --N and --S");
  const int p_max = c.p.value_or(4);
  if (p_max < 1) throw UsageError("--p must be at least 1 for a scan");
  if (c.k_max < 0) throw UsageError("--kmax must be nonnegative");
  const Taper taper = Taper::from_name(c.taper);
  const ModelScan scan = model_scan(x, p_max, c.k_max, *c.N, *c.S, taper);
  const ScanEntry& best = scan.table[scan.best];
  const CurveModel model(best.p, best.orders);
  BlockWhittleOptions bo;
  bo.taper = taper;
  const FitResult fit = block_whittle_fit(x, model, *c.N, *c.S, bo);
  const fs::path dir = output_dir(c);
  write_scan_csv((dir / "aic_table.csv").string(), scan);
  write_json_file((dir / "fit.json").string(), Json{{"model", to_json(model)}, {"fit", to_json(fit)}});
  write_curve_csv((dir / "curves.csv").string(), model, fit.eta);
  write_run_metadata(dir, c, {{"T", x.T()}});
  return fit.converged ? 0 : kExitNoConvergence;
}

int cmd_fit(const RunConfig& c) {
  static const std::vector<std::string> methods{"local-yw", "local-whittle", "local-gw",
                                                "local-conditional", "block-whittle", "gw",
                                                "mle", "scan"};
  if (std::find(methods.begin(), methods.end(), c.method) == methods.end())
    throw UsageError("unknown --method '" + c.method + "'");
  const Realization x = load_input(c);
  if (c.method.rfind("local-", 0) == 0) return fit_local(c, x);
  if (c.method == "scan") return fit_scan(c, x);
  const CurveModel model = curve_model_of(c);
  FitResult fit;
  if (c.method == "block-whittle") {
    if (!c.N || !c.S) throw UsageError("block-whittle needs --N and --S");
    BlockWhittleOptions bo;
    bo.taper = Taper::from_name(c.taper);
    fit = block_whittle_fit(x, model, *c.N, *c.S, bo);
  } else if (c.method == "gw") {
    fit = generalized_whittle_fit(x, model);
  } else {
    fit = exact_mle_fit(x, model);
  }
  const fs::path dir = output_dir(c);
  write_json_file((dir / "fit.json").string(), Json{{"model", to_json(model)}, {"fit", to_json(fit)}});
  write_curve_csv((dir / "curves.csv").string(), model, fit.eta);
  write_run_metadata(dir, c, {{"T", x.T()}});
  return fit.converged ? 0 : kExitNoConvergence;
}

int cmd_spectrum(const RunConfig& c) {
  if (c.input.empty() && c.model.empty()) throw UsageError("spectrum needs --input and/or --model");
  const Eigen::VectorXd u = u_grid(c.grid_u.value_or(64));
  const Eigen::VectorXd lambda = lambda_grid(c.grid_l.value_or(64));
  std::optional<SpectralGrid> truth;
  if (!c.model.empty()) truth = true_tv_spectrum(read_spec_file(c.model).spec, u, lambda);
  const fs::path dir = output_dir(c);
  if (c.input.empty()) {
    write_spectral_grid_csv((dir / "spectrum.csv").string(), *truth);
    write_json_file((dir / "spectrum.json").string(), spectral_grid_header(*truth));
    write_run_metadata(dir, c);
    return 0;
  }
  const Realization x = load_input(c);
  const double bt = c.bt.value_or(0.2);
  const double bf = c.bf.value_or(0.3);
  SpectralGrid est;
  const std::string form = c.method.empty() ? "segment" : c.method;
  if (form == "segment") {
    SmoothingOptions so;
    so.taper = Taper::from_name(c.taper);
    so.kernel_f = Kernel::from_name(c.kernel);
    est = smoothed_tv_spectrum(x, u, lambda, bt, bf, so);
  } else if (form == "kernel") {
    const Kernel k = Kernel::from_name(c.kernel);
    est = smoothed_tv_spectrum_kernel(x, u, lambda, bt, bf, k, k);
  } else {
    throw UsageError("spectrum --method must be segment or kernel");
  }
  std::vector<const SpectralGrid*> extra;
  SpectralGrid diff;
  if (truth) {
    truth->quantity = "ftrue";
    diff = est;
    diff.quantity = "diff";
    diff.values = est.values - truth->values;
    extra = {&*truth, &diff};
  }
  write_spectral_grid_csv((dir / "spectrum.csv").string(), est, extra);
  write_json_file((dir / "spectrum.json").string(), spectral_grid_header(est));
  write_run_metadata(dir, c, {{"T", x.T()}});
  return 0;
}

int cmd_test_stationarity(const RunConfig& c) {
  if (c.reps < 100) throw UsageError("--reps must be at least 100");
  const Realization x = load_input(c);
  StationarityTestOptions o;
  o.replications = c.reps;
  o.seed = c.seed.value_or(1);
  o.u_points = c.grid_u.value_or(50);
  o.lambda_points = c.grid_l.value_or(64);
  o.max_ar_order = c.p.value_or(10);
  if (o.u_points < 1 || o.lambda_points < 1) throw UsageError("grid sizes must be positive");
  const StationarityReport rep = stationarity_test(x, o);
  const fs::path dir = output_dir(c);
  write_json_file((dir / "stationarity.json").string(), to_json(rep));
  write_run_metadata(dir, c, {{"T", x.T()}});
  std::cout << verdict_table(rep);
  return 0;
}

int cmd_matrix_check(const RunConfig& c) {
  if (c.model.empty()) throw UsageError("--model is required");
  const TvModelSpec spec = read_spec_file(c.model).spec;
  if (c.T_grid.empty()) throw UsageError("--T-grid must not be empty");
  const fs::path dir = output_dir(c);
  std::ofstream out((dir / "matrix_check.csv").string());
  if (!out) throw DataError("cannot write matrix_check.csv");
  out << "T,gap,szego\n";
  std::printf("%8s %14s %14s\n", "T", "gap", "szego");
  for (long T : c.T_grid) {
    if (T < 2) throw UsageError("--T-grid entries must be at least 2");
    const double gap = matrix_approximation_gap(spec, T);
    const double sz = szego_check(spec, T);
    char buf[96];
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g\n", T, gap, sz);
    out << buf;
    std::printf("%8ld %14.6e %14.6e\n", T, gap, sz);
  }
  write_run_metadata(dir, c);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Locally stationary time series: simulation, estimation and testing"};
  app.require_subcommand(1);
  RunConfig c;

  auto out_opt = [&](CLI::App* s) {
    s->add_option("--out", c.out, "Output directory")->capture_default_str();
    s->add_option("--threads", c.threads, "Worker thread cap (0 = all cores)");
  };

  auto* sim = app.add_subcommand("simulate", "Simulate a realization from a model JSON");
  sim->add_option("--model", c.model, "Model spec JSON")->required();
  sim->add_option("--T", c.T, "Sample length (overrides the model file)");
  sim->add_option("--seed", c.seed, "Seed (overrides the model file)");
  out_opt(sim);

  auto* fit = app.add_subcommand("fit", "Fit a local or global model");
  fit->add_option("--input", c.input, "Data CSV")->required();
  fit->add_option("--method", c.method,
                  "local-yw | local-whittle | local-gw | local-conditional | block-whittle | gw | mle | scan")
      ->required();
  fit->add_option("--model", c.model, "Curve model JSON (global methods)");
  fit->add_option("--p", c.p, "AR order (maximal order for scan)");
  fit->add_option("--orders", c.orders, "Polynomial orders K_1,...,K_p")->delimiter(',');
  fit->add_option("--sigma2-order", c.sigma2_order, "Polynomial order of sigma^2(u)");
  fit->add_option("--mean-order", c.mean_order, "Polynomial order of mu(u); -1 for none");
  fit->add_option("--kmax", c.k_max, "Maximal polynomial order for scan");
  fit->add_option("--N", c.N, "Segment length");
  fit->add_option("--S", c.S, "Segment shift");
  fit->add_option("--b", c.b, "Kernel bandwidth");
  fit->add_option("--kernel", c.kernel, "rectangular | canonical-quadratic")->capture_default_str();
  fit->add_option("--taper", c.taper, "rectangular | sine-squared")->capture_default_str();
  fit->add_option("--grid-u", c.grid_u, "Number of local fit points");
  fit->add_option("--family", c.family, "tvAR | tvARCH (local-conditional)");
  fit->add_option("--degree", c.degree, "Local polynomial degree (local-conditional)");
  out_opt(fit);

  auto* spec = app.add_subcommand("spectrum", "Estimated and/or true time-varying spectrum");
  spec->add_option("--input", c.input, "Data CSV");
  spec->add_option("--model", c.model, "Model spec JSON for the true spectrum");
  spec->add_option("--method", c.method, "segment | kernel");
  spec->add_option("--bt", c.bt, "Time bandwidth");
  spec->add_option("--bf", c.bf, "Frequency bandwidth");
  spec->add_option("--kernel", c.kernel, "Frequency (and time) kernel")->capture_default_str();
  spec->add_option("--taper", c.taper, "Data taper")->capture_default_str();
  spec->add_option("--grid-u", c.grid_u, "Number of u nodes on [0,1]");
  spec->add_option("--grid-l", c.grid_l, "Number of lambda intervals on [0,pi]");
  out_opt(spec);

  auto* test = app.add_subcommand("test-stationarity", "Empirical spectral measure stationarity test");
  test->add_option("--input", c.input, "Data CSV")->required();
  test->add_option("--reps", c.reps, "Null replications (>= 100)")->capture_default_str();
  test->add_option("--seed", c.seed, "Calibration seed");
  test->add_option("--p", c.p, "Maximal AR order of the null fit");
  test->add_option("--grid-u", c.grid_u, "Number of u nodes");
  test->add_option("--grid-l", c.grid_l, "Number of lambda nodes");
  out_opt(test);

  auto* mat = app.add_subcommand("matrix-check", "Inverse-matrix gap and log-determinant check over T");
  mat->add_option("--model", c.model, "Model spec JSON")->required();
  mat->add_option("--T-grid", c.T_grid, "Sample lengths")->delimiter(',');
  out_opt(mat);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    set_max_threads(c.threads);
    if (sim->parsed()) {
      c.command = "simulate";
      return cmd_simulate(c);
    }
    if (fit->parsed()) {
      c.command = "fit";
      return cmd_fit(c);
    }
    if (spec->parsed()) {
      c.command = "spectrum";
      return cmd_spectrum(c);
    }
    if (test->parsed()) {
      c.command = "test-stationarity";
      return cmd_test_stationarity(c);
    }
    c.command = "matrix-check";
    return cmd_matrix_check(c);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const SchemaError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const SegmentationError& e) {
    std::cerr << "window error: " << e.what() << '\n';
    return kExitData;
  } catch (const ArgumentError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const WindowError& e) {
    std::cerr << "window error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitData;
  }
}
