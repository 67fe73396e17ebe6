// Command-line harness: single runs, sigma/scheme sweeps, the verification
// suite, a NAG comparison, and synthetic dataset generation.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "symaccel/data.hpp"
#include "symaccel/integrators.hpp"
#include "symaccel/model.hpp"
#include "symaccel/nag.hpp"
#include "symaccel/objectives.hpp"
#include "symaccel/trace_io.hpp"
#include "symaccel/verify.hpp"

namespace {

using json = nlohmann::json;
using namespace symaccel;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitDivergence = 2;
constexpr int kExitIo = 3;
constexpr int kExitVerifyFailed = 4;

Scheme parse_scheme(const std::string& name) {
  if (name == "si1") return Scheme::SI1;
  if (name == "si2") return Scheme::SI2;
  if (name == "si2-literal") return Scheme::SI2Literal;
  if (name == "si4") return Scheme::SI4;
  if (name == "rk2") return Scheme::RK2;
  if (name == "rk4") return Scheme::RK4;
  throw CLI::ValidationError("--scheme", "unknown scheme: " + name);
}

struct ObjectiveOptions {
  std::string data_path;
  std::string label_col;
  std::string positive_label = "1";
  char delimiter = ',';
  bool has_header = true;
  std::string idx_images, idx_labels;
  bool do_standardize = false;
  bool intercept = false;
  double lambda_reg = 1e-8;
  int quadratic_dim = 0;
  std::uint64_t seed = 0;
  int synth_n = 0;
  int synth_d = 5;
  double synth_sep = 4.0;
  std::string x0_csv;
};

void add_objective_flags(CLI::App* cmd, ObjectiveOptions& o) {
  cmd->add_option("--data", o.data_path, "delimited dataset path");
  cmd->add_option("--label-col", o.label_col, "label column name (header) or index");
  cmd->add_option("--positive-label", o.positive_label, "label value mapped to 1");
  cmd->add_option("--delimiter", o.delimiter, "field delimiter");
  cmd->add_flag("!--no-header", o.has_header, "dataset file has no header row");
  cmd->add_option("--idx-images", o.idx_images, "IDX images file");
  cmd->add_option("--idx-labels", o.idx_labels, "IDX labels file");
  cmd->add_flag("--standardize", o.do_standardize, "standardize feature columns");
  cmd->add_flag("--add-intercept", o.intercept, "append a constant-1 feature");
  cmd->add_option("--lambda-reg", o.lambda_reg, "L2 regularization weight");
  cmd->add_option("--quadratic", o.quadratic_dim, "use the quadratic test objective of this dim");
  cmd->add_option("--seed", o.seed, "RNG seed for synthetic data");
  cmd->add_option("--synth-n", o.synth_n, "synthetic dataset size (enables synthetic objective)");
  cmd->add_option("--synth-d", o.synth_d, "synthetic dataset dimension");
  cmd->add_option("--synth-sep", o.synth_sep, "synthetic class separation");
  cmd->add_option("--x0", o.x0_csv, "initial point as comma-separated values");
}

struct BuiltObjective {
  std::unique_ptr<Objective> objective;
  Vector x0;
  json meta;
};

Vector parse_csv_vector(const std::string& csv) {
  std::vector<double> vals;
  std::stringstream ss(csv);
  std::string field;
  while (std::getline(ss, field, ',')) vals.push_back(std::stod(field));
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

BuiltObjective build_objective(const ObjectiveOptions& o) {
  BuiltObjective out;
  if (o.quadratic_dim > 0) {
    out.objective = std::make_unique<QuadraticObjective>(Vector::Zero(o.quadratic_dim),
                                                         Vector::Ones(o.quadratic_dim));
    out.x0 = Vector::Ones(o.quadratic_dim);
    out.meta = {{"objective", "quadratic"}, {"dim", o.quadratic_dim}};
  } else {
    Dataset ds;
    if (!o.data_path.empty()) {
      DelimitedOptions dopt;
      dopt.delimiter = o.delimiter;
      dopt.has_header = o.has_header;
      dopt.positive_label = o.positive_label;
      if (!o.label_col.empty()) {
        try {
          std::size_t pos = 0;
          const int idx = std::stoi(o.label_col, &pos);
          if (pos == o.label_col.size())
            dopt.label_index = idx;
          else
            dopt.label_column = o.label_col;
        } catch (const std::exception&) {
          dopt.label_column = o.label_col;
        }
      }
      ds = load_delimited(o.data_path, dopt);
    } else if (!o.idx_images.empty() || !o.idx_labels.empty()) {
      if (o.idx_images.empty() || o.idx_labels.empty())
        throw CLI::ValidationError("--idx-images/--idx-labels", "both files are required");
      ds = load_idx_pair(o.idx_images, o.idx_labels);
    } else if (o.synth_n > 0) {
      ds = synth_logistic(o.seed, o.synth_n, o.synth_d, o.synth_sep);
    } else {
      throw CLI::ValidationError(
          "objective", "provide --data, --idx-images/--idx-labels, --synth-n, or --quadratic");
    }
    if (o.do_standardize) ds = standardize(ds).dataset;
    if (o.intercept) ds = add_intercept(ds);
    out.meta = {{"objective", "logistic"},
                {"dataset", ds.provenance},
                {"n", ds.features.rows()},
                {"dim", ds.features.cols()},
                {"lambda_reg", o.lambda_reg}};
    out.x0 = Vector::Zero(ds.features.cols());
    out.objective = std::make_unique<LogisticRegressionObjective>(
        std::move(ds.features), std::move(ds.labels), o.lambda_reg);
  }
  if (!o.x0_csv.empty()) {
    Vector x0 = parse_csv_vector(o.x0_csv);
    if (x0.size() != out.objective->dim())
      throw CLI::ValidationError("--x0", "dimension mismatch with objective");
    out.x0 = std::move(x0);
  }
  return out;
}

struct RunOptions {
  std::string scheme = "si2";
  double sigma = 6.0;
  double tau = 0.01;
  bool backtracking = false;
  double rel_tol = 1e-6;
  std::int64_t max_iters = 100000;
  std::string out_dir;
  bool plot = false;
};

void add_run_flags(CLI::App* cmd, RunOptions& r) {
  cmd->add_option("--scheme", r.scheme, "si1|si2|si2-literal|si4|rk2|rk4");
  cmd->add_option("--sigma", r.sigma, "convergence rate parameter (>= 2)");
  cmd->add_option("--tau", r.tau, "step size (0, 0.5]");
  cmd->add_flag("--backtracking", r.backtracking, "adapt the step size by backtracking");
  cmd->add_option("--rel-tol", r.rel_tol, "relative objective-change stopping tolerance");
  cmd->add_option("--max-iters", r.max_iters, "iteration cap");
  cmd->add_option("--out-dir", r.out_dir, "output directory");
  cmd->add_flag("--plot", r.plot, "also write an SVG plot");
}

std::filesystem::path resolve_out_dir(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("SYMACCEL_OUT_DIR")) return env;
  return ".";
}

void validate_run(const RunOptions& r) {
  if (r.sigma < 2.0) throw CLI::ValidationError("--sigma", "sigma must be >= 2");
  if (r.tau <= 0.0 || r.tau > 0.5) throw CLI::ValidationError("--tau", "tau must be in (0, 0.5]");
  if (r.rel_tol <= 0.0) throw CLI::ValidationError("--rel-tol", "rel-tol must be positive");
  if (r.max_iters < 1) throw CLI::ValidationError("--max-iters", "max-iters must be >= 1");
}

StepperConfig make_stepper_config(const RunOptions& r) {
  StepperConfig cfg;
  cfg.scheme = parse_scheme(r.scheme);
  cfg.tau = r.tau;
  if (r.backtracking) cfg.backtracking = Backtracking{};
  return cfg;
}

json summarize(const Trace& trace, const std::string& scheme, double sigma, double tau) {
  const std::int64_t grad_evals =
      trace.records.empty() ? 0 : trace.records.back().grad_evals_cum;
  const std::int64_t wall_ns = trace.records.empty() ? 0 : trace.records.back().elapsed_ns;
  return {{"scheme", scheme},
          {"sigma", sigma},
          {"tau", tau},
          {"iters", static_cast<std::int64_t>(trace.records.size())},
          {"grad_evals", grad_evals},
          {"wall_ns", wall_ns},
          {"final_f", trace.final_f},
          {"stop_reason", trace.stop_reason}};
}

void write_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write: " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failure: " + path.string());
}

int cmd_run(const RunOptions& r, const ObjectiveOptions& o) {
  validate_run(r);
  const BuiltObjective built = build_objective(o);
  const SigmaModel model(r.sigma);
  const Trace trace =
      run(model, *built.objective, built.x0, make_stepper_config(r), {r.rel_tol, r.max_iters});

  const auto dir = resolve_out_dir(r.out_dir);
  std::filesystem::create_directories(dir);
  write_trace_csv(trace, (dir / "trace.csv").string());
  json summary = summarize(trace, r.scheme, r.sigma, r.tau);
  summary["objective"] = built.meta;
  write_json(summary, dir / "summary.json");
  if (r.plot) {
    PlotSeries series{r.scheme, {}, {}};
    for (const auto& rec : trace.records) {
      series.xs.push_back(static_cast<double>(rec.iter));
      series.ys.push_back(rec.f);
    }
    write_svg_log_plot({series}, "objective vs iteration", (dir / "trace.svg").string());
  }
  std::cout << summary.dump(2) << std::endl;
  return trace.stop_reason == "diverged" ? kExitDivergence : kExitOk;
}

int cmd_sweep(const RunOptions& r, const ObjectiveOptions& o,
              const std::vector<double>& sigma_list, const std::vector<std::string>& scheme_list,
              int jobs) {
  validate_run(r);
  if (sigma_list.empty()) throw CLI::ValidationError("--sigma-list", "must be non-empty");
  if (scheme_list.empty()) throw CLI::ValidationError("--scheme-list", "must be non-empty");
  for (const auto& s : scheme_list) parse_scheme(s);
  if (jobs < 1) throw CLI::ValidationError("--jobs", "jobs must be >= 1");

  struct Cell {
    std::string scheme;
    double sigma;
    json summary;
    Trace trace;
    bool failed = false;
    std::string error;
  };
  std::vector<Cell> cells;
  for (const auto& scheme : scheme_list)
    for (const double sigma : sigma_list) cells.push_back({scheme, sigma, {}, {}, false, ""});

  std::atomic<std::size_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      Cell& cell = cells[i];
      try {
        const BuiltObjective built = build_objective(o);
        const SigmaModel model(cell.sigma);
        RunOptions rr = r;
        rr.scheme = cell.scheme;
        rr.sigma = cell.sigma;
        cell.trace = run(model, *built.objective, built.x0, make_stepper_config(rr),
                         {r.rel_tol, r.max_iters});
        cell.summary = summarize(cell.trace, cell.scheme, cell.sigma, r.tau);
      } catch (const std::exception& e) {
        cell.failed = true;
        cell.error = e.what();
      }
    }
  };
  std::vector<std::future<void>> pool;
  for (int j = 1; j < jobs; ++j) pool.push_back(std::async(std::launch::async, worker));
  worker();
  for (auto& f : pool) f.get();

  const auto dir = resolve_out_dir(r.out_dir);
  std::filesystem::create_directories(dir);
  std::ofstream table(dir / "sweep.csv");
  if (!table) throw IoError("cannot write sweep table");
  table << "scheme,sigma,iters,grad_evals,final_f,stop_reason\n";
  bool warnings = false;
  std::vector<PlotSeries> series;
  for (auto& cell : cells) {
    if (cell.failed) {
      warnings = true;
      table << cell.scheme << ',' << format_double(cell.sigma) << ",,,,error:" << cell.error
            << '\n';
      continue;
    }
    if (cell.summary["stop_reason"] == "diverged") warnings = true;
    table << cell.scheme << ',' << format_double(cell.sigma) << ',' << cell.summary["iters"]
          << ',' << cell.summary["grad_evals"] << ',' << format_double(cell.trace.final_f) << ','
          << cell.summary["stop_reason"].get<std::string>() << '\n';
    PlotSeries s{cell.scheme + " sigma=" + format_double(cell.sigma), {}, {}};
    for (const auto& rec : cell.trace.records) {
      s.xs.push_back(static_cast<double>(rec.iter));
      s.ys.push_back(rec.f);
    }
    series.push_back(std::move(s));
  }
  write_svg_log_plot(series, "objective vs iteration", (dir / "sweep.svg").string());
  if (warnings) std::cerr << "sweep finished with warnings (see sweep.csv)\n";
  std::cout << "wrote " << (dir / "sweep.csv").string() << std::endl;
  return kExitOk;
}

int cmd_compare_nag(const RunOptions& r, const ObjectiveOptions& o) {
  validate_run(r);
  const BuiltObjective built = build_objective(o);
  const SigmaModel model(r.sigma);

  StepperConfig si_cfg = make_stepper_config(r);
  si_cfg.scheme = Scheme::SI2;
  si_cfg.backtracking = Backtracking{};
  const Trace si = run(model, *built.objective, built.x0, si_cfg, {r.rel_tol, r.max_iters});

  NagConfig nag_cfg;
  nag_cfg.backtracking = NagBacktrackParams{};
  const Trace nag = run_nag(*built.objective, built.x0, nag_cfg, {r.rel_tol, r.max_iters});

  json report = {{"objective", built.meta},
                 {"si2_bt", summarize(si, "si2", r.sigma, r.tau)},
                 {"nag_bt", summarize(nag, "nag", r.sigma, nag_cfg.initial_s)}};
  const auto dir = resolve_out_dir(r.out_dir);
  std::filesystem::create_directories(dir);
  write_json(report, dir / "compare_nag.json");
  std::ofstream table(dir / "compare_nag.csv");
  table << "method,iters,grad_evals,wall_ns,final_f,stop_reason\n";
  for (const auto& [name, tr] : {std::pair<const char*, const Trace&>{"si2_bt", si},
                                 std::pair<const char*, const Trace&>{"nag_bt", nag}}) {
    table << name << ',' << tr.records.size() << ','
          << (tr.records.empty() ? 0 : tr.records.back().grad_evals_cum) << ','
          << (tr.records.empty() ? 0 : tr.records.back().elapsed_ns) << ','
          << format_double(tr.final_f) << ',' << tr.stop_reason << '\n';
  }
  std::cout << report.dump(2) << std::endl;
  const bool diverged = si.stop_reason == "diverged" || nag.stop_reason == "diverged";
  return diverged ? kExitDivergence : kExitOk;
}

int cmd_gen_data(std::uint64_t seed, int n, int d, double sep, const std::string& out_path) {
  const Dataset ds = synth_logistic(seed, n, d, sep);
  std::ofstream out(out_path);
  if (!out) throw IoError("cannot write: " + out_path);
  for (int j = 0; j < d; ++j) out << 'f' << j << ',';
  out << "label\n";
  for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j)
      out << format_double(ds.features(i, j)) << ',';
    out << static_cast<int>(ds.labels[i]) << '\n';
  }
  if (!out) throw IoError("write failure: " + out_path);
  std::cout << "wrote " << out_path << " (" << n << "x" << d << ")\n";
  return kExitOk;
}

// Verification studies with the acceptance thresholds baked in as defaults.
int cmd_verify(const std::string& which, const std::string& scheme_name_opt, double sigma,
               const std::string& out_dir) {
  const auto dir = resolve_out_dir(out_dir);
  std::filesystem::create_directories(dir);
  json report;
  bool pass = true;

  if (which == "order") {
    const Scheme scheme = parse_scheme(scheme_name_opt);
    const SigmaModel model(sigma);
    const QuadraticObjective quad(Vector::Zero(2), Vector::Ones(2));
    const Vector x0 = Vector::Ones(2);
    const OrderStudyReport study =
        order_study(scheme, model, quad, x0, 2.0, {0.04, 0.02, 0.01, 0.005});
    double expected = 2.0, band = 0.3;
    switch (scheme) {
      case Scheme::SI1: expected = 1.0; band = 0.3; break;
      case Scheme::SI2:
      case Scheme::SI2Literal:
      case Scheme::RK2: expected = 2.0; band = 0.3; break;
      case Scheme::SI4:
      case Scheme::RK4: expected = 4.0; band = 0.5; break;
    }
    pass = std::abs(study.fitted_order - expected) <= band;
    report = {{"study", "order"},
              {"scheme", scheme_name_opt},
              {"taus", study.taus},
              {"errors", study.errors},
              {"fitted_order", study.fitted_order},
              {"expected", expected},
              {"band", band},
              {"pass", pass}};
  } else if (which == "symplectic") {
    const Scheme scheme = parse_scheme(scheme_name_opt);
    if (!is_symplectic_scheme(scheme))
      throw CLI::ValidationError("--scheme", "symplecticity is only claimed for SI schemes");
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> unif(-2.0, 2.0);
    double worst = 0.0;
    for (const double sg : {2.0, 4.0, 6.0}) {
      const SigmaModel model(sg);
      const QuadraticObjective quad(Vector::Zero(3), Vector::Ones(3));
      for (int i = 0; i < 20; ++i) {
        // moderate t: the fixed-h determinant estimate loses resolution once
        // the one-step map magnitudes grow like t^(3*sigma)
        PhaseState st{Vector::NullaryExpr(3, [&](Eigen::Index) { return unif(rng); }),
                      Vector::NullaryExpr(3, [&](Eigen::Index) { return unif(rng); }),
                      1.0 + 0.125 * (unif(rng) + 2.0)};
        worst = std::max(worst, symplecticity_check(scheme, model, quad, st, 0.01, 1e-6));
      }
    }
    pass = worst <= 1e-6;
    report = {{"study", "symplectic"},
              {"scheme", scheme_name_opt},
              {"max_det_deviation", worst},
              {"threshold", 1e-6},
              {"pass", pass}};
  } else if (which == "rate") {
    const SigmaModel model(sigma);
    const QuadraticObjective quad(Vector::Zero(1), Vector::Ones(1));
    const Trace tr = run(model, quad, Vector::Ones(1), {Scheme::SI2, 0.001, std::nullopt},
                         {0.0, 99000});
    const RateFitReport fit = rate_fit(tr, 0.0, 10.0, 100.0);
    pass = fit.slope <= -(sigma - 0.5);
    report = {{"study", "rate"},
              {"sigma", sigma},
              {"slope", fit.slope},
              {"threshold", -(sigma - 0.5)},
              {"r2", fit.r2},
              {"pass", pass}};
  } else if (which == "gradcheck") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    const Dataset ds = synth_logistic(11, 20, 5, 2.0);
    const LogisticRegressionObjective logi(ds.features, ds.labels, 1e-8);
    const QuadraticObjective quad(Vector::Zero(4), Vector::Ones(4));
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const Vector w = Vector::NullaryExpr(5, [&](Eigen::Index) { return unif(rng); });
      worst = std::max(worst, grad_check(logi, w, 1e-6).max_rel_err);
      const Vector x = Vector::NullaryExpr(4, [&](Eigen::Index) { return unif(rng); });
      worst = std::max(worst, grad_check(quad, x, 1e-5).max_rel_err);
    }
    pass = worst <= 1e-6;
    report = {{"study", "gradcheck"}, {"max_rel_err", worst}, {"threshold", 1e-6}, {"pass", pass}};
  } else if (which == "residual") {
    const SigmaModel model(2.0);
    const QuadraticObjective quad(Vector::Zero(2), Vector::Ones(2));
    const Vector x0 = Vector::Ones(2);
    const Trace coarse = run(model, quad, x0, {Scheme::SI2, 0.01, std::nullopt}, {0.0, 100});
    const Trace fine = run(model, quad, x0, {Scheme::SI2, 0.005, std::nullopt}, {0.0, 200});
    const double rc = ode_residual(coarse, model, quad);
    const double rf = ode_residual(fine, model, quad);
    const double ratio = rc / rf;
    pass = ratio >= 3.0 && ratio <= 5.0;
    report = {{"study", "residual"},
              {"residual_tau", rc},
              {"residual_tau_half", rf},
              {"ratio", ratio},
              {"pass", pass}};
  } else {
    throw CLI::ValidationError("which", "unknown study: " + which);
  }

  write_json(report, dir / ("verify_" + which + ".json"));
  std::cout << report.dump(2) << std::endl;
  return pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"explicit symplectic integrators for accelerated-gradient flows"};
  app.require_subcommand(1);

  RunOptions run_opts;
  ObjectiveOptions obj_opts;
  std::vector<double> sigma_list;
  std::vector<std::string> scheme_list;
  int jobs = 1;

  auto* c_run = app.add_subcommand("run", "execute a single optimization run");
  add_run_flags(c_run, run_opts);
  add_objective_flags(c_run, obj_opts);

  auto* c_sweep = app.add_subcommand("sweep", "run a (scheme, sigma) grid");
  add_run_flags(c_sweep, run_opts);
  add_objective_flags(c_sweep, obj_opts);
  c_sweep->add_option("--sigma-list", sigma_list, "sigma values")->delimiter(',');
  c_sweep->add_option("--scheme-list", scheme_list, "schemes")->delimiter(',');
  c_sweep->add_option("--jobs", jobs, "parallel cells");

  std::string verify_which, verify_scheme = "si2";
  double verify_sigma = 2.0;
  std::string verify_out;
  auto* c_verify = app.add_subcommand("verify", "run a verification study");
  c_verify->add_option("which", verify_which, "order|symplectic|rate|gradcheck|residual")
      ->required();
  c_verify->add_option("--scheme", verify_scheme, "scheme for order/symplectic studies");
  c_verify->add_option("--sigma", verify_sigma, "sigma for order/rate studies");
  c_verify->add_option("--out-dir", verify_out, "output directory");

  auto* c_nag = app.add_subcommand("compare-nag", "SI2(bt) vs NAG(bt) on one objective");
  add_run_flags(c_nag, run_opts);
  add_objective_flags(c_nag, obj_opts);

  std::uint64_t gen_seed = 0;
  int gen_n = 200, gen_d = 5;
  double gen_sep = 4.0;
  std::string gen_out = "synth.csv";
  auto* c_gen = app.add_subcommand("gen-data", "write a synthetic logistic dataset");
  c_gen->add_option("--seed", gen_seed, "RNG seed");
  c_gen->add_option("--n", gen_n, "number of rows");
  c_gen->add_option("--d", gen_d, "feature dimension");
  c_gen->add_option("--sep", gen_sep, "class separation");
  c_gen->add_option("--out", gen_out, "output path");

  try {
    app.parse(argc, argv);
    if (c_run->parsed()) return cmd_run(run_opts, obj_opts);
    if (c_sweep->parsed()) return cmd_sweep(run_opts, obj_opts, sigma_list, scheme_list, jobs);
    if (c_verify->parsed()) return cmd_verify(verify_which, verify_scheme, verify_sigma, verify_out);
    if (c_nag->parsed()) return cmd_compare_nag(run_opts, obj_opts);
    if (c_gen->parsed()) return cmd_gen_data(gen_seed, gen_n, gen_d, gen_sep, gen_out);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDivergence;
  }
  return kExitConfig;
}
