#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "trackctl/airframe.hpp"
#include "trackctl/tuning.hpp"

namespace trackctl::cli {

namespace {

std::string cell(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.{}f}", v, precision);
}

std::string format_root(const ComplexPair& r) {
  if (r.im == 0.0) return fmt::format("{:.6f}", r.re);
  return fmt::format("{:.6f} {} {:.6f}i", r.re, r.im < 0 ? '-' : '+', std::abs(r.im));
}

std::string format_polynomial(const std::vector<double>& coeffs) {
  const auto degree = static_cast<int>(coeffs.size()) - 1;
  std::string out;
  for (int k = 0; k <= degree; ++k) {
    const double c = coeffs[static_cast<std::size_t>(k)];
    const int power = degree - k;
    std::string term;
    if (k == 0) {
      term = power == 0 ? fmt::format("{:.6f}", c) : "";
    } else {
      out += c < 0 ? " - " : " + ";
      term = fmt::format("{:.6f}", std::abs(c));
      if (power > 0) term += " ";
    }
    if (power == 1) term += "s";
    if (power > 1) term += fmt::format("s^{}", power);
    out += term;
  }
  return out;
}

void print_analysis(std::ostream& out, const std::string& label, const LinearModel& m) {
  const StabilityReport report = stability_roots(m);
  out << label << '\n';
  out << "  characteristic polynomial: " << format_polynomial(characteristic_polynomial(m))
      << '\n';
  out << "  roots:\n";
  for (const auto& r : report.roots) out << "    " << format_root(r) << '\n';
  out << "  verdict: " << (report.stable ? "stable" : "not stable")
      << fmt::format(" (max real part {:.6f})", report.margin_measure) << '\n';
}

int run_roots(const std::string& scenario_arg, std::ostream& out) {
  const Scenario s = load_scenario(scenario_arg);
  if (s.preset == kPresetLongitudinal && s.model.states() == longitudinal::kStates) {
    print_analysis(out, "flight core (u, w, q, theta)",
                   leading_block(s.model, longitudinal::kCoreStates));
    print_analysis(out, "full model (u, w, q, theta, h)", s.model);
  } else {
    print_analysis(out, fmt::format("model ({} states)", s.model.states()), s.model);
  }
  return kExitOk;
}

int run_simulate(const std::string& scenario_arg, std::uint64_t seed, const std::string& out_dir,
                 const std::string& feedback, std::ostream& out) {
  const Scenario s = load_scenario(scenario_arg);
  RunOptions options;
  options.feedback = feedback == "measurement" ? FeedbackSource::measurement
                                               : FeedbackSource::estimate;
  const RunTrace trace = run_scenario(s, seed, options);
  write_trace(trace, out_dir);
  out << fmt::format("scenario {} seed {}: {} steps written to {}\n", s.name, seed,
                     trace.rows.size(), out_dir);
  out << print_report(trace.summary);
  return kExitOk;
}

int run_tune(const std::string& scenario_arg, const std::vector<std::string>& select, int iters,
             int pop, std::uint64_t seed, int threads, double decades, const std::string& out_dir,
             std::ostream& out) {
  const Scenario s = load_scenario(scenario_arg);
  std::vector<TuneTarget> what;
  for (const auto& name : select) what.push_back(parse_tune_target(name));

  FireflyParams params;
  params.iterations = iters;
  params.population = pop;
  params.seed = seed;
  params.threads = threads;
  const SearchSpace space = default_search_space(s, what, decades);
  const double before = mean_mse(s);
  const TuneResult result = tune_pipeline(s, what, space, params);

  std::filesystem::create_directories(out_dir);
  std::string csv = "iteration,best_cost";
  for (int d = 0; d < space.dims(); ++d) csv += fmt::format(",log10_d_{}", d);
  csv += '\n';
  const auto& opt = result.optimization;
  for (std::size_t i = 0; i < opt.history.size(); ++i) {
    csv += fmt::format("{},{:.17g}", i, opt.history[i]);
    for (Eigen::Index d = 0; d < opt.best_positions[i].size(); ++d) {
      csv += fmt::format(",{:.17g}", opt.best_positions[i](d));
    }
    csv += '\n';
  }
  {
    std::ofstream f(std::filesystem::path(out_dir) / "history.csv", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write history.csv in " + out_dir);
    f << csv;
  }
  Scenario tuned = result.tuned;
  tuned.name = s.name + "-tuned";
  save_scenario(tuned, std::filesystem::path(out_dir) / "tuned_scenario.json");

  out << fmt::format("mean MSE before tuning: {:.6f}\n", before);
  out << fmt::format("mean MSE after tuning:  {:.6f} ({} evaluations)\n", opt.best_cost,
                     opt.evaluations);
  out << "tuned diagonals:";
  for (Eigen::Index d = 0; d < result.tuned_diagonals.size(); ++d) {
    out << fmt::format(" {:.6g}", result.tuned_diagonals(d));
  }
  out << '\n';
  return kExitOk;
}

int run_analyze(const std::string& dir, std::ostream& out) {
  const auto path = std::filesystem::path(dir) / "metrics.json";
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  const auto doc = nlohmann::json::parse(in);
  out << print_report(metrics_from_json(doc));
  return kExitOk;
}

}  // namespace

std::string print_report(const MetricsReport& r) {
  constexpr const char* kRowFormat = "{:>12} {:>12} {:>12} {:>12} {:>12} {:>12}\n";
  std::string out = fmt::format(kRowFormat, "Specificity", "Sensitivity", "Accuracy", "SNR(dB)",
                                "PSNR(dB)", "MSE");
  out += fmt::format(kRowFormat, cell(r.specificity, 4), cell(r.sensitivity, 4),
                     cell(r.accuracy, 4), cell(r.snr_db, 4), cell(r.psnr_db, 4), cell(r.mse, 6));
  return out;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Estimation-and-control toolkit: LQR, LQR-coupled Kalman filter, firefly tuning",
               "trackctl"};
  app.require_subcommand(1, 1);

  std::string scenario;
  std::string out_dir;
  std::string trace_dir;
  std::string feedback = "estimate";
  std::uint64_t seed = 0;
  std::vector<std::string> select{"kf"};
  int iters = 1000;
  int pop = 25;
  int threads = 1;
  double decades = 3.0;

  auto* simulate = app.add_subcommand("simulate", "Run one closed-loop scenario");
  simulate->add_option("--scenario", scenario, "Preset name or scenario JSON")->required();
  simulate->add_option("--seed", seed, "Noise seed");
  simulate->add_option("--out", out_dir, "Output directory")->required();
  simulate->add_option("--feedback", feedback, "State fed to the controller")
      ->check(CLI::IsMember({"estimate", "measurement"}));

  auto* tune = app.add_subcommand("tune", "Firefly tuning of weight diagonals");
  tune->add_option("--scenario", scenario, "Preset name or scenario JSON")->required();
  tune->add_option("--select", select, "kf, lqr")
      ->delimiter(',')
      ->check(CLI::IsMember({"kf", "lqr", "kf-noise-diagonals", "lqr-weight-diagonals"}));
  tune->add_option("--iters", iters, "Iterations")->check(CLI::PositiveNumber);
  tune->add_option("--pop", pop, "Population")->check(CLI::PositiveNumber);
  tune->add_option("--seed", seed, "Optimizer seed");
  tune->add_option("--threads", threads, "Evaluation threads")->check(CLI::PositiveNumber);
  tune->add_option("--decades", decades, "Half-width of the log10 search box");
  tune->add_option("--out", out_dir, "Output directory")->required();

  auto* analyze = app.add_subcommand("analyze", "Print the metrics of a written trace");
  analyze->add_option("--trace", trace_dir, "Directory written by simulate")->required();

  auto* roots = app.add_subcommand("roots", "Characteristic polynomial, roots and verdict");
  roots->add_option("--scenario", scenario, "Preset name or scenario JSON")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (simulate->parsed()) return run_simulate(scenario, seed, out_dir, feedback, out);
    if (tune->parsed()) {
      return run_tune(scenario, select, iters, pop, seed, threads, decades, out_dir, out);
    }
    if (analyze->parsed()) return run_analyze(trace_dir, out);
    if (roots->parsed()) return run_roots(scenario, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace trackctl::cli
