#include "tma/cli.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tma/csv.hpp"
#include "tma/diagnostics.hpp"
#include "tma/error.hpp"
#include "tma/estimate.hpp"
#include "tma/experiment.hpp"
#include "tma/lr_test.hpp"
#include "tma/residuals.hpp"
#include "tma/simulate.hpp"

namespace tma::cli {

namespace {

using nlohmann::ordered_json;

struct Common {
  std::string input;
  std::string output;
  int p = 1;
  int q = 1;
  int d = 1;
  double beta1 = 0.1;
  double beta2 = 0.9;
  std::size_t max_points = 60;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct SimulateArgs {
  std::vector<double> phi{0.5};
  std::vector<double> psi;
  double r = 0.0;
  std::size_t n = 400;
  std::size_t burn_in = kDefaultBurnIn;
  std::string distribution = "normal";
  double df = 0.0;
  double sigma = 1.0;
};

struct FitArgs {
  std::string model = "tma";
  std::vector<std::size_t> lags{11, 13, 15};
  std::string lb_df = "adjusted";
};

struct TestArgs {
  std::vector<double> alphas{0.10, 0.05, 0.01};
  std::size_t replications = 25000;
  double statistic_factor = kDefaultStatisticFactor;
  std::string method = "auto";
};

struct McArgs {
  std::string config;
  std::optional<std::size_t> replications;
  bool seed_given = false;
};

struct DiagnoseArgs {
  std::vector<std::size_t> lags{11, 13, 15};
  std::size_t fitted_params = 0;
  std::size_t max_lag = 20;
};

/// Writes to the output path when given, otherwise to the stream.
template <typename Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
  write(file);
  if (!file) throw Error(ErrorKind::Io, "write to '" + path + "' failed");
}

void dump_json(std::ostream& os, const ordered_json& j) { os << j.dump(2) << '\n'; }

std::vector<double> load_series(const std::string& path, std::ostream& err) {
  if (path.empty()) throw Error(ErrorKind::InvalidSpec, "an input CSV is required (-i)");
  auto csv = read_series_csv_file(path);
  if (csv.ignored_columns) {
    err << "warning: " << path << ": using column '" << csv.column
        << "', extra columns ignored\n";
  }
  return std::move(csv.values);
}

void require_rows(const std::vector<double>& y, const std::string& path) {
  if (y.size() < 50) {
    throw Error(ErrorKind::Data, path + ": need at least 50 rows, got " + std::to_string(y.size()));
  }
}

Distribution distribution_from(const std::string& name) {
  if (name == "normal") return Distribution::StandardNormal;
  if (name == "student-t") return Distribution::StudentT;
  if (name == "uniform") return Distribution::UniformCentered;
  throw Error(ErrorKind::InvalidSpec, "unknown distribution '" + name + "'");
}

ordered_json ljung_box_json(const std::vector<double>& resid, const std::vector<std::size_t>& lags,
                            std::size_t fitted) {
  ordered_json arr = ordered_json::array();
  for (std::size_t M : lags) {
    const auto lb = ljung_box(resid, M, fitted);
    arr.push_back({{"M", lb.M}, {"Q", lb.Q}, {"df", lb.df}, {"p", lb.p_value}});
  }
  return arr;
}

void cmd_simulate(const Common& c, const SimulateArgs& s, std::ostream& out) {
  const ModelOrders orders{c.p, c.q, c.d};
  orders.validate();
  TmaParams params;
  params.phi = s.phi;
  params.psi = s.psi.empty() ? std::vector<double>(c.q, 0.0) : s.psi;
  params.r = s.r;
  params.check_lengths(orders);
  InnovationSpec spec{distribution_from(s.distribution), s.df, s.sigma, c.seed, 0};
  const auto y = simulate_tma(orders, params, s.n, spec, s.burn_in);
  emit(c.output, out, [&](std::ostream& os) { write_series_csv(os, y); });
}

void cmd_fit(const Common& c, const FitArgs& f, std::ostream& out, std::ostream& err) {
  const auto y = load_series(c.input, err);
  require_rows(y, c.input);
  const bool adjusted = f.lb_df == "adjusted";
  if (!adjusted && f.lb_df != "raw") {
    throw Error(ErrorKind::InvalidSpec, "--lb-df must be 'adjusted' or 'raw'");
  }
  ordered_json j;
  std::vector<double> resid;
  if (f.model == "ma") {
    const auto fit = fit_ma(y, c.p);
    detail::run_recursion(y, fit.params.phi, {}, std::vector<bool>(y.size(), false), resid, nullptr);
    j["model"] = "ma";
    j["orders"] = {{"p", c.p}};
    j["phi"] = fit.params.phi;
    j["sse"] = fit.sse;
    j["sigma2"] = fit.sigma2;
    j["aic"] = aic(y.size(), fit.sse, c.p);
    j["ljung_box"] = ljung_box_json(resid, f.lags, adjusted ? c.p : 0);
  } else if (f.model == "tma") {
    const ModelOrders orders{c.p, c.q, c.d};
    orders.validate();
    const auto grid = threshold_grid(y, c.beta1, c.beta2, c.max_points);
    const auto prof = profile_threshold(y, orders, grid);
    const auto& fit = prof.per_r[prof.r_hat_index];
    detail::run_recursion(y, fit.params.phi, fit.params.psi,
                          regime_indicator(y, c.d, prof.r_hat), resid, nullptr);
    const auto k = static_cast<std::size_t>(orders.num_params());
    j["model"] = "tma";
    j["orders"] = {{"p", c.p}, {"q", c.q}, {"d", c.d}};
    j["phi"] = fit.params.phi;
    j["psi"] = fit.params.psi;
    j["r_hat"] = prof.r_hat;
    j["sse"] = fit.sse;
    j["sigma2"] = fit.sigma2;
    j["aic"] = aic(y.size(), fit.sse, k);
    j["ljung_box"] = ljung_box_json(resid, f.lags, adjusted ? k : 0);
  } else {
    throw Error(ErrorKind::InvalidSpec, "--model must be 'ma' or 'tma'");
  }
  emit(c.output, out, [&](std::ostream& os) { dump_json(os, j); });
}

void cmd_test(const Common& c, const TestArgs& t, std::ostream& out, std::ostream& err) {
  const auto y = load_series(c.input, err);
  require_rows(y, c.input);
  const ModelOrders orders{c.p, c.q, c.d};
  TestConfig cfg;
  cfg.max_points = c.max_points;
  cfg.replications = t.replications;
  cfg.seed = c.seed;
  cfg.alphas = t.alphas;
  cfg.lr.statistic_factor = t.statistic_factor;
  cfg.threads = c.threads;
  if (t.method == "kernel") cfg.method = CriticalMethod::KernelSimulation;
  else if (t.method == "bridge") cfg.method = CriticalMethod::BrownianBridge;
  else if (t.method != "auto") throw Error(ErrorKind::InvalidSpec, "--method must be auto, kernel or bridge");

  const auto res = run_test(y, orders, c.beta1, c.beta2, cfg);
  if (res.profile.failures > 0) {
    err << "warning: " << res.profile.failures << " threshold candidates failed to fit\n";
  }
  ordered_json j;
  j["lr_n"] = res.profile.lr_n;
  ordered_json prof = ordered_json::array();
  for (std::size_t i = 0; i < res.profile.grid.size(); ++i) {
    prof.push_back({{"r", res.profile.grid.candidates[i]}, {"value", res.profile.values[i]}});
  }
  j["profile"] = prof;
  ordered_json crit = ordered_json::array();
  ordered_json rej = ordered_json::array();
  for (std::size_t a = 0; a < res.critical.alphas.size(); ++a) {
    crit.push_back({{"alpha", res.critical.alphas[a]}, {"q", res.critical.quantiles[a]}});
    rej.push_back({{"alpha", res.critical.alphas[a]}, {"reject", static_cast<bool>(res.reject[a])}});
  }
  j["critical_values"] = crit;
  j["p_value"] = res.p_value;
  j["method"] = std::string(to_string(res.critical.method));
  j["reject"] = rej;
  emit(c.output, out, [&](std::ostream& os) { dump_json(os, j); });
}

void cmd_mc(const Common& c, const McArgs& m, std::ostream& out) {
  if (m.config.empty()) throw Error(ErrorKind::InvalidSpec, "an experiment file is required (-c)");
  auto configs = load_experiment_file(m.config);
  for (auto& cfg : configs) {
    if (m.seed_given) cfg.base_seed = c.seed;
    if (m.replications) cfg.replications = *m.replications;
    cfg.threads = c.threads;
    cfg.validate();
  }
  const auto reports = power_curve(configs);
  emit(c.output, out, [&](std::ostream& os) { write_report_csv(os, reports); });
}

void cmd_diagnose(const Common& c, const DiagnoseArgs& dg, std::ostream& out, std::ostream& err) {
  const auto x = load_series(c.input, err);
  ordered_json j;
  j["n"] = x.size();
  j["acf"] = acf(x, std::min(dg.max_lag, x.size() - 1));
  j["ljung_box"] = ljung_box_json(x, dg.lags, dg.fitted_params);
  emit(c.output, out, [&](std::ostream& os) { dump_json(os, j); });
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Sup-LR test for threshold MA structure in MA models", "tma"};
  app.require_subcommand(1);

  Common common;
  SimulateArgs sim;
  FitArgs fit;
  TestArgs test;
  McArgs mc;
  DiagnoseArgs diag;

  auto add_orders = [&](CLI::App* sub) {
    sub->add_option("--p", common.p, "MA order p")->capture_default_str();
    sub->add_option("--q", common.q, "threshold coefficient count q")->capture_default_str();
    sub->add_option("--d", common.d, "delay d")->capture_default_str();
  };
  auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--beta1", common.beta1, "lower quantile of the threshold range")->capture_default_str();
    sub->add_option("--beta2", common.beta2, "upper quantile of the threshold range")->capture_default_str();
    sub->add_option("--max-points", common.max_points, "threshold grid cap, 0 for every order statistic")->capture_default_str();
  };

  auto* s = app.add_subcommand("simulate", "simulate a TMA(p, q, d) path as CSV");
  add_orders(s);
  s->add_option("--phi", sim.phi, "MA coefficients")->delimiter(',');
  s->add_option("--psi", sim.psi, "threshold coefficients (default zeros)")->delimiter(',');
  s->add_option("--r", sim.r, "threshold")->capture_default_str();
  s->add_option("--n", sim.n, "sample size")->capture_default_str();
  s->add_option("--burn-in", sim.burn_in, "discarded warm-up length")->capture_default_str();
  s->add_option("--distribution", sim.distribution, "normal, student-t or uniform")->capture_default_str();
  s->add_option("--df", sim.df, "student-t degrees of freedom (> 4)");
  s->add_option("--sigma", sim.sigma, "innovation standard deviation")->capture_default_str();
  s->add_option("--seed", common.seed, "random seed")->capture_default_str();
  s->add_option("-o,--output", common.output, "output CSV (default stdout)");

  auto* f = app.add_subcommand("fit", "fit an MA or TMA model by conditional least squares");
  add_orders(f);
  add_grid(f);
  f->add_option("-i,--input", common.input, "input CSV")->required();
  f->add_option("--model", fit.model, "ma or tma")->capture_default_str();
  f->add_option("--lags", fit.lags, "Ljung-Box lags")->delimiter(',');
  f->add_option("--lb-df", fit.lb_df, "adjusted (df = M - fitted) or raw (df = M)")->capture_default_str();
  f->add_option("-o,--output", common.output, "output JSON (default stdout)");

  auto* t = app.add_subcommand("test", "sup-LR test of MA against threshold MA");
  add_orders(t);
  add_grid(t);
  t->add_option("-i,--input", common.input, "input CSV")->required();
  t->add_option("--alphas", test.alphas, "significance levels")->delimiter(',');
  t->add_option("--replications", test.replications, "limit-distribution draws")->capture_default_str();
  t->add_option("--statistic-factor", test.statistic_factor, "multiplier on the sse difference")->capture_default_str();
  t->add_option("--method", test.method, "auto, kernel or bridge")->capture_default_str();
  t->add_option("--seed", common.seed, "random seed")->capture_default_str();
  t->add_option("--threads", common.threads, "worker threads")->capture_default_str();
  t->add_option("-o,--output", common.output, "output JSON (default stdout)");

  auto* m = app.add_subcommand("mc", "run Monte Carlo size/power experiments");
  m->add_option("-c,--config", mc.config, "experiment file")->required();
  auto* seed_opt = m->add_option("--seed", common.seed, "base seed for every experiment");
  m->add_option("--replications", mc.replications, "override replications");
  m->add_option("--threads", common.threads, "worker threads")->capture_default_str();
  m->add_option("-o,--output", common.output, "output CSV (default stdout)");

  auto* dg = app.add_subcommand("diagnose", "autocorrelation and Ljung-Box statistics of a series");
  dg->add_option("-i,--input", common.input, "input CSV")->required();
  dg->add_option("--lags", diag.lags, "Ljung-Box lags")->delimiter(',');
  dg->add_option("--fitted-params", diag.fitted_params, "degrees of freedom to subtract")->capture_default_str();
  dg->add_option("--max-lag", diag.max_lag, "largest autocorrelation lag")->capture_default_str();
  dg->add_option("-o,--output", common.output, "output JSON (default stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (common.threads < 1) throw Error(ErrorKind::InvalidSpec, "--threads must be at least 1");
    if (s->parsed()) cmd_simulate(common, sim, out);
    else if (f->parsed()) cmd_fit(common, fit, out, err);
    else if (t->parsed()) cmd_test(common, test, out, err);
    else if (m->parsed()) {
      mc.seed_given = seed_opt->count() > 0;
      cmd_mc(common, mc, out);
    } else if (dg->parsed()) cmd_diagnose(common, diag, out, err);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  }
  return 0;
}

}  // namespace tma::cli
