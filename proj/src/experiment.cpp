#include "tma/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "parallel.hpp"
#include "tma/csv.hpp"
#include "tma/error.hpp"

namespace tma {

std::string_view to_string(Design design) {
  switch (design) {
    case Design::NullMa: return "null-ma";
    case Design::TmaAlternative: return "tma-alternative";
    case Design::LocalAlternative: return "local-alternative";
  }
  return "unknown";
}

Design parse_design(std::string_view text) {
  if (text == "null-ma") return Design::NullMa;
  if (text == "tma-alternative") return Design::TmaAlternative;
  if (text == "local-alternative") return Design::LocalAlternative;
  throw Error(ErrorKind::InvalidSpec, "unknown design '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
  orders.validate();
  if (replications < 1) throw Error(ErrorKind::InvalidSpec, "replications must be at least 1");
  if (n < 50) throw Error(ErrorKind::InvalidSpec, "sample size must be at least 50");
  if (phi.size() != static_cast<std::size_t>(orders.p)) {
    throw Error(ErrorKind::InvalidSpec, "phi must have p entries");
  }
  if (design == Design::TmaAlternative && psi.size() != static_cast<std::size_t>(orders.q)) {
    throw Error(ErrorKind::InvalidSpec, "tma-alternative needs q psi entries");
  }
  if (design == Design::LocalAlternative && h.size() != static_cast<std::size_t>(orders.q)) {
    throw Error(ErrorKind::InvalidSpec, "local-alternative needs q entries of h");
  }
  if (!(beta1 > 0.0 && beta1 < beta2 && beta2 < 1.0)) {
    throw Error(ErrorKind::InvalidSpec, "quantile levels must satisfy 0 < beta1 < beta2 < 1");
  }
  if (alphas.empty()) throw Error(ErrorKind::InvalidSpec, "no significance levels");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw Error(ErrorKind::InvalidSpec, "alpha outside (0, 1)");
  }
  if (!critical_values.empty() && critical_values.size() != alphas.size()) {
    throw Error(ErrorKind::InvalidSpec, "critical_values needs one entry per alpha");
  }
  InnovationSpec{distribution, df, sigma, 0, 0}.validate();
}

TmaParams ExperimentConfig::true_params() const {
  TmaParams params;
  params.phi = phi;
  params.r = r0;
  switch (design) {
    case Design::NullMa:
      params.psi.assign(orders.q, 0.0);
      break;
    case Design::TmaAlternative:
      params.psi = psi;
      break;
    case Design::LocalAlternative: {
      const double root_n = std::sqrt(static_cast<double>(n));
      for (double v : h) params.psi.push_back(v / root_n);
      break;
    }
  }
  return params;
}

namespace {

std::uint64_t limit_seed(std::uint64_t base, std::size_t k) {
  return base + 0x9E3779B97F4A7C15ull * (static_cast<std::uint64_t>(k) + 1);
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const TmaParams params = config.true_params();

  TestConfig test;
  test.max_points = config.max_points;
  test.alphas = config.alphas;
  test.lr.statistic_factor = config.statistic_factor;
  test.threads = 1;

  // The bridge limit depends only on the grid levels, which for tie-free
  // samples are fixed ranks / n.
  const bool fixed = !config.critical_values.empty();
  const bool bridge = select_method(config.orders) == CriticalMethod::BrownianBridge;
  CriticalValues shared;
  std::vector<double> shared_levels;
  if (fixed) {
    shared.alphas = config.alphas;
    shared.quantiles = config.critical_values;
    shared.method = select_method(config.orders);
  } else if (bridge) {
    std::vector<double> ranks(config.n);
    std::iota(ranks.begin(), ranks.end(), 1.0);
    shared_levels = threshold_grid(ranks, config.beta1, config.beta2, config.max_points).levels;
    shared = brownian_bridge_critical_values(config.orders.p, shared_levels, config.alphas,
                                             config.bridge_replications, config.base_seed,
                                             config.threads);
  }

  const std::size_t R = config.replications;
  const std::size_t A = config.alphas.size();
  std::vector<char> failed(R, 0);
  std::vector<char> rejected(R * A, 0);
  std::vector<double> stats(R, std::numeric_limits<double>::quiet_NaN());

  detail::parallel_for(R, config.threads, [&](std::size_t k) {
    try {
      InnovationSpec spec{config.distribution, config.df, config.sigma, config.base_seed, k};
      const Series y = simulate_tma(config.orders, params, config.n, spec, config.burn_in);
      TestResult res;
      if (fixed) {
        res = run_test_with(y, config.orders, config.beta1, config.beta2, test, shared);
      } else if (bridge) {
        const auto grid = threshold_grid(y, config.beta1, config.beta2, config.max_points);
        if (grid.levels == shared_levels) {
          res = run_test_with(y, config.orders, config.beta1, config.beta2, test, shared);
        } else {
          TestConfig own = test;
          own.replications = config.bridge_replications;
          own.seed = limit_seed(config.base_seed, k);
          res = run_test(y, config.orders, config.beta1, config.beta2, own);
        }
      } else {
        TestConfig own = test;
        own.replications = config.kernel_replications;
        own.seed = limit_seed(config.base_seed, k);
        res = run_test(y, config.orders, config.beta1, config.beta2, own);
      }
      stats[k] = res.profile.lr_n;
      for (std::size_t a = 0; a < A; ++a) rejected[k * A + a] = res.reject[a] ? 1 : 0;
    } catch (const Error&) {
      failed[k] = 1;
    }
  });

  ExperimentReport rep;
  rep.label = config.label.empty() ? std::string(to_string(config.design)) : config.label;
  rep.design = config.design;
  rep.n = config.n;
  rep.seed = config.base_seed;
  rep.alphas = config.alphas;
  rep.failures = static_cast<std::size_t>(std::count(failed.begin(), failed.end(), 1));
  if (static_cast<double>(rep.failures) > 0.01 * static_cast<double>(R)) {
    throw Error(ErrorKind::Experiment, rep.label + ": " + std::to_string(rep.failures) +
                                           " of " + std::to_string(R) +
                                           " replications failed (cap is 1%)");
  }
  rep.replications = R - rep.failures;
  for (std::size_t a = 0; a < A; ++a) {
    std::size_t hits = 0;
    for (std::size_t k = 0; k < R; ++k) hits += failed[k] ? 0 : rejected[k * A + a];
    const double rate = rep.replications ? static_cast<double>(hits) / rep.replications : 0.0;
    rep.rejection_rates.push_back(rate);
    rep.mc_stderr.push_back(
        rep.replications ? std::sqrt(rate * (1.0 - rate) / rep.replications) : 0.0);
  }
  rep.statistics = std::move(stats);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<ExperimentReport> power_curve(const std::vector<ExperimentConfig>& configs) {
  if (configs.empty()) throw Error(ErrorKind::InvalidSpec, "no experiment configs");
  std::vector<ExperimentReport> out;
  out.reserve(configs.size());
  for (const auto& c : configs) out.push_back(run_experiment(c));
  return out;
}

namespace {

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(", "), boost::token_compress_on);
  std::vector<double> out;
  for (auto& part : parts) {
    boost::trim(part);
    if (part.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "key '" + key + "': cannot parse '" + part + "'");
    }
  }
  return out;
}

template <typename T>
T parse_count(const std::string& key, const std::string& text) {
  const auto values = parse_list(key, text);
  if (values.size() != 1 || values[0] < 0 || values[0] != std::floor(values[0])) {
    throw Error(ErrorKind::Parse, "key '" + key + "' needs one nonnegative integer");
  }
  return static_cast<T>(values[0]);
}

double parse_scalar(const std::string& key, const std::string& text) {
  const auto values = parse_list(key, text);
  if (values.size() != 1) throw Error(ErrorKind::Parse, "key '" + key + "' needs one number");
  return values[0];
}

Distribution parse_distribution(const std::string& text) {
  if (text == "normal" || text == "standard-normal") return Distribution::StandardNormal;
  if (text == "student-t") return Distribution::StudentT;
  if (text == "uniform" || text == "uniform-centered") return Distribution::UniformCentered;
  throw Error(ErrorKind::Parse, "unknown distribution '" + text + "'");
}

using Ptree = boost::property_tree::ptree;

void apply_section(const Ptree& section, ExperimentConfig& cfg, std::vector<std::size_t>& sizes) {
  for (const auto& [key, node] : section) {
    const std::string value = boost::trim_copy(node.data());
    if (key == "design") cfg.design = parse_design(value);
    else if (key == "p") cfg.orders.p = parse_count<int>(key, value);
    else if (key == "q") cfg.orders.q = parse_count<int>(key, value);
    else if (key == "d") cfg.orders.d = parse_count<int>(key, value);
    else if (key == "phi") cfg.phi = parse_list(key, value);
    else if (key == "psi") cfg.psi = parse_list(key, value);
    else if (key == "h") cfg.h = parse_list(key, value);
    else if (key == "r0") cfg.r0 = parse_scalar(key, value);
    else if (key == "n") {
      sizes.clear();
      for (double v : parse_list(key, value)) {
        if (v < 1 || v != std::floor(v)) throw Error(ErrorKind::Parse, "key 'n': bad sample size");
        sizes.push_back(static_cast<std::size_t>(v));
      }
    }
    else if (key == "replications") cfg.replications = parse_count<std::size_t>(key, value);
    else if (key == "beta1") cfg.beta1 = parse_scalar(key, value);
    else if (key == "beta2") cfg.beta2 = parse_scalar(key, value);
    else if (key == "alphas") cfg.alphas = parse_list(key, value);
    else if (key == "seed") cfg.base_seed = parse_count<std::uint64_t>(key, value);
    else if (key == "distribution") cfg.distribution = parse_distribution(value);
    else if (key == "df") cfg.df = parse_scalar(key, value);
    else if (key == "sigma") cfg.sigma = parse_scalar(key, value);
    else if (key == "burn_in") cfg.burn_in = parse_count<std::size_t>(key, value);
    else if (key == "max_points") cfg.max_points = parse_count<std::size_t>(key, value);
    else if (key == "bridge_replications") cfg.bridge_replications = parse_count<std::size_t>(key, value);
    else if (key == "kernel_replications") cfg.kernel_replications = parse_count<std::size_t>(key, value);
    else if (key == "critical_values") cfg.critical_values = parse_list(key, value);
    else if (key == "statistic_factor") cfg.statistic_factor = parse_scalar(key, value);
    else throw Error(ErrorKind::Parse, "unknown key '" + key + "'");
  }
}

}  // namespace

std::vector<ExperimentConfig> parse_experiment_text(const std::string& text) {
  Ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw Error(ErrorKind::Parse, "line " + std::to_string(e.line()) + ": " + e.message());
  }
  ExperimentConfig defaults;
  std::vector<std::size_t> default_sizes{defaults.n};
  if (auto d = tree.get_child_optional("defaults")) apply_section(*d, defaults, default_sizes);

  std::vector<ExperimentConfig> out;
  for (const auto& [name, section] : tree) {
    if (name == "defaults") continue;
    if (section.empty()) {
      throw Error(ErrorKind::Parse, "key '" + name + "' outside a section");
    }
    ExperimentConfig cfg = defaults;
    cfg.label = name;
    std::vector<std::size_t> sizes = default_sizes;
    apply_section(section, cfg, sizes);
    for (std::size_t n : sizes) {
      ExperimentConfig one = cfg;
      one.n = n;
      one.validate();
      out.push_back(std::move(one));
    }
  }
  if (out.empty()) throw Error(ErrorKind::InvalidSpec, "experiment file defines no experiments");
  return out;
}

std::vector<ExperimentConfig> load_experiment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_experiment_text(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), path + ": " + e.what());
  }
}

void write_report_csv(std::ostream& out, const std::vector<ExperimentReport>& reports) {
  out << "design,n,alpha,rate,stderr,replications,seed\n";
  for (const auto& rep : reports) {
    for (std::size_t a = 0; a < rep.alphas.size(); ++a) {
      out << rep.label << ',' << rep.n << ',' << format_double(rep.alphas[a]) << ','
          << format_double(rep.rejection_rates[a]) << ',' << format_double(rep.mc_stderr[a])
          << ',' << rep.replications << ',' << rep.seed << '\n';
    }
  }
}

}  // namespace tma
