#include "mmb/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <variant>

#include "CLI11.hpp"
#include "json.hpp"
#include "mmb/bounds.hpp"
#include "mmb/distribution.hpp"
#include "mmb/montecarlo.hpp"
#include "mmb/negdep.hpp"
#include "mmb/optimizer.hpp"

#ifndef MMB_VERSION
#define MMB_VERSION "0.0.0"
#endif

namespace mmb::cli {

namespace {

using Cell = std::variant<std::monostate, double, long long, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string format_double(double v, int digits) {
  std::ostringstream os;
  os.precision(digits);
  os << v;
  return os.str();
}

std::string cell_text(const Cell& c, int digits) {
  return std::visit(
      [digits](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_double(v, digits);
        } else if constexpr (std::is_same_v<T, long long>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "1" : "0";
        } else {
          return v;
        }
      },
      c);
}

nlohmann::ordered_json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::ordered_json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return nullptr;
          return v;
        } else {
          return v;
        }
      },
      c);
}

void write_table(std::ostream& out, const Table& t, const RunConfig& cfg) {
  if (cfg.format == "json") {
    nlohmann::ordered_json doc;
    doc["header"] = {{"program", "mmbound"},
                     {"version", MMB_VERSION},
                     {"config", describe(cfg)},
                     {"seed", cfg.seed}};
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
      nlohmann::ordered_json obj;
      for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = cell_json(r[i]);
      rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
    return;
  }
  out << "# mmbound " << MMB_VERSION << '\n';
  out << "# config: " << describe(cfg) << '\n';
  out << "# seed: " << cfg.seed << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << cell_text(r[i], 17);
    out << '\n';
  }
}

void write_summary(std::ostream& out, const Table& t, const std::string& path) {
  out << "wrote " << t.rows.size() << " rows to " << path << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "  " : "") << t.columns[i];
  out << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "  " : "") << cell_text(r[i], 6);
    out << '\n';
  }
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  for (std::string item; std::getline(ss, item, delim);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != s.size()) throw UsageError("--" + what + ": cannot parse '" + s + "'");
  return v;
}

std::vector<double> resolve_epsilons(const RunConfig& cfg, const std::string& fallback) {
  if (!cfg.epsilons.empty()) return cfg.epsilons;
  const std::string spec = cfg.grid.empty() ? fallback : cfg.grid;
  if (spec.empty()) throw UsageError("--epsilon or --grid is required");
  const auto parts = split(spec, ':');
  const std::string& kind = parts.at(0);
  auto bound = [&](std::size_t i) {
    if (parts[i] == "1/n" || parts[i] == "1/sqrt(n)") {
      if (cfg.n < 1) throw UsageError("--grid: '" + parts[i] + "' needs --n");
      const double dn = static_cast<double>(cfg.n);
      return parts[i] == "1/n" ? 1.0 / dn : 1.0 / std::sqrt(dn);
    }
    return to_double(parts[i], "grid");
  };
  if (kind == "std") {
    if (cfg.n < 2) throw UsageError("--grid std needs --n >= 2");
    const int k = parts.size() > 1 ? static_cast<int>(to_double(parts[1], "grid")) : 25;
    return std_epsilon_grid(cfg.n, k);
  }
  if (parts.size() != 4) throw UsageError("--grid: expected kind:lo:hi:k, got '" + spec + "'");
  const double lo = bound(1);
  const double hi = bound(2);
  const int k = static_cast<int>(to_double(parts[3], "grid"));
  if (k < 1) throw UsageError("--grid: need at least one point");
  if (kind == "interior") return interior_epsilon_grid(lo, hi, k);
  std::vector<double> g(k);
  for (int i = 0; i < k; ++i) {
    const double t = k == 1 ? 0.0 : static_cast<double>(i) / (k - 1);
    if (kind == "lin") {
      g[i] = lo + (hi - lo) * t;
    } else if (kind == "geom") {
      if (!(lo > 0.0 && hi > 0.0)) throw UsageError("--grid geom needs positive end points");
      g[i] = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * t);
    } else {
      throw UsageError("--grid: unknown kind '" + kind + "'");
    }
  }
  return g;
}

std::vector<TailDirection> resolve_directions(const std::string& s) {
  if (s == "both") return {TailDirection::Upper, TailDirection::Lower};
  if (s == "all") return {TailDirection::Upper, TailDirection::Lower, TailDirection::TwoSided};
  std::vector<TailDirection> out;
  try {
    for (const auto& item : split(s, ',')) out.push_back(parse_direction(item));
  } catch (const std::invalid_argument&) {
    throw UsageError("--direction: expected upper, lower, two-sided, both or all; got '" + s + "'");
  }
  if (out.empty()) throw UsageError("--direction: empty");
  return out;
}

std::optional<DiscreteDistribution> resolve_distribution(const RunConfig& cfg, bool required) {
  if (!cfg.family.empty() && !cfg.dist_file.empty()) {
    throw UsageError("--family and --dist-file are mutually exclusive");
  }
  if (!cfg.family.empty()) return DiscreteDistribution::from_family(cfg.family);
  if (!cfg.dist_file.empty()) return DiscreteDistribution::load(cfg.dist_file, cfg.renormalize);
  if (required) throw UsageError("a distribution is required: --family or --dist-file");
  return std::nullopt;
}

void require_n(const RunConfig& cfg, long long min_n) {
  if (cfg.n < min_n) throw UsageError("--n must be at least " + std::to_string(min_n));
}

Cell opt_double(double v) { return std::isfinite(v) ? Cell{v} : Cell{}; }

// gamma, a and tau only exist for the threshold-based bounds.
Cell tuned(const BoundReport& r, double v) { return r.gamma > 0.0 ? Cell{v} : Cell{}; }

Table bound_table(const RunConfig& cfg) {
  require_n(cfg, 1);
  const auto eps = resolve_epsilons(cfg, "");
  const auto dirs = resolve_directions(cfg.directions);
  std::vector<std::string> methods = cfg.methods == "all"
                                         ? std::vector<std::string>{"linear", "quadratic", "prior"}
                                         : split(cfg.methods, ',');
  Table t{{"method", "direction", "n", "epsilon", "gamma", "a", "tau", "c_coeff", "exponent", "bound"}, {}};
  for (double e : eps) {
    for (auto d : dirs) {
      for (const auto& m : methods) {
        BoundReport r;
        if (m == "linear") {
          r = linear_bound(cfg.n, e, d);
        } else if (m == "quadratic") {
          r = quadratic_bound(cfg.n, e, d);
        } else if (m == "prior") {
          r = baseline_prior_bound(cfg.n, e, d);
        } else if (m == "generic-bernstein" || m == "generic-mcdiarmid") {
          const bool bern = m == "generic-bernstein";
          r = theorem1_generic(cfg.n, e, gamma_eps(e), [](double x) { return std::log(1.0 / x); },
                               bern ? e : 1.0, bern ? GenericRoute::Bernstein : GenericRoute::McDiarmid, d);
        } else {
          throw UsageError("--method: unknown method '" + m + "'");
        }
        t.rows.push_back({std::string(to_string(r.method)), std::string(to_string(r.direction)),
                          static_cast<long long>(r.n), r.epsilon, tuned(r, r.gamma), tuned(r, r.a),
                          tuned(r, r.tau), r.c_coeff,
                          r.exponent, r.bound});
      }
    }
  }
  return t;
}

Table optimize_table(const RunConfig& cfg) {
  const auto eps = resolve_epsilons(cfg, "");
  Table t{{"epsilon", "gamma", "gamma_numeric", "a_opt", "tau_opt", "c_eps", "compensation_gap"}, {}};
  for (double e : eps) {
    const double g = gamma_eps(e);
    const double a = std::log(g / e);
    Cell tau = cfg.n > 0 ? Cell{a / static_cast<double>(cfg.n)} : Cell{};
    t.rows.push_back({e, g, optimize_gamma_numeric(e, cfg.n), a, tau, (g - 1.0) / (g * g),
                      compensation_gap(e)});
  }
  return t;
}

Table crossover_table(const RunConfig& cfg) {
  const std::map<double, long long> claimed{{1.92, 1910}, {1.0, 427}};
  const std::vector<double> targets = cfg.targets.empty() ? std::vector<double>{1.92, 1.0} : cfg.targets;
  Table t{{"kind", "target", "reference_value", "computed", "cprime_at_reference_value", "cprime_at_computed",
           "cprime_before_computed", "reference_claim_holds"},
          {}};
  const double eps_star = epsilon_crossover();
  t.rows.push_back({std::string("epsilon"), Cell{}, 0.187, eps_star, Cell{}, Cell{}, Cell{},
                    std::abs(eps_star - 0.187) <= 5e-4 + 1e-12});
  for (double target : targets) {
    const auto res = find_n_crossover(target);
    Cell ref_n, ref_c, holds;
    if (auto it = claimed.find(target); it != claimed.end()) {
      const double c = c_prime_n(it->second);
      ref_n = it->second;
      ref_c = c;
      holds = c >= target;
    }
    t.rows.push_back({std::string("n"), target, ref_n, res.n_star, ref_c, res.cprime_at_n_star,
                      opt_double(res.cprime_before), holds});
  }
  return t;
}

Table simulate_table(const RunConfig& cfg, bool& violation) {
  require_n(cfg, 1);
  const auto dist = *resolve_distribution(cfg, true);
  ValidationConfig vc;
  vc.epsilons = resolve_epsilons(cfg, "interior:1/n:0.9:15");
  vc.directions = resolve_directions(cfg.directions);
  if (cfg.methods != "all") {
    vc.methods.clear();
    for (const auto& m : split(cfg.methods, ',')) {
      if (m == "linear") vc.methods.push_back(BoundMethod::LinearNew);
      else if (m == "quadratic") vc.methods.push_back(BoundMethod::QuadraticNew);
      else if (m == "prior") vc.methods.push_back(BoundMethod::BaselinePrior);
      else throw UsageError("--method: unknown method '" + m + "' for simulate");
    }
  }
  if (cfg.trials < 1) throw UsageError("--trials must be positive");
  vc.trials = cfg.trials;
  vc.seed = cfg.seed;
  vc.threads = cfg.threads;
  if (cfg.oracle == "mc") vc.path = OraclePath::MonteCarlo;
  else if (cfg.oracle == "exact") vc.path = OraclePath::Exact;
  else if (cfg.oracle == "auto") vc.path = OraclePath::Auto;
  else throw UsageError("--oracle: expected mc, exact or auto");

  const auto rows = validate_bounds(dist, cfg.n, vc);
  Table t{{"epsilon", "direction", "method", "bound", "estimate", "std_error", "trials", "violation"}, {}};
  for (const auto& r : rows) {
    violation = violation || r.violation;
    t.rows.push_back({r.epsilon, std::string(to_string(r.direction)), std::string(to_string(r.method)),
                      r.bound, r.estimate, r.std_error, r.trials, r.violation});
  }
  return t;
}

Table exact_table(const RunConfig& cfg) {
  require_n(cfg, 1);
  const auto dist = *resolve_distribution(cfg, true);
  const auto law = exact_missing_mass_distribution(dist, cfg.n);
  Table t{{"value", "probability"}, {}};
  for (const auto& a : law.atoms) t.rows.push_back({a.value, a.probability});
  return t;
}

Table compare_table(const RunConfig& cfg) {
  require_n(cfg, 2);
  const auto dist = resolve_distribution(cfg, false);
  const auto rows =
      comparison_table(cfg.n, resolve_epsilons(cfg, "std"), resolve_directions(cfg.directions), dist);
  Table t{{"epsilon", "method", "direction", "gamma", "a", "tau", "exponent", "bound", "winner"}, {}};
  for (const auto& row : rows) {
    const auto& r = row.report;
    t.rows.push_back({r.epsilon, std::string(to_string(r.method)), std::string(to_string(r.direction)),
                      tuned(r, r.gamma), tuned(r, r.a), tuned(r, r.tau), r.exponent, r.bound, row.winner});
  }
  return t;
}

Table verify_table(const RunConfig& cfg, bool& violation) {
  LemmaSuiteConfig sc;
  sc.seed = cfg.seed;
  const auto rows = run_lemma_suites(sc);
  Table t{{"lemma", "instances", "violations", "max_residual"}, {}};
  for (const auto& r : rows) {
    violation = violation || r.violations > 0;
    t.rows.push_back({r.lemma, r.instances, r.violations, r.max_residual});
  }
  return t;
}

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> names{
      {"bound", Command::Bound},       {"optimize", Command::Optimize}, {"crossover", Command::Crossover},
      {"simulate", Command::Simulate}, {"exact", Command::Exact},       {"compare", Command::Compare},
      {"verify", Command::Verify}};
  return names;
}

std::string join_doubles(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i], 17);
  return s;
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [name, cmd] : command_names()) {
    if (cmd == c) return name;
  }
  return "?";
}

std::string describe(const RunConfig& c) {
  // The output path and thread count do not affect results and are left out.
  std::ostringstream os;
  os << "command=" << to_string(c.command) << " n=" << c.n << " epsilon=" << join_doubles(c.epsilons)
     << " grid=" << c.grid << " direction=" << c.directions << " family=" << c.family
     << " dist-file=" << c.dist_file << " renormalize=" << (c.renormalize ? 1 : 0)
     << " method=" << c.methods << " target=" << join_doubles(c.targets) << " oracle=" << c.oracle
     << " trials=" << c.trials << " seed=" << c.seed << " format=" << c.format;
  return os.str();
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  bool violation = false;
  Table table;
  try {
    if (cfg.format != "csv" && cfg.format != "json") throw UsageError("--format: expected csv or json");
    switch (cfg.command) {
      case Command::Bound: table = bound_table(cfg); break;
      case Command::Optimize: table = optimize_table(cfg); break;
      case Command::Crossover: table = crossover_table(cfg); break;
      case Command::Simulate: table = simulate_table(cfg, violation); break;
      case Command::Exact: table = exact_table(cfg); break;
      case Command::Compare: table = compare_table(cfg); break;
      case Command::Verify: table = verify_table(cfg, violation); break;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::domain_error& e) {
    err << "domain error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  if (cfg.output.empty()) {
    write_table(out, table, cfg);
  } else {
    std::ofstream file(cfg.output, std::ios::binary);
    if (!file) {
      err << "error: cannot open output file '" << cfg.output << "'\n";
      return 1;
    }
    write_table(file, table, cfg);
    write_summary(out, table, cfg.output);
  }
  if (violation) {
    err << "violation detected\n";
    return 2;
  }
  return 0;
}

namespace {

// Reads key=value lines ('#' comments) from a config file.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot open '" + path + "'");
  std::vector<std::pair<std::string, std::string>> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("--config: expected key=value, got '" + line + "'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      const auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
    };
    kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return kv;
}

void add_options(CLI::App& sub, RunConfig& cfg, Command cmd) {
  using C = Command;
  auto has = [cmd](std::initializer_list<C> cs) { return std::find(cs.begin(), cs.end(), cmd) != cs.end(); };
  if (has({C::Bound, C::Optimize, C::Simulate, C::Exact, C::Compare})) {
    sub.add_option("--n", cfg.n, "sample size");
  }
  if (has({C::Bound, C::Optimize, C::Simulate, C::Compare})) {
    sub.add_option("--epsilon", cfg.epsilons, "deviation size(s), comma separated")->delimiter(',');
    sub.add_option("--grid", cfg.grid, "epsilon grid: std[:k], geom|lin|interior:lo:hi:k");
  }
  if (has({C::Bound, C::Simulate, C::Compare})) {
    sub.add_option("--direction", cfg.directions, "upper, lower, two-sided, both or all");
  }
  if (has({C::Simulate, C::Exact, C::Compare})) {
    sub.add_option("--family", cfg.family, "uniform:N, zipf:N:s or geometric:N:p");
    sub.add_option("--dist-file", cfg.dist_file, "weights file, one per line");
    sub.add_flag("--renormalize", cfg.renormalize, "rescale file weights that do not sum to 1");
  }
  if (has({C::Bound, C::Simulate})) {
    sub.add_option("--method", cfg.methods, "comma separated methods or 'all'");
  }
  if (has({C::Crossover})) {
    sub.add_option("--target", cfg.targets, "target constant(s)")->delimiter(',');
  }
  if (has({C::Simulate})) {
    sub.add_option("--trials", cfg.trials, "Monte Carlo trials");
    sub.add_option("--oracle", cfg.oracle, "mc, exact or auto");
    sub.add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
  }
  if (has({C::Simulate, C::Verify})) {
    sub.add_option("--seed", cfg.seed, "master seed");
  }
  sub.add_option("--format", cfg.format, "csv or json");
  sub.add_option("--output", cfg.output, "output file (default stdout)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + 1, argv + argc);

  // Pull out --config and merge its keys ahead of the explicit flags; flags
  // given on the command line win.
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      break;
    }
  }

  try {
    if (!config_path.empty()) {
      const auto kv = read_config_file(config_path);
      auto on_command_line = [&](const std::string& key) {
        return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
          return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
        });
      };
      std::vector<std::string> injected;
      std::string command;
      for (const auto& [k, v] : kv) {
        if (k == "command") {
          command = v;
          continue;
        }
        if (on_command_line(k)) continue;
        if (k == "renormalize") {
          if (v == "1" || v == "true" || v == "yes") injected.push_back("--renormalize");
          continue;
        }
        injected.push_back("--" + k);
        injected.push_back(v);
      }
      auto sub_it = std::find_if(args.begin(), args.end(),
                                 [](const std::string& a) { return command_names().count(a) > 0; });
      if (sub_it == args.end()) {
        if (command.empty()) throw UsageError("no subcommand given");
        args.insert(args.begin(), command);
        sub_it = args.begin();
      }
      args.insert(sub_it + 1, injected.begin(), injected.end());
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 1;
  }

  RunConfig cfg;
  CLI::App app{"Missing-mass concentration bounds: evaluation, optimization and validation", "mmbound"};
  app.require_subcommand(1);
  for (const auto& [name, cmd] : command_names()) {
    auto* sub = app.add_subcommand(name, "");
    add_options(*sub, cfg, cmd);
    sub->callback([&cfg, cmd = cmd] { cfg.command = cmd; });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << '\n';
    return 1;
  }
  return run(cfg, out, err);
}

}  // namespace mmb::cli
