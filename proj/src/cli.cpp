#include "kghdg/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "kghdg/convergence.hpp"
#include "kghdg/error.hpp"

namespace kghdg::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

int to_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ConfigError("not an integer: '" + s + "'");
  return v;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Options {
  int example = 1;
  std::string k = "1";
  std::string m = "1..4";
  std::string scheme = "conservative";
  double tau = 1.0;
  std::optional<double> dt;
  std::optional<double> final_time;
  double newton_tol = 1e-12;
  std::string out;
  std::size_t threads = 0;
  std::string config;
};

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--example", o.example, "Builtin example 1..4")->capture_default_str();
  sub->add_option("--k", o.k, "Polynomial degree k, or a range a..b")->capture_default_str();
  sub->add_option("--m", o.m, "Refinement levels a..b (2^m x 2^m cells)")->capture_default_str();
  sub->add_option("--scheme", o.scheme, "conservative | nonconservative | variant")->capture_default_str();
  sub->add_option("--tau", o.tau, "Stabilisation parameter")->capture_default_str();
  sub->add_option("--dt", o.dt, "Time step (default h^((k+1)/2), variant h^((k+2)/2))");
  sub->add_option("--T", o.final_time, "Final time (default 1)");
  sub->add_option("--newton-tol", o.newton_tol, "Relative Newton tolerance")->capture_default_str();
  sub->add_option("--out", o.out, "Output file (.csv, or .md for a markdown table)");
  sub->add_option("--threads", o.threads, "Worker threads (0: KGHDG_THREADS or all cores)");
  sub->add_option("--config", o.config, "Flat key=value file; flags given here take precedence");
}

// Config entries become flags right after the subcommand, skipping any key
// that is also given on the command line.
std::vector<std::string> merge_config(const std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  const auto sub = std::find_if(args.begin() + 1, args.end(), [](const std::string& a) {
    return a == "convergence" || a == "energy" || a == "single";
  });
  if (sub == args.end()) return args;
  std::vector<std::string> merged(args.begin(), sub + 1);
  for (const auto& [key, value] : read_config_file(path)) {
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given || key == "config") continue;
    merged.push_back(flag);
    merged.push_back(value);
  }
  merged.insert(merged.end(), sub + 1, args.end());
  return merged;
}

void write_table(const std::string& path, const auto& table) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot open '" + path + "' for writing");
  if (ends_with(path, ".md")) table.write_markdown(f);
  else table.write_csv(f);
}

std::vector<int> degree_list(const std::string& text) {
  const auto [a, b] = parse_range(text);
  std::vector<int> ks;
  for (int k = a; k <= b; ++k) ks.push_back(k);
  return ks;
}

int do_convergence(const Options& o, std::ostream& out) {
  ConvergenceSpec spec;
  spec.example = o.example;
  spec.degrees = degree_list(o.k);
  std::tie(spec.m_first, spec.m_last) = parse_range(o.m);
  spec.scheme = parse_scheme(o.scheme);
  spec.tau = o.tau;
  spec.dt = o.dt;
  spec.final_time = o.final_time;
  spec.newton_tol = o.newton_tol;
  spec.threads = o.threads;
  spec.validate();
  const EOCTable t = run_convergence(spec);
  if (!o.out.empty()) write_table(o.out, t);
  t.write_markdown(out);
  return kExitOk;
}

int do_energy(const Options& o, std::ostream& out) {
  EnergySpec spec;
  spec.example = o.example;
  const auto [k0, k1] = parse_range(o.k);
  if (k0 != k1) throw ConfigError("energy takes a single degree");
  spec.k = k0;
  std::tie(spec.m_first, spec.m_last) = parse_range(o.m);
  spec.scheme = parse_scheme(o.scheme);
  spec.tau = o.tau;
  spec.dt = o.dt.value_or(0.1);
  spec.final_time = o.final_time.value_or(1.0);
  spec.newton_tol = o.newton_tol;
  spec.threads = o.threads;
  spec.validate();
  const EnergyTable t = run_energy(spec);
  if (!o.out.empty()) write_table(o.out, t);
  t.write_markdown(out);
  return kExitOk;
}

int do_single(const Options& o, std::ostream& out) {
  RunSpec spec;
  spec.example = o.example;
  const auto [k0, k1] = parse_range(o.k);
  const auto [m0, m1] = parse_range(o.m);
  if (k0 != k1 || m0 != m1) throw ConfigError("single takes one degree and one level");
  spec.k = k0;
  spec.m = m0;
  spec.scheme = parse_scheme(o.scheme);
  spec.tau = o.tau;
  spec.dt = o.dt;
  spec.final_time = o.final_time;
  spec.newton_tol = o.newton_tol;
  spec.validate();
  const SingleResult r = run_single(spec);
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) throw ConfigError("cannot open '" + o.out + "' for writing");
    write_step_csv(f, r.run.records);
  }
  char line[160];
  out << "example " << spec.example << ", k = " << spec.k << ", m = " << spec.m << ", scheme "
      << to_string(spec.scheme) << '\n';
  std::snprintf(line, sizeof line, "dt = %.6e, steps = %zu, newton iterations = %zu\n", r.dt, r.steps,
                r.newton_iterations);
  out << line;
  if (r.has_exact) {
    std::snprintf(line, sizeof line, "err_u = %.6e\nerr_q = %.6e\nerr_ustar = %.6e\n", r.errors.u,
                  r.errors.q, r.errors.ustar);
    out << line;
  }
  if (!r.run.energy.empty()) {
    std::snprintf(line, sizeof line, "energy: first %.10e, last %.10e\n", r.run.energy.front(),
                  r.run.energy.back());
    out << line;
  }
  return kExitOk;
}

} // namespace

std::pair<int, int> parse_range(const std::string& text) {
  const std::string t = trim(text);
  const auto dots = t.find("..");
  if (dots == std::string::npos) {
    const int v = to_int(t);
    return {v, v};
  }
  const int a = to_int(t.substr(0, dots));
  const int b = to_int(t.substr(dots + 2));
  if (b < a) throw ConfigError("empty range '" + text + "'");
  return {a, b};
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  int n = 0;
  while (std::getline(f, line)) {
    ++n;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(n) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv, argv + argc);
  try {
    args = merge_config(args);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  CLI::App app{"HDG solver for the nonlinear Klein-Gordon equation", "kghdg"};
  app.require_subcommand(1);
  Options o;
  CLI::App* conv = app.add_subcommand("convergence", "Refinement study with EOC table");
  CLI::App* energy = app.add_subcommand("energy", "Discrete energy drift table");
  CLI::App* single = app.add_subcommand("single", "One run; prints the final errors");
  for (CLI::App* sub : {conv, energy, single}) add_common(sub, o);

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    msg.erase(std::remove(msg.begin(), msg.end(), '\n'), msg.end());
    err << "error: " << msg << '\n';
    return kExitUsage;
  }
  if (energy->parsed()) {
    // the energy study defaults to the source-free example
    if (energy->count("--example") == 0) o.example = 4;
    if (energy->count("--k") == 0) o.k = "1";
  }
  if (single->parsed() && single->count("--m") == 0) o.m = "2";

  try {
    if (conv->parsed()) return do_convergence(o, out);
    if (energy->parsed()) return do_energy(o, out);
    return do_single(o, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << '\n';
    return kExitSolver;
  }
}

} // namespace kghdg::cli
