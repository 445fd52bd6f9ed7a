#include "kghdg/convergence.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "kghdg/error.hpp"
#include "kghdg/postprocess.hpp"

namespace kghdg {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string fmt_eoc(const std::optional<double>& v) { return v ? fmt("%.4f", *v) : std::string("-"); }

void write_aligned(std::ostream& os, const std::vector<std::string>& head,
                   const std::vector<std::vector<std::string>>& body) {
  std::vector<std::size_t> w(head.size());
  for (std::size_t j = 0; j < head.size(); ++j) w[j] = head[j].size();
  for (const auto& r : body)
    for (std::size_t j = 0; j < r.size(); ++j) w[j] = std::max(w[j], r[j].size());
  auto line = [&](const std::vector<std::string>& cells) {
    os << '|';
    for (std::size_t j = 0; j < cells.size(); ++j)
      os << ' ' << std::string(w[j] - cells[j].size(), ' ') << cells[j] << " |";
    os << '\n';
  };
  line(head);
  os << '|';
  for (std::size_t j = 0; j < head.size(); ++j) os << std::string(w[j] + 1, '-') << ":|";
  os << '\n';
  for (const auto& r : body) line(r);
}

void check_levels(int first, int last) {
  if (first < 0 || last < first) throw ConfigError("invalid refinement range");
  if (last > 8) throw ConfigError("refinement level above 8 is not supported");
}

} // namespace

std::string to_string(SchemeKind s) {
  switch (s) {
  case SchemeKind::conservative: return "conservative";
  case SchemeKind::nonconservative: return "nonconservative";
  case SchemeKind::variant: return "variant";
  }
  return "?";
}

SchemeKind parse_scheme(const std::string& s) {
  if (s == "conservative") return SchemeKind::conservative;
  if (s == "nonconservative") return SchemeKind::nonconservative;
  if (s == "variant") return SchemeKind::variant;
  throw ConfigError("unknown scheme '" + s + "' (expected conservative, nonconservative or variant)");
}

double default_dt(SchemeKind scheme, int k, int m) {
  const double h = std::ldexp(1.0, -m);
  const int p = scheme == SchemeKind::variant ? k + 2 : k + 1;
  return std::pow(h, 0.5 * p);
}

SpaceConfig RunSpec::space() const {
  return {k, scheme == SchemeKind::variant ? Variant::enriched : Variant::standard, tau};
}

TimeConfig RunSpec::time(const ManufacturedCase& c) const {
  TimeConfig t;
  t.final_time = final_time.value_or(c.final_time);
  const double rule = dt.value_or(default_dt(scheme, k, m));
  if (!(rule > 0.0)) throw ConfigError("time step must be positive");
  // snap so that T / dt is an integer, never exceeding the requested step
  const auto n = static_cast<std::size_t>(std::max(1.0, std::ceil(t.final_time / rule - 1e-9)));
  t.dt = t.final_time / static_cast<double>(n);
  t.scheme = scheme == SchemeKind::nonconservative ? Scheme::nonconservative : Scheme::conservative;
  t.newton.tolerance = newton_tol;
  t.extra_steps = extra_steps;
  t.refactor_every_step = refactor_every_step;
  return t;
}

void RunSpec::validate() const {
  space().validate();
  if (scheme != SchemeKind::variant && k < 1)
    throw ConfigError("standard spaces need k >= 1");
  check_levels(m, m);
  if (dt && !(*dt > 0.0)) throw ConfigError("time step must be positive");
  if (final_time && !(*final_time > 0.0)) throw ConfigError("final time must be positive");
  if (!(newton_tol > 0.0)) throw ConfigError("Newton tolerance must be positive");
}

SingleResult run_single(const RunSpec& spec) {
  spec.validate();
  const ManufacturedCase c = builtin_case(spec.example);
  validate_case(c);
  const Discretization disc(build_structured(spec.m), spec.space());
  SingleResult out;
  out.spec = spec;
  const TimeConfig tc = spec.time(c);
  out.dt = tc.dt;
  out.steps = tc.steps();
  out.run = run(disc, c.problem(), tc);
  for (const auto& r : out.run.records) out.newton_iterations += r.newton_iterations;
  out.has_exact = c.has_exact();
  if (out.has_exact) {
    const double t = out.run.final_state.time;
    std::optional<PostprocessedField> ustar;
    if (spec.scheme != SchemeKind::variant) ustar = postprocess(disc, out.run.final_state);
    out.errors = error_norms(
        disc, out.run.final_state, ustar, [&](const Point& x) { return c.exact_u(x, t); },
        [&](const Point& x) { return c.exact_grad(x, t); });
  }
  return out;
}

double eoc(double coarse, double fine) { return std::log2(coarse / fine); }

void compute_eoc(std::vector<EOCRow>& rows) {
  std::sort(rows.begin(), rows.end(),
            [](const EOCRow& a, const EOCRow& b) { return a.k != b.k ? a.k < b.k : a.m < b.m; });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EOCRow& r = rows[i];
    r.eoc_u = r.eoc_q = r.eoc_ustar = std::nullopt;
    if (i == 0 || rows[i - 1].k != r.k || rows[i - 1].m != r.m - 1) continue;
    const EOCRow& p = rows[i - 1];
    r.eoc_u = eoc(p.err_u, r.err_u);
    r.eoc_q = eoc(p.err_q, r.err_q);
    if (p.err_ustar > 0.0 && r.err_ustar > 0.0) r.eoc_ustar = eoc(p.err_ustar, r.err_ustar);
  }
}

std::vector<EOCRow> EOCTable::for_degree(int k) const {
  std::vector<EOCRow> out;
  for (const auto& r : rows)
    if (r.k == k) out.push_back(r);
  return out;
}

void EOCTable::write_csv(std::ostream& os) const {
  os << "k,m,err_u,eoc_u,err_q,eoc_q,err_ustar,eoc_ustar\n";
  auto e = [](const std::optional<double>& v) { return v ? fmt("%.4f", *v) : std::string(); };
  for (const auto& r : rows)
    os << r.k << ',' << r.m << ',' << fmt("%.6e", r.err_u) << ',' << e(r.eoc_u) << ','
       << fmt("%.6e", r.err_q) << ',' << e(r.eoc_q) << ',' << fmt("%.6e", r.err_ustar) << ','
       << e(r.eoc_ustar) << '\n';
}

void EOCTable::write_markdown(std::ostream& os) const {
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows)
    body.push_back({std::to_string(r.k), std::to_string(r.m), fmt("%.2e", r.err_u), fmt_eoc(r.eoc_u),
                    fmt("%.2e", r.err_q), fmt_eoc(r.eoc_q), fmt("%.2e", r.err_ustar), fmt_eoc(r.eoc_ustar)});
  write_aligned(os, {"k", "m", "err_u", "eoc_u", "err_q", "eoc_q", "err_ustar", "eoc_ustar"}, body);
}

void ConvergenceSpec::validate() const {
  if (degrees.empty()) throw ConfigError("no polynomial degree given");
  check_levels(m_first, m_last);
  for (int k : degrees) {
    RunSpec r;
    r.example = example;
    r.k = k;
    r.m = m_first;
    r.scheme = scheme;
    r.tau = tau;
    r.dt = dt;
    r.final_time = final_time;
    r.newton_tol = newton_tol;
    r.validate();
  }
  const ManufacturedCase c = builtin_case(example);
  if (!c.has_exact()) throw ConfigError("example " + std::to_string(example) + " has no exact solution");
}

EOCTable run_convergence(const ConvergenceSpec& spec) {
  spec.validate();
  std::vector<RunSpec> jobs;
  for (int k : spec.degrees)
    for (int m = spec.m_first; m <= spec.m_last; ++m) {
      RunSpec r;
      r.example = spec.example;
      r.k = k;
      r.m = m;
      r.scheme = spec.scheme;
      r.tau = spec.tau;
      r.dt = spec.dt;
      r.final_time = spec.final_time;
      r.newton_tol = spec.newton_tol;
      jobs.push_back(r);
    }
  // largest jobs first so the pool drains evenly
  std::stable_sort(jobs.begin(), jobs.end(), [](const RunSpec& a, const RunSpec& b) {
    return a.m != b.m ? a.m > b.m : a.k > b.k;
  });
  std::vector<EOCRow> rows(jobs.size());
  parallel_for(jobs.size(), resolve_threads(spec.threads), [&](std::size_t i) {
    const SingleResult s = run_single(jobs[i]);
    rows[i] = {jobs[i].k, jobs[i].m, s.errors.u, std::nullopt, s.errors.q, std::nullopt, s.errors.ustar,
               std::nullopt};
  });
  compute_eoc(rows);
  return {rows};
}

std::vector<EnergyRow> energy_rows(int m, const std::vector<double>& energy, std::size_t n_steps) {
  if (energy.size() < n_steps + 1) throw ConfigError("energy series shorter than N + 1");
  std::vector<EnergyRow> out;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    const double ref = n == 1 ? energy[0] : energy[1];
    out.push_back({m, n, std::abs(energy[n] - ref), energy[n]});
  }
  return out;
}

void EnergyTable::write_csv(std::ostream& os) const {
  os << "m,n,drift\n";
  for (const auto& r : rows) os << r.m << ',' << r.n << ',' << fmt("%.6e", r.drift) << '\n';
}

void EnergyTable::write_markdown(std::ostream& os) const {
  std::vector<std::vector<std::string>> body;
  for (const auto& r : rows) body.push_back({std::to_string(r.m), std::to_string(r.n), fmt("%.4e", r.drift)});
  write_aligned(os, {"m", "n", "drift"}, body);
}

void EnergySpec::validate() const {
  check_levels(m_first, m_last);
  if (scheme == SchemeKind::nonconservative)
    throw ConfigError("the energy study needs a conservative scheme");
  RunSpec r;
  r.example = example;
  r.k = k;
  r.m = m_first;
  r.scheme = scheme;
  r.tau = tau;
  r.dt = dt;
  r.final_time = final_time;
  r.newton_tol = newton_tol;
  r.validate();
  builtin_case(example);
}

EnergyTable run_energy(const EnergySpec& spec) {
  spec.validate();
  const int levels = spec.m_last - spec.m_first + 1;
  std::vector<std::vector<EnergyRow>> per_level(static_cast<std::size_t>(levels));
  parallel_for(per_level.size(), resolve_threads(spec.threads), [&](std::size_t i) {
    RunSpec r;
    r.example = spec.example;
    r.k = spec.k;
    r.m = spec.m_last - static_cast<int>(i);
    r.scheme = spec.scheme;
    r.tau = spec.tau;
    r.dt = spec.dt;
    r.final_time = spec.final_time;
    r.newton_tol = spec.newton_tol;
    r.extra_steps = 1;
    const SingleResult s = run_single(r);
    per_level[i] = energy_rows(r.m, s.run.energy, s.steps);
  });
  EnergyTable out;
  for (auto it = per_level.rbegin(); it != per_level.rend(); ++it)
    out.rows.insert(out.rows.end(), it->begin(), it->end());
  return out;
}

std::size_t resolve_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("KGHDG_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex lock;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) {
      try {
        job(i);
      } catch (...) {
        const std::lock_guard<std::mutex> g(lock);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  const std::size_t n = std::min(std::max<std::size_t>(threads, 1), count);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
}

} // namespace kghdg
