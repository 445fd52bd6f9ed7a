#include "kghdg/timestepping.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "kghdg/elliptic.hpp"
#include "kghdg/error.hpp"
#include "kghdg/local.hpp"

namespace kghdg {
namespace {

using Index = Eigen::Index;
namespace nl = nonlinearity;

// u coefficients of element k evaluated at the volume quadrature points
Eigen::VectorXd point_values(const Discretization& d, const Eigen::VectorXd& u, std::size_t k) {
  return d.reference().u_values * d.u_block(u, k);
}

Eigen::VectorXd point_weights(const Discretization& d, std::size_t k) {
  Eigen::VectorXd w(static_cast<Index>(d.reference().volume.size()));
  for (std::size_t p = 0; p < d.reference().volume.size(); ++p)
    w[static_cast<Index>(p)] = d.reference().volume.weights[p] * d.mesh().geometry(k).det_jacobian;
  return w;
}

} // namespace

std::size_t TimeConfig::steps() const {
  return static_cast<std::size_t>(std::llround(final_time / dt));
}

void TimeConfig::validate(std::ostream* warn) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (!(final_time > 0.0)) throw ConfigError("final time must be positive");
  if (dt > final_time * (1.0 + 1e-12)) throw ConfigError("time step exceeds the final time");
  const std::size_t n = steps();
  const double snapped = final_time / static_cast<double>(n);
  if (std::abs(snapped - dt) > 1e-12 * final_time) {
    if (warn)
      *warn << "warning: T/dt = " << final_time / dt << " is not an integer; using dt = " << snapped
            << " (" << n << " steps)\n";
  }
  dt = snapped;
}

// ---------------------------------------------------------------------------
// StepSystem

StepSystem::StepSystem(const Discretization& disc, double mass_coeff, double nonlinear_coeff,
                       Eigen::VectorXd partner, HdgLoads loads)
    : disc_(&disc),
      mass_coeff_(mass_coeff),
      nonlinear_coeff_(nonlinear_coeff),
      partner_(std::move(partner)),
      loads_(std::move(loads)),
      scale_(1.0 + rms_norm(loads_.element)) {
  if (nonlinear_coeff_ != 0.0 && partner_.size() != static_cast<Index>(disc.num_elements() * disc.nu()))
    throw ConfigError("nonlinear step needs the partner level");
}

Eigen::VectorXd StepSystem::element_u(const Eigen::VectorXd& x) const {
  const Discretization& d = *disc_;
  const auto nel = static_cast<Index>(d.element_dofs());
  const auto q2 = static_cast<Index>(2 * d.nq());
  const auto nu = static_cast<Index>(d.nu());
  Eigen::VectorXd u(static_cast<Index>(d.num_elements()) * nu);
  for (std::size_t k = 0; k < d.num_elements(); ++k)
    u.segment(static_cast<Index>(k) * nu, nu) = x.segment(static_cast<Index>(k) * nel + q2, nu);
  return u;
}

ElementMatrices StepSystem::reactions(const Eigen::VectorXd& u) const {
  const Discretization& d = *disc_;
  ElementMatrices r(d.num_elements());
  const Eigen::MatrixXd& phi = d.reference().u_values;
  for (std::size_t k = 0; k < d.num_elements(); ++k) {
    r[k] = mass_coeff_ * d.local(k).mass_u;
    if (nonlinear_coeff_ == 0.0) continue;
    const Eigen::VectorXd a = point_values(d, u, k);
    const Eigen::VectorXd b = point_values(d, partner_, k);
    Eigen::VectorXd w = point_weights(d, k);
    for (Index p = 0; p < w.size(); ++p) w[p] *= nl::discrete_gradient(a[p], b[p]).d_a;
    r[k].noalias() += nonlinear_coeff_ * (phi.transpose() * w.asDiagonal() * phi);
  }
  return r;
}

Eigen::VectorXd StepSystem::residual(const Eigen::VectorXd& x) const {
  const Discretization& d = *disc_;
  const auto nel = static_cast<Index>(d.element_dofs());
  const auto q2 = static_cast<Index>(2 * d.nq());
  const auto nm = static_cast<Index>(d.nm());
  const Index face0 = static_cast<Index>(d.num_elements()) * nel;
  const Eigen::VectorXd traces = x.tail(x.size() - face0);
  const Eigen::MatrixXd& phi = d.reference().u_values;

  Eigen::VectorXd r = Eigen::VectorXd::Zero(x.size());
  for (std::size_t k = 0; k < d.num_elements(); ++k) {
    const LocalMatrices& lm = d.local(k);
    const Index off = static_cast<Index>(k) * nel;
    const Eigen::VectorXd xk = x.segment(off, nel);
    const Eigen::VectorXd lk = d.element_traces(traces, k);
    Eigen::VectorXd rk = lm.element_operator(mass_coeff_ * lm.mass_u) * xk - lm.trace_coupling() * lk;
    if (loads_.element.size() != 0) rk -= loads_.element.segment(off, nel);
    if (nonlinear_coeff_ != 0.0) {
      const Eigen::VectorXd uk = xk.tail(nel - q2);
      const Eigen::VectorXd a = phi * uk;
      const Eigen::VectorXd b = point_values(d, partner_, k);
      Eigen::VectorXd w = point_weights(d, k);
      for (Index p = 0; p < w.size(); ++p) w[p] *= nl::discrete_gradient(a[p], b[p]).value;
      rk.tail(nel - q2) += nonlinear_coeff_ * (phi.transpose() * w);
    }
    r.segment(off, nel) = rk;

    const Eigen::VectorXd tk = lm.transmission_rows() * xk +
                               lm.transmission_diagonal().cwiseProduct(lk);
    for (int e = 0; e < 3; ++e) {
      const std::size_t f = d.mesh().face_of(k, e);
      if (!d.mesh().faces()[f].boundary)
        r.segment(face0 + static_cast<Index>(f) * nm, nm) += tk.segment(e * nm, nm);
    }
  }
  for (std::size_t f = 0; f < d.num_faces(); ++f) {
    const Index off = face0 + static_cast<Index>(f) * nm;
    const Index lo = static_cast<Index>(f) * nm;
    if (d.mesh().faces()[f].boundary) {
      r.segment(off, nm) = traces.segment(lo, nm);
      if (loads_.boundary.size() != 0) r.segment(off, nm) -= loads_.boundary.segment(lo, nm);
    } else if (loads_.face.size() != 0) {
      r.segment(off, nm) -= loads_.face.segment(lo, nm);
    }
  }
  return r;
}

SparseMatrix StepSystem::jacobian(const Eigen::VectorXd& x) const {
  return assemble_monolithic(*disc_, reactions(element_u(x)));
}

Eigen::VectorXd StepSystem::newton_increment(const Eigen::VectorXd& x, const Eigen::VectorXd& r) const {
  const Discretization& d = *disc_;
  const Index face0 = static_cast<Index>(d.num_elements() * d.element_dofs());
  const CondensedSystem sys(d, reactions(element_u(x)));
  HdgLoads l;
  l.element = r.head(face0);
  l.face = r.tail(r.size() - face0);
  l.boundary = l.face;
  return d.pack(sys.solve(l, 0.0));
}

NewtonResult StepSystem::solve(Eigen::VectorXd x0, const NewtonConfig& cfg) const {
  return newton_solve([this](const Eigen::VectorXd& x) { return residual(x); },
                      [this](const Eigen::VectorXd& x, const Eigen::VectorXd& r) {
                        return newton_increment(x, r);
                      },
                      std::move(x0), cfg, scale_);
}

// ---------------------------------------------------------------------------
// TimeStepper

TimeStepper::TimeStepper(const Discretization& disc, ProblemData data, TimeConfig cfg)
    : disc_(&disc), data_(std::move(data)), cfg_(cfg) {
  cfg_.validate();
  if (!data_.u0 || !data_.u1) throw ConfigError("initial displacement and velocity are required");
  if (disc.config().variant == Variant::standard && (!data_.laplacian_u0 || !data_.grad_u1))
    throw ConfigError("standard spaces need lap u0 and grad u1 for the initial data");
  if (disc.config().variant == Variant::enriched && !data_.grad_u0)
    throw ConfigError("enriched spaces need grad u0 for the initial flux");
}

Eigen::VectorXd TimeStepper::mass_times(const Eigen::VectorXd& u) const {
  const Discretization& d = *disc_;
  Eigen::VectorXd out(u.size());
  for (std::size_t k = 0; k < d.num_elements(); ++k)
    d.u_block(out, k) = d.local(k).mass_u * d.u_block(u, k);
  return out;
}

Eigen::VectorXd TimeStepper::source_load(double t) const {
  const Discretization& d = *disc_;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Index>(d.num_elements() * d.nu()));
  if (!data_.source) return out;
  std::vector<Point> x;
  Eigen::VectorXd w;
  for (std::size_t k = 0; k < d.num_elements(); ++k) {
    d.volume_points(k, x, w);
    for (Index p = 0; p < w.size(); ++p) w[p] *= data_.source(x[static_cast<std::size_t>(p)], t);
    d.u_block(out, k) = d.reference().u_values.transpose() * w;
  }
  return out;
}

Eigen::VectorXd TimeStepper::f_load(const Eigen::VectorXd& u) const {
  const Discretization& d = *disc_;
  Eigen::VectorXd out(u.size());
  for (std::size_t k = 0; k < d.num_elements(); ++k) {
    const Eigen::VectorXd a = point_values(d, u, k);
    Eigen::VectorXd w = point_weights(d, k);
    for (Index p = 0; p < w.size(); ++p) w[p] *= nl::f(a[p]);
    d.u_block(out, k) = d.reference().u_values.transpose() * w;
  }
  return out;
}

Eigen::VectorXd TimeStepper::stiffness_apply(const HdgState& s) const {
  const Discretization& d = *disc_;
  Eigen::VectorXd out(s.u.size());
  for (std::size_t k = 0; k < d.num_elements(); ++k) {
    const LocalMatrices& lm = d.local(k);
    d.u_block(out, k) = (lm.grad_w - lm.flux_w) * d.q_block(s.q, k) + lm.stab_uu * d.u_block(s.u, k) -
                        lm.stab_utrace * d.element_traces(s.trace, k);
  }
  return out;
}

Eigen::VectorXd TimeStepper::boundary_at(double t) const {
  if (!data_.dirichlet) return Eigen::VectorXd();
  return project_trace(*disc_, [&](const Point& x) { return data_.dirichlet(x, t); }, true);
}

HdgLoads TimeStepper::element_loads(const Eigen::VectorXd& u_rows, double t) const {
  const Discretization& d = *disc_;
  const auto nel = static_cast<Index>(d.element_dofs());
  const auto q2 = static_cast<Index>(2 * d.nq());
  const auto nu = static_cast<Index>(d.nu());
  HdgLoads l = zero_loads(d);
  for (std::size_t k = 0; k < d.num_elements(); ++k)
    l.element.segment(static_cast<Index>(k) * nel + q2, nu) = d.u_block(u_rows, k);
  l.boundary = boundary_at(t);
  return l;
}

StepWindow TimeStepper::initialize() {
  const Discretization& d = *disc_;
  StepWindow w;
  if (d.config().variant == Variant::standard) {
    std::optional<ScalarField> g;
    if (data_.dirichlet) g = [this](const Point& x) { return data_.dirichlet(x, 0.0); };
    w.current = solve_elliptic_init(d, data_.laplacian_u0, g);
    velocity_ = hdg_project(d, data_.u1, data_.grad_u1).u;
  } else {
    w.current = d.zero_state(0.0);
    w.current.u = project_u(d, data_.u0);
    w.current.q = project_q(d, data_.grad_u0);
    w.current.trace = project_trace(d, data_.u0);
    const Eigen::VectorXd bnd = boundary_at(0.0);
    for (std::size_t f = 0; f < d.num_faces(); ++f)
      if (d.mesh().faces()[f].boundary)
        d.trace_block(w.current.trace, f) =
            bnd.size() ? Eigen::VectorXd(d.trace_block(bnd, f)) : Eigen::VectorXd::Zero(d.nm());
    velocity_ = project_u(d, data_.u1);
  }
  w.current.time = 0.0;
  w.previous = w.current;
  w.n = 0;
  return w;
}

HdgState TimeStepper::solve_implicit(double mass_coeff, double nonlinear_coeff,
                                     const Eigen::VectorXd& partner, const Eigen::VectorXd& u_rows,
                                     double t, const HdgState& guess) {
  const StepSystem sys(*disc_, mass_coeff, nonlinear_coeff, partner, element_loads(u_rows, t));
  const NewtonResult res = sys.solve(disc_->pack(guess), cfg_.newton);
  last_iterations_ = res.iterations;
  last_residual_ = res.residual;
  return disc_->unpack(res.x, t);
}

HdgState TimeStepper::first_step(const HdgState& s0) {
  const double dt = cfg_.dt;
  const double c = 4.0 / (dt * dt);
  const double t1 = s0.time + dt;
  Eigen::VectorXd rows = c * mass_times(s0.u) - stiffness_apply(s0) + (4.0 / dt) * mass_times(velocity_) +
                         source_load(t1) + source_load(s0.time);

  if (cfg_.scheme == Scheme::conservative) {
    HdgState guess = s0;
    guess.u += dt * velocity_;
    return solve_implicit(c, 2.0, s0.u, rows, t1, guess);
  }

  rows -= 2.0 * f_load(s0.u);
  if (!linear_first_) linear_first_ = std::make_unique<CondensedSystem>(*disc_, mass_reactions(*disc_, c));
  last_iterations_ = 0;
  last_residual_ = 0.0;
  return linear_first_->solve(element_loads(rows, t1), t1);
}

StepSystem TimeStepper::conservative_system(const HdgState& prev, const HdgState& cur, double dt) const {
  const double c = 2.0 / (dt * dt);
  const double t_new = cur.time + dt;
  const Eigen::VectorXd rows = c * mass_times(2.0 * cur.u - prev.u) - stiffness_apply(prev) +
                               source_load(t_new) + source_load(prev.time);
  return StepSystem(*disc_, c, 2.0, prev.u, element_loads(rows, t_new));
}

HdgState TimeStepper::step_conservative(const HdgState& prev, const HdgState& cur, double dt) {
  const StepSystem sys = conservative_system(prev, cur, dt);
  HdgState guess = cur;
  guess.q = 2.0 * cur.q - prev.q;
  guess.u = 2.0 * cur.u - prev.u;
  guess.trace = 2.0 * cur.trace - prev.trace;
  const NewtonResult res = sys.solve(disc_->pack(guess), cfg_.newton);
  last_iterations_ = res.iterations;
  last_residual_ = res.residual;
  return disc_->unpack(res.x, cur.time + dt);
}

HdgState TimeStepper::step_nonconservative(const HdgState& prev, const HdgState& cur) {
  const double dt = cfg_.dt;
  const double c = 2.0 / (dt * dt);
  const double t_new = cur.time + dt;
  const Eigen::VectorXd rows = c * mass_times(2.0 * cur.u - prev.u) - stiffness_apply(prev) -
                               2.0 * f_load(cur.u) + source_load(t_new) + source_load(prev.time);
  if (!linear_interior_ || cfg_.refactor_every_step) {
    if (linear_interior_) discarded_factorizations_ += linear_interior_->factorizations();
    linear_interior_ = std::make_unique<CondensedSystem>(*disc_, mass_reactions(*disc_, c));
  }
  last_iterations_ = 0;
  last_residual_ = 0.0;
  return linear_interior_->solve(element_loads(rows, t_new), t_new);
}

void TimeStepper::advance(StepWindow& w) {
  HdgState next;
  try {
    if (w.n == 0)
      next = first_step(w.current);
    else if (cfg_.scheme == Scheme::conservative)
      next = step_conservative(w.previous, w.current, cfg_.dt);
    else
      next = step_nonconservative(w.previous, w.current);
  } catch (const NewtonError& e) {
    throw StepError(e.what(), w.n + 1);
  } catch (const SingularMatrixError& e) {
    throw StepError(e.what(), w.n + 1);
  }
  next.time = static_cast<double>(w.n + 1) * cfg_.dt;
  w.previous = std::move(w.current);
  w.current = std::move(next);
  ++w.n;
}

std::size_t TimeStepper::factorizations() const {
  std::size_t n = discarded_factorizations_;
  if (linear_first_) n += linear_first_->factorizations();
  if (linear_interior_) n += linear_interior_->factorizations();
  return n;
}

double TimeStepper::discrete_energy(const HdgState& a, const HdgState& b, double dt) const {
  const Discretization& d = *disc_;
  double kinetic = 0.0, flux = 0.0, jump = 0.0, potential = 0.0;
  for (std::size_t k = 0; k < d.num_elements(); ++k) {
    const LocalMatrices& lm = d.local(k);
    const Eigen::VectorXd du = d.u_block(b.u, k) - d.u_block(a.u, k);
    kinetic += du.dot(lm.mass_u * du);
    for (const HdgState* s : {&a, &b}) {
      const Eigen::VectorXd qk = d.q_block(s->q, k);
      flux += qk.dot(lm.mass_q * qk);
      const Eigen::VectorXd uk = d.u_block(s->u, k);
      for (int e = 0; e < 3; ++e) {
        const Eigen::VectorXd diff =
            lm.face_projection[e] * uk - d.trace_block(s->trace, d.mesh().face_of(k, e));
        jump += lm.stab_weight[e] * diff.squaredNorm();
      }
      const Eigen::VectorXd vals = point_values(d, s->u, k);
      const Eigen::VectorXd w = point_weights(d, k);
      for (Index p = 0; p < w.size(); ++p) potential += w[p] * nl::potential(vals[p]);
    }
  }
  return kinetic / (dt * dt) + 0.5 * (flux + jump + 2.0 * potential);
}

double TimeStepper::semidiscrete_energy(const HdgState& s, const Eigen::VectorXd& velocity) const {
  const Discretization& d = *disc_;
  double total = 0.0;
  for (std::size_t k = 0; k < d.num_elements(); ++k) {
    const LocalMatrices& lm = d.local(k);
    const Eigen::VectorXd v = d.u_block(velocity, k);
    const Eigen::VectorXd qk = d.q_block(s.q, k);
    const Eigen::VectorXd uk = d.u_block(s.u, k);
    total += v.dot(lm.mass_u * v) + qk.dot(lm.mass_q * qk);
    for (int e = 0; e < 3; ++e) {
      const Eigen::VectorXd diff =
          lm.face_projection[e] * uk - d.trace_block(s.trace, d.mesh().face_of(k, e));
      total += lm.stab_weight[e] * diff.squaredNorm();
    }
    const Eigen::VectorXd vals = point_values(d, s.u, k);
    const Eigen::VectorXd w = point_weights(d, k);
    for (Index p = 0; p < w.size(); ++p) total += 2.0 * w[p] * nl::potential(vals[p]);
  }
  return 0.5 * total;
}

RunResult run(const Discretization& disc, const ProblemData& data, TimeConfig cfg,
              const std::function<void(const StepWindow&)>& on_step) {
  TimeStepper stepper(disc, data, cfg);
  const TimeConfig& tc = stepper.config();
  const std::size_t n_final = tc.steps();
  const std::size_t n_total = n_final + tc.extra_steps;

  RunResult out;
  StepWindow w = stepper.initialize();
  out.initial = w.current;
  out.semidiscrete_energy0 = stepper.semidiscrete_energy(w.current, stepper.velocity());

  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < n_total; ++i) {
    stepper.advance(w);
    StepRecord rec;
    rec.n = w.n;
    rec.t = w.current.time;
    rec.newton_iterations = stepper.last_newton_iterations();
    rec.residual = stepper.last_residual();
    rec.energy = stepper.discrete_energy(w.previous, w.current, tc.dt);
    out.records.push_back(rec);
    out.energy.push_back(rec.energy);
    if (w.n == n_final) {
      out.final_state = w.current;
      out.before_final = w.previous;
    }
    if (on_step) on_step(w);
  }
  out.step_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.factorizations = stepper.factorizations();
  return out;
}

void write_step_csv(std::ostream& os, const std::vector<StepRecord>& records) {
  os << "n,t,newton_iterations,residual,energy\n";
  const auto old = os.precision(17);
  for (const auto& r : records)
    os << r.n << ',' << r.t << ',' << r.newton_iterations << ',' << r.residual << ',' << r.energy << '\n';
  os.precision(old);
}

} // namespace kghdg
