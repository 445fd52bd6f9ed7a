#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kghdg/cases.hpp"
#include "kghdg/norms.hpp"
#include "kghdg/timestepping.hpp"

namespace kghdg {

enum class SchemeKind { conservative, nonconservative, variant };

std::string to_string(SchemeKind s);
/// Throws ConfigError for anything but conservative, nonconservative or variant.
SchemeKind parse_scheme(const std::string& s);

/// Time step of the refinement studies on the level-m mesh (h = 2^-m):
/// h^((k+1)/2) for the standard schemes, h^((k+2)/2) for the variant.
double default_dt(SchemeKind scheme, int k, int m);

/// One run of a builtin example.
struct RunSpec {
  int example = 1;
  int k = 1;
  int m = 1;
  SchemeKind scheme = SchemeKind::conservative;
  double tau = 1.0;
  std::optional<double> dt;          ///< default_dt when empty
  std::optional<double> final_time;  ///< the case's own T when empty
  double newton_tol = 1e-12;
  std::size_t extra_steps = 0;
  bool refactor_every_step = false;

  SpaceConfig space() const;
  TimeConfig time(const ManufacturedCase& c) const;
  void validate() const;
};

struct SingleResult {
  RunSpec spec;
  double dt = 0.0;
  std::size_t steps = 0;
  bool has_exact = false;
  ErrorNorms errors;
  RunResult run;
  std::size_t newton_iterations = 0; ///< summed over all steps
};

SingleResult run_single(const RunSpec& spec);

struct EOCRow {
  int k = 0;
  int m = 0;
  double err_u = 0.0;
  std::optional<double> eoc_u;
  double err_q = 0.0;
  std::optional<double> eoc_q;
  double err_ustar = 0.0;
  std::optional<double> eoc_ustar;
};

/// log2(coarse / fine).
double eoc(double coarse, double fine);

struct EOCTable {
  std::vector<EOCRow> rows;

  /// Rows of degree k in increasing m.
  std::vector<EOCRow> for_degree(int k) const;
  void write_csv(std::ostream& os) const;
  void write_markdown(std::ostream& os) const;
};

/// Fill the eoc_* fields of rows sharing k from consecutive m.
void compute_eoc(std::vector<EOCRow>& rows);

struct ConvergenceSpec {
  int example = 1;
  std::vector<int> degrees{1};
  int m_first = 1;
  int m_last = 4;
  SchemeKind scheme = SchemeKind::conservative;
  double tau = 1.0;
  std::optional<double> dt;
  std::optional<double> final_time;
  double newton_tol = 1e-12;
  std::size_t threads = 0; ///< 0: hardware concurrency

  void validate() const;
};

EOCTable run_convergence(const ConvergenceSpec& spec);

struct EnergyRow {
  int m = 0;
  std::size_t n = 0;
  double drift = 0.0;  ///< n = 1: |E^{3/2} - E^{1/2}|; n >= 2: |E^{n+1/2} - E^{3/2}|
  double energy = 0.0; ///< E^{n+1/2}
};

struct EnergyTable {
  std::vector<EnergyRow> rows;

  void write_csv(std::ostream& os) const;
  void write_markdown(std::ostream& os) const;
};

/// Energy drift rows n = 1..N from the discrete energies E^{j+1/2}, j = 0..N.
std::vector<EnergyRow> energy_rows(int m, const std::vector<double>& energy, std::size_t n_steps);

struct EnergySpec {
  int example = 4;
  int k = 1;
  int m_first = 1;
  int m_last = 4;
  SchemeKind scheme = SchemeKind::conservative;
  double tau = 1.0;
  double dt = 0.1;
  double final_time = 1.0;
  double newton_tol = 1e-12;
  std::size_t threads = 0;

  void validate() const;
};

EnergyTable run_energy(const EnergySpec& spec);

/// Worker count: `requested` when positive, else KGHDG_THREADS, else hardware concurrency.
std::size_t resolve_threads(std::size_t requested);

/// Run jobs 0..count-1 on up to `threads` workers; rethrows the first failure.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& job);

} // namespace kghdg
