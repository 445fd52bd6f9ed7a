#pragma once

#include <cstddef>

#include "kghdg/cases.hpp"
#include "kghdg/local.hpp"
#include "kghdg/norms.hpp"
#include "kghdg/timestepping.hpp"

namespace kghdg {

/// Displacement in P_{k+1}, flux and traces in P_k, stabilisation (tau / h_K)(P u - uhat).
struct VariantConfig {
  int k = 0;
  double tau = 1.0;

  SpaceConfig space() const { return {k, Variant::enriched, tau}; }
  void validate() const { space().validate(); }
};

LocalMatrices assemble_variant_local(const Mesh& mesh, std::size_t element, const VariantConfig& cfg);

struct VariantRun {
  RunResult run;
  ErrorNorms errors; ///< at the final time; zero for cases without an exact solution
};

/// March a builtin case on the level-m mesh with the enriched spaces.
VariantRun run_variant(const ManufacturedCase& c, const TimeConfig& time, const VariantConfig& cfg, int m);

} // namespace kghdg
