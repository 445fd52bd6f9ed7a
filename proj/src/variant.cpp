#include "kghdg/variant.hpp"

namespace kghdg {

LocalMatrices assemble_variant_local(const Mesh& mesh, std::size_t element, const VariantConfig& cfg) {
  cfg.validate();
  return assemble_local(mesh, element, cfg.space());
}

VariantRun run_variant(const ManufacturedCase& c, const TimeConfig& time, const VariantConfig& cfg, int m) {
  cfg.validate();
  validate_case(c);
  const Discretization disc(build_structured(m), cfg.space());
  VariantRun out;
  out.run = run(disc, c.problem(), time);
  if (c.has_exact()) {
    const double t = out.run.final_state.time;
    out.errors = error_norms(
        disc, out.run.final_state, std::nullopt, [&](const Point& x) { return c.exact_u(x, t); },
        [&](const Point& x) { return c.exact_grad(x, t); });
  }
  return out;
}

} // namespace kghdg
