#include "nphase/phases.hpp"

#include <cmath>

namespace nphase {

PhaseResult phase_of(complexd z) {
  PhaseResult r;
  r.magnitude = std::abs(z);
  r.defined = r.magnitude >= kPhaseEpsilon;
  if (r.defined) {
    r.value_deg = normalize_phase_deg(to_degrees(std::arg(z)));
  }
  return r;
}

namespace {

/// <+|U|-><-|U|+> with U the z-precession by alpha.
complexd cross_element_product(PolarAngle theta, RotationAngle alpha) {
  const Spinor plus = make_plus_state(theta);
  const Spinor minus = orthogonal(plus);
  const Operator2 u = precession_unitary(alpha);
  return inner_product(plus, u * minus) * inner_product(minus, u * plus);
}

}  // namespace

PhaseResult off_diagonal_phase(PolarAngle theta, RotationAngle alpha) {
  return phase_of(cross_element_product(theta, alpha));
}

double dynamical_phase(PolarAngle theta, RotationAngle alpha, Branch branch) {
  const double value = 0.5 * alpha.degrees() * std::cos(theta.radians());
  return branch == Branch::plus ? value : -value;
}

PhaseResult pancharatnam_phase_hbeam(PolarAngle theta, RotationAngle alpha) {
  const Spinor plus = make_plus_state(theta);
  const Operator2 u2 = precession_unitary(RotationAngle{2.0 * alpha.degrees()});
  return phase_of(inner_product(plus, u2 * plus));
}

PhaseResult generalized_bp_phase(PolarAngle theta, RotationAngle alpha) {
  const Spinor plus = make_plus_state(theta);
  const Operator2 analyzer = projector(orthogonal(plus));
  const Spinor psi_one =
      analyzer * (precession_unitary(RotationAngle{-alpha.degrees()}) * plus);
  const Spinor psi_two = analyzer * (precession_unitary(alpha) * plus);
  PhaseResult r = phase_of(inner_product(psi_one, psi_two));
  if (r.defined) {
    // Strip the transport-variant parts of the two paths: the raw product
    // carries phase(product) = gbp + Phi_D(I) - Phi_D(II).
    const double dynamical_difference =
        dynamical_phase(theta, alpha, Branch::minus) -
        dynamical_phase(theta, alpha, Branch::plus);
    r.value_deg = normalize_phase_deg(r.value_deg - dynamical_difference);
  }
  return r;
}

}  // namespace nphase
