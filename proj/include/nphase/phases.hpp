#pragma once

#include "nphase/spinor.hpp"

namespace nphase {

/// Magnitude threshold below which a phase is reported undefined.
inline constexpr double kPhaseEpsilon = 1e-9;

/// Phase of a complex number, carrying an explicit undefined flag for
/// vanishing magnitude. value_deg is meaningless when !defined.
struct PhaseResult {
  double value_deg = 0.0;
  bool defined = false;
  double magnitude = 0.0;
};

PhaseResult phase_of(complexd z);

/// Phase of <+|U|-><-|U|+> with U the z-precession by alpha. Equals 180 deg
/// whenever defined; undefined for theta in {0, 180} or alpha = 0 mod 360.
PhaseResult off_diagonal_phase(PolarAngle theta, RotationAngle alpha);

/// Branch selector for the transport-variant (dynamical) phase. plus is the
/// forward-precessed path (+alpha/2 cos(theta)), minus the reversed one.
enum class Branch { plus, minus };

/// +-(alpha/2) cos(theta), in degrees, unnormalized. The two branches cancel.
double dynamical_phase(PolarAngle theta, RotationAngle alpha, Branch branch);

/// Phase of <+|U(2 alpha)|+> = cos(alpha) + i cos(theta) sin(alpha): the
/// phase read off the unanalyzed beam, which sees twice the precession.
PhaseResult pancharatnam_phase_hbeam(PolarAngle theta, RotationAngle alpha);

/// Geometric part of the two-path evolution phase: arg<Psi_I|Psi_II> with
/// the dynamical branch difference removed. Equals 180 + alpha cos(theta)
/// degrees (normalized); magnitude sin^2(theta) sin^2(alpha/2).
PhaseResult generalized_bp_phase(PolarAngle theta, RotationAngle alpha);

}  // namespace nphase
