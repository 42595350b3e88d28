#pragma once

#include <complex>

#include "nphase/angles.hpp"

namespace nphase {

using complexd = std::complex<double>;

/// Normalized two-component spin-1/2 state.
struct Spinor {
  complexd up{1.0, 0.0};
  complexd down{0.0, 0.0};
};

/// <a|b>
complexd inner_product(const Spinor& a, const Spinor& b);

double norm(const Spinor& s);

/// Complex 2x2 operator, row-major entries.
struct Operator2 {
  complexd m00{1.0, 0.0};
  complexd m01{0.0, 0.0};
  complexd m10{0.0, 0.0};
  complexd m11{1.0, 0.0};

  static Operator2 identity() { return Operator2{}; }

  Operator2 adjoint() const;
  Operator2 operator*(const Operator2& rhs) const;
  Spinor operator*(const Spinor& s) const;
};

bool is_unitary(const Operator2& op, double tol = 1e-12);
bool is_projector(const Operator2& op, double tol = 1e-12);

/// (cos(theta/2), sin(theta/2)): spin direction tilted by theta from +z.
Spinor make_plus_state(PolarAngle theta);

/// The spinor orthogonal to s, convention (-conj(s.down), conj(s.up)).
/// Applying it twice yields -s.
Spinor orthogonal(const Spinor& s);

/// diag(e^{+i alpha/2}, e^{-i alpha/2}): precession about z by alpha.
/// precession_unitary(-alpha) is the matrix inverse.
Operator2 precession_unitary(RotationAngle alpha);

/// |s><s|
Operator2 projector(const Spinor& s);

/// Real rotation taking the (plus, minus) basis onto (|+z>, |-z>):
/// basis_transform(theta) * make_plus_state(theta) == (1, 0).
Operator2 basis_transform(PolarAngle theta);

/// The precession expressed in the tilted basis: T * U(alpha) * T^{-1},
/// computed by explicit matrix products. Both off-diagonal entries equal
/// -i sin(theta) sin(alpha/2).
Operator2 conjugate_evolution(PolarAngle theta, RotationAngle alpha);

}  // namespace nphase
