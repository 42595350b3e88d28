#include "nphase/spinor.hpp"

#include <cmath>

namespace nphase {

complexd inner_product(const Spinor& a, const Spinor& b) {
  return std::conj(a.up) * b.up + std::conj(a.down) * b.down;
}

double norm(const Spinor& s) {
  return std::sqrt(std::norm(s.up) + std::norm(s.down));
}

Operator2 Operator2::adjoint() const {
  return {std::conj(m00), std::conj(m10), std::conj(m01), std::conj(m11)};
}

Operator2 Operator2::operator*(const Operator2& r) const {
  return {m00 * r.m00 + m01 * r.m10, m00 * r.m01 + m01 * r.m11,
          m10 * r.m00 + m11 * r.m10, m10 * r.m01 + m11 * r.m11};
}

Spinor Operator2::operator*(const Spinor& s) const {
  return {m00 * s.up + m01 * s.down, m10 * s.up + m11 * s.down};
}

namespace {

double max_entry_diff(const Operator2& a, const Operator2& b) {
  return std::max({std::abs(a.m00 - b.m00), std::abs(a.m01 - b.m01),
                   std::abs(a.m10 - b.m10), std::abs(a.m11 - b.m11)});
}

}  // namespace

bool is_unitary(const Operator2& op, double tol) {
  return max_entry_diff(op.adjoint() * op, Operator2::identity()) <= tol;
}

bool is_projector(const Operator2& op, double tol) {
  return max_entry_diff(op * op, op) <= tol &&
         max_entry_diff(op.adjoint(), op) <= tol;
}

Spinor make_plus_state(PolarAngle theta) {
  const double half = theta.radians() / 2.0;
  return {complexd{std::cos(half), 0.0}, complexd{std::sin(half), 0.0}};
}

Spinor orthogonal(const Spinor& s) {
  return {-std::conj(s.down), std::conj(s.up)};
}

Operator2 precession_unitary(RotationAngle alpha) {
  const double half = alpha.radians() / 2.0;
  return {std::polar(1.0, half), {0.0, 0.0}, {0.0, 0.0}, std::polar(1.0, -half)};
}

Operator2 projector(const Spinor& s) {
  return {s.up * std::conj(s.up), s.up * std::conj(s.down),
          s.down * std::conj(s.up), s.down * std::conj(s.down)};
}

Operator2 basis_transform(PolarAngle theta) {
  const double half = theta.radians() / 2.0;
  const double c = std::cos(half);
  const double s = std::sin(half);
  return {complexd{c, 0.0}, complexd{s, 0.0}, complexd{-s, 0.0}, complexd{c, 0.0}};
}

Operator2 conjugate_evolution(PolarAngle theta, RotationAngle alpha) {
  const Operator2 t = basis_transform(theta);
  return t * precession_unitary(alpha) * t.adjoint();
}

}  // namespace nphase
