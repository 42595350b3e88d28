#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace nphase {

inline constexpr double kPi = std::numbers::pi;

inline double to_radians(double deg) { return deg * (kPi / 180.0); }
inline double to_degrees(double rad) { return rad * (180.0 / kPi); }

/// Reduce an angle to (-180, 180]; +180 is the canonical representative.
inline double normalize_phase_deg(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r <= -180.0) {
    r += 360.0;
  } else if (r > 180.0) {
    r -= 360.0;
  }
  return r == -180.0 ? 180.0 : r;
}

/// Polar angle of a spin direction measured from +z, in degrees, [0, 180].
class PolarAngle {
 public:
  explicit PolarAngle(double degrees) : deg_(degrees) {
    if (!(degrees >= 0.0 && degrees <= 180.0)) {
      throw std::invalid_argument("PolarAngle: degrees must lie in [0, 180]");
    }
  }
  double degrees() const { return deg_; }
  double radians() const { return to_radians(deg_); }

 private:
  double deg_;
};

/// Spinor precession angle about z (alpha = omega_L * t), in degrees.
/// Any finite value is allowed, including negative angles and |alpha| > 360.
class RotationAngle {
 public:
  explicit RotationAngle(double degrees) : deg_(degrees) {
    if (!std::isfinite(degrees)) {
      throw std::invalid_argument("RotationAngle: degrees must be finite");
    }
  }
  double degrees() const { return deg_; }
  double radians() const { return to_radians(deg_); }

 private:
  double deg_;
};

}  // namespace nphase
