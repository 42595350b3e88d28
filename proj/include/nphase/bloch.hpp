#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "nphase/phases.hpp"
#include "nphase/spinor.hpp"

namespace nphase {

struct BlochVector {
  double x = 0.0;
  double y = 0.0;
  double z = 1.0;
};

inline BlochVector operator-(const BlochVector& v) { return {-v.x, -v.y, -v.z}; }
double dot(const BlochVector& a, const BlochVector& b);
BlochVector cross(const BlochVector& a, const BlochVector& b);
double norm(const BlochVector& v);
BlochVector normalized(const BlochVector& v);

enum class ArcKind { trajectory, geodesic };

/// Sampled path on the unit sphere. waypoints.front()/back() are the
/// endpoints; a degenerate arc has a single waypoint.
struct Arc {
  ArcKind kind = ArcKind::geodesic;
  std::vector<BlochVector> waypoints;

  const BlochVector& start() const { return waypoints.front(); }
  const BlochVector& end() const { return waypoints.back(); }
};

struct BlochLoop {
  std::vector<Arc> arcs;
  bool closed = false;
};

struct AntipodalPointsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OpenLoopError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UndefinedLoopError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Expectation-value map (2 Re(u* d), 2 Im(u* d), |u|^2 - |d|^2).
BlochVector to_bloch(const Spinor& s);

/// Latitude arc at polar angle theta, azimuth sweeping start_azimuth_deg to
/// start_azimuth_deg + alpha, sampled uniformly. n_samples >= 2.
Arc precession_trajectory(PolarAngle theta, RotationAngle alpha,
                          std::size_t n_samples,
                          double start_azimuth_deg = 0.0);

/// Minor great-circle arc from a to b (spherical linear interpolation).
/// Coincident endpoints give a single-waypoint arc; antipodal endpoints
/// (dot < -1 + 1e-9) throw AntipodalPointsError.
Arc geodesic_arc(const BlochVector& a, const BlochVector& b,
                 std::size_t n_samples);

/// Assemble arcs into a loop; closed iff consecutive endpoints match within
/// 1e-9 and the last arc returns to the first start point.
BlochLoop make_loop(std::vector<Arc> arcs);

BlochLoop reversed(const BlochLoop& loop);

/// Signed solid angle enclosed by a closed loop: accumulated signed
/// spherical-triangle excess over the waypoint polygon, fanned from the
/// polygon's orientation (Newell) vector. Positive for counter-clockwise
/// traversal seen from outside on the winding side. Throws OpenLoopError.
double loop_solid_angle(const BlochLoop& loop);

/// Serial reference for loop_solid_angle (same algorithm, no threading).
double loop_solid_angle_serial(const BlochLoop& loop);

inline constexpr std::size_t kDefaultLoopSamples = 4096;

/// The four-arc loop [Gamma+, G+-, Gamma-, G-+]: both precession
/// trajectories plus the geodesics joining the final state of each to the
/// initial state of the other. Solid angle 2 pi for every valid input.
/// Throws UndefinedLoopError for alpha = 0 mod 360.
BlochLoop off_diagonal_loop(PolarAngle theta, RotationAngle alpha,
                            std::size_t n_samples = kDefaultLoopSamples);

/// The two-path evolution loop: forward trajectory to azimuth -alpha,
/// geodesic to the antipode of the start state, geodesic back to azimuth
/// +alpha, reversed trajectory home. Solid angle 2 pi + 2 alpha cos(theta)
/// (alpha in radians). Throws UndefinedLoopError for alpha = 0 mod 360.
BlochLoop direct_evolution_loop(PolarAngle theta, RotationAngle alpha,
                                std::size_t n_samples = kDefaultLoopSamples);

/// Columns: arc_index,kind,x,y,z
void write_loop_csv(std::ostream& out, const BlochLoop& loop);

}  // namespace nphase
