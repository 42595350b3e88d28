#include "nphase/bloch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <utility>

namespace nphase {

double dot(const BlochVector& a, const BlochVector& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

BlochVector cross(const BlochVector& a, const BlochVector& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

double norm(const BlochVector& v) { return std::sqrt(dot(v, v)); }

BlochVector normalized(const BlochVector& v) {
  const double n = norm(v);
  return {v.x / n, v.y / n, v.z / n};
}

namespace {

constexpr double kJoinTolerance = 1e-9;
constexpr double kAntipodalTolerance = 1e-9;  // on 1 + dot(a, b)

double distance(const BlochVector& a, const BlochVector& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

}  // namespace

BlochVector to_bloch(const Spinor& s) {
  const complexd ud = std::conj(s.up) * s.down;
  return {2.0 * ud.real(), 2.0 * ud.imag(),
          std::norm(s.up) - std::norm(s.down)};
}

Arc precession_trajectory(PolarAngle theta, RotationAngle alpha,
                          std::size_t n_samples, double start_azimuth_deg) {
  if (n_samples < 2) {
    throw std::invalid_argument("precession_trajectory: n_samples must be >= 2");
  }
  const double sin_theta = std::sin(theta.radians());
  const double cos_theta = std::cos(theta.radians());
  const double az0 = to_radians(start_azimuth_deg);
  const double sweep = alpha.radians();
  Arc arc;
  arc.kind = ArcKind::trajectory;
  arc.waypoints.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double az = az0 + sweep * static_cast<double>(i) /
                                static_cast<double>(n_samples - 1);
    arc.waypoints[i] = {sin_theta * std::cos(az), sin_theta * std::sin(az),
                        cos_theta};
  }
  return arc;
}

Arc geodesic_arc(const BlochVector& a, const BlochVector& b,
                 std::size_t n_samples) {
  if (n_samples < 2) {
    throw std::invalid_argument("geodesic_arc: n_samples must be >= 2");
  }
  const double cos_angle = dot(a, b);
  if (cos_angle < -1.0 + kAntipodalTolerance) {
    throw AntipodalPointsError(
        "geodesic_arc: endpoints are antipodal, the geodesic is not unique");
  }
  Arc arc;
  arc.kind = ArcKind::geodesic;
  const double angle = std::acos(std::min(1.0, std::max(-1.0, cos_angle)));
  if (angle < 1e-14) {
    arc.waypoints = {a};  // degenerate: a single point, zero excess
    return arc;
  }
  const double inv_sin = 1.0 / std::sin(angle);
  arc.waypoints.resize(n_samples);
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double t =
        static_cast<double>(i) / static_cast<double>(n_samples - 1);
    const double wa = std::sin((1.0 - t) * angle) * inv_sin;
    const double wb = std::sin(t * angle) * inv_sin;
    arc.waypoints[i] = {wa * a.x + wb * b.x, wa * a.y + wb * b.y,
                        wa * a.z + wb * b.z};
  }
  return arc;
}

BlochLoop make_loop(std::vector<Arc> arcs) {
  BlochLoop loop;
  loop.arcs = std::move(arcs);
  loop.closed = false;
  if (loop.arcs.empty()) {
    return loop;
  }
  for (std::size_t i = 0; i + 1 < loop.arcs.size(); ++i) {
    if (distance(loop.arcs[i].end(), loop.arcs[i + 1].start()) >
        kJoinTolerance) {
      return loop;
    }
  }
  loop.closed =
      distance(loop.arcs.back().end(), loop.arcs.front().start()) <=
      kJoinTolerance;
  return loop;
}

BlochLoop reversed(const BlochLoop& loop) {
  BlochLoop out;
  out.closed = loop.closed;
  out.arcs.reserve(loop.arcs.size());
  for (auto it = loop.arcs.rbegin(); it != loop.arcs.rend(); ++it) {
    Arc arc = *it;
    std::reverse(arc.waypoints.begin(), arc.waypoints.end());
    out.arcs.push_back(std::move(arc));
  }
  return out;
}

namespace {

std::vector<BlochVector> loop_polygon(const BlochLoop& loop) {
  std::vector<BlochVector> poly;
  for (const Arc& arc : loop.arcs) {
    for (const BlochVector& w : arc.waypoints) {
      if (!poly.empty() && distance(poly.back(), w) < 1e-12) {
        continue;
      }
      poly.push_back(w);
    }
  }
  while (poly.size() > 1 && distance(poly.back(), poly.front()) < 1e-12) {
    poly.pop_back();
  }
  return poly;
}

/// Fan apex: the polygon's orientation (Newell) vector, which lies on the
/// side the loop winds counter-clockwise around. Falls back to the waypoint
/// centroid, then +z, when degenerate.
BlochVector fan_apex(const std::vector<BlochVector>& poly) {
  BlochVector n{0.0, 0.0, 0.0};
  BlochVector c{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const BlochVector& a = poly[i];
    const BlochVector& b = poly[(i + 1) % poly.size()];
    const BlochVector cr = cross(a, b);
    n = {n.x + cr.x, n.y + cr.y, n.z + cr.z};
    c = {c.x + a.x, c.y + a.y, c.z + a.z};
  }
  if (norm(n) > 1e-9) {
    return normalized(n);
  }
  if (norm(c) > 1e-9) {
    return normalized(c);
  }
  return {0.0, 0.0, 1.0};
}

/// Signed excess of the spherical triangle (apex, a, b) via the
/// two-argument arctangent of the triple product.
inline double triangle_excess(const BlochVector& apex, const BlochVector& a,
                              const BlochVector& b) {
  const double num = dot(apex, cross(a, b));
  const double den = 1.0 + dot(apex, a) + dot(a, b) + dot(b, apex);
  return 2.0 * std::atan2(num, den);
}

}  // namespace

double loop_solid_angle_serial(const BlochLoop& loop) {
  if (!loop.closed) {
    throw OpenLoopError("loop_solid_angle: loop is not closed");
  }
  const std::vector<BlochVector> poly = loop_polygon(loop);
  if (poly.size() < 3) {
    return 0.0;
  }
  const BlochVector apex = fan_apex(poly);
  double total = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    total += triangle_excess(apex, poly[i], poly[(i + 1) % poly.size()]);
  }
  return total;
}

double loop_solid_angle(const BlochLoop& loop) {
  if (!loop.closed) {
    throw OpenLoopError("loop_solid_angle: loop is not closed");
  }
  const std::vector<BlochVector> poly = loop_polygon(loop);
  if (poly.size() < 3) {
    return 0.0;
  }
  const BlochVector apex = fan_apex(poly);
  const std::int64_t n = static_cast<std::int64_t>(poly.size());
  double total = 0.0;
#pragma omp parallel for reduction(+ : total) schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    total += triangle_excess(apex, poly[static_cast<std::size_t>(i)],
                             poly[static_cast<std::size_t>((i + 1) % n)]);
  }
  return total;
}

namespace {

bool is_full_turn(RotationAngle alpha) {
  return std::abs(std::remainder(alpha.degrees(), 360.0)) < 1e-9;
}

}  // namespace

BlochLoop off_diagonal_loop(PolarAngle theta, RotationAngle alpha,
                            std::size_t n_samples) {
  if (is_full_turn(alpha)) {
    throw UndefinedLoopError(
        "off_diagonal_loop: undefined for alpha = 0 mod 360");
  }
  try {
    Arc gamma_plus = precession_trajectory(theta, alpha, n_samples, 0.0);
    Arc gamma_minus = precession_trajectory(
        PolarAngle{180.0 - theta.degrees()}, alpha, n_samples, 180.0);
    Arc g_pm = geodesic_arc(gamma_plus.end(), gamma_minus.start(), n_samples);
    Arc g_mp = geodesic_arc(gamma_minus.end(), gamma_plus.start(), n_samples);
    return make_loop({std::move(gamma_plus), std::move(g_pm),
                      std::move(gamma_minus), std::move(g_mp)});
  } catch (const AntipodalPointsError&) {
    throw UndefinedLoopError(
        "off_diagonal_loop: joining geodesic degenerates (alpha ~ 0 mod 360)");
  }
}

BlochLoop direct_evolution_loop(PolarAngle theta, RotationAngle alpha,
                                std::size_t n_samples) {
  if (is_full_turn(alpha)) {
    throw UndefinedLoopError(
        "direct_evolution_loop: undefined for alpha = 0 mod 360");
  }
  const BlochVector meet = -to_bloch(make_plus_state(theta));
  const RotationAngle back{-alpha.degrees()};
  try {
    // Path II forward (azimuth 0 -> -alpha under the forward precession),
    // down to the joint endpoint, back up to path I's end (azimuth +alpha),
    // then path I reversed. This traversal orients the enclosed surface
    // positively, with solid angle 2 pi + 2 alpha cos(theta).
    Arc out = precession_trajectory(theta, back, n_samples, 0.0);
    Arc down = geodesic_arc(out.end(), meet, n_samples);
    Arc home = precession_trajectory(theta, back, n_samples, alpha.degrees());
    Arc up = geodesic_arc(meet, home.start(), n_samples);
    return make_loop({std::move(out), std::move(down), std::move(up),
                      std::move(home)});
  } catch (const AntipodalPointsError&) {
    throw UndefinedLoopError(
        "direct_evolution_loop: joining geodesic degenerates "
        "(alpha ~ 0 mod 360)");
  }
}

void write_loop_csv(std::ostream& out, const BlochLoop& loop) {
  out << "arc_index,kind,x,y,z\n";
  char buf[128];
  for (std::size_t i = 0; i < loop.arcs.size(); ++i) {
    const Arc& arc = loop.arcs[i];
    const char* kind =
        arc.kind == ArcKind::trajectory ? "trajectory" : "geodesic";
    for (const BlochVector& w : arc.waypoints) {
      std::snprintf(buf, sizeof(buf), "%zu,%s,%.17g,%.17g,%.17g\n", i, kind,
                    w.x, w.y, w.z);
      out << buf;
    }
  }
}

}  // namespace nphase
