#include "nphase/fitters.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "nphase/json_io.hpp"

namespace nphase {

namespace {

using Matrix3 = std::array<std::array<double, 3>, 3>;

double det3(const Matrix3& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
         m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

Matrix3 inverse3(const Matrix3& m, double det) {
  Matrix3 inv;
  inv[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

}  // namespace

SinusoidFit fit_sinusoid(const Interferogram& g) {
  const std::size_t n = g.chi_deg.size();
  if (n != g.counts.size()) {
    throw std::invalid_argument("fit_sinusoid: chi/counts size mismatch");
  }
  if (n < 4) {
    throw InsufficientDataError(
        "fit_sinusoid: need at least 4 points, got " + std::to_string(n));
  }
  const bool poisson = g.config.noise_seed.has_value();

  Matrix3 m{};
  std::array<double, 3> rhs{};
  double max_diag = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double chi = to_radians(g.chi_deg[i]);
    const std::array<double, 3> row{1.0, std::cos(chi), std::sin(chi)};
    const double w = poisson ? 1.0 / std::max(g.counts[i], 1.0) : 1.0;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        m[r][c] += w * row[r] * row[c];
      }
      rhs[r] += w * row[r] * g.counts[i];
    }
  }
  for (int r = 0; r < 3; ++r) {
    max_diag = std::max(max_diag, m[r][r]);
  }
  const double det = det3(m);
  if (std::abs(det) <= 1e-12 * max_diag * max_diag * max_diag) {
    throw DegenerateGridError(
        "fit_sinusoid: chi grid cannot separate offset, cos and sin terms");
  }
  const Matrix3 inv = inverse3(m, det);
  std::array<double, 3> beta{};
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      beta[r] += inv[r][c] * rhs[c];
    }
  }
  const double offset = beta[0];
  const double p = beta[1];
  const double q = beta[2];

  // Covariance of (A, P, Q): inv directly under Poisson weights (w = 1/var),
  // residual-scaled under uniform weights.
  double scale = 1.0;
  if (!poisson) {
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double chi = to_radians(g.chi_deg[i]);
      const double model = offset + p * std::cos(chi) + q * std::sin(chi);
      ssr += (g.counts[i] - model) * (g.counts[i] - model);
    }
    scale = ssr / static_cast<double>(n - 3);
  }

  SinusoidFit fit;
  fit.offset = offset;
  fit.amplitude = std::hypot(p, q);
  fit.phase_deg = fit.amplitude > 0.0
                      ? normalize_phase_deg(to_degrees(std::atan2(q, p)))
                      : 0.0;
  fit.visibility =
      fit.offset > 0.0 ? std::clamp(fit.amplitude / fit.offset, 0.0, 1.0)
                       : 0.0;

  const double var_p = scale * inv[1][1];
  const double var_q = scale * inv[2][2];
  const double cov_pq = scale * inv[1][2];
  const double b2 = p * p + q * q;
  if (b2 > 0.0) {
    const double var_amp =
        (p * p * var_p + 2.0 * p * q * cov_pq + q * q * var_q) / b2;
    const double var_phase =
        (q * q * var_p - 2.0 * p * q * cov_pq + p * p * var_q) / (b2 * b2);
    fit.amplitude_sigma = std::sqrt(std::max(var_amp, 0.0));
    fit.phase_sigma_deg = to_degrees(std::sqrt(std::max(var_phase, 0.0)));
  } else {
    fit.amplitude_sigma = std::sqrt(std::max(var_p + var_q, 0.0));
    fit.phase_sigma_deg = 180.0;
  }

  // Floor guards the noise-free case, where residuals vanish to rounding.
  const double sigma_floor = 1e-13 * std::max(1.0, std::abs(fit.offset));
  fit.oscillating = fit.amplitude >
                    kOscillationSigma * std::max(fit.amplitude_sigma,
                                                 sigma_floor);
  return fit;
}

PhaseResult phase_shift(const SinusoidFit& fit, const SinusoidFit& reference) {
  PhaseResult r;
  r.magnitude = fit.amplitude;
  if (!fit.oscillating || !reference.oscillating) {
    return r;
  }
  r.defined = true;
  r.value_deg = normalize_phase_deg(fit.phase_deg - reference.phase_deg);
  return r;
}

std::vector<std::pair<double, double>> visibility_curve(
    PolarAngle theta, Beam beam, const std::vector<double>& alphas_deg) {
  std::vector<std::pair<double, double>> curve;
  curve.reserve(alphas_deg.size());
  const std::vector<double> grid = chi_grid(0.0, 720.0, 32);
  for (const double alpha : alphas_deg) {
    BeamConfig config{theta, RotationAngle{alpha}};
    const SinusoidFit fit =
        fit_sinusoid(synthesize_interferogram(config, beam, grid));
    curve.emplace_back(alpha, fit.visibility);
  }
  return curve;
}

nlohmann::json fit_json(const SinusoidFit& fit) {
  return nlohmann::json{{"offset", fit.offset},
                        {"amplitude", fit.amplitude},
                        {"phase_deg", fit.phase_deg},
                        {"visibility", fit.visibility},
                        {"phase_sigma_deg", fit.phase_sigma_deg},
                        {"oscillating", fit.oscillating}};
}

nlohmann::json phase_result_json(const PhaseResult& r) {
  nlohmann::json j{{"defined", r.defined}, {"magnitude", r.magnitude}};
  if (r.defined) {
    j["value_deg"] = r.value_deg;
  } else {
    j["value_deg"] = nullptr;
  }
  return j;
}

}  // namespace nphase
