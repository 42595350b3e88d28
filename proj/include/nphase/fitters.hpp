#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "nphase/beamline.hpp"
#include "nphase/phases.hpp"

namespace nphase {

/// Amplitude must exceed this many standard errors to count as oscillating.
inline constexpr double kOscillationSigma = 3.0;

/// Result of fitting I(chi) = offset + amplitude * cos(chi - phase).
struct SinusoidFit {
  double offset = 0.0;
  double amplitude = 0.0;
  double phase_deg = 0.0;      // (-180, 180]
  double visibility = 0.0;     // amplitude/offset clamped to [0, 1], 0 if offset <= 0
  double phase_sigma_deg = 0.0;
  double amplitude_sigma = 0.0;
  bool oscillating = false;
};

struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DegenerateGridError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Linear least squares on I = A + P cos(chi) + Q sin(chi), reassembled as
/// amplitude/phase. Weights are 1/max(counts, 1) when the interferogram was
/// synthesized with noise, uniform otherwise; uncertainties come from the
/// weighted covariance of (A, P, Q). Throws InsufficientDataError for fewer
/// than 4 points and DegenerateGridError when the grid cannot separate the
/// three parameters (e.g. all chi equal mod 360).
SinusoidFit fit_sinusoid(const Interferogram& g);

/// fit.phase - reference.phase, normalized to (-180, 180]; defined only when
/// both fits oscillate. magnitude carries fit.amplitude either way.
PhaseResult phase_shift(const SinusoidFit& fit, const SinusoidFit& reference);

/// Noise-free visibility per rotation angle for an ideal pure beam,
/// obtained by synthesize -> fit on the default two-fringe grid.
std::vector<std::pair<double, double>> visibility_curve(
    PolarAngle theta, Beam beam, const std::vector<double>& alphas_deg);

}  // namespace nphase
