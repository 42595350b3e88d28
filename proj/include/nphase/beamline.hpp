#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nphase/spinor.hpp"

namespace nphase {

/// Interferometer output port: O is spin-analyzed, H is not.
enum class Beam { O, H };

/// Which pure spinor enters the apparatus.
enum class Incident { plus, minus };

struct BeamConfig {
  PolarAngle theta{0.0};
  RotationAngle alpha{0.0};
  double polarization_fraction = 1.0;  // fraction of the desired component
  double instrument_contrast = 1.0;    // multiplicative fringe attenuation
  double mean_counts = 1.0;            // expected counts at unit intensity
  std::optional<std::uint64_t> noise_seed;
};

/// Validates the scalar ranges; throws std::invalid_argument.
void validate(const BeamConfig& config);

/// Fringe in the auxiliary phase chi: I(chi) = mean + Re(oscillation e^{-i chi}).
struct FringeCoefficients {
  double mean = 0.0;
  complexd oscillation{0.0, 0.0};

  double at(double chi_deg) const;
  double amplitude() const;
  double phase_deg() const;  // normalized to (-180, 180]
  double visibility() const;
};

/// Fringe of a pure incident spinor run through the two-path apparatus
/// (forward and reversed precession; O-beam adds the analyzer projecting on
/// the nominal orthogonal spinor). Evaluated from the operator expressions.
FringeCoefficients pure_fringe(PolarAngle theta, RotationAngle alpha,
                               Beam beam, Incident incident);

/// Incoherent f/(1-f) mixture of the plus and minus pure fringes, with the
/// oscillating part scaled by instrument_contrast about the mean.
FringeCoefficients mixed_fringe(const BeamConfig& config, Beam beam);

/// ||e^{i chi} P U^{-1} psi+ + P U psi+||^2 assembled literally from the
/// operator algebra.
double o_beam_intensity(PolarAngle theta, RotationAngle alpha, double chi_deg);

/// 2 sin^2(theta) sin^2(alpha/2) (1 + cos(chi - 180 deg)): the closed form
/// the operator expression must reproduce.
double o_beam_intensity_closed_form(PolarAngle theta, RotationAngle alpha,
                                    double chi_deg);

/// ||(e^{i chi} U^{-1} + U) psi+||^2, no spin analysis.
double h_beam_intensity(PolarAngle theta, RotationAngle alpha, double chi_deg);

double mixed_intensity(const BeamConfig& config, Beam beam, double chi_deg);

struct Interferogram {
  std::vector<double> chi_deg;
  std::vector<double> counts;  // expected values, or integer Poisson draws
  Beam beam = Beam::O;
  BeamConfig config;
};

/// steps points start, start+h, ... spanning [start_deg, end_deg), h = span/steps.
std::vector<double> chi_grid(double start_deg, double end_deg,
                             std::size_t steps);

/// Expected counts = mean_counts * mixed intensity at each chi; when
/// noise_seed is set each point is replaced by a Poisson draw from a stream
/// keyed by (seed, beam, alpha, point index), so results do not depend on
/// evaluation order.
Interferogram synthesize_interferogram(const BeamConfig& config, Beam beam,
                                       std::vector<double> chi_deg);

/// Serial reference for synthesize_interferogram; bit-identical output.
Interferogram synthesize_interferogram_serial(const BeamConfig& config,
                                              Beam beam,
                                              std::vector<double> chi_deg);

/// The paired alpha = 0 interferogram on the same grid (rotators off).
Interferogram reference_interferogram(const BeamConfig& config, Beam beam,
                                      std::vector<double> chi_deg);

struct CsvParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kSchemaVersion = 1;

/// Header `chi_deg,counts`, one row per point, full-precision values.
void write_interferogram_csv(std::ostream& out, const Interferogram& g);

/// Parses the chi/counts columns; source_name is used in error messages.
/// Throws CsvParseError with a line number on malformed input.
Interferogram read_interferogram_csv(std::istream& in,
                                     const std::string& source_name);

std::string beam_label(Beam beam);
Beam beam_from_label(const std::string& label);

/// CSV plus a same-stem .json sidecar holding the full config snapshot.
void save_interferogram(const std::filesystem::path& csv_path,
                        const Interferogram& g);

/// Reads the CSV and, when present, the .json sidecar written alongside.
Interferogram load_interferogram(const std::filesystem::path& csv_path);

}  // namespace nphase
