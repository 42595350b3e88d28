#include "nphase/beamline.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>

#include "nphase/json_io.hpp"

namespace nphase {

void validate(const BeamConfig& config) {
  if (!(config.polarization_fraction >= 0.0 &&
        config.polarization_fraction <= 1.0)) {
    throw std::invalid_argument("polarization_fraction must lie in [0, 1]");
  }
  if (!(config.instrument_contrast >= 0.0 &&
        config.instrument_contrast <= 1.0)) {
    throw std::invalid_argument("instrument_contrast must lie in [0, 1]");
  }
  if (!(config.mean_counts >= 0.0)) {
    throw std::invalid_argument("mean_counts must be non-negative");
  }
}

double FringeCoefficients::at(double chi_deg) const {
  return mean + (oscillation * std::polar(1.0, -to_radians(chi_deg))).real();
}

double FringeCoefficients::amplitude() const { return std::abs(oscillation); }

double FringeCoefficients::phase_deg() const {
  return normalize_phase_deg(to_degrees(std::arg(oscillation)));
}

double FringeCoefficients::visibility() const {
  return mean > 0.0 ? amplitude() / mean : 0.0;
}

namespace {

struct PathStates {
  Spinor reversed_path;  // carries the e^{i chi} factor
  Spinor forward_path;
};

PathStates apparatus_output(PolarAngle theta, RotationAngle alpha, Beam beam,
                            Incident incident) {
  const Spinor plus = make_plus_state(theta);
  const Spinor in = incident == Incident::plus ? plus : orthogonal(plus);
  const Operator2 u = precession_unitary(alpha);
  const Operator2 u_inv = precession_unitary(RotationAngle{-alpha.degrees()});
  Spinor v1 = u_inv * in;
  Spinor v2 = u * in;
  if (beam == Beam::O) {
    const Operator2 analyzer = projector(orthogonal(plus));
    v1 = analyzer * v1;
    v2 = analyzer * v2;
  }
  return {v1, v2};
}

}  // namespace

FringeCoefficients pure_fringe(PolarAngle theta, RotationAngle alpha,
                               Beam beam, Incident incident) {
  const PathStates paths = apparatus_output(theta, alpha, beam, incident);
  const double n1 = std::norm(paths.reversed_path.up) +
                    std::norm(paths.reversed_path.down);
  const double n2 =
      std::norm(paths.forward_path.up) + std::norm(paths.forward_path.down);
  FringeCoefficients fr;
  fr.mean = n1 + n2;
  fr.oscillation =
      2.0 * inner_product(paths.reversed_path, paths.forward_path);
  return fr;
}

FringeCoefficients mixed_fringe(const BeamConfig& config, Beam beam) {
  validate(config);
  const double f = config.polarization_fraction;
  const FringeCoefficients plus =
      pure_fringe(config.theta, config.alpha, beam, Incident::plus);
  const FringeCoefficients minus =
      pure_fringe(config.theta, config.alpha, beam, Incident::minus);
  FringeCoefficients fr;
  fr.mean = f * plus.mean + (1.0 - f) * minus.mean;
  fr.oscillation = config.instrument_contrast *
                   (f * plus.oscillation + (1.0 - f) * minus.oscillation);
  return fr;
}

namespace {

double two_path_intensity(const PathStates& paths, double chi_deg) {
  const complexd phase = std::polar(1.0, to_radians(chi_deg));
  const Spinor combined{phase * paths.reversed_path.up + paths.forward_path.up,
                        phase * paths.reversed_path.down +
                            paths.forward_path.down};
  return std::norm(combined.up) + std::norm(combined.down);
}

}  // namespace

double o_beam_intensity(PolarAngle theta, RotationAngle alpha,
                        double chi_deg) {
  return two_path_intensity(
      apparatus_output(theta, alpha, Beam::O, Incident::plus), chi_deg);
}

double o_beam_intensity_closed_form(PolarAngle theta, RotationAngle alpha,
                                    double chi_deg) {
  const double st = std::sin(theta.radians());
  const double sh = std::sin(alpha.radians() / 2.0);
  return 2.0 * st * st * sh * sh *
         (1.0 + std::cos(to_radians(chi_deg) - kPi));
}

double h_beam_intensity(PolarAngle theta, RotationAngle alpha,
                        double chi_deg) {
  return two_path_intensity(
      apparatus_output(theta, alpha, Beam::H, Incident::plus), chi_deg);
}

double mixed_intensity(const BeamConfig& config, Beam beam, double chi_deg) {
  return mixed_fringe(config, beam).at(chi_deg);
}

std::vector<double> chi_grid(double start_deg, double end_deg,
                             std::size_t steps) {
  if (steps == 0 || !(end_deg > start_deg)) {
    throw std::invalid_argument("chi_grid: need end > start and steps >= 1");
  }
  std::vector<double> grid(steps);
  const double h = (end_deg - start_deg) / static_cast<double>(steps);
  for (std::size_t i = 0; i < steps; ++i) {
    grid[i] = start_deg + h * static_cast<double>(i);
  }
  return grid;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Stream key mixing seed, beam and rotation angle, so that rotated and
/// reference interferograms drawn from the same seed are independent.
std::uint64_t stream_key(const BeamConfig& config, Beam beam) {
  std::uint64_t key = splitmix64(*config.noise_seed);
  key ^= splitmix64(std::bit_cast<std::uint64_t>(config.alpha.degrees()) +
                    (beam == Beam::O ? 1ULL : 2ULL));
  return key;
}

double poisson_draw(std::uint64_t key, std::uint64_t index, double mean) {
  if (!(mean > 0.0)) {
    return 0.0;
  }
  std::mt19937_64 engine(splitmix64(key ^ splitmix64(index + 1)));
  std::poisson_distribution<long long> draw(mean);
  return static_cast<double>(draw(engine));
}

void check_grid(const std::vector<double>& chi_deg) {
  for (std::size_t i = 1; i < chi_deg.size(); ++i) {
    if (!(chi_deg[i] > chi_deg[i - 1])) {
      throw std::invalid_argument("chi grid must be strictly increasing");
    }
  }
}

double point_counts(const FringeCoefficients& fringe,
                    const BeamConfig& config, Beam beam, double chi,
                    std::uint64_t key, std::uint64_t index) {
  const double expected = config.mean_counts * fringe.at(chi);
  if (!config.noise_seed) {
    return expected;
  }
  return poisson_draw(key, index, expected);
}

}  // namespace

Interferogram synthesize_interferogram_serial(const BeamConfig& config,
                                              Beam beam,
                                              std::vector<double> chi_deg) {
  check_grid(chi_deg);
  const FringeCoefficients fringe = mixed_fringe(config, beam);
  const std::uint64_t key = config.noise_seed ? stream_key(config, beam) : 0;
  Interferogram g;
  g.beam = beam;
  g.config = config;
  g.counts.resize(chi_deg.size());
  for (std::size_t i = 0; i < chi_deg.size(); ++i) {
    g.counts[i] = point_counts(fringe, config, beam, chi_deg[i], key, i);
  }
  g.chi_deg = std::move(chi_deg);
  return g;
}

Interferogram synthesize_interferogram(const BeamConfig& config, Beam beam,
                                       std::vector<double> chi_deg) {
  check_grid(chi_deg);
  const FringeCoefficients fringe = mixed_fringe(config, beam);
  const std::uint64_t key = config.noise_seed ? stream_key(config, beam) : 0;
  Interferogram g;
  g.beam = beam;
  g.config = config;
  g.counts.resize(chi_deg.size());
  const std::int64_t n = static_cast<std::int64_t>(chi_deg.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    g.counts[idx] = point_counts(fringe, config, beam, chi_deg[idx], key, idx);
  }
  g.chi_deg = std::move(chi_deg);
  return g;
}

Interferogram reference_interferogram(const BeamConfig& config, Beam beam,
                                      std::vector<double> chi_deg) {
  BeamConfig reference = config;
  reference.alpha = RotationAngle{0.0};
  return synthesize_interferogram(reference, beam, std::move(chi_deg));
}

void write_interferogram_csv(std::ostream& out, const Interferogram& g) {
  out << "chi_deg,counts\n";
  char buf[80];
  for (std::size_t i = 0; i < g.chi_deg.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", g.chi_deg[i],
                  g.counts[i]);
    out << buf;
  }
}

Interferogram read_interferogram_csv(std::istream& in,
                                     const std::string& source_name) {
  Interferogram g;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw CsvParseError(source_name + ": empty file");
  }
  ++line_no;
  if (line.ends_with('\r')) {
    line.pop_back();
  }
  if (line != "chi_deg,counts") {
    throw CsvParseError(source_name + ":1: expected header 'chi_deg,counts'");
  }
  while (std::getline(in, line)) {
    ++line_no;
    if (line.ends_with('\r')) {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const std::size_t comma = line.find(',');
    const std::string where =
        source_name + ":" + std::to_string(line_no) + ": ";
    if (comma == std::string::npos) {
      throw CsvParseError(where + "expected two comma-separated numbers");
    }
    char* end = nullptr;
    const std::string chi_text = line.substr(0, comma);
    const std::string counts_text = line.substr(comma + 1);
    const double chi = std::strtod(chi_text.c_str(), &end);
    if (end == chi_text.c_str() || *end != '\0') {
      throw CsvParseError(where + "malformed chi value '" + chi_text + "'");
    }
    const double counts = std::strtod(counts_text.c_str(), &end);
    if (end == counts_text.c_str() || *end != '\0') {
      throw CsvParseError(where + "malformed counts value '" + counts_text +
                          "'");
    }
    if (!g.chi_deg.empty() && !(chi > g.chi_deg.back())) {
      throw CsvParseError(where + "chi values must be strictly increasing");
    }
    if (counts < 0.0) {
      throw CsvParseError(where + "counts must be non-negative");
    }
    g.chi_deg.push_back(chi);
    g.counts.push_back(counts);
  }
  return g;
}

std::string beam_label(Beam beam) { return beam == Beam::O ? "o" : "h"; }

Beam beam_from_label(const std::string& label) {
  if (label == "o" || label == "O") {
    return Beam::O;
  }
  if (label == "h" || label == "H") {
    return Beam::H;
  }
  throw std::invalid_argument("unknown beam label '" + label + "'");
}

namespace {

std::filesystem::path sidecar_path(const std::filesystem::path& csv_path) {
  std::filesystem::path p = csv_path;
  p.replace_extension(".json");
  return p;
}

}  // namespace

void save_interferogram(const std::filesystem::path& csv_path,
                        const Interferogram& g) {
  std::ofstream csv(csv_path);
  if (!csv) {
    throw std::runtime_error("cannot open '" + csv_path.string() +
                             "' for writing");
  }
  write_interferogram_csv(csv, g);
  std::ofstream sidecar(sidecar_path(csv_path));
  if (!sidecar) {
    throw std::runtime_error("cannot open '" +
                             sidecar_path(csv_path).string() +
                             "' for writing");
  }
  sidecar << config_json(g.config, g.beam).dump(2) << '\n';
}

Interferogram load_interferogram(const std::filesystem::path& csv_path) {
  std::ifstream csv(csv_path);
  if (!csv) {
    throw std::runtime_error("cannot open '" + csv_path.string() + "'");
  }
  Interferogram g = read_interferogram_csv(csv, csv_path.string());
  const std::filesystem::path side = sidecar_path(csv_path);
  if (std::filesystem::exists(side)) {
    std::ifstream meta(side);
    nlohmann::json j;
    meta >> j;
    Beam beam = Beam::O;
    g.config = config_from_json(j, &beam);
    g.beam = beam;
  }
  return g;
}

nlohmann::json config_json(const BeamConfig& config, Beam beam) {
  nlohmann::json j{{"schema_version", kSchemaVersion},
                   {"beam", beam_label(beam)},
                   {"theta_deg", config.theta.degrees()},
                   {"alpha_deg", config.alpha.degrees()},
                   {"polarization_fraction", config.polarization_fraction},
                   {"instrument_contrast", config.instrument_contrast},
                   {"mean_counts", config.mean_counts}};
  if (config.noise_seed) {
    j["noise_seed"] = *config.noise_seed;
  } else {
    j["noise_seed"] = nullptr;
  }
  return j;
}

BeamConfig config_from_json(const nlohmann::json& j, Beam* beam) {
  BeamConfig config{PolarAngle{j.at("theta_deg").get<double>()},
                    RotationAngle{j.at("alpha_deg").get<double>()}};
  config.polarization_fraction = j.at("polarization_fraction").get<double>();
  config.instrument_contrast = j.at("instrument_contrast").get<double>();
  config.mean_counts = j.at("mean_counts").get<double>();
  if (j.contains("noise_seed") && !j.at("noise_seed").is_null()) {
    config.noise_seed = j.at("noise_seed").get<std::uint64_t>();
  }
  validate(config);
  if (beam != nullptr) {
    *beam = beam_from_label(j.at("beam").get<std::string>());
  }
  return config;
}

}  // namespace nphase
