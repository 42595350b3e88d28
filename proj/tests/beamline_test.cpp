#include "nphase/beamline.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "nphase/json_io.hpp"
#include "oracles.hpp"

using namespace nphase;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("o-beam intensity examples") {
  CHECK(o_beam_intensity(PolarAngle{90.0}, RotationAngle{180.0}, 180.0) ==
        doctest::Approx(4.0).epsilon(1e-12));
  CHECK(o_beam_intensity(PolarAngle{90.0}, RotationAngle{180.0}, 0.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(o_beam_intensity(PolarAngle{90.0}, RotationAngle{0.0}, 123.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("h-beam intensity examples") {
  for (double chi : {0.0, 45.0, 111.0, 300.0}) {
    CHECK(h_beam_intensity(PolarAngle{90.0}, RotationAngle{90.0}, chi) ==
          doctest::Approx(2.0).epsilon(1e-12));
  }
  CHECK(h_beam_intensity(PolarAngle{90.0}, RotationAngle{180.0}, 0.0) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK(h_beam_intensity(PolarAngle{45.0}, RotationAngle{0.0}, 0.0) ==
        doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("operator form agrees with the closed form") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> theta_dist(0.0, 180.0);
  std::uniform_real_distribution<double> alpha_dist(-400.0, 400.0);
  std::uniform_real_distribution<double> chi_dist(0.0, 720.0);
  for (int i = 0; i < 2000; ++i) {
    const PolarAngle theta{theta_dist(rng)};
    const RotationAngle alpha{alpha_dist(rng)};
    const double chi = chi_dist(rng);
    CHECK(std::abs(o_beam_intensity(theta, alpha, chi) -
                   o_beam_intensity_closed_form(theta, alpha, chi)) < 1e-12);
  }
}

TEST_CASE("h-beam mean intensity over a period is 2") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> theta_dist(0.0, 180.0);
  std::uniform_real_distribution<double> alpha_dist(-400.0, 400.0);
  for (int i = 0; i < 50; ++i) {
    const PolarAngle theta{theta_dist(rng)};
    const RotationAngle alpha{alpha_dist(rng)};
    double mean = 0.0;
    const int n = 360;
    for (int k = 0; k < n; ++k) {
      mean += h_beam_intensity(theta, alpha, 360.0 * k / n);
    }
    mean /= n;
    CHECK(std::abs(mean - 2.0) < 1e-12);
  }
}

TEST_CASE("two interferometer outputs conserve flux without analysis") {
  // o-beam-style expression with the complementary (minus) combiner sign
  const PolarAngle theta{67.0};
  const RotationAngle alpha{113.0};
  const Spinor in = make_plus_state(theta);
  const Operator2 u = precession_unitary(alpha);
  const Operator2 ui = precession_unitary(RotationAngle{-alpha.degrees()});
  for (double chi : {0.0, 30.0, 101.0, 280.0}) {
    const complexd phase = std::polar(1.0, to_radians(chi));
    const Spinor v1 = ui * in;
    const Spinor v2 = u * in;
    const Spinor sum{phase * v1.up + v2.up, phase * v1.down + v2.down};
    const Spinor diff{phase * v1.up - v2.up, phase * v1.down - v2.down};
    const double total = std::norm(sum.up) + std::norm(sum.down) +
                         std::norm(diff.up) + std::norm(diff.down);
    CHECK(total == doctest::Approx(4.0).epsilon(1e-12));
  }
}

TEST_CASE("o-beam amplitude peaks at alpha=180 and falls away from it") {
  const PolarAngle theta{60.0};
  double previous = -1.0;
  for (double alpha = 10.0; alpha <= 180.0; alpha += 10.0) {
    const double amp =
        pure_fringe(theta, RotationAngle{alpha}, Beam::O, Incident::plus)
            .amplitude();
    CHECK(amp > previous);
    previous = amp;
  }
  for (double alpha = 190.0; alpha < 360.0; alpha += 10.0) {
    const double amp =
        pure_fringe(theta, RotationAngle{alpha}, Beam::O, Incident::plus)
            .amplitude();
    CHECK(amp < previous);
    previous = amp;
  }
}

TEST_CASE("ideal h-beam visibility follows the overlap magnitude") {
  for (double theta : {30.0, 60.0, 90.0, 135.0}) {
    for (double alpha : {45.0, 67.5, 90.0, 180.0, 225.0}) {
      const FringeCoefficients fr =
          pure_fringe(PolarAngle{theta}, RotationAngle{alpha}, Beam::H,
                      Incident::plus);
      const double ca = std::cos(oracles::rad(alpha));
      const double sa = std::sin(oracles::rad(alpha));
      const double ct = std::cos(oracles::rad(theta));
      CHECK(fr.visibility() ==
            doctest::Approx(std::sqrt(ca * ca + ct * ct * sa * sa))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("pure mixture limit") {
  BeamConfig config{PolarAngle{60.0}, RotationAngle{90.0}};
  config.polarization_fraction = 1.0;
  for (double chi : {0.0, 45.0, 200.0}) {
    CHECK(mixed_intensity(config, Beam::O, chi) ==
          doctest::Approx(o_beam_intensity(config.theta, config.alpha, chi))
              .epsilon(1e-12));
    CHECK(mixed_intensity(config, Beam::H, chi) ==
          doctest::Approx(h_beam_intensity(config.theta, config.alpha, chi))
              .epsilon(1e-12));
  }
}

TEST_CASE("half mixture keeps the 180 degree o-beam phase only beyond 90") {
  for (double alpha : {100.0, 135.0, 180.0, 250.0}) {
    BeamConfig config{PolarAngle{90.0}, RotationAngle{alpha}};
    config.polarization_fraction = 0.5;
    const FringeCoefficients fr = mixed_fringe(config, Beam::O);
    CHECK(oracles::circular_diff_deg(fr.phase_deg(), 180.0) < 1e-9);
  }
  for (double alpha : {30.0, 60.0, 85.0, 290.0}) {
    BeamConfig config{PolarAngle{90.0}, RotationAngle{alpha}};
    config.polarization_fraction = 0.5;
    const FringeCoefficients fr = mixed_fringe(config, Beam::O);
    CHECK(oracles::circular_diff_deg(fr.phase_deg(), 0.0) < 1e-9);
  }
}

TEST_CASE("mixed fringe matches the density-matrix route") {
  for (double theta : {30.0, 60.0, 135.0}) {
    for (double alpha : {45.0, 67.5, 90.0, 180.0, 225.0, -90.0}) {
      for (double f : {0.87, 0.92, 0.5}) {
        BeamConfig config{PolarAngle{theta}, RotationAngle{alpha}};
        config.polarization_fraction = f;
        config.instrument_contrast = 0.64;
        const oracles::DensityMatrixBeam oracle(theta, alpha, true, f, 0.64);
        for (double chi : {0.0, 33.0, 120.0, 251.0, 340.0}) {
          CHECK(mixed_intensity(config, Beam::O, chi) ==
                doctest::Approx(oracle.intensity(chi)).epsilon(1e-12));
        }
        const oracles::DensityMatrixBeam unanalyzed(theta, alpha, false, f,
                                                    0.64);
        for (double chi : {10.0, 77.0, 300.0}) {
          CHECK(mixed_intensity(config, Beam::H, chi) ==
                doctest::Approx(unanalyzed.intensity(chi)).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("mixed o-beam fitted phases, frozen reference values") {
  // density-matrix oracle values computed ahead of the build, f = 0.87
  struct Case {
    double theta, alpha, phase_deg;
  };
  const Case cases[] = {
      {30.0, 67.5, -94.043637562}, {30.0, 90.0, -129.406998588},
      {30.0, 225.0, 162.325585678}, {60.0, 67.5, -153.709393680},
      {60.0, 90.0, -166.817034841}, {60.0, 225.0, 175.354599343},
      {135.0, 67.5, 127.196544009}, {135.0, 90.0, 153.577868851},
      {135.0, 225.0, -170.942360123}};
  for (const Case& c : cases) {
    BeamConfig config{PolarAngle{c.theta}, RotationAngle{c.alpha}};
    config.polarization_fraction = 0.87;
    CHECK(oracles::circular_diff_deg(mixed_fringe(config, Beam::O).phase_deg(),
                                     c.phase_deg) < 1e-8);
  }
}

TEST_CASE("config validation") {
  BeamConfig config{PolarAngle{90.0}, RotationAngle{90.0}};
  config.polarization_fraction = 1.2;
  CHECK_THROWS_AS(validate(config), std::invalid_argument);
  config.polarization_fraction = 0.9;
  config.instrument_contrast = -0.1;
  CHECK_THROWS_AS(validate(config), std::invalid_argument);
  config.instrument_contrast = 0.5;
  config.mean_counts = -1.0;
  CHECK_THROWS_AS(validate(config), std::invalid_argument);
}

TEST_CASE("synthesis modes") {
  BeamConfig config{PolarAngle{90.0}, RotationAngle{180.0}};
  config.mean_counts = 2000.0;
  const std::vector<double> grid = chi_grid(0.0, 720.0, 32);

  SUBCASE("noise-free values are the expectations") {
    const Interferogram g = synthesize_interferogram(config, Beam::O, grid);
    REQUIRE(g.counts.size() == 32);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      CHECK(g.counts[i] ==
            doctest::Approx(2000.0 * mixed_intensity(config, Beam::O, grid[i]))
                .epsilon(1e-12));
    }
  }

  SUBCASE("zero mean counts") {
    config.mean_counts = 0.0;
    config.noise_seed = 9;
    const Interferogram g = synthesize_interferogram(config, Beam::O, grid);
    for (double c : g.counts) CHECK(c == 0.0);
  }

  SUBCASE("seeded draws are integers and reproducible") {
    config.noise_seed = 12345;
    const Interferogram a = synthesize_interferogram(config, Beam::O, grid);
    const Interferogram b = synthesize_interferogram(config, Beam::O, grid);
    REQUIRE(a.counts.size() == b.counts.size());
    bool any_nonzero = false;
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
      CHECK(a.counts[i] == b.counts[i]);
      CHECK(a.counts[i] == std::floor(a.counts[i]));
      any_nonzero = any_nonzero || a.counts[i] > 0.0;
    }
    CHECK(any_nonzero);

    config.noise_seed = 12346;
    const Interferogram c = synthesize_interferogram(config, Beam::O, grid);
    bool all_equal = true;
    for (std::size_t i = 0; i < a.counts.size(); ++i) {
      all_equal = all_equal && a.counts[i] == c.counts[i];
    }
    CHECK_FALSE(all_equal);
  }

  SUBCASE("rotated and reference draws are decorrelated") {
    config.noise_seed = 77;
    const Interferogram rotated =
        synthesize_interferogram(config, Beam::O, grid);
    const Interferogram reference =
        reference_interferogram(config, Beam::O, grid);
    CHECK(reference.config.alpha.degrees() == 0.0);
    bool identical = true;
    for (std::size_t i = 0; i < rotated.counts.size(); ++i) {
      identical = identical && rotated.counts[i] == reference.counts[i];
    }
    CHECK_FALSE(identical);
  }

  SUBCASE("grid must increase") {
    CHECK_THROWS_AS(
        synthesize_interferogram(config, Beam::O, {0.0, 10.0, 10.0}),
        std::invalid_argument);
  }
}

TEST_CASE("poisson sample mean converges to the expectation") {
  BeamConfig config{PolarAngle{90.0}, RotationAngle{180.0}};
  config.mean_counts = 500.0;
  const double chi = 135.0;
  const double expectation =
      config.mean_counts * mixed_intensity(config, Beam::O, chi);
  double sum = 0.0;
  const int reps = 10000;
  for (int seed = 0; seed < reps; ++seed) {
    config.noise_seed = static_cast<std::uint64_t>(seed);
    sum += synthesize_interferogram(config, Beam::O, {chi}).counts[0];
  }
  const double mean = sum / reps;
  const double standard_error = std::sqrt(expectation / reps);
  CHECK(std::abs(mean - expectation) < 3.0 * standard_error);
}

TEST_CASE("interferogram csv round trip") {
  BeamConfig config{PolarAngle{60.0}, RotationAngle{90.0}};
  config.polarization_fraction = 0.87;
  config.instrument_contrast = 0.64;
  config.mean_counts = 1234.5;

  SUBCASE("noise-free full precision") {
    const Interferogram g =
        synthesize_interferogram(config, Beam::O, chi_grid(0.0, 720.0, 32));
    std::stringstream buffer;
    write_interferogram_csv(buffer, g);
    const Interferogram back = read_interferogram_csv(buffer, "<memory>");
    REQUIRE(back.chi_deg.size() == g.chi_deg.size());
    for (std::size_t i = 0; i < g.chi_deg.size(); ++i) {
      CHECK(back.chi_deg[i] == g.chi_deg[i]);
      CHECK(back.counts[i] == g.counts[i]);
    }
  }

  SUBCASE("files plus sidecar") {
    config.noise_seed = 2024;
    const Interferogram g =
        synthesize_interferogram(config, Beam::H, chi_grid(0.0, 720.0, 16));
    const auto path = temp_file("nphase_roundtrip.csv");
    save_interferogram(path, g);
    const Interferogram back = load_interferogram(path);
    CHECK(back.beam == Beam::H);
    CHECK(back.config.theta.degrees() == g.config.theta.degrees());
    CHECK(back.config.alpha.degrees() == g.config.alpha.degrees());
    CHECK(back.config.polarization_fraction ==
          g.config.polarization_fraction);
    CHECK(back.config.instrument_contrast == g.config.instrument_contrast);
    CHECK(back.config.mean_counts == g.config.mean_counts);
    REQUIRE(back.config.noise_seed.has_value());
    CHECK(*back.config.noise_seed == 2024);
    for (std::size_t i = 0; i < g.chi_deg.size(); ++i) {
      CHECK(back.chi_deg[i] == g.chi_deg[i]);
      CHECK(back.counts[i] == g.counts[i]);
    }
    std::filesystem::remove(path);
    std::filesystem::path sidecar = path;
    sidecar.replace_extension(".json");
    std::filesystem::remove(sidecar);
  }

  SUBCASE("parse errors carry line numbers") {
    std::stringstream bad("chi_deg,counts\n0,1\nnope\n");
    try {
      read_interferogram_csv(bad, "bad.csv");
      FAIL("expected CsvParseError");
    } catch (const CsvParseError& e) {
      CHECK(std::string(e.what()).find("bad.csv:3") != std::string::npos);
    }
    std::stringstream wrong_header("a,b\n");
    CHECK_THROWS_AS(read_interferogram_csv(wrong_header, "x.csv"),
                    CsvParseError);
    std::stringstream not_increasing("chi_deg,counts\n10,1\n5,2\n");
    CHECK_THROWS_AS(read_interferogram_csv(not_increasing, "y.csv"),
                    CsvParseError);
  }
}
