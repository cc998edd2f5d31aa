#include "duet/quantum.hpp"

#include <doctest.h>

#include "test_util.hpp"

#include <cmath>
#include <stdexcept>

using namespace duet;
using namespace duet::testing;

TEST_CASE("phase_of_state at trivial geometries") {
    PhaseConfig config;
    config.wavelength_m = 493e-9;
    config.atom_separation_m = 0.6;
    config.herald_path_m = 0.6;
    CHECK(phase_of_state(config) == doctest::Approx(0.0).epsilon(1e-12));

    config.atom_separation_m = 0.6 + 493e-9 / 2.0;
    CHECK(phase_of_state(config) == doctest::Approx(M_PI).epsilon(1e-9));
}

TEST_CASE("phase_of_state against exact rational reduction") {
    // z = 5.2 um, d = 0.6 m, lambda = 493 nm: (z - d)/lambda is exactly
    // -599994800/493 for the decimal inputs, so the reduced phase is
    // 2 pi (493 - 599994800 mod 493)/493, evaluated here in integer
    // arithmetic.
    const long long numerator = 599994800LL;
    const long long remainder = numerator % 493LL;  // 489
    CHECK(remainder == 489LL);
    const double expected = 2.0 * M_PI * static_cast<double>(493LL - remainder) / 493.0;

    PhaseConfig config;
    config.wavelength_m = 493e-9;
    config.atom_separation_m = 5.2e-6;
    config.herald_path_m = 0.6;
    CHECK(phase_of_state(config) == doctest::Approx(expected).epsilon(1e-8));

    CHECK_THROWS_AS(phase_of_state(PhaseConfig{.wavelength_m = 0.0}), std::invalid_argument);
}

TEST_CASE("phase difference depends only on the path change") {
    PhaseConfig config;
    config.witness_path_m = config.herald_path_m + 493e-9 / 4.0;
    CHECK(config.phase_difference() == doctest::Approx(M_PI / 2.0).epsilon(1e-9));
}

TEST_CASE("intensity for the reference states") {
    CHECK(intensity(PureTwoQubitState::bell(0.0), 0.3, 0.3) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(intensity(PureTwoQubitState::zeta(), 0.1, 2.7) == doctest::Approx(1.0).epsilon(1e-12));
    // General-state formula at phi_a - phi_b = pi: 1 + 2 (1/4) cos(pi) = 1/2.
    CHECK(intensity(PureTwoQubitState::xi(), M_PI, 0.0) == doctest::Approx(0.5).epsilon(1e-12));

    PureTwoQubitState unnormalized{Complex(1.0, 0.0), Complex(1.0, 0.0), {}, {}};
    CHECK_THROWS_AS(intensity(unnormalized, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("intensity is nonnegative and its extremes give the visibility") {
    for (std::uint32_t trial = 0; trial < 50; ++trial) {
        auto stream = make_stream(trial, 7);
        const PureTwoQubitState state = random_pure_state(stream);
        double i_max = 0.0;
        double i_min = std::numeric_limits<double>::infinity();
        for (int step = 0; step <= 4096; ++step) {
            const double phase = 2.0 * M_PI * step / 4096.0;
            const double value = intensity(state, phase, 0.0);
            CHECK(value >= 0.0);
            i_max = std::max(i_max, value);
            i_min = std::min(i_min, value);
        }
        const double denom = i_max + i_min;
        if (denom > 1e-12) {
            // The 4096-point sweep resolves the extremes to ~(pi/4096)^2.
            CHECK(visibility_pure(state) ==
                  doctest::Approx((i_max - i_min) / denom).epsilon(1e-6));
        }
    }
}

TEST_CASE("visibility of the reference states") {
    CHECK(visibility_pure(PureTwoQubitState::bell(1.3)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(visibility_pure(PureTwoQubitState::xi()) == doctest::Approx(0.5).epsilon(1e-12));

    const PureTwoQubitState lopsided{Complex(std::sqrt(0.9), 0.0), Complex(std::sqrt(0.1), 0.0),
                                     {}, {}};
    CHECK(visibility_pure(lopsided) == doctest::Approx(0.6).epsilon(1e-12));

    const PureTwoQubitState dark{{}, {}, {}, Complex(1.0, 0.0)};  // |g+,g+>
    CHECK_THROWS_AS(visibility_pure(dark), std::domain_error);
}

TEST_CASE("concurrence of pure states") {
    CHECK(concurrence_pure(PureTwoQubitState::bell(0.0)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(concurrence_pure(PureTwoQubitState::xi()) == doctest::Approx(0.0).epsilon(1e-12));
    const PureTwoQubitState lopsided{Complex(std::sqrt(0.9), 0.0), Complex(std::sqrt(0.1), 0.0),
                                     {}, {}};
    CHECK(concurrence_pure(lopsided) == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("visibility equals concurrence on the single-excitation subspace") {
    double worst = 0.0;
    for (std::uint32_t trial = 0; trial < 10000; ++trial) {
        auto stream = make_stream(trial, 11);
        const PureTwoQubitState state = random_single_excitation_state(stream);
        worst = std::max(worst,
                         std::abs(visibility_pure(state) - concurrence_pure(state)));
    }
    CHECK(worst < 1e-12);

    // ...and the product state |xi> breaks the equality: V = 1/2, C = 0.
    CHECK(visibility_pure(PureTwoQubitState::xi()) == 0.5);
    CHECK(concurrence_pure(PureTwoQubitState::xi()) == 0.0);
}

TEST_CASE("mixed-state concurrence on reference matrices") {
    CHECK(concurrence_mixed(DensityMatrix::from_pure(PureTwoQubitState::bell(0.4))) ==
          doctest::Approx(1.0).epsilon(1e-10));
    CHECK(concurrence_mixed(DensityMatrix::maximally_mixed()) ==
          doctest::Approx(0.0).epsilon(1e-10));

    // X-state with the populations and coherence inferred in the experiment.
    const DensityMatrix rho = x_state(0.455, 0.455, 0.045, 0.045, Complex(0.195, 0.0));
    CHECK(concurrence_mixed(rho) == doctest::Approx(0.30).epsilon(1e-10));
    CHECK(concurrence_mixed(rho) ==
          doctest::Approx(x_state_concurrence(0.455, 0.455, 0.045, 0.045, Complex(0.195, 0.0)))
              .epsilon(1e-10));
}

TEST_CASE("mixed-state concurrence matches the closed form on random X-states") {
    for (std::uint32_t trial = 0; trial < 200; ++trial) {
        auto stream = make_stream(trial, 13);
        double p[4];
        double total = 0.0;
        for (double& value : p) {
            value = stream.next_double() + 1e-3;
            total += value;
        }
        for (double& value : p) value /= total;
        const double inner_mag = stream.next_double() * std::sqrt(p[0] * p[1]);
        const double outer_mag = stream.next_double() * std::sqrt(p[2] * p[3]);
        const Complex inner = std::polar(inner_mag, 2.0 * M_PI * stream.next_double());
        const Complex outer = std::polar(outer_mag, 2.0 * M_PI * stream.next_double());
        const DensityMatrix rho = x_state(p[0], p[1], p[2], p[3], inner, outer);
        CHECK(concurrence_mixed(rho) ==
              doctest::Approx(x_state_concurrence(p[0], p[1], p[2], p[3], inner, outer))
                  .epsilon(1e-9));
    }
}

TEST_CASE("mixed-state concurrence equals pure concurrence on projectors") {
    for (std::uint32_t trial = 0; trial < 1000; ++trial) {
        auto stream = make_stream(trial, 17);
        const PureTwoQubitState state = random_pure_state(stream);
        const double mixed = concurrence_mixed(DensityMatrix::from_pure(state));
        CHECK(std::abs(mixed - concurrence_pure(state)) < 1e-10);
    }
}

TEST_CASE("non-positive matrices are rejected") {
    DensityMatrix bad;
    bad.m.diagonal() << 0.6, 0.5, 0.0, -0.1;
    CHECK_THROWS_AS(concurrence_mixed(bad), std::invalid_argument);

    DensityMatrix skew;
    skew.m.diagonal() << 0.25, 0.25, 0.25, 0.25;
    skew.m(0, 1) = Complex(0.1, 0.0);  // missing conjugate partner
    CHECK_THROWS_AS(concurrence_mixed(skew), std::invalid_argument);

    DensityMatrix traceless;
    traceless.m.diagonal() << 0.5, 0.5, 0.5, 0.5;
    CHECK_THROWS_AS(concurrence_mixed(traceless), std::invalid_argument);
}

TEST_CASE("fidelity with the heralded target") {
    const double phi = 0.9;
    const DensityMatrix pure = DensityMatrix::from_pure(PureTwoQubitState::bell(phi));
    CHECK(fidelity_with_target(pure, phi) == doctest::Approx(1.0).epsilon(1e-12));

    const DensityMatrix rho = x_state(0.455, 0.455, 0.045, 0.045, Complex(0.195, 0.0));
    CHECK(fidelity_with_target(rho, 0.0) == doctest::Approx(0.65).epsilon(1e-12));
    CHECK(fidelity_with_target(rho, M_PI) == doctest::Approx(0.26).epsilon(1e-12));
}

TEST_CASE("fidelity is in [0,1] and is one only at the target") {
    for (std::uint32_t trial = 0; trial < 300; ++trial) {
        auto stream = make_stream(trial, 19);
        const DensityMatrix rho = random_density_matrix(stream);
        const double phi = 2.0 * M_PI * stream.next_double();
        const double fidelity = fidelity_with_target(rho, phi);
        CHECK(fidelity >= 0.0);
        CHECK(fidelity <= 1.0);
        if (fidelity > 1.0 - 1e-9) {
            const Eigen::Matrix4cd target =
                DensityMatrix::from_pure(PureTwoQubitState::bell(phi)).m;
            CHECK((rho.m - target).cwiseAbs().maxCoeff() < 1e-4);
        }
    }
    // Mixing in an orthogonal component strictly lowers the fidelity.
    DensityMatrix mixed;
    mixed.m = 0.9 * DensityMatrix::from_pure(PureTwoQubitState::bell(0.0)).m +
              0.1 * DensityMatrix::from_pure(PureTwoQubitState::zeta()).m;
    const double f = fidelity_with_target(mixed, 0.0);
    CHECK(f < 1.0);
    CHECK(f == doctest::Approx(0.9 + 0.1 * 0.5).epsilon(1e-12));
}

TEST_CASE("parity expectation reference values") {
    DensityMatrix both_up;
    both_up.m(3, 3) = 1.0;
    CHECK(parity_expectation(both_up, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));

    const DensityMatrix singlet = DensityMatrix::from_pure(PureTwoQubitState::bell(M_PI));
    for (double theta : {0.0, 0.4, M_PI / 2.0, 2.2})
        for (double phi_rf : {0.0, 1.1, 4.4})
            CHECK(parity_expectation(singlet, theta, phi_rf) ==
                  doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("parity expectation matches the brute-force oracle") {
    for (std::uint32_t trial = 0; trial < 40; ++trial) {
        auto stream = make_stream(trial, 23);
        const DensityMatrix rho = random_density_matrix(stream);
        for (double theta : {0.0, 0.3, M_PI / 2.0, 1.7, 2.9})
            for (double phi_rf : {0.0, 0.7, 2.1, 5.5}) {
                const double value = parity_expectation(rho, theta, phi_rf);
                CHECK(value == doctest::Approx(parity_oracle(rho, theta, phi_rf)).epsilon(1e-10));
                CHECK(value >= -1.0);
                CHECK(value <= 1.0);
                CHECK(value == doctest::Approx(parity_expectation(rho, theta, phi_rf + 2.0 * M_PI))
                                   .epsilon(1e-10));
            }
    }
}

TEST_CASE("parity of the heralded Bell state under a pi/2 pulse") {
    // The |g-,g+><g+,g-| coherence is invariant under global rotations about
    // z, so at theta = pi/2 the parity curve versus the pulse phase is the
    // constant 2 Re(a b*); the oracle sweep confirms both extremes.
    const DensityMatrix rho = DensityMatrix::from_pure(PureTwoQubitState::bell(M_PI / 2.0));
    double lo = 1.0;
    double hi = -1.0;
    for (int step = 0; step < 64; ++step) {
        const double phi_rf = 2.0 * M_PI * step / 64.0;
        const double oracle = parity_oracle(rho, M_PI / 2.0, phi_rf);
        CHECK(parity_expectation(rho, M_PI / 2.0, phi_rf) ==
              doctest::Approx(oracle).epsilon(1e-12));
        lo = std::min(lo, oracle);
        hi = std::max(hi, oracle);
    }
    CHECK(std::abs(lo) < 1e-12);
    CHECK(std::abs(hi) < 1e-12);
}

TEST_CASE("parity oscillates at twice the pulse phase for an outer coherence") {
    // (|g-,g-> + |g+,g+>)/sqrt(2): parity at theta = pi/2 swings at 2 phi_rf
    // with unit amplitude.
    DensityMatrix ghz = x_state(0.0, 0.0, 0.5, 0.5, Complex(0.0, 0.0), Complex(0.5, 0.0));
    double lo = 1.0;
    double hi = -1.0;
    for (int step = 0; step < 256; ++step) {
        const double phi_rf = 2.0 * M_PI * step / 256.0;
        const double value = parity_expectation(ghz, M_PI / 2.0, phi_rf);
        CHECK(value == doctest::Approx(parity_oracle(ghz, M_PI / 2.0, phi_rf)).epsilon(1e-10));
        CHECK(value == doctest::Approx(-std::cos(2.0 * phi_rf)).epsilon(1e-10));
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    CHECK(lo == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("parity pulse-area sweep reproduces the measured peak-to-peak swing") {
    // Populations 0.455/0.455/0.045/0.045 with coherence 0.195: the swing
    // between theta = 0 and theta = pi/2 is 0.39 - (-0.82) = 1.21, the
    // oscillation "amplitude" quoted as 1.2 +/- 0.1 (peak to peak).
    const DensityMatrix rho = x_state(0.455, 0.455, 0.045, 0.045, Complex(0.195, 0.0));
    double lo = 1.0;
    double hi = -1.0;
    for (int step = 0; step <= 512; ++step) {
        const double theta = 2.0 * M_PI * step / 512.0;
        const double value = parity_expectation(rho, theta, 0.0);
        lo = std::min(lo, value);
        hi = std::max(hi, value);
    }
    CHECK(hi - lo == doctest::Approx(1.21).epsilon(1e-9));
    CHECK(std::abs((hi - lo) - 1.2) <= 0.1);
}

TEST_CASE("X-state parity closed form") {
    for (std::uint32_t trial = 0; trial < 60; ++trial) {
        auto stream = make_stream(trial, 29);
        double p[4];
        double total = 0.0;
        for (double& value : p) {
            value = stream.next_double() + 1e-3;
            total += value;
        }
        for (double& value : p) value /= total;
        const Complex inner =
            std::polar(stream.next_double() * std::sqrt(p[0] * p[1]), 2.0 * M_PI * stream.next_double());
        const Complex outer =
            std::polar(stream.next_double() * std::sqrt(p[2] * p[3]), 2.0 * M_PI * stream.next_double());
        const DensityMatrix rho = x_state(p[0], p[1], p[2], p[3], inner, outer);

        const double sz_sz = p[2] + p[3] - p[0] - p[1];
        const double theta = M_PI * stream.next_double();
        const double phi_rf = 2.0 * M_PI * stream.next_double();
        const double expected =
            std::cos(theta) * std::cos(theta) * sz_sz +
            std::sin(theta) * std::sin(theta) *
                (2.0 * inner.real() -
                 2.0 * std::abs(outer) * std::cos(2.0 * phi_rf + std::arg(outer)));
        CHECK(parity_expectation(rho, theta, phi_rf) == doctest::Approx(expected).epsilon(1e-9));
    }
}
