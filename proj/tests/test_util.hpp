// Shared helpers for the unit suites: deterministic random states and
// independent oracles kept separate from the library implementation paths
// they check.

#pragma once

#include "duet/quantum.hpp"
#include "duet/rng.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>

namespace duet::testing {

inline RandomStream make_stream(std::uint32_t point, std::uint64_t seed = 42) {
    return RandomStream(seed, StreamDomain::test, point, 0);
}

inline PureTwoQubitState random_pure_state(RandomStream& stream) {
    std::array<Complex, 4> amp;
    double norm_sq = 0.0;
    for (auto& value : amp) {
        value = Complex(stream.next_gaussian(), stream.next_gaussian());
        norm_sq += std::norm(value);
    }
    const double inv = 1.0 / std::sqrt(norm_sq);
    return {amp[0] * inv, amp[1] * inv, amp[2] * inv, amp[3] * inv};
}

inline PureTwoQubitState random_single_excitation_state(RandomStream& stream) {
    Complex a(stream.next_gaussian(), stream.next_gaussian());
    Complex b(stream.next_gaussian(), stream.next_gaussian());
    const double inv = 1.0 / std::sqrt(std::norm(a) + std::norm(b));
    return {a * inv, b * inv, {}, {}};
}

inline DensityMatrix random_density_matrix(RandomStream& stream) {
    Eigen::Matrix4cd g;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            g(i, j) = Complex(stream.next_gaussian(), stream.next_gaussian());
    Eigen::Matrix4cd rho = g * g.adjoint();
    rho /= rho.trace().real();
    // Symmetrize away the last ulps so the tight Hermiticity gate passes.
    rho = 0.5 * (rho + rho.adjoint()).eval();
    return {rho};
}

// X-state in the storage basis: populations on the diagonal, one coherence
// between |g-,g+> and |g+,g->, one between |g-,g-> and |g+,g+>.
inline DensityMatrix x_state(double p1, double p2, double p3, double p4, Complex inner,
                             Complex outer = {}) {
    DensityMatrix rho;
    rho.m(0, 0) = p1;
    rho.m(1, 1) = p2;
    rho.m(2, 2) = p3;
    rho.m(3, 3) = p4;
    rho.m(0, 1) = inner;
    rho.m(1, 0) = std::conj(inner);
    rho.m(2, 3) = outer;
    rho.m(3, 2) = std::conj(outer);
    return rho;
}

// Closed-form Wootters concurrence of an X-state (independent of the
// eigenvalue route used by the library).
inline double x_state_concurrence(double p1, double p2, double p3, double p4, Complex inner,
                                  Complex outer = {}) {
    const double from_inner = std::abs(inner) - std::sqrt(p3 * p4);
    const double from_outer = std::abs(outer) - std::sqrt(p1 * p2);
    return 2.0 * std::max({0.0, from_inner, from_outer});
}

// Single-qubit rotation exp(-i (theta/2)(cos phi sx + sin phi sy)) summed as
// a plain matrix Taylor series.
inline Eigen::Matrix2cd taylor_rotation(double theta, double phi) {
    Eigen::Matrix2cd axis;
    axis << Complex(0, 0), Complex(std::cos(phi), -std::sin(phi)),
        Complex(std::cos(phi), std::sin(phi)), Complex(0, 0);
    const Eigen::Matrix2cd generator = Complex(0, -0.5 * theta) * axis;
    Eigen::Matrix2cd sum = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd term = Eigen::Matrix2cd::Identity();
    for (int k = 1; k < 40; ++k) {
        term = (term * generator / static_cast<double>(k)).eval();
        sum += term;
    }
    return sum;
}

// Brute-force parity expectation: permute to the product basis, conjugate by
// the Taylor-series rotation on both qubits, trace against sz x sz.
inline double parity_oracle(const DensityMatrix& rho, double theta, double phi_rf) {
    constexpr std::array<int, 4> to_product = {1, 2, 0, 3};
    Eigen::Matrix4cd rho_p;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            rho_p(to_product[i], to_product[j]) = rho.m(i, j);

    const Eigen::Matrix2cd rot = taylor_rotation(theta, phi_rf);
    Eigen::Matrix4cd global;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            global.block<2, 2>(2 * i, 2 * j) = rot(i, j) * rot;

    const Eigen::Matrix4cd rotated = global * rho_p * global.adjoint();
    const double diag[4] = {1.0, -1.0, -1.0, 1.0};
    double parity = 0.0;
    for (int i = 0; i < 4; ++i) parity += diag[i] * rotated(i, i).real();
    return parity;
}

}  // namespace duet::testing
