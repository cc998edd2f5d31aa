#include "duet/quantum.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace duet {

namespace {

constexpr double kNormTol = 1e-12;
constexpr double kHermTol = 1e-12;
constexpr double kTraceTol = 1e-12;
constexpr double kEigenRepairTol = 1e-10;

// Storage index -> product-basis index (atom A bit, atom B bit; g- = 0, g+ = 1).
constexpr std::array<int, 4> kStorageToProduct = {1, 2, 0, 3};

Eigen::Matrix4cd to_product_basis(const Eigen::Matrix4cd& storage) {
    Eigen::Matrix4cd prod;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            prod(kStorageToProduct[i], kStorageToProduct[j]) = storage(i, j);
    return prod;
}

}  // namespace

double wrap_angle(double angle) {
    double wrapped = std::fmod(angle, 2.0 * M_PI);
    if (wrapped < 0.0) wrapped += 2.0 * M_PI;
    return wrapped;
}

double PureTwoQubitState::norm_squared() const {
    return std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
}

void PureTwoQubitState::require_normalized() const {
    if (std::abs(norm_squared() - 1.0) > kNormTol)
        throw std::invalid_argument("state is not normalized");
}

Eigen::Vector4cd PureTwoQubitState::amplitudes() const {
    Eigen::Vector4cd v;
    v << a, b, c, d;
    return v;
}

PureTwoQubitState PureTwoQubitState::bell(double phi) {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return {std::polar(inv_sqrt2, phi), Complex(inv_sqrt2, 0.0), {}, {}};
}

PureTwoQubitState PureTwoQubitState::zeta() {
    return {{}, Complex(1.0, 0.0), {}, {}};
}

PureTwoQubitState PureTwoQubitState::xi() {
    return {Complex(0.5, 0.0), Complex(0.5, 0.0), Complex(0.5, 0.0), Complex(0.5, 0.0)};
}

DensityMatrix DensityMatrix::from_pure(const PureTwoQubitState& state) {
    state.require_normalized();
    const Eigen::Vector4cd v = state.amplitudes();
    return {v * v.adjoint()};
}

DensityMatrix DensityMatrix::maximally_mixed() {
    return {Eigen::Matrix4cd::Identity() * 0.25};
}

void DensityMatrix::validate() const {
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermTol)
        throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(m.trace().real() - 1.0) > kTraceTol || std::abs(m.trace().imag()) > kTraceTol)
        throw std::invalid_argument("density matrix trace is not one");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kEigenRepairTol)
        throw std::invalid_argument("density matrix is not positive semidefinite");
}

void PhaseConfig::validate() const {
    if (wavelength_m <= 0.0) throw std::invalid_argument("wavelength must be positive");
}

double PhaseConfig::wavenumber() const {
    return 2.0 * M_PI / wavelength_m;
}

double PhaseConfig::herald_phase() const {
    validate();
    // phi = k (z - d); reduce the path ratio first so the huge integer part
    // never enters a trig-range argument.
    return wrap_angle(2.0 * M_PI * std::fmod((atom_separation_m - herald_path_m) / wavelength_m, 1.0));
}

double PhaseConfig::witness_phase() const {
    validate();
    return wrap_angle(2.0 * M_PI * std::fmod((atom_separation_m - witness_path_m) / wavelength_m, 1.0));
}

double PhaseConfig::phase_difference() const {
    validate();
    return wrap_angle(2.0 * M_PI * std::fmod((witness_path_m - herald_path_m) / wavelength_m, 1.0));
}

double phase_of_state(const PhaseConfig& config) {
    return config.herald_phase();
}

double intensity(const PureTwoQubitState& state, double phi_a, double phi_b) {
    state.require_normalized();
    const double base = std::norm(state.a) + std::norm(state.b) + 2.0 * std::norm(state.c);
    const double cross = 2.0 * (std::conj(state.a) * state.b * std::polar(1.0, phi_a - phi_b)).real();
    return std::max(0.0, base + cross);
}

double visibility_pure(const PureTwoQubitState& state) {
    state.require_normalized();
    const double denom = std::norm(state.a) + std::norm(state.b) + 2.0 * std::norm(state.c);
    if (denom <= 0.0)
        throw std::domain_error("no emitter population: state has no component able to emit");
    return 2.0 * std::abs(state.a * state.b) / denom;
}

double concurrence_pure(const PureTwoQubitState& state) {
    state.require_normalized();
    return 2.0 * std::abs(state.c * state.d - state.a * state.b);
}

double concurrence_mixed(const DensityMatrix& rho) {
    rho.validate();
    const Eigen::Matrix4cd rho_p = to_product_basis(rho.m);

    // sigma_y x sigma_y in the product basis.
    Eigen::Matrix4cd flip = Eigen::Matrix4cd::Zero();
    flip(0, 3) = -1.0;
    flip(1, 2) = 1.0;
    flip(2, 1) = 1.0;
    flip(3, 0) = -1.0;

    // The square roots of the eigenvalues of rho rho~ are the singular values
    // of sqrt(rho) Y conj(sqrt(rho)): the eigenvalue route through the
    // non-normal product loses half the digits on its defective zeros.
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> herm(rho_p);
    Eigen::Vector4d clipped = herm.eigenvalues().cwiseMax(0.0);
    const Eigen::Matrix4cd sqrt_rho = herm.eigenvectors() *
                                      clipped.cwiseSqrt().asDiagonal() *
                                      herm.eigenvectors().adjoint();
    const Eigen::Matrix4cd a = sqrt_rho * flip * sqrt_rho.conjugate();
    Eigen::JacobiSVD<Eigen::Matrix4cd> svd(a);

    const Eigen::Vector4d roots = svd.singularValues();  // sorted decreasing
    return std::max(0.0, roots(0) - roots(1) - roots(2) - roots(3));
}

double fidelity_with_target(const DensityMatrix& rho, double phi) {
    rho.validate();
    const Eigen::Vector4cd target = PureTwoQubitState::bell(phi).amplitudes();
    return std::clamp((target.adjoint() * rho.m * target)(0, 0).real(), 0.0, 1.0);
}

double parity_expectation(const DensityMatrix& rho, double theta, double phi_rf) {
    rho.validate();

    // Rotation exp(-i (theta/2) (cos phi_rf sx + sin phi_rf sy)) on one qubit.
    const double half = 0.5 * theta;
    Eigen::Matrix2cd rot;
    rot(0, 0) = std::cos(half);
    rot(0, 1) = Complex(0.0, -1.0) * std::polar(std::sin(half), -phi_rf);
    rot(1, 0) = Complex(0.0, -1.0) * std::polar(std::sin(half), phi_rf);
    rot(1, 1) = std::cos(half);

    Eigen::Matrix4cd global = Eigen::Matrix4cd::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            global.block<2, 2>(2 * i, 2 * j) = rot(i, j) * rot;

    const Eigen::Matrix4cd rotated = global * to_product_basis(rho.m) * global.adjoint();
    const Eigen::Vector4d parity_diag(1.0, -1.0, -1.0, 1.0);
    double expectation = 0.0;
    for (int i = 0; i < 4; ++i) expectation += parity_diag(i) * rotated(i, i).real();
    return std::clamp(expectation, -1.0, 1.0);
}

}  // namespace duet
