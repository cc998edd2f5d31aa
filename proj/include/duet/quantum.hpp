// quantum.hpp
// Two-qubit states of a pair of trapped emitters and the closed-form
// quantities derived from them: emission intensity in the common optical
// mode, fringe visibility, concurrence, fidelity and parity expectation.
//
// Basis ordering used everywhere in this library (defined once, here):
//   index 0: |g-,g+>   amplitude a
//   index 1: |g+,g->   amplitude b
//   index 2: |g-,g->   amplitude c
//   index 3: |g+,g+>   amplitude d
// where the first slot is atom A and the second atom B, and g-/g+ are the
// two ground Zeeman sublevels. Tensor-product operations (rotations,
// spin flip) convert internally to the product order
// {|g-,g->, |g-,g+>, |g+,g->, |g+,g+>} with single-atom basis (|g->, |g+>).

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace duet {

using Complex = std::complex<double>;

struct PureTwoQubitState {
    Complex a{0.0, 0.0};  // |g-,g+>
    Complex b{0.0, 0.0};  // |g+,g->
    Complex c{0.0, 0.0};  // |g-,g->
    Complex d{0.0, 0.0};  // |g+,g+>

    double norm_squared() const;

    // Throws std::invalid_argument if |norm^2 - 1| exceeds 1e-12.
    void require_normalized() const;

    Eigen::Vector4cd amplitudes() const;

    // Heralded Bell state (|g+,g-> + e^{i phi} |g-,g+>)/sqrt(2).
    static PureTwoQubitState bell(double phi);
    // Separable single-emitter state |g+,g->.
    static PureTwoQubitState zeta();
    // Separable product state with a=b=c=d=1/2.
    static PureTwoQubitState xi();
};

struct DensityMatrix {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();

    double population(int i) const { return m(i, i).real(); }
    Complex single_excitation_coherence() const { return m(0, 1); }

    // Hermiticity and unit trace within 1e-12, eigenvalues >= -1e-10.
    // Eigenvalues in [-1e-10, 0) are treated as zero (numerical PSD repair);
    // anything below that is an error. Throws std::invalid_argument.
    void validate() const;

    static DensityMatrix from_pure(const PureTwoQubitState& state);
    static DensityMatrix maximally_mixed();
};

// Geometry of the common optical mode: exciting-laser and detection-path
// phases for the herald (path d) and witness (path d') configurations.
struct PhaseConfig {
    double wavelength_m = 493e-9;
    double atom_separation_m = 5.2e-6;
    double herald_path_m = 0.6;   // round-trip path d
    double witness_path_m = 0.6;  // round-trip path d'

    void validate() const;

    double wavenumber() const;          // k = 2 pi / lambda
    double herald_phase() const;        // phi  = k (z - d),  in [0, 2 pi)
    double witness_phase() const;       // phi' = k (z - d'), in [0, 2 pi)
    double phase_difference() const;    // delta phi = k (d' - d), in [0, 2 pi)
};

// Phase of the heralded entangled state, phi = k (z - d), reduced to [0, 2 pi).
double phase_of_state(const PhaseConfig& config);

// Emission intensity in the common mode for a normalized pure state,
// I = |a|^2 + |b|^2 + 2|c|^2 + 2 Re(a* b e^{i(phi_a - phi_b)}).
double intensity(const PureTwoQubitState& state, double phi_a, double phi_b);

// Fringe visibility 2|ab| / (|a|^2 + |b|^2 + 2|c|^2). Throws std::domain_error
// when the denominator vanishes (no population able to emit).
double visibility_pure(const PureTwoQubitState& state);

// Concurrence 2|cd - ab| of a normalized pure state.
double concurrence_pure(const PureTwoQubitState& state);

// Wootters concurrence of a general two-qubit density matrix via the
// spin-flip construction: max(0, l1 - l2 - l3 - l4) with li the decreasing
// square roots of the eigenvalues of rho (sy x sy) rho* (sy x sy).
double concurrence_mixed(const DensityMatrix& rho);

// Overlap <psi(phi)| rho |psi(phi)> with the heralded Bell state.
double fidelity_with_target(const DensityMatrix& rho, double phi);

// Expectation of sigma_z x sigma_z after the same rotation
// exp(-i (theta/2)(cos phi_rf sigma_x + sin phi_rf sigma_y)) on both qubits.
double parity_expectation(const DensityMatrix& rho, double theta, double phi_rf);

// Reduce an angle to [0, 2 pi).
double wrap_angle(double angle);

}  // namespace duet
