// estimation.hpp
// Statistical inference on photon-counting data: fringe fits with
// uncertainties, visibility/concurrence extraction, parity-based concurrence
// and the g2(0) indistinguishability model.

#pragma once

#include "duet/montecarlo.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace duet {

struct ValueWithError {
    double value = 0.0;
    double error = 0.0;
};

// Per-phase-point trials and detected counts. Counts are stored as doubles
// so synthetic noiseless datasets (k = n p exactly) are representable.
struct FringeDataset {
    std::vector<double> delta_phi_rad;
    std::vector<double> counts;
    std::vector<double> trials;

    void validate() const;
    std::size_t size() const { return delta_phi_rad.size(); }

    void add(double delta_phi, double k, double n);
    static FringeDataset from_records(const std::vector<CountRecord>& records);
    // CSV columns: delta_phi_rad, n_heralds, n_witness (extra columns ignored).
    static FringeDataset from_csv(const std::string& path);
};

// Fit of P = A (1 + V cos(dphi - phi0)).
struct FringeFit {
    double mean_level = 0.0;
    double visibility = 0.0;      // clipped to [0, 1]
    double visibility_raw = 0.0;  // pre-clip value
    double phase_offset_rad = 0.0;
    double mean_level_err = 0.0;
    double visibility_err = 0.0;
    double phase_offset_err = 0.0;
    Eigen::Matrix3d covariance = Eigen::Matrix3d::Zero();  // (A, V, phi0)
    double chi2 = 0.0;
    int dof = 0;
    bool bootstrap_used = false;
    std::vector<double> residuals;
};

struct FitOptions {
    int bootstrap_replicas = 400;
    double bootstrap_count_threshold = 10.0;
    std::uint64_t bootstrap_seed = 0x9E3779B97F4A7C15ull;
};

// Weighted least squares of k_i/n_i against {1, cos, sin} with weights
// n_i / max(k_i, 1); V and phi0 by change of variables with delta-method
// covariance. A parametric bootstrap refines the errors when any count is
// below the threshold. Throws std::invalid_argument on degenerate designs
// and std::runtime_error when every count is zero.
FringeFit fit_fringe(const FringeDataset& data, const FitOptions& options = {});

// The fitted visibility relabeled as concurrence. Valid only for states
// supported on the single-excitation subspace; a separable state with
// |g-,g-> or |g+,g+> components can interfere without being entangled.
ValueWithError concurrence_from_fringe(const FringeFit& fit);

// Concurrence from measured populations plus a parity curve taken with
// theta = pi/2 pulses. The curve is fit to the parity_expectation model with
// populations held fixed and the |g-,g+><g+,g-| coherence free; all other
// coherences are assumed zero and the coherence phase is taken as zero (the
// convention under which the state is characterized), so the result is a
// lower bound for a phase-rotated coherence. Returns
// max(0, 2 coherence - 2 sqrt(rho33 rho44)) with the fit uncertainty.
ValueWithError concurrence_from_parity(const std::array<double, 4>& populations,
                                       const std::vector<std::pair<double, double>>& parity_curve);

// g2(0) = 0.5 (1 + M): linear interpolation between totally distinguishable
// emitters (0.5) and perfectly indistinguishable ones (1).
double g2_zero(double indistinguishability);

// Single-tone fit y = mean + amplitude cos(2 pi f t - phase) with the
// frequency found by grid search plus parabolic refinement. Used for the
// delay-scan period readout.
struct OscillationFit {
    double period_s = 0.0;
    double period_err_s = 0.0;
    double mean = 0.0;
    double amplitude = 0.0;
    double amplitude_err = 0.0;
    double phase_rad = 0.0;
    double ssr = 0.0;
    bool oscillation_detected = false;
};

OscillationFit fit_oscillation(const std::vector<double>& time_s, const std::vector<double>& value,
                               const std::vector<double>& sigma = {});

}  // namespace duet
