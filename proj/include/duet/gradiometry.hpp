// gradiometry.hpp
// Mapping between magnetic-field gradients along the ion crystal and the
// phase evolution of the entangled state, used both to predict delay scans
// and to infer a gradient from a fitted oscillation period.

#pragma once

#include <vector>

namespace duet {

namespace constants {
inline constexpr double bohr_magneton_j_per_t = 9.2740100783e-24;
inline constexpr double planck_j_s = 6.62607015e-34;
}  // namespace constants

struct GradiometerConfig {
    double bias_field_t = 0.453e-3;
    double gradient_t_per_m = 0.85e-3;
    double atom_separation_m = 5.2e-6;
    // S1/2 ground-state g factor; reproduces both the measured Zeeman
    // splitting at the default bias field and the period/gradient pair.
    double lande_g = 2.0025;

    void validate() const;
};

// Zeeman splitting g_J mu_B B / h between the two ground sublevels.
double zeeman_splitting_hz(double field_t, const GradiometerConfig& cfg);

// Phase accumulated by the entangled state after a delay tau:
// 2 pi (g_J mu_B G z / h) tau, linear in tau, G and z.
double gradient_phase(double tau_s, const GradiometerConfig& cfg);

// Gradient implied by one full oscillation period, h / (g_J mu_B z T).
double gradient_from_period(double period_s, const GradiometerConfig& cfg);

// Expected witness probability kappa (1 + V cos(dphi_set - gradient_phase(tau)))
// over a grid of delays.
std::vector<double> delay_scan_expectation(const std::vector<double>& tau_grid_s,
                                           double delta_phi_set, double visibility, double kappa,
                                           const GradiometerConfig& cfg);

}  // namespace duet
