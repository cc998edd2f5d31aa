// emission.hpp
// Post-herald state of the atom pair, including preparation imperfections,
// and the witness-photon detection probability as a function of the optical
// phase difference between the herald and witness configurations.

#pragma once

#include "duet/quantum.hpp"

#include <vector>

namespace duet {

// Phenomenological model of the heralded state. The single-excitation
// fraction f1 is split evenly between |g-,g+> and |g+,g->, with residual
// coherence gamma between them; zero- and double-excitation heralds leave
// the pair in |g-,g-> and |g+,g+> respectively.
struct HeraldModel {
    double coherence = 1.0;                  // gamma in [0, 1]
    double phase_rad = 0.0;                  // entangled-state phase phi
    double single_excitation_fraction = 1.0; // f1
    double zero_excitation_fraction = 0.0;   // f0
    double double_excitation_fraction = 0.0; // f2

    void validate() const;
};

struct EmissionConfig {
    // Witness detection probability per herald for one atom in |g->. This is
    // the separable-state level P_sep and the only parameter the fringe model
    // depends on; p_w and eta are kept for the rate budget. kappa is close to
    // eta * p_w, the ratio being an overall collection factor.
    double kappa = 1.63e-3;
    double p_w = 0.80;
    double eta = 0.002;

    void validate() const;
    double collection_factor() const;  // kappa / (eta * p_w)
};

// Density matrix of the atom pair after a herald event.
DensityMatrix heralded_state(const HeraldModel& model);

// Witness detection probability
//   P = kappa [rho_11 + rho_22 + 2 Re(rho_12 e^{i dphi}) + 2 rho_33],
// with rho_33 the |g-,g-> population (both atoms able to emit).
double witness_probability(const DensityMatrix& rho, double delta_phi, const EmissionConfig& cfg);

// Expected fringe kappa (1 + C cos dphi) from an independently measured
// concurrence, evaluated on a phase grid.
std::vector<double> predicted_fringe_from_concurrence(double concurrence, double kappa,
                                                      const std::vector<double>& delta_phi_grid);

// R = P / P_sep; R > 1 is enhancement, R < 1 suppression.
double relative_probability(double p, double p_sep);

}  // namespace duet
