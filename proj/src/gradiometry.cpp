#include "duet/gradiometry.hpp"

#include <cmath>
#include <stdexcept>

namespace duet {

void GradiometerConfig::validate() const {
    if (atom_separation_m <= 0.0) throw std::invalid_argument("atom separation must be positive");
    if (lande_g <= 0.0) throw std::invalid_argument("Lande factor must be positive");
    if (bias_field_t < 0.0) throw std::invalid_argument("bias field must be nonnegative");
}

double zeeman_splitting_hz(double field_t, const GradiometerConfig& cfg) {
    cfg.validate();
    if (field_t < 0.0) throw std::invalid_argument("field must be nonnegative");
    return cfg.lande_g * constants::bohr_magneton_j_per_t * field_t / constants::planck_j_s;
}

double gradient_phase(double tau_s, const GradiometerConfig& cfg) {
    cfg.validate();
    if (tau_s < 0.0) throw std::invalid_argument("delay must be nonnegative");
    const double differential_hz =
        zeeman_splitting_hz(std::abs(cfg.gradient_t_per_m) * cfg.atom_separation_m, cfg);
    const double sign = cfg.gradient_t_per_m < 0.0 ? -1.0 : 1.0;
    return sign * 2.0 * M_PI * differential_hz * tau_s;
}

double gradient_from_period(double period_s, const GradiometerConfig& cfg) {
    cfg.validate();
    if (period_s <= 0.0) throw std::invalid_argument("period must be positive");
    return constants::planck_j_s /
           (cfg.lande_g * constants::bohr_magneton_j_per_t * cfg.atom_separation_m * period_s);
}

std::vector<double> delay_scan_expectation(const std::vector<double>& tau_grid_s,
                                           double delta_phi_set, double visibility, double kappa,
                                           const GradiometerConfig& cfg) {
    cfg.validate();
    if (visibility < 0.0 || visibility > 1.0)
        throw std::invalid_argument("visibility must be in [0, 1]");
    std::vector<double> expectation;
    expectation.reserve(tau_grid_s.size());
    for (double tau : tau_grid_s)
        expectation.push_back(kappa * (1.0 + visibility * std::cos(delta_phi_set - gradient_phase(tau, cfg))));
    return expectation;
}

}  // namespace duet
