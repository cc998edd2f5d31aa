#include "duet/emission.hpp"

#include <cmath>
#include <stdexcept>

namespace duet {

namespace {
constexpr double kFractionTol = 1e-12;
}

void HeraldModel::validate() const {
    if (coherence < 0.0 || coherence > 1.0)
        throw std::invalid_argument("coherence must be in [0, 1]");
    if (single_excitation_fraction < 0.0 || zero_excitation_fraction < 0.0 ||
        double_excitation_fraction < 0.0)
        throw std::invalid_argument("excitation fractions must be nonnegative");
    const double total =
        single_excitation_fraction + zero_excitation_fraction + double_excitation_fraction;
    if (std::abs(total - 1.0) > kFractionTol)
        throw std::invalid_argument("excitation fractions must sum to one");
}

void EmissionConfig::validate() const {
    if (kappa < 0.0 || kappa > 1.0) throw std::invalid_argument("kappa must be in [0, 1]");
    if (p_w < 0.0 || p_w > 1.0) throw std::invalid_argument("p_w must be in [0, 1]");
    if (eta < 0.0 || eta > 1.0) throw std::invalid_argument("eta must be in [0, 1]");
}

double EmissionConfig::collection_factor() const {
    const double denom = eta * p_w;
    return denom > 0.0 ? kappa / denom : 0.0;
}

DensityMatrix heralded_state(const HeraldModel& model) {
    model.validate();
    const double half_f1 = 0.5 * model.single_excitation_fraction;
    DensityMatrix rho;
    rho.m(0, 0) = half_f1;
    rho.m(1, 1) = half_f1;
    rho.m(0, 1) = std::polar(model.coherence * half_f1, model.phase_rad);
    rho.m(1, 0) = std::conj(rho.m(0, 1));
    rho.m(2, 2) = model.zero_excitation_fraction;
    rho.m(3, 3) = model.double_excitation_fraction;
    rho.validate();
    return rho;
}

double witness_probability(const DensityMatrix& rho, double delta_phi, const EmissionConfig& cfg) {
    rho.validate();
    cfg.validate();
    const double interference =
        2.0 * (rho.m(0, 1) * std::polar(1.0, delta_phi)).real();
    const double p = cfg.kappa * (rho.population(0) + rho.population(1) + interference +
                                  2.0 * rho.population(2));
    return std::max(0.0, p);
}

std::vector<double> predicted_fringe_from_concurrence(double concurrence, double kappa,
                                                      const std::vector<double>& delta_phi_grid) {
    if (concurrence < 0.0 || concurrence > 1.0)
        throw std::invalid_argument("concurrence must be in [0, 1]");
    std::vector<double> fringe;
    fringe.reserve(delta_phi_grid.size());
    for (double dphi : delta_phi_grid)
        fringe.push_back(kappa * (1.0 + concurrence * std::cos(dphi)));
    return fringe;
}

double relative_probability(double p, double p_sep) {
    if (p_sep <= 0.0) throw std::invalid_argument("separable-state probability must be positive");
    return p / p_sep;
}

}  // namespace duet
