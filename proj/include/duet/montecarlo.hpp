// montecarlo.hpp
// Attempt-level stochastic simulation of the experimental sequence: herald
// and witness counting statistics plus the rate and efficiency bookkeeping.
//
// Counts are drawn per herald (Binomial); trials are split into fixed-size
// chunks, each chunk owning a counter-based random stream keyed by
// (seed, domain, point, chunk). Worker count therefore never changes the
// result, and shard merges are plain sums.

#pragma once

#include "duet/emission.hpp"
#include "duet/quantum.hpp"
#include "duet/rng.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace duet {

struct SequenceConfig {
    double p_e = 0.06;
    double p_w = 0.80;
    double eta = 0.002;
    std::uint32_t attempts_per_sequence = 30;
    double sequence_rate_hz = 704.0;
    double cooling_time_s = 300e-6;
    double pump_time_s = 20e-6;
    double excitation_pulse_s = 48e-9;
    double witness_window_s = 1e-6;

    void validate() const;
};

struct CountRecord {
    double setting = 0.0;  // delta phi (rad) or delay tau (s)
    std::uint64_t n_heralds = 0;
    std::uint64_t n_witness = 0;
};

struct EfficiencyBudget {
    double collection_fraction = 0.06;   // NA-limited solid angle
    double optics_transmission = 0.07;
    double detector_quantum_efficiency = 0.70;

    void validate() const;
};

struct RateBudget {
    double herald_rate_hz = 0.0;
    double witness_rate_per_min = 0.0;
};

// Probability 2 p_e (1 - p_e) eta of detecting a herald per attempt.
double herald_probability(const SequenceConfig& cfg);

// Herald rate = sequence rate x attempts x herald probability; witness rate
// is the herald rate times kappa, converted to per-minute.
RateBudget rate_budget(const SequenceConfig& cfg, double kappa);

double efficiency_product(const EfficiencyBudget& budget);

// Witness counts versus phase difference: per grid point, n_witness is
// Binomial(heralds_per_point, witness_probability). Deterministic for a
// fixed seed, independent of `threads`.
std::vector<CountRecord> simulate_fringe_scan(const SequenceConfig& cfg,
                                              const HeraldModel& herald,
                                              const EmissionConfig& emission,
                                              const std::vector<double>& delta_phi_grid,
                                              std::uint64_t heralds_per_point, std::uint64_t seed,
                                              unsigned threads = 1);

// Witness counts versus herald-witness delay. The effective phase per point
// is delta_phi_set - gradient_phase_fn(tau).
std::vector<CountRecord> simulate_delay_scan(const SequenceConfig& cfg, const HeraldModel& herald,
                                             const EmissionConfig& emission,
                                             const std::vector<double>& tau_grid_s,
                                             double delta_phi_set,
                                             const std::function<double(double)>& gradient_phase_fn,
                                             std::uint64_t heralds_per_point, std::uint64_t seed,
                                             unsigned threads = 1);

// Chunked Bernoulli counting used by both scans; exposed for tests.
std::uint64_t sample_binomial_counts(std::uint64_t seed, StreamDomain domain, std::uint32_t point,
                                     std::uint64_t trials, double p, unsigned threads = 1);

}  // namespace duet
