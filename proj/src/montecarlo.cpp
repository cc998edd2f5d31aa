#include "duet/montecarlo.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace duet {

namespace {

// Trials per random chunk. Fixed: it defines the stream layout, so changing
// it changes simulated counts for a given seed.
constexpr std::uint64_t kChunkTrials = 4096;

void require_probability(double value, const char* name) {
    if (value < 0.0 || value > 1.0)
        throw std::invalid_argument(std::string(name) + " must be in [0, 1]");
}

}  // namespace

void SequenceConfig::validate() const {
    require_probability(p_e, "p_e");
    require_probability(p_w, "p_w");
    require_probability(eta, "eta");
    if (attempts_per_sequence < 1)
        throw std::invalid_argument("attempts_per_sequence must be >= 1");
    if (sequence_rate_hz <= 0.0) throw std::invalid_argument("sequence rate must be positive");
    if (cooling_time_s <= 0.0 || pump_time_s <= 0.0 || excitation_pulse_s <= 0.0 ||
        witness_window_s <= 0.0)
        throw std::invalid_argument("sequence times must be positive");
}

void EfficiencyBudget::validate() const {
    require_probability(collection_fraction, "collection_fraction");
    require_probability(optics_transmission, "optics_transmission");
    require_probability(detector_quantum_efficiency, "detector_quantum_efficiency");
}

double herald_probability(const SequenceConfig& cfg) {
    require_probability(cfg.p_e, "p_e");
    require_probability(cfg.eta, "eta");
    return 2.0 * cfg.p_e * (1.0 - cfg.p_e) * cfg.eta;
}

RateBudget rate_budget(const SequenceConfig& cfg, double kappa) {
    require_probability(kappa, "kappa");
    RateBudget budget;
    budget.herald_rate_hz =
        cfg.sequence_rate_hz * static_cast<double>(cfg.attempts_per_sequence) * herald_probability(cfg);
    budget.witness_rate_per_min = budget.herald_rate_hz * kappa * 60.0;
    return budget;
}

double efficiency_product(const EfficiencyBudget& budget) {
    budget.validate();
    return budget.collection_fraction * budget.optics_transmission *
           budget.detector_quantum_efficiency;
}

std::uint64_t sample_binomial_counts(std::uint64_t seed, StreamDomain domain, std::uint32_t point,
                                     std::uint64_t trials, double p, unsigned threads) {
    const std::uint64_t chunks = (trials + kChunkTrials - 1) / kChunkTrials;
    std::atomic<std::uint64_t> total{0};
    std::atomic<std::uint64_t> next_chunk{0};

    auto worker = [&]() {
        std::uint64_t local = 0;
        for (;;) {
            const std::uint64_t chunk = next_chunk.fetch_add(1);
            if (chunk >= chunks) break;
            const std::uint64_t begin = chunk * kChunkTrials;
            const std::uint64_t count = std::min(kChunkTrials, trials - begin);
            RandomStream stream(seed, domain, point, static_cast<std::uint32_t>(chunk));
            local += count_bernoulli(stream, count, p);
        }
        total.fetch_add(local);
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }
    return total.load();
}

std::vector<CountRecord> simulate_fringe_scan(const SequenceConfig& cfg,
                                              const HeraldModel& herald,
                                              const EmissionConfig& emission,
                                              const std::vector<double>& delta_phi_grid,
                                              std::uint64_t heralds_per_point, std::uint64_t seed,
                                              unsigned threads) {
    cfg.validate();
    if (heralds_per_point < 1) throw std::invalid_argument("heralds_per_point must be >= 1");
    const DensityMatrix rho = heralded_state(herald);

    std::vector<CountRecord> records;
    records.reserve(delta_phi_grid.size());
    for (std::size_t i = 0; i < delta_phi_grid.size(); ++i) {
        const double p = witness_probability(rho, delta_phi_grid[i], emission);
        CountRecord record;
        record.setting = delta_phi_grid[i];
        record.n_heralds = heralds_per_point;
        record.n_witness = sample_binomial_counts(seed, StreamDomain::fringe_scan,
                                                  static_cast<std::uint32_t>(i), heralds_per_point,
                                                  p, threads);
        records.push_back(record);
    }
    return records;
}

std::vector<CountRecord> simulate_delay_scan(const SequenceConfig& cfg, const HeraldModel& herald,
                                             const EmissionConfig& emission,
                                             const std::vector<double>& tau_grid_s,
                                             double delta_phi_set,
                                             const std::function<double(double)>& gradient_phase_fn,
                                             std::uint64_t heralds_per_point, std::uint64_t seed,
                                             unsigned threads) {
    cfg.validate();
    if (heralds_per_point < 1) throw std::invalid_argument("heralds_per_point must be >= 1");
    if (!gradient_phase_fn) throw std::invalid_argument("gradient phase function is required");
    const DensityMatrix rho = heralded_state(herald);

    std::vector<CountRecord> records;
    records.reserve(tau_grid_s.size());
    for (std::size_t i = 0; i < tau_grid_s.size(); ++i) {
        const double effective_phi = delta_phi_set - gradient_phase_fn(tau_grid_s[i]);
        const double p = witness_probability(rho, effective_phi, emission);
        CountRecord record;
        record.setting = tau_grid_s[i];
        record.n_heralds = heralds_per_point;
        record.n_witness = sample_binomial_counts(seed, StreamDomain::delay_scan,
                                                  static_cast<std::uint32_t>(i), heralds_per_point,
                                                  p, threads);
        records.push_back(record);
    }
    return records;
}

}  // namespace duet
