#include "duet/calibration.hpp"

#include "duet/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace duet {

void RampConfig::validate() const {
    if (duration_s <= 0.0) throw std::invalid_argument("ramp duration must be positive");
    if (volts_per_half_wavelength <= 0.0)
        throw std::invalid_argument("volts per half wavelength must be positive");
}

void CalibrationTable::validate() const {
    if (tau_s.size() != phase_rad.size())
        throw std::invalid_argument("calibration table columns differ in length");
    if (tau_s.size() < 2) throw std::invalid_argument("calibration table needs >= 2 anchors");
    for (std::size_t i = 1; i < tau_s.size(); ++i) {
        if (tau_s[i] <= tau_s[i - 1])
            throw std::invalid_argument("calibration delays must be strictly increasing");
        if (phase_rad[i] < phase_rad[i - 1])
            throw std::invalid_argument("calibration phases must be nondecreasing");
    }
}

CalibrationTable CalibrationTable::from_csv(const std::string& path) {
    const CsvTable csv = read_csv(path);
    CalibrationTable table;
    for (double tau_us : csv.column("tau_us")) table.tau_s.push_back(tau_us * 1e-6);
    table.phase_rad = csv.column("delta_phi_rad");
    table.validate();
    return table;
}

void CalibrationTable::to_csv(const std::string& path) const {
    validate();
    CsvTable csv;
    csv.headers = {"tau_us", "delta_phi_rad"};
    for (std::size_t i = 0; i < tau_s.size(); ++i)
        csv.rows.push_back({tau_s[i] * 1e6, phase_rad[i]});
    write_csv(path, csv);
}

CalibrationTable CalibrationTable::measured_anchors() {
    CalibrationTable table;
    table.tau_s = {60e-6, 93e-6, 129e-6, 164e-6, 203e-6};
    table.phase_rad = {0.0, 0.5 * M_PI, M_PI, 1.5 * M_PI, 2.0 * M_PI};
    return table;
}

double pzt_displacement(double voltage_v, const RampConfig& ramp, double wavelength_m) {
    ramp.validate();
    if (wavelength_m <= 0.0) throw std::invalid_argument("wavelength must be positive");
    const double normalized = voltage_v / ramp.volts_per_half_wavelength;
    const double shaped = ramp.response_shape ? ramp.response_shape(normalized) : normalized;
    return shaped * 0.5 * wavelength_m;
}

double delay_to_phase(double tau_s, const CalibrationTable& table) {
    table.validate();
    if (tau_s < table.first_tau() || tau_s > table.last_tau())
        throw std::out_of_range("delay outside calibration table; extrapolation not supported");
    const auto upper = std::upper_bound(table.tau_s.begin(), table.tau_s.end(), tau_s);
    std::size_t hi = static_cast<std::size_t>(upper - table.tau_s.begin());
    if (hi == table.tau_s.size()) --hi;
    if (hi == 0) ++hi;
    const std::size_t lo = hi - 1;
    const double span = table.tau_s[hi] - table.tau_s[lo];
    const double weight = (tau_s - table.tau_s[lo]) / span;
    return table.phase_rad[lo] + weight * (table.phase_rad[hi] - table.phase_rad[lo]);
}

MichelsonTrace michelson_trace(const RampConfig& ramp,
                               const std::function<double(double)>& mirror_motion_m,
                               double wavelength_m, std::size_t samples, double i0,
                               double fringe_visibility) {
    ramp.validate();
    if (samples < 2) throw std::invalid_argument("need at least 2 samples");
    if (wavelength_m <= 0.0) throw std::invalid_argument("wavelength must be positive");
    const double k = 2.0 * M_PI / wavelength_m;
    MichelsonTrace trace;
    trace.time_s.reserve(samples);
    trace.intensity.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double t = ramp.duration_s * static_cast<double>(i) / static_cast<double>(samples - 1);
        trace.time_s.push_back(t);
        trace.intensity.push_back(i0 * (1.0 + fringe_visibility * std::cos(2.0 * k * mirror_motion_m(t))));
    }
    return trace;
}

double UnwrappedPhase::at(double t) const {
    if (time_s.empty()) throw std::out_of_range("empty phase trace");
    if (t < time_s.front() || t > time_s.back())
        throw std::out_of_range("time outside phase trace");
    const auto upper = std::upper_bound(time_s.begin(), time_s.end(), t);
    std::size_t hi = static_cast<std::size_t>(upper - time_s.begin());
    if (hi == time_s.size()) --hi;
    if (hi == 0) ++hi;
    const std::size_t lo = hi - 1;
    const double span = time_s[hi] - time_s[lo];
    const double weight = span > 0.0 ? (t - time_s[lo]) / span : 0.0;
    return phase_rad[lo] + weight * (phase_rad[hi] - phase_rad[lo]);
}

UnwrappedPhase phase_from_trace(const MichelsonTrace& trace) {
    if (trace.time_s.size() != trace.intensity.size() || trace.time_s.size() < 2)
        throw std::invalid_argument("trace needs >= 2 samples");

    const auto [min_it, max_it] =
        std::minmax_element(trace.intensity.begin(), trace.intensity.end());
    const double i_min = *min_it;
    const double i_max = *max_it;
    const double scale = std::max({std::abs(i_min), std::abs(i_max), 1e-300});
    if ((i_max - i_min) < 1e-9 * scale)
        throw std::runtime_error("trace has no visibility");
    const double i0 = 0.5 * (i_max + i_min);
    const double amplitude = 0.5 * (i_max - i_min);

    // Each sample constrains the phase to +/- u_k modulo 2 pi. The mirror
    // motion is monotone, so the true phase is the smallest branch value
    // that does not move backwards; picking the nearest branch instead
    // would reflect at every fringe extremum.
    constexpr double backward_tol = 1e-9;
    std::vector<double> folded(trace.intensity.size());
    for (std::size_t k = 0; k < trace.intensity.size(); ++k) {
        const double c = std::clamp((trace.intensity[k] - i0) / amplitude, -1.0, 1.0);
        folded[k] = std::acos(c);
    }

    UnwrappedPhase result;
    result.time_s = trace.time_s;
    result.phase_rad.resize(folded.size());
    double previous = folded[0];
    result.phase_rad[0] = previous;
    for (std::size_t k = 1; k < folded.size(); ++k) {
        const double base = 2.0 * M_PI * std::floor(previous / (2.0 * M_PI));
        double best = std::numeric_limits<double>::infinity();
        for (int turn = -1; turn <= 2; ++turn)
            for (int sign = -1; sign <= 1; sign += 2) {
                const double candidate = base + 2.0 * M_PI * turn + sign * folded[k];
                if (candidate >= previous - backward_tol) best = std::min(best, candidate);
            }
        // A reversal away from a fringe extremum shows up as a large implied
        // forward jump (a reversal exactly at an extremum is indistinguishable
        // from continued motion).
        if (best - previous > 0.5 * M_PI)
            throw std::runtime_error(
                "phase fold-over: mirror motion is not monotone or the trace is undersampled");
        previous = std::max(previous, best);
        result.phase_rad[k] = best;
    }

    const double anchor = result.phase_rad[0];
    for (double& phase : result.phase_rad) phase -= anchor;
    return result;
}

}  // namespace duet
