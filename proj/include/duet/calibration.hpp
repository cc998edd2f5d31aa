// calibration.hpp
// PZT-mirror displacement chain: voltage ramp -> mirror displacement ->
// optical phase, the Michelson readout of that displacement, and the
// delay -> phase lookup table measured from it.
//
// The measured anchor table is treated as ground truth for delay -> phase;
// the linear PZT model is kept for synthetic studies.

#pragma once

#include <functional>
#include <string>
#include <vector>

namespace duet {

struct RampConfig {
    double amplitude_v = 14.0;       // delta U
    double duration_s = 200e-6;      // delta T
    double offset_v = 47.9;
    double volts_per_half_wavelength = 14.0;

    // Optional deviation from the linear response: maps normalized drive
    // U / volts_per_half_wavelength to the displacement in units of
    // lambda / 2. Identity when unset.
    std::function<double(double)> response_shape;

    void validate() const;
};

struct CalibrationTable {
    std::vector<double> tau_s;
    std::vector<double> phase_rad;

    // tau strictly increasing, phase monotone nondecreasing, >= 2 anchors.
    void validate() const;

    double first_tau() const { return tau_s.front(); }
    double last_tau() const { return tau_s.back(); }

    // CSV columns: tau_us, delta_phi_rad.
    static CalibrationTable from_csv(const std::string& path);
    void to_csv(const std::string& path) const;

    // Anchors measured for the 14.0 V / 200 us ramp.
    static CalibrationTable measured_anchors();
};

// Mirror displacement for a drive voltage under the (optionally shaped)
// PZT response model.
double pzt_displacement(double voltage_v, const RampConfig& ramp, double wavelength_m);

// Piecewise-linear interpolation through the table anchors. Throws
// std::out_of_range for delays outside the anchored interval.
double delay_to_phase(double tau_s, const CalibrationTable& table);

struct MichelsonTrace {
    std::vector<double> time_s;
    std::vector<double> intensity;
};

// Interferometer intensity I0 (1 + V cos(2 k x(t))) sampled uniformly over
// the ramp duration.
MichelsonTrace michelson_trace(const RampConfig& ramp,
                               const std::function<double(double)>& mirror_motion_m,
                               double wavelength_m, std::size_t samples, double i0 = 1.0,
                               double fringe_visibility = 1.0);

struct UnwrappedPhase {
    std::vector<double> time_s;
    std::vector<double> phase_rad;

    // Linear interpolation; throws std::out_of_range outside the trace.
    double at(double time_s) const;
};

// Optical phase vs time recovered from a Michelson trace, anchored to zero
// at the first sample. Requires nonzero fringe visibility and monotone
// mirror motion; throws std::runtime_error on fold-over or a flat trace.
UnwrappedPhase phase_from_trace(const MichelsonTrace& trace);

}  // namespace duet
