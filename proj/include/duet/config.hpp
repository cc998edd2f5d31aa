// config.hpp
// Run configuration loaded from a JSON document. Keys carry explicit units;
// unknown keys are rejected and every module invariant is checked at load.

#pragma once

#include "duet/emission.hpp"
#include "duet/gradiometry.hpp"
#include "duet/montecarlo.hpp"
#include "duet/quantum.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace duet {

struct RunConfig {
    SequenceConfig sequence;
    HeraldModel herald;
    EmissionConfig emission;
    GradiometerConfig gradiometer;
    PhaseConfig optics;
    EfficiencyBudget efficiency;
    std::string calibration_table_path;  // may be empty
    std::optional<std::uint64_t> seed;

    // Resolves the table path relative to the config file location.
    std::string resolved_table_path() const;
    std::string config_dir;
};

// Throws std::runtime_error with a key-qualified message on any schema or
// invariant violation.
RunConfig load_run_config(const std::string& path);

}  // namespace duet
