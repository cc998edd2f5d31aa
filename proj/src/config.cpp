#include "duet/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace duet {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::runtime_error("config: " + where + ": " + what);
}

void require_keys(const json& node, const std::string& where,
                  const std::set<std::string>& required, const std::set<std::string>& optional = {}) {
    if (!node.is_object()) fail(where, "expected an object");
    for (const auto& item : node.items()) {
        if (!required.count(item.key()) && !optional.count(item.key()))
            fail(where, "unknown key '" + item.key() + "'");
    }
    for (const auto& key : required)
        if (!node.contains(key)) fail(where, "missing key '" + key + "'");
}

double number(const json& node, const std::string& where, const std::string& key) {
    const json& value = node.at(key);
    if (!value.is_number()) fail(where, "'" + key + "' must be a number");
    return value.get<double>();
}

std::uint64_t unsigned_integer(const json& node, const std::string& where, const std::string& key) {
    const json& value = node.at(key);
    if (!value.is_number_unsigned()) fail(where, "'" + key + "' must be a nonnegative integer");
    return value.get<std::uint64_t>();
}

SequenceConfig parse_sequence(const json& node) {
    const std::string where = "sequence";
    require_keys(node, where,
                 {"p_e", "p_w", "eta", "attempts_per_sequence", "sequence_rate_hz",
                  "cooling_time_us", "pump_time_us", "excitation_pulse_ns", "witness_window_ns"});
    SequenceConfig cfg;
    cfg.p_e = number(node, where, "p_e");
    cfg.p_w = number(node, where, "p_w");
    cfg.eta = number(node, where, "eta");
    cfg.attempts_per_sequence =
        static_cast<std::uint32_t>(unsigned_integer(node, where, "attempts_per_sequence"));
    cfg.sequence_rate_hz = number(node, where, "sequence_rate_hz");
    cfg.cooling_time_s = number(node, where, "cooling_time_us") * 1e-6;
    cfg.pump_time_s = number(node, where, "pump_time_us") * 1e-6;
    cfg.excitation_pulse_s = number(node, where, "excitation_pulse_ns") * 1e-9;
    cfg.witness_window_s = number(node, where, "witness_window_ns") * 1e-9;
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return cfg;
}

HeraldModel parse_herald(const json& node) {
    const std::string where = "herald";
    require_keys(node, where,
                 {"coherence", "phase_rad", "single_excitation_fraction",
                  "zero_excitation_fraction", "double_excitation_fraction"});
    HeraldModel model;
    model.coherence = number(node, where, "coherence");
    model.phase_rad = number(node, where, "phase_rad");
    model.single_excitation_fraction = number(node, where, "single_excitation_fraction");
    model.zero_excitation_fraction = number(node, where, "zero_excitation_fraction");
    model.double_excitation_fraction = number(node, where, "double_excitation_fraction");
    try {
        model.validate();
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return model;
}

EmissionConfig parse_emission(const json& node) {
    const std::string where = "emission";
    require_keys(node, where, {"kappa"}, {"p_w", "eta"});
    EmissionConfig cfg;
    cfg.kappa = number(node, where, "kappa");
    if (node.contains("p_w")) cfg.p_w = number(node, where, "p_w");
    if (node.contains("eta")) cfg.eta = number(node, where, "eta");
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return cfg;
}

GradiometerConfig parse_gradiometer(const json& node) {
    const std::string where = "gradiometer";
    require_keys(node, where, {"bias_field_mT", "gradient_mT_per_m", "atom_separation_um"},
                 {"lande_g"});
    GradiometerConfig cfg;
    cfg.bias_field_t = number(node, where, "bias_field_mT") * 1e-3;
    cfg.gradient_t_per_m = number(node, where, "gradient_mT_per_m") * 1e-3;
    cfg.atom_separation_m = number(node, where, "atom_separation_um") * 1e-6;
    if (node.contains("lande_g")) cfg.lande_g = number(node, where, "lande_g");
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return cfg;
}

PhaseConfig parse_optics(const json& node) {
    const std::string where = "optics";
    require_keys(node, where,
                 {"wavelength_nm", "atom_separation_um", "herald_path_m", "witness_path_m"});
    PhaseConfig cfg;
    cfg.wavelength_m = number(node, where, "wavelength_nm") * 1e-9;
    cfg.atom_separation_m = number(node, where, "atom_separation_um") * 1e-6;
    cfg.herald_path_m = number(node, where, "herald_path_m");
    cfg.witness_path_m = number(node, where, "witness_path_m");
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return cfg;
}

EfficiencyBudget parse_efficiency(const json& node) {
    const std::string where = "efficiency_budget";
    require_keys(node, where,
                 {"collection_fraction", "optics_transmission", "detector_quantum_efficiency"});
    EfficiencyBudget budget;
    budget.collection_fraction = number(node, where, "collection_fraction");
    budget.optics_transmission = number(node, where, "optics_transmission");
    budget.detector_quantum_efficiency = number(node, where, "detector_quantum_efficiency");
    try {
        budget.validate();
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
    return budget;
}

}  // namespace

std::string RunConfig::resolved_table_path() const {
    if (calibration_table_path.empty()) return {};
    const std::filesystem::path path(calibration_table_path);
    if (path.is_absolute() || config_dir.empty()) return calibration_table_path;
    return (std::filesystem::path(config_dir) / path).string();
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    json document;
    try {
        document = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("config: " + path + ": " + e.what());
    }

    require_keys(document, "top level",
                 {"sequence", "herald", "emission", "gradiometer", "optics", "efficiency_budget"},
                 {"calibration_table", "seed"});

    RunConfig config;
    config.sequence = parse_sequence(document.at("sequence"));
    config.herald = parse_herald(document.at("herald"));
    config.emission = parse_emission(document.at("emission"));
    config.gradiometer = parse_gradiometer(document.at("gradiometer"));
    config.optics = parse_optics(document.at("optics"));
    config.efficiency = parse_efficiency(document.at("efficiency_budget"));
    if (document.contains("calibration_table")) {
        const json& value = document.at("calibration_table");
        if (!value.is_string()) throw std::runtime_error("config: 'calibration_table' must be a path");
        config.calibration_table_path = value.get<std::string>();
    }
    if (document.contains("seed")) config.seed = unsigned_integer(document, "top level", "seed");
    config.config_dir = std::filesystem::path(path).parent_path().string();
    return config;
}

}  // namespace duet
