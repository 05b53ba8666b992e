#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "mairs/channel.hpp"
#include "mairs/geometry.hpp"
#include "mairs/optimize.hpp"

namespace mairs {

/// Raised for malformed or inconsistent experiment configuration (CLI exit code 1).
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// How scatterer positions relate to Monte-Carlo trials.
enum class ScatterPlacement {
    kFixed,   ///< one placement shared by every trial, drawn from scatter seed
    kPerTrial ///< redrawn per trial from the trial's derived seed
};

/// Full experiment description. Optional fields resolve to frequency-derived defaults.
struct ScenarioConfig {
    double frequency_hz{5e9};
    int n_antennas{4};
    double transmit_snr_db{110.0};

    struct Irs {
        int m_y_count{15};
        int m_z_count{15};
        std::optional<double> spacing; ///< default: half wavelength
    } irs;

    struct Region {
        Vec3 center{5.0, 5.0, 0.0};
        Vec3 axis{1.0, 0.0, 0.0};
        double length{0.6};
        std::optional<double> d_min; ///< default: half wavelength
        double delta_s{0.01};
    } tx_region;

    struct User {
        std::optional<Vec3> position; ///< default: fixed bearing scaled to d_iu
        double d_iu{30.0};
    } user;

    struct Fading {
        double rician_k_db{3.0};
        double kappa{2.8};
    } fading;

    struct Multipath {
        int n_paths{8};
        std::array<double, 6> scatter_box{1.0, 4.0, 1.0, 4.0, -1.0, 1.0}; ///< x/y/z min,max
        double power_split{1.0}; ///< total scattered power over the center LoS path power
        ScatterPlacement placement{ScatterPlacement::kFixed};
        std::optional<std::uint64_t> seed; ///< fixed-placement seed; default derived from `seed`
    } multipath;

    struct Solver {
        BcdSettings bcd{};
        int ao_max_iters{30};
        double ao_rel_tol{1e-5};
    } solver;

    int trials{100};
    std::uint64_t seed{1};

    AoSettings ao_settings() const { return AoSettings{solver.ao_max_iters, solver.ao_rel_tol, solver.bcd}; }

    /// Cross-field checks; throws ConfigError.
    void validate() const;
};

/// Parses the flat dotted-key format (`section.key = value`, `#` comments). Unknown keys
/// are a hard error. Later assignments override earlier ones.
ScenarioConfig parse_scenario_text(const std::string& text);
ScenarioConfig parse_scenario_file(const std::string& path);

/// Applies dotted-key overrides on top of an existing config (same syntax, one per line).
void apply_scenario_line(ScenarioConfig& config, const std::string& line);

// Resolved quantities ------------------------------------------------------

double wavelength(const ScenarioConfig& config);
double resolved_irs_spacing(const ScenarioConfig& config);
double resolved_min_spacing(const ScenarioConfig& config);
IrsGeometry make_irs_geometry(const ScenarioConfig& config);
TxRegion make_tx_region(const ScenarioConfig& config);
Vec3 resolved_user_position(const ScenarioConfig& config);
FadingParams make_fading_params(const ScenarioConfig& config);
std::uint64_t resolved_scatter_seed(const ScenarioConfig& config);

} // namespace mairs
