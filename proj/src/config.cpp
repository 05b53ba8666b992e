#include "mairs/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include "mairs/rng.hpp"

namespace mairs {

namespace {

constexpr double kSpeedOfLight = 3.0e8; // m/s; gives lambda = 0.06 m at 5 GHz

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::vector<double> parse_numbers(const std::string& key, const std::string& value,
                                  std::size_t expected) {
    std::string cleaned = value;
    for (char& c : cleaned) {
        if (c == ',' || c == '[' || c == ']') c = ' ';
    }
    std::istringstream in(cleaned);
    std::vector<double> numbers;
    double v = 0.0;
    while (in >> v) {
        numbers.push_back(v);
    }
    if (!in.eof() || numbers.size() != expected) {
        throw ConfigError("config key '" + key + "': expected " + std::to_string(expected) +
                          " number(s), got '" + value + "'");
    }
    return numbers;
}

double parse_double(const std::string& key, const std::string& value) {
    return parse_numbers(key, value, 1)[0];
}

int parse_int(const std::string& key, const std::string& value) {
    const double v = parse_double(key, value);
    const double rounded = std::round(v);
    if (std::abs(v - rounded) > 1e-9 || std::abs(v) > 2e9) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + value + "'");
    }
    return static_cast<int>(rounded);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    const std::string t = trim(value);
    std::uint64_t out = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
        throw ConfigError("config key '" + key + "': expected a nonnegative integer, got '" + value + "'");
    }
    return out;
}

Vec3 parse_vec3(const std::string& key, const std::string& value) {
    const auto v = parse_numbers(key, value, 3);
    return Vec3{v[0], v[1], v[2]};
}

void assign(ScenarioConfig& c, const std::string& key, const std::string& value) {
    if (key == "frequency_hz") {
        c.frequency_hz = parse_double(key, value);
    } else if (key == "n_antennas") {
        c.n_antennas = parse_int(key, value);
    } else if (key == "transmit_snr_db") {
        c.transmit_snr_db = parse_double(key, value);
    } else if (key == "irs.m_y_count") {
        c.irs.m_y_count = parse_int(key, value);
    } else if (key == "irs.m_z_count") {
        c.irs.m_z_count = parse_int(key, value);
    } else if (key == "irs.spacing") {
        c.irs.spacing = parse_double(key, value);
    } else if (key == "tx_region.center") {
        c.tx_region.center = parse_vec3(key, value);
    } else if (key == "tx_region.axis") {
        c.tx_region.axis = parse_vec3(key, value);
    } else if (key == "tx_region.length") {
        c.tx_region.length = parse_double(key, value);
    } else if (key == "tx_region.d_min") {
        c.tx_region.d_min = parse_double(key, value);
    } else if (key == "tx_region.delta_s") {
        c.tx_region.delta_s = parse_double(key, value);
    } else if (key == "user.position") {
        c.user.position = parse_vec3(key, value);
    } else if (key == "user.d_iu") {
        c.user.d_iu = parse_double(key, value);
    } else if (key == "fading.rician_k_db") {
        c.fading.rician_k_db = parse_double(key, value);
    } else if (key == "fading.kappa") {
        c.fading.kappa = parse_double(key, value);
    } else if (key == "multipath.n_paths") {
        c.multipath.n_paths = parse_int(key, value);
    } else if (key == "multipath.scatter_box") {
        const auto v = parse_numbers(key, value, 6);
        for (std::size_t i = 0; i < 6; ++i) c.multipath.scatter_box[i] = v[i];
    } else if (key == "multipath.power_split") {
        c.multipath.power_split = parse_double(key, value);
    } else if (key == "multipath.placement") {
        const std::string t = trim(value);
        if (t == "fixed") {
            c.multipath.placement = ScatterPlacement::kFixed;
        } else if (t == "per-trial" || t == "per_trial") {
            c.multipath.placement = ScatterPlacement::kPerTrial;
        } else {
            throw ConfigError("config key 'multipath.placement': expected fixed|per-trial, got '" + t + "'");
        }
    } else if (key == "multipath.seed") {
        c.multipath.seed = parse_u64(key, value);
    } else if (key == "solver.bcd_max_sweeps") {
        c.solver.bcd.max_sweeps = parse_int(key, value);
    } else if (key == "solver.bcd_rel_tol") {
        c.solver.bcd.rel_tol = parse_double(key, value);
    } else if (key == "solver.ao_max_iters") {
        c.solver.ao_max_iters = parse_int(key, value);
    } else if (key == "solver.ao_rel_tol") {
        c.solver.ao_rel_tol = parse_double(key, value);
    } else if (key == "trials") {
        c.trials = parse_int(key, value);
    } else if (key == "seed") {
        c.seed = parse_u64(key, value);
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

} // namespace

void ScenarioConfig::validate() const {
    if (!(frequency_hz > 0.0)) throw ConfigError("frequency_hz must be positive");
    if (n_antennas < 1) throw ConfigError("n_antennas must be >= 1");
    if (irs.m_y_count < 1 || irs.m_z_count < 1) throw ConfigError("irs element counts must be >= 1");
    if (irs.spacing && !(*irs.spacing > 0.0)) throw ConfigError("irs.spacing must be positive");
    if (!(tx_region.length > 0.0)) throw ConfigError("tx_region.length must be positive");
    if (tx_region.d_min && !(*tx_region.d_min > 0.0)) throw ConfigError("tx_region.d_min must be positive");
    if (!(tx_region.delta_s > 0.0)) throw ConfigError("tx_region.delta_s must be positive");
    if (tx_region.axis.norm() < 1e-12) throw ConfigError("tx_region.axis must be nonzero");
    if (!(user.d_iu > 0.0)) throw ConfigError("user.d_iu must be positive");
    if (!(fading.kappa > 0.0)) throw ConfigError("fading.kappa must be positive");
    if (multipath.n_paths < 0) throw ConfigError("multipath.n_paths must be >= 0");
    if (!(multipath.power_split > 0.0)) throw ConfigError("multipath.power_split must be positive");
    if (multipath.scatter_box[0] >= multipath.scatter_box[1] ||
        multipath.scatter_box[2] >= multipath.scatter_box[3] ||
        multipath.scatter_box[4] >= multipath.scatter_box[5]) {
        throw ConfigError("multipath.scatter_box must be min < max per axis");
    }
    if (solver.bcd.max_sweeps < 1 || !(solver.bcd.rel_tol > 0.0) || solver.ao_max_iters < 1 ||
        !(solver.ao_rel_tol > 0.0)) {
        throw ConfigError("solver settings must be positive");
    }
    if (trials < 1) throw ConfigError("trials must be >= 1");
}

void apply_scenario_line(ScenarioConfig& config, const std::string& raw) {
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') {
        return;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("config line is not 'key = value': '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
        throw ConfigError("config line is not 'key = value': '" + line + "'");
    }
    assign(config, key, value);
}

ScenarioConfig parse_scenario_text(const std::string& text) {
    ScenarioConfig config;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        apply_scenario_line(config, line);
    }
    config.validate();
    return config;
}

ScenarioConfig parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

double wavelength(const ScenarioConfig& config) { return kSpeedOfLight / config.frequency_hz; }

double resolved_irs_spacing(const ScenarioConfig& config) {
    return config.irs.spacing.value_or(0.5 * wavelength(config));
}

double resolved_min_spacing(const ScenarioConfig& config) {
    return config.tx_region.d_min.value_or(0.5 * wavelength(config));
}

IrsGeometry make_irs_geometry(const ScenarioConfig& config) {
    return IrsGeometry{config.irs.m_y_count, config.irs.m_z_count, resolved_irs_spacing(config)};
}

TxRegion make_tx_region(const ScenarioConfig& config) {
    TxRegion region;
    region.center = config.tx_region.center;
    region.axis = config.tx_region.axis.normalized();
    region.length = config.tx_region.length;
    region.min_spacing = resolved_min_spacing(config);
    region.sample_spacing = config.tx_region.delta_s;
    return region;
}

Vec3 resolved_user_position(const ScenarioConfig& config) {
    if (config.user.position) {
        return *config.user.position;
    }
    // Default bearing, scaled so the user sits exactly d_iu from the surface center.
    const Vec3 bearing{3.0, 30.0, -2.0};
    return bearing * (config.user.d_iu / bearing.norm());
}

FadingParams make_fading_params(const ScenarioConfig& config) {
    FadingParams fading;
    fading.rician_k = std::pow(10.0, config.fading.rician_k_db / 10.0);
    fading.kappa = config.fading.kappa;
    fading.distance = config.user.d_iu;
    fading.reference_gain = wavelength(config) / (4.0 * std::numbers::pi);
    return fading;
}

std::uint64_t resolved_scatter_seed(const ScenarioConfig& config) {
    if (config.multipath.seed) {
        return *config.multipath.seed;
    }
    return mix_seed(config.seed, 0x5ca77e7ULL);
}

} // namespace mairs
