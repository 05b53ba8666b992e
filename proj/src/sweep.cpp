#include "mairs/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <numbers>
#include <ostream>
#include <thread>

#include "mairs/analysis.hpp"
#include "mairs/optimize.hpp"
#include "mairs/rng.hpp"

namespace mairs {

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt_exact(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_vec(const Vec3& v) {
    return fmt_exact(v.x) + " " + fmt_exact(v.y) + " " + fmt_exact(v.z);
}

std::uint64_t fnv1a(std::uint64_t hash, std::uint64_t word) {
    for (int byte = 0; byte < 8; ++byte) {
        hash ^= (word >> (8 * byte)) & 0xffULL;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t fnv1a(std::uint64_t hash, double value) {
    return fnv1a(hash, std::bit_cast<std::uint64_t>(value));
}

std::vector<Vec3> draw_scatter_positions(const ScenarioConfig& scenario, std::uint64_t seed) {
    RandomSource rng(seed);
    const auto& box = scenario.multipath.scatter_box;
    std::vector<Vec3> positions;
    positions.reserve(static_cast<std::size_t>(scenario.multipath.n_paths));
    for (int l = 0; l < scenario.multipath.n_paths; ++l) {
        positions.push_back({rng.uniform(box[0], box[1]), rng.uniform(box[2], box[3]),
                             rng.uniform(box[4], box[5])});
    }
    return positions;
}

// Per-path gain scale: total scattered power = power_split x the center LoS path power.
double path_gain_sigma(const ScenarioConfig& scenario) {
    const double d_center = scenario.tx_region.center.norm();
    const double los_amp = wavelength(scenario) / (4.0 * std::numbers::pi * d_center);
    return los_amp * std::sqrt(scenario.multipath.power_split /
                               static_cast<double>(std::max(1, scenario.multipath.n_paths)));
}

struct SchemeSnr {
    std::vector<std::pair<std::string, double>> values;
};

double scheme_snr_db(const ScenarioConfig& scenario, const SolverState& state) {
    return scenario.transmit_snr_db + to_db(state.objective());
}

struct TrialStats {
    double mean{0.0};
    double stderr_db{0.0};
};

TrialStats reduce_db(const std::vector<double>& samples) {
    TrialStats stats;
    const double n = static_cast<double>(samples.size());
    double sum = 0.0;
    for (double s : samples) sum += s;
    stats.mean = sum / n;
    if (samples.size() > 1) {
        double ss = 0.0;
        for (double s : samples) {
            const double d = s - stats.mean;
            ss += d * d;
        }
        stats.stderr_db = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    return stats;
}

// Shared Monte-Carlo driver: `schemes` maps one realization to labeled SNRs.
SweepRun run_cells(const ScenarioConfig& base, std::string run_name,
                   const std::vector<std::string>& row_sweep_names,
                   const std::vector<ScenarioConfig>& scenarios, const std::vector<double>& values,
                   const RunOptions& options,
                   const std::function<SchemeSnr(const ScenarioConfig&, const Realization&)>& schemes) {
    const int trials = base.trials;
    const int n_values = static_cast<int>(values.size());

    std::vector<std::vector<Vec3>> fixed_positions(static_cast<std::size_t>(n_values));
    if (base.multipath.placement == ScatterPlacement::kFixed) {
        const std::uint64_t scatter_seed = resolved_scatter_seed(base);
        for (int vi = 0; vi < n_values; ++vi) {
            fixed_positions[static_cast<std::size_t>(vi)] =
                draw_scatter_positions(scenarios[static_cast<std::size_t>(vi)], scatter_seed);
        }
    }

    SweepRun run;
    run.name = std::move(run_name);
    run.config = base;
    run.options = options;
    run.cells.resize(static_cast<std::size_t>(n_values) * static_cast<std::size_t>(trials));

    parallel_for(n_values * trials, options.workers, [&](int item) {
        const int vi = item / trials;
        const int trial = item % trials;
        const ScenarioConfig& scenario = scenarios[static_cast<std::size_t>(vi)];
        const std::uint64_t seed = cell_seed(base.seed, values[static_cast<std::size_t>(vi)], trial);
        const Realization realization =
            draw_realization(scenario, seed, fixed_positions[static_cast<std::size_t>(vi)]);

        CellRecord& cell = run.cells[static_cast<std::size_t>(item)];
        cell.value = values[static_cast<std::size_t>(vi)];
        cell.trial = trial;
        cell.checksum = realization_checksum(realization);
        cell.snr_db = schemes(scenario, realization).values;
    });

    // Aggregate in deterministic (value, scheme, trial) order.
    for (int vi = 0; vi < n_values; ++vi) {
        const auto& first_cell = run.cells[static_cast<std::size_t>(vi) * static_cast<std::size_t>(trials)];
        for (std::size_t s = 0; s < first_cell.snr_db.size(); ++s) {
            std::vector<double> samples;
            samples.reserve(static_cast<std::size_t>(trials));
            for (int t = 0; t < trials; ++t) {
                samples.push_back(run.cells[static_cast<std::size_t>(vi) * static_cast<std::size_t>(trials) +
                                            static_cast<std::size_t>(t)]
                                      .snr_db[s]
                                      .second);
            }
            const TrialStats stats = reduce_db(samples);
            run.result.rows.push_back({row_sweep_names[static_cast<std::size_t>(vi)],
                                       values[static_cast<std::size_t>(vi)], first_cell.snr_db[s].first,
                                       trials, stats.mean, stats.stderr_db});
        }
    }
    return run;
}

} // namespace

const char* sweep_variable_name(SweepVariable variable) {
    switch (variable) {
        case SweepVariable::kDistance: return "d_bi";
        case SweepVariable::kAntennas: return "n_antennas";
        case SweepVariable::kIrsElements: return "m_elements";
    }
    return "unknown";
}

std::uint64_t cell_seed(std::uint64_t master_seed, double value, int trial) {
    return mix_seed(master_seed, std::bit_cast<std::uint64_t>(value),
                    static_cast<std::uint64_t>(trial));
}

ScenarioConfig specialize_scenario(const ScenarioConfig& base, SweepVariable variable, double value) {
    ScenarioConfig scenario = base;
    switch (variable) {
        case SweepVariable::kDistance: {
            if (!(value > 0.0)) {
                throw ConfigError("sweep value " + fmt6(value) + ": distance must be positive");
            }
            scenario.tx_region.center = Vec3{value, 0.0, 0.0};
            break;
        }
        case SweepVariable::kAntennas: {
            const int n = static_cast<int>(std::lround(value));
            if (n < 1 || std::abs(value - n) > 1e-9) {
                throw ConfigError("sweep value " + fmt6(value) + ": antenna count must be a positive integer");
            }
            scenario.n_antennas = n;
            break;
        }
        case SweepVariable::kIrsElements: {
            const int m = static_cast<int>(std::lround(value));
            const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
            if (m < 1 || std::abs(value - m) > 1e-9 || side * side != m) {
                throw ConfigError("sweep value " + fmt6(value) +
                                  ": element count must be a positive perfect square");
            }
            scenario.irs.m_y_count = side;
            scenario.irs.m_z_count = side;
            break;
        }
    }
    scenario.validate();
    return scenario;
}

Realization draw_realization(const ScenarioConfig& scenario, std::uint64_t item_seed,
                             const std::vector<Vec3>& fixed_positions) {
    const double lambda = wavelength(scenario);
    Realization realization;
    realization.h_iu = rician_irs_user(make_irs_geometry(scenario), resolved_user_position(scenario),
                                       make_fading_params(scenario), lambda,
                                       mix_seed(item_seed, 1));

    std::vector<Vec3> positions = fixed_positions;
    if (scenario.multipath.placement == ScatterPlacement::kPerTrial) {
        positions = draw_scatter_positions(scenario, mix_seed(item_seed, 3));
    }
    if (static_cast<int>(positions.size()) != scenario.multipath.n_paths) {
        throw ConfigError("scatterer placement does not match multipath.n_paths");
    }

    RandomSource gain_rng(mix_seed(item_seed, 2));
    const double sigma = path_gain_sigma(scenario);
    realization.scatterers.reserve(positions.size());
    for (const Vec3& p : positions) {
        realization.scatterers.push_back({p, sigma * gain_rng.complex_normal()});
    }
    return realization;
}

std::uint64_t realization_checksum(const Realization& realization) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (Eigen::Index m = 0; m < realization.h_iu.size(); ++m) {
        hash = fnv1a(hash, realization.h_iu[m].real());
        hash = fnv1a(hash, realization.h_iu[m].imag());
    }
    for (const auto& s : realization.scatterers) {
        hash = fnv1a(hash, s.position.x);
        hash = fnv1a(hash, s.position.y);
        hash = fnv1a(hash, s.position.z);
        hash = fnv1a(hash, s.gain.real());
        hash = fnv1a(hash, s.gain.imag());
    }
    return hash;
}

SweepRun run_sweep(const ScenarioConfig& config, const SweepSpec& spec, const RunOptions& options) {
    config.validate();
    if (spec.values.empty()) {
        throw ConfigError("sweep values must be nonempty");
    }
    std::vector<ScenarioConfig> scenarios;
    scenarios.reserve(spec.values.size());
    for (double v : spec.values) {
        scenarios.push_back(specialize_scenario(config, spec.variable, v));
    }
    const std::string var_name = sweep_variable_name(spec.variable);
    const std::vector<std::string> row_names(spec.values.size(), var_name);

    auto schemes = [](const ScenarioConfig& scenario, const Realization& realization) {
        const IrsGeometry geom = make_irs_geometry(scenario);
        const TxRegion region = make_tx_region(scenario);
        const double lambda = wavelength(scenario);
        const NearFieldChannel channel(geom, lambda, realization.scatterers);
        const AoSettings ao = scenario.ao_settings();

        SchemeSnr out;
        out.values.emplace_back(
            "MA", scheme_snr_db(scenario, ao_solve(realization.h_iu, channel, region,
                                                   scenario.n_antennas, ao)));
        out.values.emplace_back(
            "FPA_AS", scheme_snr_db(scenario, fpa_with_as(realization.h_iu, channel, region,
                                                          scenario.n_antennas, ao)));
        out.values.emplace_back(
            "FPA_NOAS", scheme_snr_db(scenario, fpa_without_as(realization.h_iu, channel, region,
                                                               scenario.n_antennas, ao.bcd)));
        return out;
    };

    return run_cells(config, "sweep_" + std::string(var_name == "d_bi" ? "distance"
                                                    : var_name == "n_antennas" ? "antennas"
                                                                               : "irs"),
                     row_names, scenarios, spec.values, options, schemes);
}

SweepRun run_single_ma_study(const ScenarioConfig& config, const std::vector<double>& d_bi_values,
                             const RunOptions& options) {
    config.validate();
    if (config.multipath.n_paths != 0) {
        throw ConfigError("single-antenna study requires multipath.n_paths = 0");
    }
    if (d_bi_values.empty()) {
        throw ConfigError("sweep values must be nonempty");
    }
    std::vector<ScenarioConfig> scenarios;
    scenarios.reserve(d_bi_values.size());
    for (double v : d_bi_values) {
        scenarios.push_back(specialize_scenario(config, SweepVariable::kDistance, v));
    }
    const std::vector<std::string> row_names(d_bi_values.size(), "d_bi");

    auto schemes = [](const ScenarioConfig& scenario, const Realization& realization) {
        const IrsGeometry geom = make_irs_geometry(scenario);
        const TxRegion region = make_tx_region(scenario);
        const double lambda = wavelength(scenario);
        const NearFieldChannel channel(geom, lambda, realization.scatterers);
        const AoSettings ao = scenario.ao_settings();

        SchemeSnr out;
        for (int n : {1, 4}) {
            const std::string suffix = "_N" + std::to_string(n);
            out.values.emplace_back(
                "MA" + suffix,
                scheme_snr_db(scenario, ao_solve(realization.h_iu, channel, region, n, ao)));
            SolverState baseline;
            if (n == 1) {
                Apv apv;
                apv.positions.push_back(optimal_single_position(region));
                baseline = fpa_fixed(realization.h_iu, channel, apv, ao.bcd);
            } else {
                baseline = fpa_without_as(realization.h_iu, channel, region, n, ao.bcd);
            }
            out.values.emplace_back("FPA" + suffix, scheme_snr_db(scenario, baseline));
        }
        return out;
    };

    return run_cells(config, "single_ma", row_names, scenarios, d_bi_values, options, schemes);
}

void emit_csv(const SweepResult& result, std::ostream& out) {
    out << "sweep,variable_value,scheme,trials,mean_snr_db,stderr_db\n";
    for (const SweepRow& row : result.rows) {
        out << row.sweep << ',' << fmt6(row.value) << ',' << row.scheme << ',' << row.trials << ','
            << fmt6(row.mean_snr_db) << ',' << fmt6(row.stderr_db) << '\n';
    }
}

void emit_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write CSV file '" + path + "'");
    }
    emit_csv(result, out);
    if (!out.good()) {
        throw std::runtime_error("error while writing CSV file '" + path + "'");
    }
}

void emit_manifest(const SweepRun& run, std::ostream& out) {
    const ScenarioConfig& c = run.config;
    char hex[32];

    out << "run.name = " << run.name << "\n";
    out << "run.trials = " << c.trials << "\n";
    out << "run.seed = " << c.seed << "\n";
    out << "run.workers = " << run.options.workers << "\n";
    out << "averaging.domain = db\n";

    out << "config.frequency_hz = " << fmt_exact(c.frequency_hz) << "\n";
    out << "config.wavelength_m = " << fmt_exact(wavelength(c)) << "\n";
    out << "config.n_antennas = " << c.n_antennas << "\n";
    out << "config.transmit_snr_db = " << fmt_exact(c.transmit_snr_db) << "\n";
    out << "config.irs.m_y_count = " << c.irs.m_y_count << "\n";
    out << "config.irs.m_z_count = " << c.irs.m_z_count << "\n";
    out << "config.irs.spacing = " << fmt_exact(resolved_irs_spacing(c)) << "\n";
    out << "config.tx_region.center = " << fmt_vec(c.tx_region.center) << "\n";
    out << "config.tx_region.axis = " << fmt_vec(c.tx_region.axis) << "\n";
    out << "config.tx_region.length = " << fmt_exact(c.tx_region.length) << "\n";
    out << "config.tx_region.d_min = " << fmt_exact(resolved_min_spacing(c)) << "\n";
    out << "config.tx_region.delta_s = " << fmt_exact(c.tx_region.delta_s) << "\n";
    out << "config.user.position = " << fmt_vec(resolved_user_position(c)) << "\n";
    out << "config.user.d_iu = " << fmt_exact(c.user.d_iu) << "\n";
    out << "config.fading.rician_k_db = " << fmt_exact(c.fading.rician_k_db) << "\n";
    out << "config.fading.rician_k_linear = " << fmt_exact(make_fading_params(c).rician_k) << "\n";
    out << "config.fading.kappa = " << fmt_exact(c.fading.kappa) << "\n";
    out << "config.multipath.n_paths = " << c.multipath.n_paths << "\n";
    out << "config.multipath.scatter_box =";
    for (double b : c.multipath.scatter_box) out << ' ' << fmt_exact(b);
    out << "\n";
    out << "config.multipath.power_split = " << fmt_exact(c.multipath.power_split) << "\n";
    out << "config.multipath.placement = "
        << (c.multipath.placement == ScatterPlacement::kFixed ? "fixed" : "per-trial") << "\n";
    out << "config.multipath.scatter_seed = " << resolved_scatter_seed(c) << "\n";
    out << "config.solver.bcd_max_sweeps = " << c.solver.bcd.max_sweeps << "\n";
    out << "config.solver.bcd_rel_tol = " << fmt_exact(c.solver.bcd.rel_tol) << "\n";
    out << "config.solver.ao_max_iters = " << c.solver.ao_max_iters << "\n";
    out << "config.solver.ao_rel_tol = " << fmt_exact(c.solver.ao_rel_tol) << "\n";
    out << "build.version = 0.1.0\n";

    for (const SweepRow& row : run.result.rows) {
        out << "summary." << row.sweep << '.' << fmt6(row.value) << '.' << row.scheme
            << ".mean_snr_db = " << fmt6(row.mean_snr_db) << "\n";
    }
    for (const CellRecord& cell : run.cells) {
        std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(cell.checksum));
        out << "cell." << fmt6(cell.value) << '.' << cell.trial << ".checksum = " << hex << "\n";
    }
}

void emit_manifest(const SweepRun& run, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write manifest file '" + path + "'");
    }
    emit_manifest(run, out);
    if (!out.good()) {
        throw std::runtime_error("error while writing manifest file '" + path + "'");
    }
}

void parallel_for(int n_items, int workers, const std::function<void(int)>& body) {
    if (workers <= 1 || n_items <= 1) {
        for (int i = 0; i < n_items; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const int n_threads = std::min(workers, n_items);
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int w = 0; w < n_threads; ++w) {
        pool.emplace_back([&] {
            while (true) {
                const int item = next.fetch_add(1);
                if (item >= n_items) {
                    return;
                }
                try {
                    body(item);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!first_error) {
                        first_error = std::current_exception();
                    }
                }
            }
        });
    }
    for (auto& t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

} // namespace mairs
