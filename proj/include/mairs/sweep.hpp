#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "mairs/config.hpp"

namespace mairs {

enum class SweepVariable { kDistance, kAntennas, kIrsElements };

struct SweepSpec {
    SweepVariable variable;
    std::vector<double> values;
};

struct RunOptions {
    int workers{1};
};

struct SweepRow {
    std::string sweep;   ///< swept variable name
    double value;
    std::string scheme;  ///< MA | FPA_AS | FPA_NOAS | FPA
    int trials;
    double mean_snr_db;  ///< mean of per-trial dB values
    double stderr_db;    ///< sample standard error of those values
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// One (value, trial) Monte-Carlo cell: every scheme consumed the realization whose
/// checksum is recorded here.
struct CellRecord {
    double value;
    int trial;
    std::uint64_t checksum;
    std::vector<std::pair<std::string, double>> snr_db; ///< scheme -> per-trial SNR, dB
};

struct SweepRun {
    std::string name;
    SweepResult result;
    std::vector<CellRecord> cells;
    ScenarioConfig config;
    RunOptions options;
};

/// One channel realization shared by all schemes within a cell.
struct Realization {
    CxVector h_iu;
    ScatterSet scatterers;
};

/// Deterministic draw for one Monte-Carlo cell. `fixed_positions` (if nonempty)
/// supplies shared scatterer locations; only gains are redrawn per trial then.
Realization draw_realization(const ScenarioConfig& scenario, std::uint64_t item_seed,
                             const std::vector<Vec3>& fixed_positions);

/// FNV-1a over the realization's raw values; recorded in the manifest.
std::uint64_t realization_checksum(const Realization& realization);

/// Per-work-item seed: mixes the master seed, the sweep value's bit pattern and the
/// trial index, so results do not depend on scheduling.
std::uint64_t cell_seed(std::uint64_t master_seed, double value, int trial);

/// Copy of `base` with the swept variable applied. Distance moves the region center to
/// [value, 0, 0]; antennas sets N; IRS size requires a perfect-square element count.
/// Throws ConfigError naming the offending value.
ScenarioConfig specialize_scenario(const ScenarioConfig& base, SweepVariable variable, double value);

/// Runs MA / FPA_AS / FPA_NOAS on identical per-cell realizations and averages SNR in dB
/// across trials. Deterministic for a given config regardless of worker count.
SweepRun run_sweep(const ScenarioConfig& config, const SweepSpec& spec, const RunOptions& options = {});

/// LoS-only study: movable antennas against the fixed baselines for N = 1 and N = 4 over
/// the given distances. For N = 1 the baseline is one antenna at the segment point nearest
/// the origin; for N = 4 it is the symmetric fixed array. Requires multipath.n_paths == 0.
SweepRun run_single_ma_study(const ScenarioConfig& config, const std::vector<double>& d_bi_values,
                             const RunOptions& options = {});

/// CSV with header sweep,variable_value,scheme,trials,mean_snr_db,stderr_db;
/// UTF-8, LF endings, 6 significant digits.
void emit_csv(const SweepResult& result, std::ostream& out);
void emit_csv(const SweepResult& result, const std::string& path);

/// Dotted-key text file echoing every resolved parameter, seed, per-cell realization
/// checksum and per-(value, scheme) summary.
void emit_manifest(const SweepRun& run, std::ostream& out);
void emit_manifest(const SweepRun& run, const std::string& path);

/// Runs body(0..n_items-1) on `workers` threads (serially when workers <= 1).
/// Rethrows the first exception raised by any item.
void parallel_for(int n_items, int workers, const std::function<void(int)>& body);

const char* sweep_variable_name(SweepVariable variable);

} // namespace mairs
