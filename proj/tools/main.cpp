#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mairs/analysis.hpp"
#include "mairs/beamforming.hpp"
#include "mairs/config.hpp"
#include "mairs/optimize.hpp"
#include "mairs/rng.hpp"
#include "mairs/sweep.hpp"

namespace {

using namespace mairs;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    std::optional<int> trials;
    std::optional<std::uint64_t> seed;
    int workers = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "scenario config file (dotted-key text)");
    cmd->add_option("--out", args.out_dir, "output directory for CSV and manifest");
    cmd->add_option("--trials", args.trials, "Monte-Carlo trials per sweep point");
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--workers", args.workers, "worker threads")->check(CLI::PositiveNumber);
}

ScenarioConfig load_config(const CommonArgs& args) {
    ScenarioConfig config =
        args.config_path.empty() ? ScenarioConfig{} : parse_scenario_file(args.config_path);
    if (args.trials) config.trials = *args.trials;
    if (args.seed) config.seed = *args.seed;
    config.validate();
    return config;
}

void write_outputs(const SweepRun& run, const CommonArgs& args) {
    std::filesystem::create_directories(args.out_dir);
    const std::string base = args.out_dir + "/" + run.name;
    emit_csv(run.result, base + ".csv");
    emit_manifest(run, base + "_manifest.txt");
    std::printf("wrote %s.csv and %s_manifest.txt\n", base.c_str(), base.c_str());
}

std::vector<double> default_distances() { return {2, 3, 4, 5, 6, 7, 8, 9, 10}; }

int run_analysis_checks() {
    int failures = 0;
    auto report = [&](const char* name, bool ok, const std::string& detail) {
        std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name, detail.empty() ? "" : ": ",
                    detail.c_str());
        if (!ok) ++failures;
    };

    const double lambda = 0.06;
    const IrsGeometry geom{25, 25, 0.5 * lambda};
    const CxVector ones = CxVector::Ones(geom.element_count());
    const std::vector<double> unit_mags(static_cast<std::size_t>(geom.element_count()), 1.0);

    {
        // Radial approximation against the exact co-phased gain, error shrinking with range.
        std::vector<double> errors;
        for (double r : {2.0, 5.0, 10.0, 20.0}) {
            const Vec3 t{r / std::sqrt(2.0), r / std::sqrt(2.0), 0.0};
            const double exact = effective_gain_single(t, geom, ones, lambda);
            const double approx = approx_gain(t, geom, unit_mags, lambda);
            errors.push_back(std::abs(approx - exact) / exact);
        }
        bool monotone = true;
        for (std::size_t i = 1; i < errors.size(); ++i) {
            monotone = monotone && errors[i] < errors[i - 1];
        }
        char detail[128];
        std::snprintf(detail, sizeof(detail), "rel. error at 2m..20m: %.2e -> %.2e", errors.front(),
                      errors.back());
        report("radial gain approximation", errors.front() < 0.01 && monotone, detail);
    }
    {
        // Gain fluctuation grows with the aperture...
        std::vector<double> diffs;
        for (int my : {8, 16, 32}) {
            const IrsGeometry g{my, 8, 0.03};
            const std::vector<double> mags(static_cast<std::size_t>(g.element_count()), 1.0);
            diffs.push_back(
                gain_fluctuation({2, 0, 0}, {3, 0, 0}, g, mags, lambda).difference);
        }
        const bool grow = diffs[0] < diffs[1] && diffs[1] < diffs[2];
        // ...and shrinks with the array-to-surface distance.
        std::vector<double> by_distance;
        const IrsGeometry g88{8, 8, 0.03};
        const std::vector<double> mags64(64, 1.0);
        for (double d : {2.0, 5.0, 10.0, 20.0}) {
            by_distance.push_back(
                gain_fluctuation({d, 0, 0}, {d, 0.3, 0}, g88, mags64, lambda).difference);
        }
        bool shrink = true;
        for (std::size_t i = 1; i < by_distance.size(); ++i) {
            shrink = shrink && by_distance[i] < by_distance[i - 1];
        }
        report("gain-fluctuation monotonicity", grow && shrink, "");
    }
    {
        TxRegion region{{5, 5, 0}, {1, 0, 0}, 0.6, 0.03, 0.01};
        const auto rows = farfield_uniformity_check(geom, region, {2, 5, 10, 50, 1000, 2000}, lambda);
        bool decreasing = true;
        for (std::size_t i = 1; i < rows.size(); ++i) {
            decreasing = decreasing && rows[i].spread < rows[i - 1].spread;
        }
        char detail[128];
        std::snprintf(detail, sizeof(detail), "spread 2m: %.3e, 2000m: %.3e", rows.front().spread,
                      rows.back().spread);
        report("far-field gain uniformity",
               decreasing && rows.back().spread < 1e-3 && rows.front().spread > 10.0 * rows.back().spread,
               detail);
    }
    {
        // The best single-antenna site never depends on the user-link magnitudes.
        TxRegion region{{5, 5, 0}, {1, 0, 0}, 0.6, 0.03, 0.01};
        const Vec3 best = optimal_single_position(region);
        const auto sites = sample_tx_region(region);
        bool all_match = true;
        RandomSource rng(99);
        for (int draw = 0; draw < 20 && all_match; ++draw) {
            CxVector h(geom.element_count());
            for (Eigen::Index m = 0; m < h.size(); ++m) {
                h[m] = Cx(0.1 + rng.uniform(), 0.0);
            }
            std::size_t argmax = 0;
            double best_gain = -1.0;
            std::size_t nearest = 0;
            double best_dist = 1e9;
            for (std::size_t l = 0; l < sites.size(); ++l) {
                const double g = effective_gain_single(sites[l], geom, h, lambda);
                if (g > best_gain) {
                    best_gain = g;
                    argmax = l;
                }
                const double d = distance(sites[l], best);
                if (d < best_dist) {
                    best_dist = d;
                    nearest = l;
                }
            }
            all_match = (argmax == nearest);
        }
        report("optimal single position is channel-independent", all_match, "");
    }
    return failures == 0 ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator for a movable-antenna MISO downlink assisted by a reflecting surface"};
    app.require_subcommand(1);

    CommonArgs args;

    auto* sweep_distance = app.add_subcommand("sweep-distance", "received SNR vs. array-surface distance");
    auto* sweep_antennas = app.add_subcommand("sweep-antennas", "received SNR vs. number of antennas");
    auto* sweep_irs = app.add_subcommand("sweep-irs", "received SNR vs. number of reflecting elements");
    auto* single_ma = app.add_subcommand("single-ma", "movable vs. fixed antennas, LoS channel, N = 1 and 4");
    auto* check = app.add_subcommand("check-analysis", "run the analytical predicate suite");
    for (auto* cmd : {sweep_distance, sweep_antennas, sweep_irs, single_ma, check}) {
        add_common(cmd, args);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (check->parsed()) {
            return run_analysis_checks();
        }
        const ScenarioConfig config = load_config(args);
        const RunOptions options{args.workers};

        if (sweep_distance->parsed()) {
            write_outputs(run_sweep(config, {SweepVariable::kDistance, default_distances()}, options),
                          args);
        } else if (sweep_antennas->parsed()) {
            write_outputs(run_sweep(config, {SweepVariable::kAntennas, {2, 4, 6, 8}}, options), args);
        } else if (sweep_irs->parsed()) {
            write_outputs(
                run_sweep(config, {SweepVariable::kIrsElements, {81, 121, 169, 225, 289, 361}}, options),
                args);
        } else if (single_ma->parsed()) {
            ScenarioConfig study = config;
            study.multipath.n_paths = 0; // LoS-only by definition of the study
            write_outputs(run_single_ma_study(study, default_distances(), options), args);
        }
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
