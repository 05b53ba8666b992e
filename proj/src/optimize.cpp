#include "mairs/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mairs {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

int max_feasible_select(int n_sites, int gap) { return (n_sites - 1) / gap + 1; }

void check_selection_problem(const SelectionProblem& p) {
    if (p.n_select < 1 || p.min_gap < 1) {
        throw std::invalid_argument("SelectionProblem: n_select and min_gap must be >= 1");
    }
    const int n_sites = static_cast<int>(p.weights.size());
    if ((p.n_select - 1) * p.min_gap + 1 > n_sites) {
        throw InfeasibleSelection(p.n_select, n_sites == 0 ? 0 : max_feasible_select(n_sites, p.min_gap));
    }
}

} // namespace

InfeasibleSelection::InfeasibleSelection(int requested, int max_feasible)
    : std::invalid_argument("infeasible selection: requested " + std::to_string(requested) +
                            " sites, maximum feasible is " + std::to_string(max_feasible)),
      max_feasible_(max_feasible) {}

BcdResult bcd_phase_opt(const CxMatrix& g1, const PhaseVector& init, const BcdSettings& settings) {
    const Eigen::Index m_count = g1.rows();
    if (init.size() != m_count) {
        throw std::invalid_argument("bcd_phase_opt: phase/matrix dimension mismatch");
    }
    if (settings.max_sweeps < 1 || !(settings.rel_tol > 0.0)) {
        throw std::invalid_argument("bcd_phase_opt: bad settings");
    }

    BcdResult result;
    result.phases = init;
    auto& phi = result.phases.phi;

    // Running sum S = sum_m g1_m^T e^{j phi_m}, updated incrementally per element.
    CxVector sum = CxVector::Zero(g1.cols());
    for (Eigen::Index m = 0; m < m_count; ++m) {
        sum += g1.row(m).transpose() * std::polar(1.0, phi[static_cast<std::size_t>(m)]);
    }
    result.trace.push_back(sum.squaredNorm());

    for (int sweep = 0; sweep < settings.max_sweeps; ++sweep) {
        const double sweep_start = result.trace.back();
        for (Eigen::Index m = 0; m < m_count; ++m) {
            const CxVector gm = g1.row(m).transpose();
            const CxVector rest = sum - gm * std::polar(1.0, phi[static_cast<std::size_t>(m)]);
            // Maximize ||rest + gm e^{j phi}||^2 = c + 2 Re(e^{j phi} <gm, rest>).
            const Cx inner = gm.dot(rest); // sum_n conj(gm_n) rest_n
            if (inner != Cx(0.0, 0.0)) {
                phi[static_cast<std::size_t>(m)] = wrap_phase(std::arg(inner));
            }
            sum = rest + gm * std::polar(1.0, phi[static_cast<std::size_t>(m)]);
            result.trace.push_back(sum.squaredNorm());
        }
        const double sweep_end = result.trace.back();
        if (sweep_end - sweep_start <= settings.rel_tol * std::max(sweep_start, 1e-300)) {
            break;
        }
    }
    return result;
}

Selection dp_position_select(const SelectionProblem& p) {
    check_selection_problem(p);
    const int n_sites = static_cast<int>(p.weights.size());
    const int n = p.n_select;
    const int gap = p.min_gap;

    // best[k][l]: max total of k picks from sites >= l; row k=0 is all zeros.
    std::vector<std::vector<double>> best(static_cast<std::size_t>(n) + 1,
                                          std::vector<double>(static_cast<std::size_t>(n_sites) + 1, 0.0));
    auto take_value = [&](int k, int l) -> double {
        if (k == 1) {
            return p.weights[static_cast<std::size_t>(l)];
        }
        const int next = l + gap;
        if (next >= n_sites) {
            return kNegInf;
        }
        const double rest = best[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(next)];
        return rest == kNegInf ? kNegInf : p.weights[static_cast<std::size_t>(l)] + rest;
    };

    for (int k = 1; k <= n; ++k) {
        auto& row = best[static_cast<std::size_t>(k)];
        row[static_cast<std::size_t>(n_sites)] = kNegInf;
        for (int l = n_sites - 1; l >= 0; --l) {
            row[static_cast<std::size_t>(l)] = std::max(row[static_cast<std::size_t>(l) + 1], take_value(k, l));
        }
    }

    Selection out;
    out.total = best[static_cast<std::size_t>(n)][0];
    out.indices.reserve(static_cast<std::size_t>(n));
    int pos = 0;
    for (int k = n; k >= 1; --k) {
        const double target = best[static_cast<std::size_t>(k)][static_cast<std::size_t>(pos)];
        int l = pos;
        while (take_value(k, l) != target) {
            ++l;
        }
        out.indices.push_back(l);
        pos = l + gap;
    }
    return out;
}

Selection brute_force_select(const SelectionProblem& p) {
    check_selection_problem(p);
    const int n_sites = static_cast<int>(p.weights.size());
    const int n = p.n_select;
    const int gap = p.min_gap;

    double combos = 1.0;
    for (int i = 0; i < n; ++i) {
        combos *= static_cast<double>(n_sites - i) / static_cast<double>(i + 1);
    }
    if (combos > 1e7) {
        throw std::length_error("brute_force_select: instance too large");
    }

    Selection out;
    out.total = kNegInf;
    std::vector<int> pick(static_cast<std::size_t>(n));

    // Depth-first in lexicographic order; first optimum found is the tie-break winner.
    // Totals are summed back-to-front so they associate exactly like the DP recurrence.
    auto recurse = [&](auto&& self, int depth, int start) -> void {
        if (depth == n) {
            double total = 0.0;
            for (int i = n - 1; i >= 0; --i) {
                total = p.weights[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])] + total;
            }
            if (total > out.total) {
                out.total = total;
                out.indices = pick;
            }
            return;
        }
        const int remaining = n - depth - 1;
        for (int l = start; l + remaining * gap <= n_sites - 1; ++l) {
            pick[static_cast<std::size_t>(depth)] = l;
            self(self, depth + 1, l + gap);
        }
    };
    recurse(recurse, 0, 0);
    return out;
}

namespace {

struct GridContext {
    std::vector<Vec3> sites;
    CxMatrix site_columns; // M x L, column l = channel column at site l
    int gap{1};
};

GridContext build_grid(const CxVector& h_iu, const BsIrsChannel& channel, const TxRegion& region) {
    GridContext ctx;
    ctx.sites = sample_tx_region(region);
    ctx.gap = min_index_gap(region.min_spacing, region.sample_spacing);
    const Eigen::Index m = h_iu.size();
    ctx.site_columns.resize(m, static_cast<Eigen::Index>(ctx.sites.size()));
    for (std::size_t l = 0; l < ctx.sites.size(); ++l) {
        ctx.site_columns.col(static_cast<Eigen::Index>(l)) = channel.column(ctx.sites[l]);
    }
    if (ctx.site_columns.rows() != m) {
        throw std::invalid_argument("ao_solve: channel/user-link dimension mismatch");
    }
    return ctx;
}

CxMatrix weighted_columns(const CxVector& h_iu, const CxMatrix& site_columns,
                          const std::vector<int>& selected) {
    CxMatrix g1(site_columns.rows(), static_cast<Eigen::Index>(selected.size()));
    for (std::size_t n = 0; n < selected.size(); ++n) {
        g1.col(static_cast<Eigen::Index>(n)) =
            h_iu.conjugate().cwiseProduct(site_columns.col(selected[n]));
    }
    return g1;
}

// |h_iu^H diag(e^{j phi}) column_l|^2 for every site l in one pass.
std::vector<double> site_weights(const CxVector& h_iu, const PhaseVector& phases,
                                 const CxMatrix& site_columns) {
    CxVector q(h_iu.size());
    for (Eigen::Index i = 0; i < h_iu.size(); ++i) {
        q[i] = std::conj(h_iu[i]) * std::polar(1.0, phases.phi[static_cast<std::size_t>(i)]);
    }
    const Eigen::RowVectorXcd row = q.transpose() * site_columns;
    std::vector<double> weights(static_cast<std::size_t>(row.size()));
    for (Eigen::Index l = 0; l < row.size(); ++l) {
        weights[static_cast<std::size_t>(l)] = std::norm(row[l]);
    }
    return weights;
}

PhaseVector initial_phases(const CxVector& h_iu, const BsIrsChannel& channel, const Vec3& at) {
    return aligned_phases(channel.column(at), h_iu);
}

std::vector<int> initial_indices(const TxRegion& region, int n_antennas, int gap, int n_sites) {
    const int span = (n_antennas - 1) * gap;
    if (span >= n_sites) {
        throw InfeasibleSelection(n_antennas, max_feasible_select(n_sites, gap));
    }
    const double ideal_start =
        (0.5 * region.length - 0.5 * static_cast<double>(n_antennas - 1) * region.min_spacing) /
        region.sample_spacing;
    int start = static_cast<int>(std::lround(ideal_start));
    start = std::clamp(start, 0, n_sites - 1 - span);
    std::vector<int> idx(static_cast<std::size_t>(n_antennas));
    for (int n = 0; n < n_antennas; ++n) {
        idx[static_cast<std::size_t>(n)] = start + n * gap;
    }
    return idx;
}

Apv indices_to_apv(const GridContext& ctx, const std::vector<int>& indices) {
    Apv apv;
    apv.positions.reserve(indices.size());
    for (int l : indices) {
        apv.positions.push_back(ctx.sites[static_cast<std::size_t>(l)]);
    }
    return apv;
}


SolverState finalize_state(const CxVector& h_iu, const GridContext& ctx,
                           const std::vector<int>& indices, PhaseVector phases,
                           std::vector<double> trace) {
    SolverState state;
    state.apv = indices_to_apv(ctx, indices);
    CxMatrix h(ctx.site_columns.rows(), static_cast<Eigen::Index>(indices.size()));
    for (std::size_t n = 0; n < indices.size(); ++n) {
        h.col(static_cast<Eigen::Index>(n)) = ctx.site_columns.col(indices[n]);
    }
    state.beam = mrt(h_iu, phases, h);
    state.phases = std::move(phases);
    state.objective_trace = std::move(trace);
    return state;
}

} // namespace

namespace {

// One alternating run (phases, then reselection, repeated) from a given start.
SolverState ao_run(const CxVector& h_iu, const GridContext& ctx, int n_antennas,
                   const AoSettings& settings, std::vector<int> selected, PhaseVector phases) {
    std::vector<double> trace;
    {
        const CxMatrix g1 = weighted_columns(h_iu, ctx.site_columns, selected);
        CxVector s = CxVector::Zero(g1.cols());
        for (Eigen::Index m = 0; m < g1.rows(); ++m) {
            s += g1.row(m).transpose() * std::polar(1.0, phases.phi[static_cast<std::size_t>(m)]);
        }
        trace.push_back(s.squaredNorm());
    }

    for (int iter = 0; iter < settings.max_iters; ++iter) {
        const double iter_start = trace.back();

        const CxMatrix g1 = weighted_columns(h_iu, ctx.site_columns, selected);
        BcdResult bcd = bcd_phase_opt(g1, phases, settings.bcd);
        phases = std::move(bcd.phases);
        trace.push_back(bcd.trace.back());

        SelectionProblem problem{site_weights(h_iu, phases, ctx.site_columns), n_antennas, ctx.gap};
        Selection pick = dp_position_select(problem);
        selected = pick.indices;
        trace.push_back(pick.total);

        if (trace.back() - iter_start <= settings.rel_tol * std::max(iter_start, 1e-300)) {
            break;
        }
    }
    return finalize_state(h_iu, ctx, selected, std::move(phases), std::move(trace));
}

void check_ao_args(const TxRegion& region, int n_antennas, const AoSettings& settings) {
    region.validate();
    if (n_antennas < 1) {
        throw std::invalid_argument("ao_solve: need at least one antenna");
    }
    if (settings.max_iters < 1 || !(settings.rel_tol > 0.0)) {
        throw std::invalid_argument("ao_solve: bad settings");
    }
}

// Extra ascent seeded by another solution's phases, with the sites reselected optimally
// for those phases on this grid. The reselection total is at least the sum over any
// feasible embedding of the source's own sites, so the warm run starts no lower.
SolverState best_of_warm(SolverState cold, const CxVector& h_iu, const GridContext& ctx,
                         int n_antennas, const AoSettings& settings, const PhaseVector& warm_phases) {
    SelectionProblem problem{site_weights(h_iu, warm_phases, ctx.site_columns), n_antennas, ctx.gap};
    SolverState warm =
        ao_run(h_iu, ctx, n_antennas, settings, dp_position_select(problem).indices, warm_phases);
    return warm.objective() > cold.objective() ? warm : cold;
}

} // namespace

int min_index_gap(double min_spacing, double grid_spacing) {
    const double ratio = min_spacing / grid_spacing;
    return std::max(1, static_cast<int>(std::ceil(ratio - 1e-9)));
}

SolverState ao_solve(const CxVector& h_iu, const BsIrsChannel& channel, const TxRegion& region,
                     int n_antennas, const AoSettings& settings) {
    check_ao_args(region, n_antennas, settings);
    const GridContext ctx = build_grid(h_iu, channel, region);
    SolverState best = ao_run(h_iu, ctx, n_antennas, settings,
                              initial_indices(region, n_antennas, ctx.gap,
                                              static_cast<int>(ctx.sites.size())),
                              initial_phases(h_iu, channel, region.center));
    // Alternation is a local ascent, so also continue from the baselines' phase
    // solutions: the symmetric fixed array's, and on strictly finer grids the
    // coarse-grid selection result's.
    if (static_cast<double>(n_antennas) * region.min_spacing <= region.length + 1e-12) {
        const SolverState fixed = fpa_without_as(h_iu, channel, region, n_antennas, settings.bcd);
        best = best_of_warm(std::move(best), h_iu, ctx, n_antennas, settings, fixed.phases);
    }
    if (ctx.gap > 1) {
        const SolverState coarse = fpa_with_as(h_iu, channel, region, n_antennas, settings);
        best = best_of_warm(std::move(best), h_iu, ctx, n_antennas, settings, coarse.phases);
    }
    return best;
}

SolverState fpa_with_as(const CxVector& h_iu, const BsIrsChannel& channel, const TxRegion& region,
                        int n_antennas, const AoSettings& settings) {
    // Same solver on the coarse candidate grid whose pitch is the antenna spacing;
    // its unit index gap also ends the warm-start recursion above.
    TxRegion coarse = region;
    coarse.sample_spacing = region.min_spacing;
    return ao_solve(h_iu, channel, coarse, n_antennas, settings);
}

Apv symmetric_fixed_apv(const TxRegion& region, int n_antennas) {
    region.validate();
    if (n_antennas < 1) {
        throw std::invalid_argument("symmetric_fixed_apv: need at least one antenna");
    }
    if (static_cast<double>(n_antennas) * region.min_spacing > region.length + 1e-12) {
        throw std::invalid_argument("symmetric_fixed_apv: array does not fit the region");
    }
    Apv apv;
    apv.positions.reserve(static_cast<std::size_t>(n_antennas));
    const double mid = 0.5 * static_cast<double>(n_antennas - 1);
    for (int n = 0; n < n_antennas; ++n) {
        apv.positions.push_back(region.center +
                                region.axis * ((static_cast<double>(n) - mid) * region.min_spacing));
    }
    return apv;
}

SolverState fpa_without_as(const CxVector& h_iu, const BsIrsChannel& channel, const TxRegion& region,
                           int n_antennas, const BcdSettings& settings) {
    return fpa_fixed(h_iu, channel, symmetric_fixed_apv(region, n_antennas), settings);
}

SolverState fpa_fixed(const CxVector& h_iu, const BsIrsChannel& channel, const Apv& apv,
                      const BcdSettings& settings) {
    if (apv.size() < 1) {
        throw std::invalid_argument("fpa_fixed: empty placement");
    }
    const CxMatrix h = channel.matrix(apv);
    if (h.rows() != h_iu.size()) {
        throw std::invalid_argument("fpa_fixed: channel/user-link dimension mismatch");
    }
    CxMatrix g1(h.rows(), h.cols());
    for (Eigen::Index n = 0; n < h.cols(); ++n) {
        g1.col(n) = h_iu.conjugate().cwiseProduct(h.col(n));
    }
    PhaseVector init = aligned_phases(h.col((h.cols() - 1) / 2), h_iu);
    BcdResult bcd = bcd_phase_opt(g1, init, settings);

    SolverState state;
    state.apv = apv;
    state.beam = mrt(h_iu, bcd.phases, h);
    state.objective_trace = {bcd.trace.front(), bcd.trace.back()};
    state.phases = std::move(bcd.phases);
    return state;
}

} // namespace mairs
