#pragma once

#include <stdexcept>
#include <vector>

#include "mairs/beamforming.hpp"
#include "mairs/channel.hpp"
#include "mairs/geometry.hpp"

namespace mairs {

struct BcdSettings {
    int max_sweeps{20};
    double rel_tol{1e-6};
};

struct AoSettings {
    int max_iters{30};
    double rel_tol{1e-5};
    BcdSettings bcd{};
};

/// Pick n_select grid indices maximizing the weight sum, any two selected indices at
/// least min_gap apart.
struct SelectionProblem {
    std::vector<double> weights; ///< nonnegative, one per candidate site
    int n_select{1};
    int min_gap{1};
};

struct Selection {
    std::vector<int> indices; ///< strictly increasing, 0-based
    double total{0.0};
};

class InfeasibleSelection : public std::invalid_argument {
  public:
    InfeasibleSelection(int requested, int max_feasible);
    int max_feasible_n() const { return max_feasible_; }

  private:
    int max_feasible_;
};

/// Per-element coordinate descent on the reflection phases for a fixed placement.
/// g1 row m is conj(h_iu_m) * H_m,: ; the objective is ||sum_m g1_m e^{j phi_m}||^2.
/// Each element update is the exact 1-D maximizer, so the per-update trace never
/// decreases. Sweeps stop once a full sweep improves the objective by less than
/// rel_tol (relative) or max_sweeps is reached.
struct BcdResult {
    PhaseVector phases;
    std::vector<double> trace; ///< objective before the first update, then after every element update
    double objective() const { return trace.back(); }
};
BcdResult bcd_phase_opt(const CxMatrix& g1, const PhaseVector& init, const BcdSettings& settings);

/// Exact gap-constrained selection via dynamic programming over suffix maxima,
/// O(L*N) time. Ties break toward the lexicographically smallest index tuple.
/// Throws InfeasibleSelection when (n_select-1)*min_gap + 1 exceeds the site count.
Selection dp_position_select(const SelectionProblem& p);

/// Exhaustive reference for dp_position_select; same gap convention and tie rule.
/// Throws std::length_error if C(L, N) exceeds 1e7.
Selection brute_force_select(const SelectionProblem& p);

/// Joint solver state. objective_trace holds the post-matched-beamforming objective
/// ||h_iu^H diag(e^{j phi}) H||^2 recorded per half-step (phases, then positions),
/// starting from the initial state; it is non-decreasing by construction.
struct SolverState {
    PhaseVector phases;
    Apv apv;
    BeamVector beam;
    std::vector<double> objective_trace;

    double objective() const { return objective_trace.back(); }
};

/// Alternating solver: coordinate-descent phases at a fixed placement, then exact
/// gap-constrained reselection of the antenna sites on the region's sampling grid,
/// until the outer improvement falls below rel_tol or max_iters is hit.
SolverState ao_solve(const CxVector& h_iu, const BsIrsChannel& channel, const TxRegion& region,
                     int n_antennas, const AoSettings& settings);

/// Antenna-selection baseline: same alternating solver on the coarse grid whose pitch
/// is the minimum antenna spacing.
SolverState fpa_with_as(const CxVector& h_iu, const BsIrsChannel& channel, const TxRegion& region,
                        int n_antennas, const AoSettings& settings);

/// Fixed-array baseline: antennas placed symmetrically about the region center at the
/// minimum spacing; only phases (and the matched beamformer) are optimized.
/// Throws std::invalid_argument if n_antennas * min_spacing exceeds the region length.
SolverState fpa_without_as(const CxVector& h_iu, const BsIrsChannel& channel, const TxRegion& region,
                           int n_antennas, const BcdSettings& settings);

/// Phase-only optimization at a caller-chosen fixed placement.
SolverState fpa_fixed(const CxVector& h_iu, const BsIrsChannel& channel, const Apv& apv,
                      const BcdSettings& settings);

/// Symmetric pitch-min_spacing placement used by fpa_without_as.
Apv symmetric_fixed_apv(const TxRegion& region, int n_antennas);

/// Index gap implied by a physical min-spacing on a pitch-delta grid:
/// ceil(min_spacing / delta), guarded against FP drift.
int min_index_gap(double min_spacing, double grid_spacing);

} // namespace mairs
