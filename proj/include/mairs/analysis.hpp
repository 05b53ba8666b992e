#pragma once

#include <vector>

#include "mairs/geometry.hpp"

namespace mairs {

/// Channel power gains at two candidate positions and their factored difference.
struct FluctuationReport {
    double g_t1{0.0};
    double g_t2{0.0};
    double difference{0.0}; ///< g_t1 - g_t2, computed as (H1+H2)*(H1-H2) scaled
    double h_t1{0.0};
    double h_t2{0.0};
};

/// Radial approximation of the co-phased channel power gain:
/// (lambda/4pi)^2 * H^2 with H = sum_m |h_iu_m| / sqrt(R^2 + y_m^2 + z_m^2),
/// where R = ||t|| and (y_m, z_m) are the centered lattice offsets. Valid when the
/// transverse offsets are small relative to R^2/spacing.
double approx_gain(const Vec3& t, const IrsGeometry& geom,
                   const std::vector<double>& h_iu_magnitudes, double wavelength);

/// The segment point closest to the origin (projection of the origin onto the segment).
/// Independent of any channel state.
Vec3 optimal_single_position(const TxRegion& region);

/// The segment point closest to the user (projection of the user position).
Vec3 direct_link_optimal_position(const TxRegion& region, const Vec3& user_pos);

/// Factored gain difference between two positions with R(t1) < R(t2); the difference is
/// positive by construction. Throws std::invalid_argument if the ordering fails.
FluctuationReport gain_fluctuation(const Vec3& t1, const Vec3& t2, const IrsGeometry& geom,
                                   const std::vector<double>& h_iu_magnitudes, double wavelength);

struct UniformityRow {
    double d_bi{0.0};
    double spread{0.0}; ///< (max - min) / min of the co-phased gain over the sampling grid
};

/// For each surface-to-array distance, relocates the region to [d_bi, 0, 0] (boresight),
/// evaluates the co-phased gain with unit user-link magnitudes over the whole sampling
/// grid, and reports the relative spread. Spreads shrink as the distance grows.
std::vector<UniformityRow> farfield_uniformity_check(const IrsGeometry& geom, const TxRegion& region,
                                                     const std::vector<double>& d_bi_values,
                                                     double wavelength);

} // namespace mairs
