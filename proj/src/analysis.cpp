#include "mairs/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "mairs/beamforming.hpp"
#include "mairs/channel.hpp"

namespace mairs {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// H = sum over lattice offsets of |h_m| / sqrt(R^2 + y^2 + z^2).
double radial_sum(double r, const IrsGeometry& geom, const std::vector<double>& magnitudes) {
    geom.validate();
    if (static_cast<int>(magnitudes.size()) != geom.element_count()) {
        throw std::invalid_argument("radial approximation: magnitude count mismatch");
    }
    const double r2 = r * r;
    const double y0 = 0.5 * static_cast<double>(geom.m_y_count - 1);
    const double z0 = 0.5 * static_cast<double>(geom.m_z_count - 1);
    double sum = 0.0;
    std::size_t m = 0;
    for (int kz = 0; kz < geom.m_z_count; ++kz) {
        const double z = (static_cast<double>(kz) - z0) * geom.spacing;
        for (int ky = 0; ky < geom.m_y_count; ++ky, ++m) {
            const double y = (static_cast<double>(ky) - y0) * geom.spacing;
            sum += magnitudes[m] / std::sqrt(r2 + y * y + z * z);
        }
    }
    return sum;
}

Vec3 project_onto_segment(const TxRegion& region, const Vec3& target) {
    region.validate();
    const double along = (target - region.center).dot(region.axis);
    const double half = 0.5 * region.length;
    return region.center + region.axis * std::clamp(along, -half, half);
}

} // namespace

double approx_gain(const Vec3& t, const IrsGeometry& geom,
                   const std::vector<double>& h_iu_magnitudes, double wavelength) {
    const double h = radial_sum(t.norm(), geom, h_iu_magnitudes);
    const double scaled = wavelength / kFourPi * h;
    return scaled * scaled;
}

Vec3 optimal_single_position(const TxRegion& region) {
    return project_onto_segment(region, Vec3{0.0, 0.0, 0.0});
}

Vec3 direct_link_optimal_position(const TxRegion& region, const Vec3& user_pos) {
    return project_onto_segment(region, user_pos);
}

FluctuationReport gain_fluctuation(const Vec3& t1, const Vec3& t2, const IrsGeometry& geom,
                                   const std::vector<double>& h_iu_magnitudes, double wavelength) {
    const double r1 = t1.norm();
    const double r2 = t2.norm();
    if (!(r1 < r2)) {
        throw std::invalid_argument("gain_fluctuation: requires ||t1|| < ||t2||");
    }
    FluctuationReport report;
    report.h_t1 = radial_sum(r1, geom, h_iu_magnitudes);
    report.h_t2 = radial_sum(r2, geom, h_iu_magnitudes);
    const double scale = wavelength / kFourPi;
    report.g_t1 = scale * scale * report.h_t1 * report.h_t1;
    report.g_t2 = scale * scale * report.h_t2 * report.h_t2;
    report.difference = scale * scale * (report.h_t1 + report.h_t2) * (report.h_t1 - report.h_t2);
    return report;
}

std::vector<UniformityRow> farfield_uniformity_check(const IrsGeometry& geom, const TxRegion& region,
                                                     const std::vector<double>& d_bi_values,
                                                     double wavelength) {
    geom.validate();
    const CxVector ones = CxVector::Ones(geom.element_count());
    std::vector<UniformityRow> rows;
    rows.reserve(d_bi_values.size());
    for (double d_bi : d_bi_values) {
        TxRegion moved = region;
        moved.center = Vec3{d_bi, 0.0, 0.0};
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (const Vec3& site : sample_tx_region(moved)) {
            const double g = effective_gain_single(site, geom, ones, wavelength);
            lo = std::min(lo, g);
            hi = std::max(hi, g);
        }
        rows.push_back({d_bi, (hi - lo) / lo});
    }
    return rows;
}

} // namespace mairs
