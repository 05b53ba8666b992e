#include "mairs/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mairs {

namespace {
// Absolute slack for "is this point on the segment" checks, meters.
constexpr double kSegmentTol = 1e-9;
// Slack for the pairwise spacing boundary, meters.
constexpr double kSpacingTol = 1e-12;
// Guard for floor(length/spacing) against quotients that land just below an integer.
constexpr double kGridEps = 1e-9;
} // namespace

Vec3 Vec3::normalized() const {
    const double n = norm();
    if (n < 1e-15) {
        throw std::invalid_argument("Vec3::normalized: zero-length vector");
    }
    return {x / n, y / n, z / n};
}

void IrsGeometry::validate() const {
    if (m_y_count < 1 || m_z_count < 1) {
        throw std::invalid_argument("IrsGeometry: element counts must be positive");
    }
    if (!(spacing > 0.0) || !std::isfinite(spacing)) {
        throw std::invalid_argument("IrsGeometry: spacing must be positive and finite");
    }
}

std::vector<Vec3> irs_element_positions(const IrsGeometry& geom) {
    geom.validate();
    std::vector<Vec3> points;
    points.reserve(static_cast<std::size_t>(geom.element_count()));
    const double y0 = 0.5 * static_cast<double>(geom.m_y_count - 1);
    const double z0 = 0.5 * static_cast<double>(geom.m_z_count - 1);
    for (int kz = 0; kz < geom.m_z_count; ++kz) {
        const double z = (static_cast<double>(kz) - z0) * geom.spacing;
        for (int ky = 0; ky < geom.m_y_count; ++ky) {
            const double y = (static_cast<double>(ky) - y0) * geom.spacing;
            points.push_back({0.0, y, z});
        }
    }
    return points;
}

int TxRegion::sample_count() const {
    return static_cast<int>(std::floor(length / sample_spacing + kGridEps)) + 1;
}

void TxRegion::validate() const {
    if (!center.finite() || !axis.finite()) {
        throw std::invalid_argument("TxRegion: non-finite geometry");
    }
    if (std::abs(axis.norm() - 1.0) > 1e-9) {
        throw std::invalid_argument("TxRegion: axis must be a unit vector");
    }
    if (!(length > 0.0) || !(min_spacing > 0.0) || !(sample_spacing > 0.0)) {
        throw std::invalid_argument("TxRegion: length, min_spacing and sample_spacing must be positive");
    }
}

std::vector<Vec3> sample_tx_region(const TxRegion& region) {
    region.validate();
    const int count = region.sample_count();
    const Vec3 start = region.segment_start();
    std::vector<Vec3> points;
    points.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        points.push_back(start + region.axis * (static_cast<double>(k) * region.sample_spacing));
    }
    return points;
}

ApvValidation validate_apv(const Apv& apv, const TxRegion& region) {
    region.validate();
    ApvValidation verdict;
    const int n = apv.size();
    const double half = 0.5 * region.length;

    for (int i = 0; i < n; ++i) {
        const Vec3 rel = apv.positions[i] - region.center;
        const double along = rel.dot(region.axis);
        const Vec3 perp = rel - region.axis * along;
        if (std::abs(along) > half + kSegmentTol || perp.norm() > kSegmentTol) {
            verdict.violations.push_back({ApvViolation::Kind::kOutsideRegion, i, -1});
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (distance(apv.positions[i], apv.positions[j]) < region.min_spacing - kSpacingTol) {
                verdict.violations.push_back({ApvViolation::Kind::kSpacing, i, j});
            }
        }
    }
    verdict.ok = verdict.violations.empty();
    return verdict;
}

} // namespace mairs
