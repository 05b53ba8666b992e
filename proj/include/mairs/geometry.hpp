#pragma once

#include <cmath>
#include <vector>

namespace mairs {

/// 3D coordinate/displacement in meters.
struct Vec3 {
    double x{0.0};
    double y{0.0};
    double z{0.0};

    constexpr Vec3() = default;
    constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

    constexpr Vec3 operator+(const Vec3& r) const { return {x + r.x, y + r.y, z + r.z}; }
    constexpr Vec3 operator-(const Vec3& r) const { return {x - r.x, y - r.y, z - r.z}; }
    constexpr Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    friend constexpr Vec3 operator*(double s, const Vec3& v) { return v * s; }

    constexpr double dot(const Vec3& r) const { return x * r.x + y * r.y + z * r.z; }
    double norm() const { return std::sqrt(dot(*this)); }

    /// Unit vector in the same direction; throws std::invalid_argument on (near-)zero input.
    Vec3 normalized() const;

    bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double distance(const Vec3& a, const Vec3& b) { return (a - b).norm(); }

/// Reflecting-element lattice in the yOz-plane, centered on the origin.
/// Elements sit at y = (k - (m_y_count-1)/2)*spacing, k = 0..m_y_count-1 (same along z),
/// so the lattice stays centered for odd and even counts alike.
struct IrsGeometry {
    int m_y_count{1};    ///< elements along y
    int m_z_count{1};    ///< elements along z
    double spacing{0.0}; ///< lattice pitch, meters

    int element_count() const { return m_y_count * m_z_count; }

    /// Throws std::invalid_argument if counts are not positive or spacing is not positive/finite.
    void validate() const;
};

/// Ordered element coordinates, y-index fastest. This ordering defines the row index of
/// every length-M vector and M-row matrix in the library.
std::vector<Vec3> irs_element_positions(const IrsGeometry& geom);

/// Linear segment hosting the movable antennas, plus its discrete sampling grid.
struct TxRegion {
    Vec3 center;               ///< segment midpoint
    Vec3 axis{1.0, 0.0, 0.0};  ///< unit direction of the segment
    double length{0.0};        ///< total segment length, meters
    double min_spacing{0.0};   ///< minimum distance between any two antennas
    double sample_spacing{0.0};///< grid pitch for position candidates

    Vec3 segment_start() const { return center - axis * (0.5 * length); }
    Vec3 segment_end() const { return center + axis * (0.5 * length); }

    /// floor(length / sample_spacing) + 1, guarded against FP drift in the quotient.
    int sample_count() const;

    void validate() const;
};

/// Grid points at arc length k * sample_spacing from the segment start, k = 0..sample_count()-1.
std::vector<Vec3> sample_tx_region(const TxRegion& region);

/// Antenna position vector: ordered coordinates of the N movable antennas.
struct Apv {
    std::vector<Vec3> positions;

    int size() const { return static_cast<int>(positions.size()); }
};

struct ApvViolation {
    enum class Kind { kOutsideRegion, kSpacing };
    Kind kind;
    int first;        ///< offending antenna index (0-based)
    int second{-1};   ///< partner index for spacing violations, -1 otherwise
};

struct ApvValidation {
    bool ok{true};
    std::vector<ApvViolation> violations;
};

/// Checks segment membership and the pairwise min-spacing constraint.
/// Reports every violation; never throws. Boundary spacing (== min_spacing) passes.
ApvValidation validate_apv(const Apv& apv, const TxRegion& region);

} // namespace mairs
