#pragma once

#include "mairs/channel.hpp"
#include "mairs/geometry.hpp"

namespace mairs {

/// Wraps an angle into [0, 2*pi).
double wrap_phase(double radians);

/// Per-element reflection phases, radians in [0, 2*pi). Stored as a length-M vector;
/// the diagonal reflection matrix is never materialized.
struct PhaseVector {
    std::vector<double> phi;

    int size() const { return static_cast<int>(phi.size()); }
    static PhaseVector zeros(int m) { return PhaseVector{std::vector<double>(static_cast<std::size_t>(m), 0.0)}; }
};

/// Unit-norm transmit beamformer.
struct BeamVector {
    CxVector w;

    /// Scales v to unit norm; throws std::invalid_argument on a zero vector.
    static BeamVector normalized(const CxVector& v);
};

/// Transmit power over noise power, linear.
struct LinkBudget {
    double transmit_snr{1.0};

    static LinkBudget from_db(double db);
    double db() const;
};

double to_db(double linear);
double from_db(double db);

/// Received SNR (P/sigma^2) * |sum_m conj(h_iu)_m e^{j phi_m} (H w)_m|^2, computed as a
/// single length-M reduction. Throws std::invalid_argument on dimension mismatch.
double received_snr(const CxVector& h_iu, const PhaseVector& phases, const CxMatrix& h_bi,
                    const BeamVector& w, const LinkBudget& budget);

/// Matched (maximum-ratio) beamformer for the effective row h_iu^H * diag(e^{j phi}) * H:
/// its conjugate transpose, normalized. Throws std::invalid_argument if the row is zero.
BeamVector mrt(const CxVector& h_iu, const PhaseVector& phases, const CxMatrix& h_bi);

/// Phases that co-phase both hops: phi_m = arg(h_iu_m) - arg(h_bi_m) mod 2*pi, making the
/// effective scalar channel the positive real sum of entry magnitudes.
/// Throws std::invalid_argument naming the first zero entry of either vector.
PhaseVector aligned_phases(const CxVector& h_bi_vec, const CxVector& h_iu);

/// End-to-end power gain for a single antenna at t under co-phased reflection:
/// (lambda/4pi)^2 * (sum_m |h_iu_m| / ||t - e_m||)^2.
double effective_gain_single(const Vec3& t, const IrsGeometry& geom, const CxVector& h_iu,
                             double wavelength);

} // namespace mairs
