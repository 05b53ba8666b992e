#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "mairs/geometry.hpp"

namespace mairs {

using Cx = std::complex<double>;
using CxVector = Eigen::VectorXcd;
using CxMatrix = Eigen::MatrixXcd;

/// One dominant scattered path: scatterer location and complex path gain.
struct Scatterer {
    Vec3 position;
    Cx gain;
};
using ScatterSet = std::vector<Scatterer>;

/// Statistical parameters of the surface-to-user link.
struct FadingParams {
    double rician_k{1.0};        ///< LoS/NLoS power ratio, linear
    double kappa{2.0};           ///< path loss exponent
    double distance{1.0};        ///< surface-to-user distance, meters
    double reference_gain{1.0};  ///< amplitude gain at 1 m

    void validate() const;
};

/// Spherical-wave LoS channel from a transmit antenna at t to every surface element:
/// entry m is (lambda / (4*pi*D_m)) * exp(j*(2*pi/lambda)*D_m), D_m = ||t - e_m||.
/// Throws std::domain_error if any distance falls below 1e-6 m.
CxVector nf_los_vector(const Vec3& t, const IrsGeometry& geom, double wavelength);

/// Column n is nf_los_vector at the n-th antenna position.
CxMatrix nf_los_matrix(const Apv& apv, const IrsGeometry& geom, double wavelength);

/// Phase-only spherical-wave response of the surface toward a point s.
CxVector nf_array_response_irs(const Vec3& s, const IrsGeometry& geom, double wavelength);

/// Phase-only spherical-wave response of the antenna array toward a point s.
CxVector nf_array_response_tx(const Apv& apv, const Vec3& s, double wavelength);

/// LoS matrix plus one rank-one term per scattered path.
CxMatrix multipath_channel(const Apv& apv, const IrsGeometry& geom, const ScatterSet& scatterers,
                           double wavelength);

/// Rank-one planar-wavefront channel beta * u * v(T)^H. `direction` is the unit vector
/// along which the wavefront phase advances, shared by both array responses.
CxMatrix farfield_channel(const Apv& apv, const IrsGeometry& geom, Cx beta_bi,
                          const Vec3& direction, double wavelength);

/// Rician surface-to-user vector:
///   sqrt(PL) * ( sqrt(K/(K+1)) * h_los + sqrt(1/(K+1)) * h_nlos ),
/// h_los the phase-only spherical response toward user_pos, h_nlos i.i.d. CN(0,1),
/// amplitude sqrt(PL) = reference_gain * distance^(-kappa/2). Deterministic per seed.
CxVector rician_irs_user(const IrsGeometry& geom, const Vec3& user_pos, const FadingParams& fading,
                         double wavelength, std::uint64_t seed);

/// Spherical-wave LoS scalar from a single antenna straight to the user.
Cx direct_bu_channel(const Vec3& t, const Vec3& user_pos, double wavelength);

/// Transmit-side channel model: the surface-to-element response for an antenna at an
/// arbitrary position. Lets the position optimizer evaluate candidate sites without
/// committing to one propagation model.
class BsIrsChannel {
  public:
    virtual ~BsIrsChannel() = default;

    /// Channel vector (length M) seen from a single antenna at t.
    virtual CxVector column(const Vec3& t) const = 0;

    /// Stacked columns for a full antenna placement.
    CxMatrix matrix(const Apv& apv) const;
};

/// Pure spherical-wave LoS model.
class LosChannel final : public BsIrsChannel {
  public:
    LosChannel(IrsGeometry geom, double wavelength);
    CxVector column(const Vec3& t) const override;

  private:
    IrsGeometry geom_;
    double wavelength_;
};

/// LoS plus a fixed set of scattered paths. The per-scatterer surface responses are
/// precomputed; each column costs O(M + L).
class NearFieldChannel final : public BsIrsChannel {
  public:
    NearFieldChannel(IrsGeometry geom, double wavelength, ScatterSet scatterers);
    CxVector column(const Vec3& t) const override;

    const ScatterSet& scatterers() const { return scatterers_; }

  private:
    IrsGeometry geom_;
    double wavelength_;
    ScatterSet scatterers_;
    std::vector<CxVector> scatter_responses_; // a(s_l), one per path
};

/// Planar-wavefront rank-one model.
class FarFieldChannel final : public BsIrsChannel {
  public:
    FarFieldChannel(IrsGeometry geom, double wavelength, Cx beta, const Vec3& direction);
    CxVector column(const Vec3& t) const override;

  private:
    double wavelength_;
    Cx beta_;
    Vec3 direction_;
    CxVector u_; // surface-side response, placement-independent
};

} // namespace mairs
