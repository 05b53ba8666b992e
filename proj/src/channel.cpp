#include "mairs/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

#include "mairs/rng.hpp"

namespace mairs {

namespace {

constexpr double kMinDistance = 1e-6; // meters; anything closer is pathological geometry

constexpr double kFourPi = 4.0 * std::numbers::pi;

double checked_distance(const Vec3& a, const Vec3& b, const char* what) {
    const double d = distance(a, b);
    if (d < kMinDistance) {
        throw std::domain_error(std::string(what) + ": degenerate distance " + std::to_string(d) + " m");
    }
    return d;
}

void check_wavelength(double wavelength) {
    if (!(wavelength > 0.0) || !std::isfinite(wavelength)) {
        throw std::invalid_argument("wavelength must be positive and finite");
    }
}

} // namespace

void FadingParams::validate() const {
    if (!(rician_k > 0.0) || !(kappa > 0.0) || !(distance > 0.0) || !(reference_gain > 0.0) ||
        !std::isfinite(rician_k) || !std::isfinite(kappa) || !std::isfinite(distance) ||
        !std::isfinite(reference_gain)) {
        throw std::invalid_argument("FadingParams: all fields must be positive and finite");
    }
}

CxVector nf_los_vector(const Vec3& t, const IrsGeometry& geom, double wavelength) {
    check_wavelength(wavelength);
    const auto elements = irs_element_positions(geom);
    const double k = 2.0 * std::numbers::pi / wavelength;
    CxVector h(elements.size());
    for (std::size_t m = 0; m < elements.size(); ++m) {
        const double d = checked_distance(t, elements[m], "nf_los_vector");
        h[static_cast<Eigen::Index>(m)] = std::polar(wavelength / (kFourPi * d), k * d);
    }
    return h;
}

CxMatrix nf_los_matrix(const Apv& apv, const IrsGeometry& geom, double wavelength) {
    check_wavelength(wavelength);
    CxMatrix h(geom.element_count(), apv.size());
    for (int n = 0; n < apv.size(); ++n) {
        h.col(n) = nf_los_vector(apv.positions[static_cast<std::size_t>(n)], geom, wavelength);
    }
    return h;
}

CxVector nf_array_response_irs(const Vec3& s, const IrsGeometry& geom, double wavelength) {
    check_wavelength(wavelength);
    const auto elements = irs_element_positions(geom);
    const double k = 2.0 * std::numbers::pi / wavelength;
    CxVector a(elements.size());
    for (std::size_t m = 0; m < elements.size(); ++m) {
        const double d = checked_distance(s, elements[m], "nf_array_response_irs");
        a[static_cast<Eigen::Index>(m)] = std::polar(1.0, k * d);
    }
    return a;
}

CxVector nf_array_response_tx(const Apv& apv, const Vec3& s, double wavelength) {
    check_wavelength(wavelength);
    const double k = 2.0 * std::numbers::pi / wavelength;
    CxVector b(apv.size());
    for (int n = 0; n < apv.size(); ++n) {
        const double d =
            checked_distance(s, apv.positions[static_cast<std::size_t>(n)], "nf_array_response_tx");
        b[n] = std::polar(1.0, k * d);
    }
    return b;
}

CxMatrix multipath_channel(const Apv& apv, const IrsGeometry& geom, const ScatterSet& scatterers,
                           double wavelength) {
    CxMatrix h = nf_los_matrix(apv, geom, wavelength);
    for (const auto& path : scatterers) {
        const CxVector a = nf_array_response_irs(path.position, geom, wavelength);
        const CxVector b = nf_array_response_tx(apv, path.position, wavelength);
        h.noalias() += path.gain * a * b.transpose();
    }
    return h;
}

CxMatrix farfield_channel(const Apv& apv, const IrsGeometry& geom, Cx beta_bi,
                          const Vec3& direction, double wavelength) {
    check_wavelength(wavelength);
    const Vec3 dir = direction.normalized();
    const double k = 2.0 * std::numbers::pi / wavelength;
    const auto elements = irs_element_positions(geom);
    CxVector u(elements.size());
    for (std::size_t m = 0; m < elements.size(); ++m) {
        u[static_cast<Eigen::Index>(m)] = std::polar(1.0, k * dir.dot(elements[m]));
    }
    CxVector v(apv.size());
    for (int n = 0; n < apv.size(); ++n) {
        v[n] = std::polar(1.0, k * dir.dot(apv.positions[static_cast<std::size_t>(n)]));
    }
    return beta_bi * u * v.adjoint();
}

CxVector rician_irs_user(const IrsGeometry& geom, const Vec3& user_pos, const FadingParams& fading,
                         double wavelength, std::uint64_t seed) {
    fading.validate();
    check_wavelength(wavelength);
    const double amplitude = fading.reference_gain * std::pow(fading.distance, -0.5 * fading.kappa);
    const double los_w = std::sqrt(fading.rician_k / (fading.rician_k + 1.0));
    const double nlos_w = std::sqrt(1.0 / (fading.rician_k + 1.0));

    const CxVector los = nf_array_response_irs(user_pos, geom, wavelength);

    RandomSource rng(seed);
    CxVector h(geom.element_count());
    for (int m = 0; m < geom.element_count(); ++m) {
        h[m] = amplitude * (los_w * los[m] + nlos_w * rng.complex_normal());
    }
    return h;
}

Cx direct_bu_channel(const Vec3& t, const Vec3& user_pos, double wavelength) {
    check_wavelength(wavelength);
    const double d = checked_distance(t, user_pos, "direct_bu_channel");
    return std::polar(wavelength / (kFourPi * d), 2.0 * std::numbers::pi / wavelength * d);
}

CxMatrix BsIrsChannel::matrix(const Apv& apv) const {
    if (apv.size() == 0) {
        throw std::invalid_argument("BsIrsChannel::matrix: empty antenna placement");
    }
    const CxVector first = column(apv.positions.front());
    CxMatrix h(first.size(), apv.size());
    h.col(0) = first;
    for (int n = 1; n < apv.size(); ++n) {
        h.col(n) = column(apv.positions[static_cast<std::size_t>(n)]);
    }
    return h;
}

LosChannel::LosChannel(IrsGeometry geom, double wavelength)
    : geom_(geom), wavelength_(wavelength) {
    geom_.validate();
    check_wavelength(wavelength_);
}

CxVector LosChannel::column(const Vec3& t) const { return nf_los_vector(t, geom_, wavelength_); }

NearFieldChannel::NearFieldChannel(IrsGeometry geom, double wavelength, ScatterSet scatterers)
    : geom_(geom), wavelength_(wavelength), scatterers_(std::move(scatterers)) {
    geom_.validate();
    check_wavelength(wavelength_);
    scatter_responses_.reserve(scatterers_.size());
    for (const auto& path : scatterers_) {
        scatter_responses_.push_back(nf_array_response_irs(path.position, geom_, wavelength_));
    }
}

CxVector NearFieldChannel::column(const Vec3& t) const {
    CxVector h = nf_los_vector(t, geom_, wavelength_);
    const double k = 2.0 * std::numbers::pi / wavelength_;
    for (std::size_t l = 0; l < scatterers_.size(); ++l) {
        const double d = checked_distance(scatterers_[l].position, t, "NearFieldChannel::column");
        h += (scatterers_[l].gain * std::polar(1.0, k * d)) * scatter_responses_[l];
    }
    return h;
}

FarFieldChannel::FarFieldChannel(IrsGeometry geom, double wavelength, Cx beta, const Vec3& direction)
    : wavelength_(wavelength), beta_(beta), direction_(direction.normalized()) {
    geom.validate();
    check_wavelength(wavelength_);
    const double k = 2.0 * std::numbers::pi / wavelength_;
    const auto elements = irs_element_positions(geom);
    u_.resize(elements.size());
    for (std::size_t m = 0; m < elements.size(); ++m) {
        u_[static_cast<Eigen::Index>(m)] = std::polar(1.0, k * direction_.dot(elements[m]));
    }
}

CxVector FarFieldChannel::column(const Vec3& t) const {
    const double k = 2.0 * std::numbers::pi / wavelength_;
    // Column n of beta * u * v^H is beta * u * conj(v_n).
    return (beta_ * std::polar(1.0, -k * direction_.dot(t))) * u_;
}

} // namespace mairs
