#include "mairs/beamforming.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mairs {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi = 4.0 * std::numbers::pi;
} // namespace

double wrap_phase(double radians) {
    double p = std::fmod(radians, kTwoPi);
    if (p < 0.0) {
        p += kTwoPi;
    }
    // fmod can return exactly 2*pi after the adjustment when radians is a tiny negative.
    return (p >= kTwoPi) ? 0.0 : p;
}

BeamVector BeamVector::normalized(const CxVector& v) {
    const double n = v.norm();
    if (!(n > 0.0)) {
        throw std::invalid_argument("BeamVector: cannot normalize a zero vector");
    }
    return BeamVector{v / n};
}

LinkBudget LinkBudget::from_db(double db) { return LinkBudget{std::pow(10.0, db / 10.0)}; }

double LinkBudget::db() const { return to_db(transmit_snr); }

double to_db(double linear) { return 10.0 * std::log10(linear); }

double from_db(double db) { return std::pow(10.0, db / 10.0); }

double received_snr(const CxVector& h_iu, const PhaseVector& phases, const CxMatrix& h_bi,
                    const BeamVector& w, const LinkBudget& budget) {
    const Eigen::Index m = h_bi.rows();
    if (h_iu.size() != m || phases.size() != m || w.w.size() != h_bi.cols()) {
        throw std::invalid_argument("received_snr: dimension mismatch");
    }
    const CxVector hw = h_bi * w.w;
    Cx acc(0.0, 0.0);
    for (Eigen::Index i = 0; i < m; ++i) {
        acc += std::conj(h_iu[i]) * std::polar(1.0, phases.phi[static_cast<std::size_t>(i)]) * hw[i];
    }
    return budget.transmit_snr * std::norm(acc);
}

namespace {

// Effective row r_n = sum_m conj(h_iu_m) e^{j phi_m} H_mn, as a column vector of r's entries.
CxVector effective_row(const CxVector& h_iu, const PhaseVector& phases, const CxMatrix& h_bi) {
    const Eigen::Index m = h_bi.rows();
    if (h_iu.size() != m || phases.size() != m) {
        throw std::invalid_argument("effective channel: dimension mismatch");
    }
    CxVector q(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        q[i] = std::conj(h_iu[i]) * std::polar(1.0, phases.phi[static_cast<std::size_t>(i)]);
    }
    return h_bi.transpose() * q;
}

} // namespace

BeamVector mrt(const CxVector& h_iu, const PhaseVector& phases, const CxMatrix& h_bi) {
    const CxVector r = effective_row(h_iu, phases, h_bi);
    const double n = r.norm();
    if (!(n > 0.0)) {
        throw std::invalid_argument("mrt: effective channel is zero");
    }
    return BeamVector{r.conjugate() / n};
}

PhaseVector aligned_phases(const CxVector& h_bi_vec, const CxVector& h_iu) {
    if (h_bi_vec.size() != h_iu.size()) {
        throw std::invalid_argument("aligned_phases: dimension mismatch");
    }
    PhaseVector out;
    out.phi.resize(static_cast<std::size_t>(h_iu.size()));
    for (Eigen::Index m = 0; m < h_iu.size(); ++m) {
        if (h_iu[m] == Cx(0.0, 0.0)) {
            throw std::invalid_argument("aligned_phases: zero user-link entry at index " +
                                        std::to_string(m));
        }
        if (h_bi_vec[m] == Cx(0.0, 0.0)) {
            throw std::invalid_argument("aligned_phases: zero transmit-link entry at index " +
                                        std::to_string(m));
        }
        out.phi[static_cast<std::size_t>(m)] = wrap_phase(std::arg(h_iu[m]) - std::arg(h_bi_vec[m]));
    }
    return out;
}

double effective_gain_single(const Vec3& t, const IrsGeometry& geom, const CxVector& h_iu,
                             double wavelength) {
    if (h_iu.size() != geom.element_count()) {
        throw std::invalid_argument("effective_gain_single: dimension mismatch");
    }
    const auto elements = irs_element_positions(geom);
    double sum = 0.0;
    for (std::size_t m = 0; m < elements.size(); ++m) {
        const double d = distance(t, elements[m]);
        if (d < 1e-6) {
            throw std::domain_error("effective_gain_single: degenerate distance");
        }
        sum += std::abs(h_iu[static_cast<Eigen::Index>(m)]) / d;
    }
    const double scaled = wavelength / kFourPi * sum;
    return scaled * scaled;
}

} // namespace mairs
