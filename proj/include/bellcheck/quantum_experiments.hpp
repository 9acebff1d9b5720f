#pragma once

// Closed-form quantum predictions for photon-pair polarization experiments
// (atomic cascade and parametric down-conversion sources), the efficiency
// thresholds they imply, and the kinematic limits on spacelike separation for
// massive-particle tests.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bellcheck/inequalities.hpp"
#include "bellcheck/probability_set.hpp"

namespace bellcheck {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt2 = std::numbers::sqrt2;
/// Reduced Planck constant, J s.
inline constexpr double kHbar = 1.054571817e-34;
/// Speed of light, m/s.
inline constexpr double kSpeedOfLight = 2.99792458e8;

struct CascadeConfig {
    double theta = kPi / 2;  // lens half-aperture, rad
    double zeta = 1.0;       // detector quantum efficiency
    double r0 = 1.0;         // pair production rate, 1/s
    double alpha = 1.0;      // angular correlation parameter

    void validate() const {
        if (!(theta > 0.0 && theta <= kPi / 2)) throw std::invalid_argument("cascade: theta must be in (0, pi/2]");
        if (!(zeta >= 0.0 && zeta <= 1.0)) throw std::invalid_argument("cascade: zeta must be in [0, 1]");
        if (!(r0 > 0.0)) throw std::invalid_argument("cascade: r0 must be positive");
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("cascade: alpha must be in [0, 1]");
    }
};

struct PdcConfig {
    double v = 1.0;    // visibility
    double eta = 1.0;  // overall detection efficiency per photon
    double r0 = 1.0;   // production rate, 1/s

    void validate() const {
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("pdc: v must be in [0, 1]");
        if (!(eta >= 0.0 && eta <= 1.0)) throw std::invalid_argument("pdc: eta must be in [0, 1]");
        if (!(r0 > 0.0)) throw std::invalid_argument("pdc: r0 must be positive");
    }
};

/// Signed polarizer-plane angle differences for the pairs (A,B), (A,D),
/// (C,B), (C,D). Geometric consistency requires phi1 + phi4 = phi2 + phi3.
struct AngleSet {
    double phi1 = 0, phi2 = 0, phi3 = 0, phi4 = 0;

    AngleSet() = default;
    AngleSet(double p1, double p2, double p3, double p4) : phi1(p1), phi2(p2), phi3(p3), phi4(p4) {
        if (std::abs((phi1 + phi4) - (phi2 + phi3)) > 1e-12)
            throw std::invalid_argument("angle set violates phi1 + phi4 = phi2 + phi3");
    }

    /// Angle differences of four polarizer orientations (radians).
    static AngleSet from_orientations(double a, double c, double b, double d) {
        return {a - b, a - d, c - b, c - d};
    }

    std::array<double, 4> as_array() const { return {phi1, phi2, phi3, phi4}; }
};

/// sum_{j=1..3} cos(2 phi_j) - cos(2 phi_4)
inline double angle_objective(const AngleSet& a) {
    return std::cos(2 * a.phi1) + std::cos(2 * a.phi2) + std::cos(2 * a.phi3) - std::cos(2 * a.phi4);
}

struct OptimalAngles {
    AngleSet angles;
    double max_value;
};

inline OptimalAngles optimal_angles() {
    const AngleSet a{-kPi / 8, kPi / 8, kPi / 8, 3 * kPi / 8};
    return {a, 2 * kSqrt2};
}

/// Polarizer orientations realizing optimal_angles(): A = 0, C = pi/4,
/// B = pi/8, D = -pi/8.
struct Orientations {
    double a = 0.0, c = kPi / 4, b = kPi / 8, d = -kPi / 8;
};

struct CascadeOptics {
    double eta;
    double v;
    double alpha;
};

/// Collection-limited efficiency and visibility for a lens half-aperture theta.
inline CascadeOptics cascade_optics(double theta, double zeta, double alpha = 1.0) {
    CascadeConfig{theta, zeta, 1.0, alpha}.validate();
    const double u = 1.0 - std::cos(theta);
    return {0.5 * u * zeta, 1.0 - (2.0 / 3.0) * u * u, alpha};
}

struct CascadeRates {
    double r1, r2, r12;
};

inline CascadeRates cascade_rates(double r0, double eta, double v, double alpha, double phi) {
    const double single = 0.5 * r0 * eta;
    return {single, single, 0.25 * r0 * eta * eta * alpha * (1.0 + v * std::cos(2 * phi))};
}

struct TwoChannelRates {
    double rpp, rpm, rmp, rmm;
    double sum() const { return rpp + rpm + rmp + rmm; }
    TwoChannelCounts counts() const { return {rpp, rpm, rmp, rmm, false}; }
};

inline TwoChannelRates two_channel_rates(const PdcConfig& cfg, double phi) {
    cfg.validate();
    const double k = 0.5 * cfg.eta * cfg.r0;
    const double same = k * (1.0 + cfg.v * std::cos(2 * phi));
    const double diff = k * (1.0 - cfg.v * std::cos(2 * phi));
    return {same, diff, diff, same};
}

struct BiMargin {
    double lhs;
    bool fulfilled;
};

/// alpha * eta * (1 + sqrt2 V) <= 2, the CH inequality at optimal angles.
inline BiMargin bi_margin(double alpha, double eta, double v) {
    const double lhs = alpha * eta * (1.0 + kSqrt2 * v);
    const auto r = detail::settle(InequalityKind::ch, lhs, 2.0, 4.0, true);
    return {lhs, !r.violated};
}

/// Smallest detector efficiency at which zeta (1 + sqrt2 V) > 2 is reachable.
inline double bi1_min_efficiency(double v) {
    if (!(v > kSqrt2 / 2 && v <= 1.0))
        throw std::domain_error("no violation possible: visibility must exceed sqrt(2)/2");
    return 2.0 / (1.0 + kSqrt2 * v);
}

struct CascadeMaximum {
    double max_lhs;
    double theta_star;
};

/// Maximizes alpha eta(theta) (1 + sqrt2 V(theta)) over the aperture with
/// alpha = 1. `both_detectors` lets either photon reach either detector,
/// doubling the collection efficiency term.
inline CascadeMaximum cascade_bi_maximum(double zeta, bool both_detectors) {
    if (!(zeta > 0.0 && zeta <= 1.0)) throw std::invalid_argument("cascade maximum: zeta must be in (0, 1]");
    auto f = [](double theta) {
        const auto o = cascade_optics(std::max(theta, 1e-300), 1.0);
        return o.eta * (1.0 + kSqrt2 * o.v);
    };
    // Golden-section search; f is unimodal since u = 1 - cos(theta) is monotone
    // and u (1 + sqrt2 (1 - 2u^2/3)) is concave on [0, 1].
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double lo = 0.0, hi = kPi / 2;
    double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    const double theta = 0.5 * (lo + hi);

    // Stationary point of u (1 + sqrt2) - (2 sqrt2 / 3) u^3.
    const double u_star = std::sqrt((1.0 + kSqrt2) / (2.0 * kSqrt2));
    const double theta_closed = std::acos(1.0 - u_star);
    if (std::abs(theta - theta_closed) > 1e-6)
        throw std::runtime_error("cascade maximum: search disagrees with stationary point");

    const double value = f(theta) * zeta * (both_detectors ? 2.0 : 1.0);
    return {value, theta};
}

/// Probability set implied by the cascade rate formulas at angle set `phi`
/// (probabilities are rates divided by the production rate).
inline ProbabilitySet predicted_probability_set(double alpha, double eta, double v, const AngleSet& phi) {
    const double single = 0.5 * eta;
    auto pair = [&](double angle) { return 0.25 * eta * eta * alpha * (1.0 + v * std::cos(2 * angle)); };
    return {single, single, pair(phi.phi1), pair(phi.phi2), pair(phi.phi3), pair(phi.phi4), kDataTolerance};
}

/// Coincidence probability with one polarizer removed: alpha eta^2 / 2.
inline double polarizer_removed_probability(double alpha, double eta) { return 0.5 * alpha * eta * eta; }

/// CH and no-enhancement verdicts for one experiment, plus their reduced
/// forms: CH becomes alpha eta (1 + sqrt2 V) <= 2 and the no-enhancement form
/// becomes (1 + sqrt2 V) <= 2.
struct PhotonCascadeVerdicts {
    InequalityReport ch;
    InequalityReport fc;
    double ch_reduced_lhs;
    double fc_reduced_lhs;
};

inline PhotonCascadeVerdicts photon_cascade_verdicts(double alpha, double eta, double v,
                                                     const AngleSet& phi = optimal_angles().angles) {
    const ProbabilitySet ps = predicted_probability_set(alpha, eta, v, phi);
    const double pinf = polarizer_removed_probability(alpha, eta);
    PhotonCascadeVerdicts out{ch_report(ps), fc_report(ps, pinf, pinf), 0.0, 0.0};
    // lhs = (alpha eta^2 / 4)(2 + V * objective); CH rhs = eta, FC rhs = alpha eta^2.
    if (eta > 0.0) out.ch_reduced_lhs = 2.0 * out.ch.lhs / eta;
    if (alpha * eta > 0.0) out.fc_reduced_lhs = 2.0 * out.fc.lhs / (alpha * eta * eta);
    return out;
}

struct VisibilityEstimates {
    double v_fit;  // least-squares amplitude of V cos(2 phi)
    double v_a;    // rate-curve visibility (max - min)/(max + min)
    double v_b;    // S* / (2 sqrt2) from samples nearest the optimal angles
};

struct CorrelationSample {
    double phi;     // rad
    double e_star;  // renormalized correlation
};

inline double v_b_from_s_star(double s_star) { return s_star / (2.0 * kSqrt2); }

/// Tolerance on how far (rad) the samples used for v_b may sit from pi/8 and 3pi/8.
inline constexpr double kCanonicalAngleTolerance = kPi / 16;

inline VisibilityEstimates visibility_estimators(const std::vector<CorrelationSample>& samples) {
    if (samples.size() < 4) throw std::invalid_argument("visibility: need at least 4 samples");
    auto [mn, mx] = std::minmax_element(samples.begin(), samples.end(),
                                        [](const auto& l, const auto& r) { return l.phi < r.phi; });
    if (mx->phi - mn->phi < kPi / 2 - 1e-12)
        throw std::invalid_argument("visibility: samples must span at least a half-period (pi/2)");

    double num = 0.0, den = 0.0;
    double emax = -std::numeric_limits<double>::infinity(), emin = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        const double c = std::cos(2 * s.phi);
        num += s.e_star * c;
        den += c * c;
        emax = std::max(emax, s.e_star);
        emin = std::min(emin, s.e_star);
    }
    if (den == 0.0) throw std::invalid_argument("visibility: samples carry no cos(2 phi) information");

    // E*(phi) = E*(-phi) = E*(phi + pi): fold onto [0, pi/2].
    auto folded = [](double phi) {
        double r = std::fmod(phi, kPi);
        if (r < 0) r += kPi;
        return std::min(r, kPi - r);
    };
    auto nearest = [&](double target) {
        const CorrelationSample* best = nullptr;
        double dist = std::numeric_limits<double>::infinity();
        for (const auto& s : samples) {
            const double d = std::abs(folded(s.phi) - target);
            if (d < dist) {
                dist = d;
                best = &s;
            }
        }
        if (dist > kCanonicalAngleTolerance)
            throw std::invalid_argument("visibility: no sample near the optimal CHSH angles");
        return best->e_star;
    };
    const double e1 = nearest(kPi / 8);
    const double e3 = nearest(3 * kPi / 8);
    const double s_star = 3.0 * e1 - e3;

    // Coincidence rate R++ is proportional to 1 + E*.
    return {num / den, (emax - emin) / (emax + emin + 2.0), v_b_from_s_star(s_star)};
}

struct KinematicsInput {
    double mass;   // kg
    double speed;  // m/s
    std::optional<double> separation;    // source-detector distance L, m
    std::optional<double> measure_time;  // t_m, s

    void validate() const {
        if (!(mass > 0.0)) throw std::invalid_argument("kinematics: mass must be positive");
        if (!(speed > 0.0 && speed < kSpeedOfLight))
            throw std::invalid_argument("kinematics: speed must be in (0, c)");
    }
};

struct SpacelikeConstraints {
    /// Minimal source-detector distance, 2 hbar c^2 / (m v^3).
    double l_min;
    /// Minimal position-velocity uncertainty product, hbar / 2m.
    double dx_dv;
    /// Arrival-time uncertainty sqrt(2 hbar L / (m v^3)), when L is given.
    std::optional<double> dt_arrival;
    /// Light-travel distance c t_m over the measurement time, when t_m is given.
    std::optional<double> l_meas;
};

inline SpacelikeConstraints spacelike_constraints(const KinematicsInput& k) {
    k.validate();
    const double mv3 = k.mass * k.speed * k.speed * k.speed;
    SpacelikeConstraints out{2.0 * kHbar * kSpeedOfLight * kSpeedOfLight / mv3, kHbar / (2.0 * k.mass), {}, {}};
    if (k.separation) out.dt_arrival = std::sqrt(2.0 * kHbar * *k.separation / mv3);
    if (k.measure_time) out.l_meas = kSpeedOfLight * *k.measure_time;
    return out;
}

}  // namespace bellcheck
