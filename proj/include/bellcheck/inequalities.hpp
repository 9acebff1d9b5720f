#pragma once

// Bell-type inequality evaluation. Every verdict carries a `genuine` flag:
// true only for inequalities that follow from factorizability alone (CH, and
// CHSH when the four outcome probabilities of each pair sum to one).
// Renormalized CHSH and the no-enhancement form are auxiliary-assumption
// inequalities; violating them says nothing about local realism.

#include <algorithm>
#include <array>
#include <cfloat>
#include <cmath>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include "bellcheck/probability_set.hpp"

namespace bellcheck {

enum class InequalityKind { ch, chsh, chsh_star, fc };

inline const char* to_string(InequalityKind k) {
    switch (k) {
        case InequalityKind::ch: return "CH";
        case InequalityKind::chsh: return "CHSH";
        case InequalityKind::chsh_star: return "CHSH-star";
        case InequalityKind::fc: return "FC";
    }
    return "?";
}

inline InequalityKind inequality_kind_from_string(const std::string& s) {
    for (auto k : {InequalityKind::ch, InequalityKind::chsh, InequalityKind::chsh_star, InequalityKind::fc})
        if (s == to_string(k)) return k;
    throw std::invalid_argument("unknown inequality name '" + s + "'");
}

struct InequalityReport {
    InequalityKind name;
    double lhs;
    double rhs;
    double margin;  // rhs - lhs
    bool violated;  // margin < 0
    bool genuine;

    friend bool operator==(const InequalityReport&, const InequalityReport&) = default;
};

namespace detail {

// Margins within a few ulps of the summed term magnitudes are rounding noise
// and are reported as exactly zero.
inline InequalityReport settle(InequalityKind k, double lhs, double rhs, double magnitude, bool genuine) {
    double margin = rhs - lhs;
    if (std::abs(margin) <= 8.0 * DBL_EPSILON * magnitude) margin = 0.0;
    return {k, lhs, rhs, margin, margin < 0.0, genuine};
}

inline double abs_sum(std::initializer_list<double> xs) {
    double s = 0.0;
    for (double x : xs) s += std::abs(x);
    return s;
}

}  // namespace detail

/// Outcome probabilities (or counts) for one setting pair of a two-channel
/// experiment: (+,+), (+,-), (-,+), (-,-).
class TwoChannelCounts {
public:
    TwoChannelCounts() = default;
    /// `normalized` declares that the entries are probabilities summing to one
    /// (every emitted pair ends in one of the four outcomes).
    TwoChannelCounts(double ppp, double ppm, double pmp, double pmm, bool normalized = false)
        : ppp_(ppp), ppm_(ppm), pmp_(pmp), pmm_(pmm), normalized_(normalized) {
        for (double v : {ppp, ppm, pmp, pmm})
            if (!(v >= 0.0) || !std::isfinite(v))
                throw std::invalid_argument("two-channel entries must be finite and non-negative");
        if (normalized_ && std::abs(total() - 1.0) > kDataTolerance) {
            std::ostringstream os;
            os << "two-channel entries declared normalized but sum to " << total();
            throw std::invalid_argument(os.str());
        }
    }

    double ppp() const { return ppp_; }
    double ppm() const { return ppm_; }
    double pmp() const { return pmp_; }
    double pmm() const { return pmm_; }
    bool normalized() const { return normalized_; }
    double total() const { return ppp_ + ppm_ + pmp_ + pmm_; }

    friend bool operator==(const TwoChannelCounts&, const TwoChannelCounts&) = default;

private:
    double ppp_ = 0, ppm_ = 0, pmp_ = 0, pmm_ = 0;
    bool normalized_ = false;
};

inline InequalityReport ch_report(const ProbabilitySet& ps) {
    const double lhs = ps.pAB() + ps.pAD() + ps.pCB() - ps.pCD();
    const double rhs = ps.pA() + ps.pB();
    return detail::settle(InequalityKind::ch, lhs, rhs,
                          detail::abs_sum({ps.pAB(), ps.pAD(), ps.pCB(), ps.pCD(), ps.pA(), ps.pB()}), true);
}

/// E = p++ + p-- - p+- - p-+, no renormalization.
inline double correlation(const TwoChannelCounts& tc) { return tc.ppp() + tc.pmm() - tc.ppm() - tc.pmp(); }

/// E* = (p++ + p-- - p+- - p-+) / (p++ + p-- + p+- + p-+).
inline double renormalized_correlation(const TwoChannelCounts& tc) {
    const double den = tc.total();
    if (den == 0.0) throw std::domain_error("renormalized correlation undefined: no coincidences");
    return correlation(tc) / den;
}

/// S = E(A,B) + E(A,D) + E(C,B) - E(C,D) against the local bound 2.
/// `norm_holds` declares that the underlying probabilities satisfy
/// p++ + p+- + p-+ + p-- = 1 for every pair.
inline InequalityReport s_statistic(double eAB, double eAD, double eCB, double eCD, bool renormalized,
                                    bool norm_holds = false) {
    const double lhs = eAB + eAD + eCB - eCD;
    return detail::settle(renormalized ? InequalityKind::chsh_star : InequalityKind::chsh, lhs, 2.0,
                          detail::abs_sum({eAB, eAD, eCB, eCD, 2.0}), !renormalized && norm_holds);
}

/// No-enhancement (Freedman-Clauser) form: the CH left side against the
/// coincidence rates with one polarizer removed.
inline InequalityReport fc_report(const ProbabilitySet& ps, double pAinf, double pInfB) {
    for (double v : {pAinf, pInfB})
        if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("polarizer-removed probability outside [0,1]");
    const double lhs = ps.pAB() + ps.pAD() + ps.pCB() - ps.pCD();
    const double rhs = pAinf + pInfB;
    return detail::settle(InequalityKind::fc, lhs, rhs,
                          detail::abs_sum({ps.pAB(), ps.pAD(), ps.pCB(), ps.pCD(), pAinf, pInfB}), false);
}

class NormalizationError : public std::invalid_argument {
public:
    NormalizationError(const std::string& what, double deficit) : std::invalid_argument(what), deficit_(deficit) {}
    double deficit() const { return deficit_; }

private:
    double deficit_;
};

/// Single-channel quantities recovered from normalized two-channel data.
struct ChannelConversion {
    double pXY;  // = p++
    double ppm;  // pX - p++
    double pmp;  // pY - p++
    double pmm;  // 1 - pY - p+-
    /// Largest disagreement between the recovered and the given entries.
    double discrepancy;
    bool consistent;

    TwoChannelCounts to_counts() const { return {pXY, ppm, pmp, pmm, true}; }
};

inline ChannelConversion channel_conversion(const TwoChannelCounts& tc, double pX, double pY) {
    const double deficit = 1.0 - tc.total();
    if (std::abs(deficit) > kDataTolerance) {
        std::ostringstream os;
        os << "two-channel probabilities sum to " << tc.total() << " (deficit " << deficit
           << "); conversion needs p++ + p+- + p-+ + p-- = 1";
        throw NormalizationError(os.str(), deficit);
    }
    ChannelConversion c{};
    c.pXY = tc.ppp();
    c.ppm = pX - tc.ppp();
    c.pmp = pY - tc.ppp();
    c.pmm = 1.0 - pY - c.ppm;
    c.discrepancy = std::max({std::abs(c.ppm - tc.ppm()), std::abs(c.pmp - tc.pmp()), std::abs(c.pmm - tc.pmm())});
    c.consistent = c.discrepancy <= kDataTolerance;
    return c;
}

}  // namespace bellcheck
