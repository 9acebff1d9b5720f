#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>

namespace bellcheck {

/// Tolerance for sets assembled from model evaluations.
inline constexpr double kModelTolerance = 1e-12;
/// Tolerance for sets assembled from measured or noisy data.
inline constexpr double kDataTolerance = 1e-9;

/// The six measurable quantities of a two-setting-per-side yes/no experiment:
/// singles p(A), p(B) and coincidences p(A,B), p(A,D), p(C,B), p(C,D).
///
/// A and C are the side-1 settings, B and D the side-2 settings. p(C) and p(D)
/// are deliberately absent; the Clauser-Horne form only needs p(A) and p(B).
class ProbabilitySet {
public:
    ProbabilitySet() = default;

    /// Throws std::invalid_argument if an entry is outside [0,1] or a pair
    /// probability exceeds one of its marginals by more than `tolerance`.
    ProbabilitySet(double pA, double pB, double pAB, double pAD, double pCB, double pCD,
                   double tolerance = kDataTolerance)
        : pA_(pA), pB_(pB), pAB_(pAB), pAD_(pAD), pCB_(pCB), pCD_(pCD) {
        check(tolerance);
    }

    double pA() const { return pA_; }
    double pB() const { return pB_; }
    double pAB() const { return pAB_; }
    double pAD() const { return pAD_; }
    double pCB() const { return pCB_; }
    double pCD() const { return pCD_; }

    /// Entries in the fixed order (pA, pB, pAB, pAD, pCB, pCD).
    std::array<double, 6> as_array() const { return {pA_, pB_, pAB_, pAD_, pCB_, pCD_}; }

    friend bool operator==(const ProbabilitySet&, const ProbabilitySet&) = default;

private:
    void check(double tol) const {
        const auto v = as_array();
        static constexpr const char* names[] = {"pA", "pB", "pAB", "pAD", "pCB", "pCD"};
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!std::isfinite(v[i]) || v[i] < -tol || v[i] > 1.0 + tol) {
                std::ostringstream os;
                os << "probability " << names[i] << " = " << v[i] << " outside [0,1]";
                throw std::invalid_argument(os.str());
            }
        }
        // pC and pD are not part of the set, so pCB and pCD are bounded by pB only
        // and pCD is unconstrained by marginals.
        auto bound = [&](double pair, double m, const char* pn, const char* mn) {
            if (pair > m + tol) {
                std::ostringstream os;
                os << "pair probability " << pn << " = " << pair << " exceeds marginal " << mn
                   << " = " << m;
                throw std::invalid_argument(os.str());
            }
        };
        bound(pAB_, pA_, "pAB", "pA");
        bound(pAB_, pB_, "pAB", "pB");
        bound(pAD_, pA_, "pAD", "pA");
        bound(pCB_, pB_, "pCB", "pB");
    }

    double pA_ = 0, pB_ = 0, pAB_ = 0, pAD_ = 0, pCB_ = 0, pCD_ = 0;
};

}  // namespace bellcheck
