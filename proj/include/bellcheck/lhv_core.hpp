#pragma once

// Factorizable (local-realistic) probability models over a discretized
// hidden-variable space:
//
//   p(A)   = sum_l w(l) P1(l, A)
//   p(A,B) = sum_l w(l) P1(l, A) P2(l, B)
//
// Response tables are indexed by one side's setting only, so parameter
// independence holds by construction.

#include <array>
#include <cmath>
#include <cstddef>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bellcheck/probability_set.hpp"

namespace bellcheck {

enum class Side { one = 1, two = 2 };

class HiddenVariableSpace {
public:
    HiddenVariableSpace() = default;
    HiddenVariableSpace(std::vector<std::string> cells, std::vector<double> weights)
        : cells_(std::move(cells)), weights_(std::move(weights)) {
        if (cells_.size() != weights_.size())
            throw std::invalid_argument("hidden-variable space: cell and weight counts differ");
    }

    /// `n` cells named "l0".."l{n-1}" with equal weight.
    static HiddenVariableSpace uniform(std::size_t n) {
        std::vector<std::string> cells;
        for (std::size_t i = 0; i < n; ++i) cells.push_back("l" + std::to_string(i));
        return {std::move(cells), std::vector<double>(n, 1.0 / static_cast<double>(n))};
    }

    std::size_t size() const { return cells_.size(); }
    const std::vector<std::string>& cells() const { return cells_; }
    const std::vector<double>& weights() const { return weights_; }
    double weight(std::size_t cell) const { return weights_.at(cell); }

private:
    std::vector<std::string> cells_;
    std::vector<double> weights_;
};

/// Detection ("yes") probabilities P_side(cell, setting), row-major by cell.
class ResponseTable {
public:
    ResponseTable() = default;
    ResponseTable(Side side, std::vector<std::string> settings, std::vector<std::vector<double>> table)
        : side_(side), settings_(std::move(settings)) {
        values_.reserve(table.size() * settings_.size());
        for (const auto& row : table) {
            if (row.size() != settings_.size())
                throw std::invalid_argument("response table: row width differs from setting count");
            values_.insert(values_.end(), row.begin(), row.end());
        }
        cells_ = table.size();
    }

    Side side() const { return side_; }
    const std::vector<std::string>& settings() const { return settings_; }
    std::size_t num_cells() const { return cells_; }

    double value(std::size_t cell, std::size_t setting) const {
        return values_.at(cell * settings_.size() + setting);
    }

    std::size_t index_of(const std::string& setting) const {
        for (std::size_t i = 0; i < settings_.size(); ++i)
            if (settings_[i] == setting) return i;
        throw std::invalid_argument("unknown setting '" + setting + "' on side " +
                                    std::to_string(static_cast<int>(side_)));
    }

    std::vector<std::vector<double>> rows() const {
        std::vector<std::vector<double>> out(cells_);
        for (std::size_t c = 0; c < cells_; ++c)
            out[c].assign(values_.begin() + static_cast<std::ptrdiff_t>(c * settings_.size()),
                          values_.begin() + static_cast<std::ptrdiff_t>((c + 1) * settings_.size()));
        return out;
    }

private:
    Side side_ = Side::one;
    std::vector<std::string> settings_;
    std::size_t cells_ = 0;
    std::vector<double> values_;
};

struct Violation {
    enum class Kind { negative_weight, normalization, range, shape };
    Kind kind;
    std::string message;
    /// Cell index, or -1 when not cell specific.
    long cell = -1;
    /// Offending setting id, empty when not setting specific.
    std::string setting;
    int side = 0;
    /// Offending value (weight, weight sum, or response).
    double value = 0.0;
    /// For normalization: 1 - sum of weights.
    double deficit = 0.0;
};

inline const char* to_string(Violation::Kind k) {
    switch (k) {
        case Violation::Kind::negative_weight: return "negative-weight";
        case Violation::Kind::normalization: return "normalization";
        case Violation::Kind::range: return "range";
        case Violation::Kind::shape: return "shape";
    }
    return "?";
}

struct ValidationReport {
    std::vector<Violation> violations;
    bool valid() const { return violations.empty(); }
};

class FactorizableModel;
ValidationReport validate_model(const FactorizableModel& model, double tolerance = kModelTolerance);

class FactorizableModel {
public:
    FactorizableModel(HiddenVariableSpace space, ResponseTable response1, ResponseTable response2)
        : space_(std::move(space)), r1_(std::move(response1)), r2_(std::move(response2)) {
        if (r1_.side() != Side::one || r2_.side() != Side::two)
            throw std::invalid_argument("factorizable model: response tables must be for sides 1 and 2");
        valid_ = validate_model(*this).valid();
    }

    const HiddenVariableSpace& space() const { return space_; }
    const ResponseTable& response(Side s) const { return s == Side::one ? r1_ : r2_; }
    const ResponseTable& response1() const { return r1_; }
    const ResponseTable& response2() const { return r2_; }
    bool valid() const { return valid_; }

private:
    HiddenVariableSpace space_;
    ResponseTable r1_;
    ResponseTable r2_;
    bool valid_ = false;
};

inline ValidationReport validate_model(const FactorizableModel& model, double tolerance) {
    ValidationReport rep;
    const auto& w = model.space().weights();
    double sum = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        sum += w[i];
        if (!(w[i] >= 0.0)) {
            std::ostringstream os;
            os << "weight of cell " << model.space().cells()[i] << " is " << w[i];
            rep.violations.push_back({Violation::Kind::negative_weight, os.str(), static_cast<long>(i), {}, 0,
                                      w[i], 0.0});
        }
    }
    if (!(std::abs(sum - 1.0) <= tolerance)) {
        std::ostringstream os;
        os << "weights sum to " << sum << ", deficit " << 1.0 - sum;
        rep.violations.push_back({Violation::Kind::normalization, os.str(), -1, {}, 0, sum, 1.0 - sum});
    }
    for (const ResponseTable* t : {&model.response1(), &model.response2()}) {
        const int side = static_cast<int>(t->side());
        if (t->num_cells() != model.space().size()) {
            std::ostringstream os;
            os << "side " << side << " table has " << t->num_cells() << " cells, space has "
               << model.space().size();
            rep.violations.push_back({Violation::Kind::shape, os.str(), -1, {}, side, 0.0, 0.0});
            continue;
        }
        for (std::size_t c = 0; c < t->num_cells(); ++c) {
            for (std::size_t s = 0; s < t->settings().size(); ++s) {
                const double v = t->value(c, s);
                if (!(v >= 0.0 && v <= 1.0)) {
                    std::ostringstream os;
                    os << "response P" << side << "(" << model.space().cells()[c] << ", "
                       << t->settings()[s] << ") = " << v << " outside [0,1]";
                    rep.violations.push_back({Violation::Kind::range, os.str(), static_cast<long>(c),
                                              t->settings()[s], side, v, 0.0});
                }
            }
        }
    }
    return rep;
}

namespace detail {
inline void require_valid(const FactorizableModel& m) {
    if (!m.valid()) throw std::invalid_argument("factorizable model fails validation");
}
}  // namespace detail

inline double marginal_probability(const FactorizableModel& model, const std::string& setting, Side side) {
    detail::require_valid(model);
    const auto& t = model.response(side);
    const std::size_t s = t.index_of(setting);
    double p = 0.0;
    for (std::size_t c = 0; c < t.num_cells(); ++c) p += model.space().weight(c) * t.value(c, s);
    return p;
}

inline double joint_probability(const FactorizableModel& model, const std::string& setting1,
                                const std::string& setting2) {
    detail::require_valid(model);
    const std::size_t a = model.response1().index_of(setting1);
    const std::size_t b = model.response2().index_of(setting2);
    double p = 0.0;
    for (std::size_t c = 0; c < model.space().size(); ++c)
        p += model.space().weight(c) * model.response1().value(c, a) * model.response2().value(c, b);
    return p;
}

/// A distribution over the 16 yes/no outcome tuples (a, c, b, d) of the four
/// observables A, C (side 1) and B, D (side 2).
class FourOutcomeJoint {
public:
    /// Observable positions within a tuple.
    enum Slot : std::size_t { A = 0, C = 1, B = 2, D = 3 };

    FourOutcomeJoint() { probs_.fill(0.0); }
    FourOutcomeJoint(std::array<std::string, 4> observables, std::array<double, 16> probs)
        : observables_(std::move(observables)), probs_(probs) {}

    static constexpr std::size_t index(int a, int c, int b, int d) {
        return static_cast<std::size_t>((a << 3) | (c << 2) | (b << 1) | d);
    }
    static constexpr int bit(std::size_t idx, Slot s) { return static_cast<int>((idx >> (3 - s)) & 1U); }

    double probability(int a, int c, int b, int d) const { return probs_[index(a, c, b, d)]; }
    const std::array<double, 16>& probabilities() const { return probs_; }
    const std::array<std::string, 4>& observables() const { return observables_; }

    /// Probability that observable `s` answers yes.
    double single(Slot s) const {
        double p = 0.0;
        for (std::size_t i = 0; i < 16; ++i)
            if (bit(i, s)) p += probs_[i];
        return p;
    }
    /// Probability that both observables answer yes.
    double pair(Slot s, Slot t) const {
        double p = 0.0;
        for (std::size_t i = 0; i < 16; ++i)
            if (bit(i, s) && bit(i, t)) p += probs_[i];
        return p;
    }
    double total() const {
        double p = 0.0;
        for (double v : probs_) p += v;
        return p;
    }
    bool is_distribution(double tol = kModelTolerance) const {
        for (double v : probs_)
            if (v < -tol) return false;
        return std::abs(total() - 1.0) <= tol;
    }

    ProbabilitySet measurable(double tol = kDataTolerance) const {
        return {single(A), single(B), pair(A, B), pair(A, D), pair(C, B), pair(C, D), tol};
    }

private:
    std::array<std::string, 4> observables_{"A", "C", "B", "D"};
    std::array<double, 16> probs_{};
};

inline FourOutcomeJoint formal_joint_distribution(const FactorizableModel& model, const std::string& a,
                                                  const std::string& c, const std::string& b,
                                                  const std::string& d) {
    detail::require_valid(model);
    const auto& r1 = model.response1();
    const auto& r2 = model.response2();
    const std::size_t ia = r1.index_of(a), ic = r1.index_of(c);
    const std::size_t ib = r2.index_of(b), id = r2.index_of(d);
    std::array<double, 16> probs{};
    auto q = [](double p, int yes) { return yes ? p : 1.0 - p; };
    for (std::size_t cell = 0; cell < model.space().size(); ++cell) {
        const double w = model.space().weight(cell);
        const double pa = r1.value(cell, ia), pc = r1.value(cell, ic);
        const double pb = r2.value(cell, ib), pd = r2.value(cell, id);
        for (std::size_t i = 0; i < 16; ++i) {
            using S = FourOutcomeJoint;
            probs[i] += w * q(pa, S::bit(i, S::A)) * q(pc, S::bit(i, S::C)) * q(pb, S::bit(i, S::B)) *
                        q(pd, S::bit(i, S::D));
        }
    }
    return {{a, c, b, d}, probs};
}

/// The measurable set (p(A), p(B), p(A,B), p(A,D), p(C,B), p(C,D)) of a model.
inline ProbabilitySet derive_probability_set(const FactorizableModel& model, const std::string& a,
                                             const std::string& c, const std::string& b,
                                             const std::string& d) {
    return {marginal_probability(model, a, Side::one),
            marginal_probability(model, b, Side::two),
            joint_probability(model, a, b),
            joint_probability(model, a, d),
            joint_probability(model, c, b),
            joint_probability(model, c, d),
            kDataTolerance};
}

}  // namespace bellcheck
