#pragma once

#include "series.hpp"

#include <map>
#include <vector>

namespace novlog {

/// Element of Pbar = prod_k Q Gamma_{-k}: per degree k a rational vector
/// over the conjugacy classes of G_(-k), keyed by canonical representative.
class ClassSeries {
  public:
    using Degree = std::map<HElem, Rational>;

    ClassSeries() = default;
    ClassSeries(GroupPtr group, int order)
        : group_(std::move(group)), order_(order), degrees_(order >= 0 ? order + 1 : 0) {}

    const GroupPtr &group() const { return group_; }
    int order() const { return order_; }
    const Degree &degree(int k) const {
        static const Degree empty;
        return k >= 0 && k <= order_ ? degrees_[k] : empty;
    }
    Rational coeff(int k, const HElem &rep) const {
        const auto &d = degree(k);
        auto it = d.find(rep);
        return it == d.end() ? Rational(0) : it->second;
    }
    /// Coefficient of the class of the group element t^k h.
    Rational coeff_of(const GroupElement &g) const {
        return coeff(static_cast<int>(g.n), group_->conj_class(g).rep.h);
    }

    /// Adds q {class}; `rep` must already be the canonical representative.
    void add(int k, const HElem &rep, const Rational &q) {
        if (k < 0 || k > order_ || q == 0)
            return;
        auto [it, inserted] = degrees_[k].try_emplace(rep, q);
        if (!inserted) {
            it->second += q;
            if (it->second == 0)
                degrees_[k].erase(it);
        }
    }
    void add(const ConjClass &c, const Rational &q) { add(static_cast<int>(c.rep.n), c.rep.h, q); }

    bool is_zero() const {
        for (const auto &d : degrees_)
            if (!d.empty())
                return false;
        return true;
    }

    ClassSeries truncated(int new_order) const {
        ClassSeries out(group_, std::min(order_, new_order));
        for (int k = 0; k <= out.order_; ++k)
            out.degrees_[k] = degrees_[k];
        return out;
    }

    /// Equal in every degree <= upto that both sides know.
    bool agrees_with(const ClassSeries &o, int upto) const {
        const int lim = std::min({upto, order_, o.order_});
        for (int k = 0; k <= lim; ++k)
            if (degrees_[k] != o.degrees_[k])
                return false;
        return true;
    }

    ClassSeries &operator+=(const ClassSeries &o) {
        if (!group_)
            group_ = o.group_;
        if (o.order_ < order_) {
            order_ = o.order_;
            degrees_.resize(order_ >= 0 ? order_ + 1 : 0);
        }
        for (int k = 0; k <= order_; ++k)
            for (const auto &[h, q] : o.degrees_[k])
                add(k, h, q);
        return *this;
    }
    ClassSeries &operator*=(const Rational &s) {
        for (auto &d : degrees_) {
            if (s == 0)
                d.clear();
            for (auto &[h, q] : d)
                q *= s;
        }
        return *this;
    }
    ClassSeries &operator-=(const ClassSeries &o) { return *this += (ClassSeries(o) *= Rational(-1)); }

    friend ClassSeries operator+(ClassSeries a, const ClassSeries &b) { return a += b; }
    friend ClassSeries operator-(ClassSeries a, const ClassSeries &b) { return a -= b; }
    friend ClassSeries operator-(ClassSeries a) { return a *= Rational(-1); }
    friend ClassSeries operator*(ClassSeries a, const Rational &s) { return a *= s; }
    friend ClassSeries operator*(const Rational &s, ClassSeries a) { return a *= s; }

    friend bool operator==(const ClassSeries &a, const ClassSeries &b) {
        return a.order_ == b.order_ && a.degrees_ == b.degrees_;
    }

  private:
    GroupPtr group_;
    int order_ = 0;
    std::vector<Degree> degrees_;
};

/// P -> Pbar: the monomial t^k h goes to its conjugacy class in G_(-k).
inline ClassSeries project_pbar(const TruncatedSeries &p) {
    if (p.low() < 0)
        throw Error(ErrorKind::NegativeValuation, "project_pbar needs a power series (no negative exponents)");
    const TwistedGroup &g = p.grp();
    ClassSeries out(p.group(), p.order());
    for (const auto &[k, a] : p.coeffs())
        for (const auto &[h, q] : a.terms())
            out.add(g.conj_class({k, h}), q);
    return out;
}

} // namespace novlog
