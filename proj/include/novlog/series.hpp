#pragma once

// Truncated twisted Laurent series  x = sum_{i >= low} t^i a_i + O(t^(order+1))
// over A = QH, with every t-power kept on the left and a t = t rho(a).
//
// `order` is an absolute precision: coefficients above it are unknown.
// The strict API (ts_add, ts_mul) insists on equal orders; the operators
// propagate precision (x y is known to min(Nx + v(y), Ny + v(x))), which
// the Laurent-ring reductions rely on.

#include "errors.hpp"
#include "group.hpp"
#include "group_algebra.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace novlog {

inline constexpr int kDefaultTruncation = 16;

class TruncatedSeries {
  public:
    using Coeffs = std::map<int, GroupAlgebraElement>;

    TruncatedSeries() = default;
    TruncatedSeries(GroupPtr group, int order) : group_(std::move(group)), order_(order) {}

    static TruncatedSeries monomial(GroupPtr group, int order, int exponent, GroupAlgebraElement a) {
        TruncatedSeries s(std::move(group), order);
        s.add_coeff(exponent, a);
        return s;
    }
    static TruncatedSeries constant(GroupPtr group, int order, const GroupAlgebraElement &a) {
        return monomial(std::move(group), order, 0, a);
    }
    static TruncatedSeries one(GroupPtr group, int order) {
        auto e = GroupAlgebraElement::scalar(*group, 1);
        return constant(std::move(group), order, e);
    }
    /// The series  q t^n h  of a single group element.
    static TruncatedSeries element(GroupPtr group, int order, const GroupElement &g, const Rational &q = 1) {
        return monomial(std::move(group), order, static_cast<int>(g.n), GroupAlgebraElement::monomial(g.h, q));
    }

    const GroupPtr &group() const { return group_; }
    const TwistedGroup &grp() const { return *group_; }
    int order() const { return order_; }
    const Coeffs &coeffs() const { return coeffs_; }

    bool is_zero() const { return coeffs_.empty(); }

    /// Least exponent with a nonzero known coefficient; nullopt for zero.
    std::optional<int> valuation() const {
        if (coeffs_.empty())
            return std::nullopt;
        return coeffs_.begin()->first;
    }
    /// Lowest stored exponent, 0 for the zero series.
    int low() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    /// Lower bound on the true valuation: order + 1 for a known-zero series.
    int valuation_bound() const { return coeffs_.empty() ? order_ + 1 : coeffs_.begin()->first; }

    GroupAlgebraElement coeff(int e) const {
        auto it = coeffs_.find(e);
        return it == coeffs_.end() ? GroupAlgebraElement{} : it->second;
    }
    GroupAlgebraElement leading() const { return coeffs_.empty() ? GroupAlgebraElement{} : coeffs_.begin()->second; }

    void add_coeff(int e, const GroupAlgebraElement &a) {
        if (e > order_ || a.is_zero())
            return;
        auto &slot = coeffs_[e];
        slot += a;
        if (slot.is_zero())
            coeffs_.erase(e);
    }
    void set_coeff(int e, const GroupAlgebraElement &a) {
        coeffs_.erase(e);
        add_coeff(e, a);
    }

    /// Forget coefficients above new_order (never raises precision).
    TruncatedSeries truncated(int new_order) const {
        TruncatedSeries s(group_, std::min(new_order, order_));
        for (const auto &[e, a] : coeffs_)
            if (e <= s.order_)
                s.coeffs_.emplace(e, a);
        return s;
    }
    /// Reinterpret the known part as exact and pad the precision up to
    /// new_order. Only sound for inputs that really are polynomials.
    TruncatedSeries extended(int new_order) const {
        TruncatedSeries s = *this;
        s.order_ = std::max(order_, new_order);
        return s;
    }

    /// t^m * x: exponents shift, coefficients untouched.
    TruncatedSeries shifted_left(int m) const {
        TruncatedSeries s(group_, order_ + m);
        for (const auto &[e, a] : coeffs_)
            s.coeffs_.emplace(e + m, a);
        return s;
    }
    /// x * t^m: (t^i a) t^m = t^(i+m) rho^m(a).
    TruncatedSeries shifted_right(int m) const {
        TruncatedSeries s(group_, order_ + m);
        for (const auto &[e, a] : coeffs_)
            s.coeffs_.emplace(e + m, rho_pow(*group_, a, m));
        return s;
    }

    /// Apply rho coefficientwise (the ring automorphism of P).
    TruncatedSeries rho_applied(std::int64_t n = 1) const {
        TruncatedSeries s(group_, order_);
        for (const auto &[e, a] : coeffs_)
            s.coeffs_.emplace(e, rho_pow(*group_, a, n));
        return s;
    }

    /// Equal on every exponent <= upto (precision permitting on both sides).
    bool agrees_with(const TruncatedSeries &o, int upto) const {
        const int lim = std::min({upto, order_, o.order_});
        auto a = coeffs_.begin();
        auto b = o.coeffs_.begin();
        for (;;) {
            while (a != coeffs_.end() && a->first > lim)
                a = coeffs_.end();
            while (b != o.coeffs_.end() && b->first > lim)
                b = o.coeffs_.end();
            if (a == coeffs_.end() || b == o.coeffs_.end())
                return a == coeffs_.end() && b == o.coeffs_.end();
            if (a->first != b->first || !(a->second == b->second))
                return false;
            ++a;
            ++b;
        }
    }

    TruncatedSeries &operator+=(const TruncatedSeries &o) {
        order_ = std::min(order_, o.order_);
        if (!group_)
            group_ = o.group_;
        for (auto it = coeffs_.begin(); it != coeffs_.end();)
            it = it->first > order_ ? coeffs_.erase(it) : std::next(it);
        for (const auto &[e, a] : o.coeffs_)
            add_coeff(e, a);
        return *this;
    }
    TruncatedSeries &operator-=(const TruncatedSeries &o) { return *this += -o; }
    TruncatedSeries &operator*=(const Rational &q) {
        if (q == 0) {
            coeffs_.clear();
            return *this;
        }
        for (auto &[e, a] : coeffs_)
            a *= q;
        return *this;
    }

    friend TruncatedSeries operator+(TruncatedSeries a, const TruncatedSeries &b) { return a += b; }
    friend TruncatedSeries operator-(TruncatedSeries a, const TruncatedSeries &b) { return a -= b; }
    friend TruncatedSeries operator-(TruncatedSeries a) { return a *= Rational(-1); }
    friend TruncatedSeries operator*(TruncatedSeries a, const Rational &q) { return a *= q; }
    friend TruncatedSeries operator*(const Rational &q, TruncatedSeries a) { return a *= q; }

    /// (t^i a)(t^j b) = t^(i+j) rho^j(a) b, with precision propagation.
    friend TruncatedSeries operator*(const TruncatedSeries &x, const TruncatedSeries &y) {
        const TwistedGroup &g = x.group_ ? *x.group_ : *y.group_;
        const int prec = std::min(x.order_ + y.valuation_bound(), y.order_ + x.valuation_bound());
        TruncatedSeries out(x.group_ ? x.group_ : y.group_, std::min(prec, std::max(x.order_, y.order_)));
        for (const auto &[j, b] : y.coeffs_) {
            for (const auto &[i, a] : x.coeffs_) {
                if (i + j > out.order_)
                    break;
                out.add_coeff(i + j, mul(g, rho_pow(g, a, j), b));
            }
        }
        return out;
    }

    /// Same order and same known coefficients.
    friend bool operator==(const TruncatedSeries &a, const TruncatedSeries &b) {
        return a.order_ == b.order_ && a.coeffs_ == b.coeffs_;
    }

  private:
    GroupPtr group_;
    int order_ = 0;
    Coeffs coeffs_;
};

namespace detail {

inline void require_same(const TruncatedSeries &x, const TruncatedSeries &y, const char *op) {
    if (x.order() != y.order())
        throw Error(ErrorKind::TruncationMismatch, std::string(op) + ": orders " + std::to_string(x.order()) +
                                                       " and " + std::to_string(y.order()));
    if (x.group() != y.group())
        throw Error(ErrorKind::TruncationMismatch, std::string(op) + ": operands live over different groups");
}

} // namespace detail

inline TruncatedSeries ts_add(const TruncatedSeries &x, const TruncatedSeries &y) {
    detail::require_same(x, y, "ts_add");
    return x + y;
}

inline TruncatedSeries ts_mul(const TruncatedSeries &x, const TruncatedSeries &y) {
    detail::require_same(x, y, "ts_mul");
    return x * y;
}

inline std::optional<int> valuation(const TruncatedSeries &x) { return x.valuation(); }

/// Inverse of x = t^v u with u(0) a unit of A: x^-1 = u^-1 t^-v, where
/// u^-1 = (1 + s)^-1 u(0)^-1 and s = u(0)^-1 (u - u(0)). The result is
/// known to order - 2v (capped at the input order).
inline TruncatedSeries unit_invert(const TruncatedSeries &x) {
    const auto v = x.valuation();
    if (!v)
        throw Error(ErrorKind::NonUnitLeading, "zero series is not invertible");
    const TwistedGroup &g = x.grp();
    const auto lead_inv = inverse(g, x.leading());
    if (!lead_inv)
        throw Error(ErrorKind::NonUnitLeading, "leading coefficient is not a unit of QH");
    const TruncatedSeries u = x.shifted_left(-*v);
    // u y = 1 coefficientwise: rho^n(u_0) y_n = -sum_{j<n} rho^j(u_{n-j}) y_j.
    const int order = u.order();
    std::vector<GroupAlgebraElement> y(order + 1);
    y[0] = *lead_inv;
    for (int n = 1; n <= order; ++n) {
        GroupAlgebraElement acc;
        for (const auto &[i, ui] : u.coeffs()) {
            if (i < 1 || i > n)
                continue;
            if (!y[n - i].is_zero())
                acc += mul(g, rho_pow(g, ui, n - i), y[n - i]);
        }
        if (!acc.is_zero())
            y[n] = -mul(g, rho_pow(g, *lead_inv, n), acc);
    }
    TruncatedSeries geom(x.group(), order);
    for (int n = 0; n <= order; ++n)
        if (!y[n].is_zero())
            geom.set_coeff(n, y[n]);
    TruncatedSeries inv = geom.shifted_right(-*v);
    return inv.truncated(x.order());
}

/// Embed a finite formal sum sum q_g g of group elements.
inline TruncatedSeries embed_group_ring(const GroupPtr &group, int order,
                                        const std::vector<std::pair<GroupElement, Rational>> &terms) {
    TruncatedSeries s(group, order);
    for (const auto &[g, q] : terms)
        s.add_coeff(static_cast<int>(g.n), GroupAlgebraElement::monomial(g.h, q));
    return s;
}

} // namespace novlog
