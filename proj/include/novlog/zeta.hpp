#pragma once

// Commutative truncated power series over Q, used for Lefschetz zeta
// functions and the abelian reading of eta.

#include "class_series.hpp"
#include "matrix.hpp"

#include <cstdint>
#include <vector>

namespace novlog {

/// sum_{k=0}^{order} c_k t^k in Q[[t]].
class RationalSeries {
  public:
    RationalSeries() = default;
    explicit RationalSeries(int order, const Rational &constant = 0) : c_(order + 1, Rational(0)) {
        c_[0] = constant;
    }
    static RationalSeries from_coefficients(std::vector<Rational> c) {
        RationalSeries s;
        s.c_ = std::move(c);
        return s;
    }

    int order() const { return static_cast<int>(c_.size()) - 1; }
    const Rational &operator[](int k) const { return c_.at(k); }
    Rational &operator[](int k) { return c_.at(k); }
    const std::vector<Rational> &coefficients() const { return c_; }

    friend RationalSeries operator+(RationalSeries a, const RationalSeries &b) {
        for (int k = 0; k <= a.order(); ++k)
            a.c_[k] += b.c_[k];
        return a;
    }
    friend RationalSeries operator-(RationalSeries a, const RationalSeries &b) {
        for (int k = 0; k <= a.order(); ++k)
            a.c_[k] -= b.c_[k];
        return a;
    }
    friend RationalSeries operator*(const RationalSeries &a, const RationalSeries &b) {
        RationalSeries out(a.order());
        for (int i = 0; i <= a.order(); ++i) {
            if (a.c_[i] == 0)
                continue;
            for (int j = 0; i + j <= a.order(); ++j)
                out.c_[i + j] += a.c_[i] * b.c_[j];
        }
        return out;
    }
    friend RationalSeries operator*(RationalSeries a, const Rational &q) {
        for (auto &x : a.c_)
            x *= q;
        return a;
    }
    friend bool operator==(const RationalSeries &, const RationalSeries &) = default;

  private:
    std::vector<Rational> c_{Rational(0)};
};

/// Multiplicative inverse; requires a nonzero constant term.
inline RationalSeries inverse(const RationalSeries &a) {
    if (a[0] == 0)
        throw Error(ErrorKind::InvalidArgument, "series with zero constant term is not invertible");
    RationalSeries out(a.order());
    out[0] = 1 / a[0];
    for (int k = 1; k <= a.order(); ++k) {
        Rational acc = 0;
        for (int j = 1; j <= k; ++j)
            acc += a[j] * out[k - j];
        out[k] = -acc / a[0];
    }
    return out;
}

/// exp of a series with zero constant term, via E' = y' E.
inline RationalSeries exp(const RationalSeries &y) {
    if (y[0] != 0)
        throw Error(ErrorKind::PositiveValuationRequired, "exp needs a zero constant term");
    RationalSeries e(y.order(), 1);
    for (int k = 1; k <= y.order(); ++k) {
        Rational acc = 0;
        for (int j = 1; j <= k; ++j)
            acc += Rational(j) * y[j] * e[k - j];
        e[k] = acc / k;
    }
    return e;
}

using ZetaSeries = RationalSeries;
using IntMatrix = Matrix<std::int64_t>;

namespace detail {

/// det(I - t F) by elimination over Q[[t]]; every pivot stays = 1 mod t.
inline RationalSeries det_one_minus_tf(const IntMatrix &f, int order) {
    const std::size_t n = f.rows();
    Matrix<RationalSeries> m(n, n, RationalSeries(order));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j)
                m(i, j)[0] = 1;
            if (order >= 1)
                m(i, j)[1] = -Rational(static_cast<long>(f(i, j)));
        }
    RationalSeries det(order, 1);
    for (std::size_t j = 0; j < n; ++j) {
        const RationalSeries pinv = inverse(m(j, j));
        det = det * m(j, j);
        for (std::size_t i = j + 1; i < n; ++i) {
            const RationalSeries factor = m(i, j) * pinv;
            for (std::size_t c = j; c < n; ++c)
                m(i, c) = m(i, c) - factor * m(j, c);
        }
    }
    return det;
}

} // namespace detail

/// prod_i det(I - t f_i)^((-1)^(i+1)).
inline ZetaSeries zeta_det(const std::vector<IntMatrix> &maps, int order) {
    ZetaSeries z(order, 1);
    for (std::size_t i = 0; i < maps.size(); ++i) {
        if (!maps[i].is_square())
            throw Error(ErrorKind::InvalidArgument, "homology map must be square");
        const RationalSeries d = detail::det_one_minus_tf(maps[i], order);
        z = z * (i % 2 == 1 ? d : inverse(d));
    }
    return z;
}

/// exp(sum_{k>=1} L_k t^k / k) for L_1..L_N.
inline ZetaSeries zeta_from_counts(const std::vector<Rational> &counts, int order) {
    RationalSeries y(order);
    for (int k = 1; k <= order && k <= static_cast<int>(counts.size()); ++k)
        y[k] = counts[k - 1] / k;
    return exp(y);
}

/// Lefschetz numbers L_k = sum_i (-1)^i tr(f_i^k).
inline std::vector<Rational> lefschetz_numbers(const std::vector<IntMatrix> &maps, int order) {
    std::vector<Rational> out(order > 0 ? order : 0, Rational(0));
    for (std::size_t i = 0; i < maps.size(); ++i) {
        const auto &f = maps[i];
        Matrix<Rational> base = f.map([](std::int64_t v) { return Rational(static_cast<long>(v)); });
        Matrix<Rational> power = base;
        for (int k = 1; k <= order; ++k) {
            Rational tr = 0;
            for (std::size_t j = 0; j < power.rows(); ++j)
                tr += power(j, j);
            out[k - 1] += (i % 2 == 0 ? tr : -tr);
            power = multiply(power, base, Rational(0));
        }
    }
    return out;
}

/// Collapse a class series to Q[[t]] through the augmentation of H.
inline RationalSeries augmented(const ClassSeries &c) {
    RationalSeries out(std::max(c.order(), 0));
    for (int k = 0; k <= c.order(); ++k)
        for (const auto &[h, q] : c.degree(k))
            out[k] += q;
    return out;
}

/// exp(eta) for abelian G, read in the commutative ring.
inline ZetaSeries abelian_zeta(const ClassSeries &eta) {
    if (!eta.group()->is_abelian())
        throw Error(ErrorKind::NonAbelianGroup, "abelian_zeta needs G abelian");
    RationalSeries y = augmented(eta);
    y[0] = 0;
    return exp(y);
}

} // namespace novlog
