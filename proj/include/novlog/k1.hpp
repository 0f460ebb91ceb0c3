#pragma once

// Trace-logarithms on K1 of the truncated power-series ring P and of the
// Laurent ring R. K1 classes are never compared directly; everything here
// computes an invariant of a representative matrix.

#include "witt.hpp"

#include <set>
#include <vector>

namespace novlog {

using SeriesMatrix = Matrix<TruncatedSeries>;

inline SeriesMatrix zero_matrix(const GroupPtr &g, std::size_t rows, std::size_t cols, int order) {
    return SeriesMatrix(rows, cols, TruncatedSeries(g, order));
}

inline SeriesMatrix identity_matrix(const GroupPtr &g, std::size_t n, int order) {
    SeriesMatrix m = zero_matrix(g, n, n, order);
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = TruncatedSeries::one(g, order);
    return m;
}

/// I + r e_ij (i != j).
inline SeriesMatrix elementary_matrix(const GroupPtr &g, std::size_t n, std::size_t i, std::size_t j,
                                      const TruncatedSeries &r) {
    SeriesMatrix m = identity_matrix(g, n, r.order());
    m(i, j) = r;
    return m;
}

inline SeriesMatrix mat_mul(const SeriesMatrix &a, const SeriesMatrix &b) {
    if (a.cols() != b.rows())
        throw Error(ErrorKind::InvalidArgument, "matrix shapes do not match");
    if (a.rows() == 0 || b.cols() == 0)
        return SeriesMatrix(a.rows(), b.cols(), TruncatedSeries());
    if (a.cols() == 0)
        throw Error(ErrorKind::InvalidArgument, "product through a zero-rank module needs an explicit zero");
    const TruncatedSeries &probe = a(0, 0);
    int order = probe.order();
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            order = std::max(order, a(i, j).order());
    return multiply(a, b, TruncatedSeries(probe.group(), order));
}

inline SeriesMatrix mat_add(SeriesMatrix a, const SeriesMatrix &b, const Rational &scale = 1) {
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            a(i, j) += b(i, j) * scale;
    return a;
}

inline SeriesMatrix block_diagonal(const SeriesMatrix &a, const SeriesMatrix &b) {
    const TruncatedSeries &probe = a.rows() ? a(0, 0) : b(0, 0);
    SeriesMatrix m = zero_matrix(probe.group(), a.rows() + b.rows(), a.cols() + b.cols(), probe.order());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            m(i, j) = a(i, j);
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            m(a.rows() + i, a.cols() + j) = b(i, j);
    return m;
}

/// Least precision over all entries.
inline int matrix_order(const SeriesMatrix &m) {
    int order = m.rows() && m.cols() ? m(0, 0).order() : 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            order = std::min(order, m(i, j).order());
    return order;
}

inline SeriesMatrix truncated(const SeriesMatrix &m, int order) {
    return m.map([order](const TruncatedSeries &x) { return x.truncated(order); });
}

inline AlgebraMatrix constant_part(const SeriesMatrix &m) {
    return m.map([](const TruncatedSeries &x) {
        if (x.low() < 0)
            throw Error(ErrorKind::NegativeValuation, "constant part needs a matrix over P");
        return x.coeff(0);
    });
}

inline SeriesMatrix from_constant(const GroupPtr &g, const AlgebraMatrix &c, int order) {
    return c.map([&](const GroupAlgebraElement &a) { return TruncatedSeries::constant(g, order, a); });
}

/// L_n = Tr o pr o log on matrices congruent to I mod t.
inline ClassSeries matrix_log_trace(const SeriesMatrix &u) {
    if (!u.is_square() || u.rows() == 0)
        throw Error(ErrorKind::InvalidArgument, "matrix_log_trace needs a nonempty square matrix");
    const GroupPtr &g = u(0, 0).group();
    const int order = matrix_order(u);
    const SeriesMatrix mu = mat_add(u, identity_matrix(g, u.rows(), order), Rational(-1));
    for (std::size_t i = 0; i < mu.rows(); ++i)
        for (std::size_t j = 0; j < mu.cols(); ++j)
            if (!mu(i, j).is_zero() && mu(i, j).low() < 1)
                throw Error(ErrorKind::NotUnipotentModT, "entry (" + std::to_string(i) + "," + std::to_string(j) +
                                                             ") of U - I has valuation < 1");
    TruncatedSeries trace_log(g, order);
    SeriesMatrix power = mu;
    for (int k = 1; k <= order; ++k) {
        TruncatedSeries tr(g, order);
        bool zero = true;
        for (std::size_t i = 0; i < power.rows(); ++i) {
            tr += power(i, i);
            for (std::size_t j = 0; j < power.cols() && zero; ++j)
                zero = power(i, j).is_zero();
        }
        trace_log += tr * Rational(k % 2 == 1 ? 1 : -1, k);
        if (zero)
            break;
        power = mat_mul(power, mu);
    }
    return project_pbar(trace_log.truncated(order));
}

struct GaussReduction {
    std::vector<TruncatedSeries> diagonal; // Witt vectors D_ii
    AlgebraMatrix constant;                // C = U(0) in GL(A)
};

/// U = E D C with E elementary, D diagonal Witt, C = U(0) constant.
inline GaussReduction gauss_reduce(const SeriesMatrix &u) {
    if (!u.is_square() || u.rows() == 0)
        throw Error(ErrorKind::InvalidArgument, "gauss_reduce needs a nonempty square matrix");
    const GroupPtr &g = u(0, 0).group();
    const int order = matrix_order(u);
    AlgebraMatrix c = constant_part(u);
    auto c_inv = inverse(*g, c);
    if (!c_inv)
        throw Error(ErrorKind::SingularConstantTerm, "U(0) is not invertible over QH");
    SeriesMatrix s = mat_mul(u, from_constant(g, *c_inv, order));
    const std::size_t n = s.rows();
    for (std::size_t j = 0; j < n; ++j) {
        const TruncatedSeries pivot_inv = unit_invert(s(j, j));
        for (std::size_t i = j + 1; i < n; ++i) {
            if (s(i, j).is_zero())
                continue;
            const TruncatedSeries f = s(i, j) * pivot_inv;
            for (std::size_t col = j; col < n; ++col)
                s(i, col) -= f * s(j, col);
            s(i, j) = TruncatedSeries(g, s(i, j).order());
        }
    }
    GaussReduction out;
    out.constant = std::move(c);
    for (std::size_t j = 0; j < n; ++j)
        out.diagonal.push_back(s(j, j).truncated(order));
    return out;
}

/// L extended to K1(P) by zero on the image of K1(A): L(U) = L(U U(0)^-1).
inline ClassSeries l_on_k1(const SeriesMatrix &u) {
    if (!u.is_square() || u.rows() == 0)
        throw Error(ErrorKind::InvalidArgument, "l_on_k1 needs a nonempty square matrix");
    const GroupPtr &g = u(0, 0).group();
    auto c_inv = inverse(*g, constant_part(u));
    if (!c_inv)
        throw Error(ErrorKind::SingularConstantTerm, "U(0) is not invertible over QH");
    return matrix_log_trace(mat_mul(u, from_constant(g, *c_inv, matrix_order(u))));
}

namespace detail {

/// Row index of the pivot in column `col` among rows >= `from`: least
/// valuation with unit leading coefficient, ties to the smaller row.
inline std::optional<std::size_t> unit_pivot_row(const SeriesMatrix &m, std::size_t col, std::size_t from) {
    std::optional<std::size_t> best;
    int best_v = 0;
    for (std::size_t i = from; i < m.rows(); ++i) {
        const TruncatedSeries &x = m(i, col);
        if (x.is_zero() || !is_unit(x.grp(), x.leading()))
            continue;
        if (!best || x.low() < best_v) {
            best = i;
            best_v = x.low();
        }
    }
    return best;
}

/// When every leading coefficient in the column is a zero divisor, tries one
/// elementary move row_i += t^(v_i - v_k) q h row_k that makes the entry of
/// row i unit-leading. Returns the repaired row.
// Averaging idempotents of the rho-stable normal subgroups generated by one
// element. They are central and commute with t, so adding e * row_k moves
// only some Wedderburn components of row_i.
inline std::vector<GroupAlgebraElement> central_idempotents(const TwistedGroup &g) {
    const std::vector<HElem> hs = g.kernel_elements();
    std::set<std::vector<std::int32_t>> seen;
    std::vector<GroupAlgebraElement> out;
    for (const HElem &h : hs) {
        std::set<std::int32_t> sub{g.identity_h().idx()};
        std::vector<HElem> todo{h};
        while (!todo.empty()) {
            const HElem x = todo.back();
            todo.pop_back();
            if (!sub.insert(x.idx()).second)
                continue;
            todo.push_back(g.rho_pow(x, 1));
            for (const HElem &y : hs) {
                todo.push_back(g.h_mul(g.h_mul(y, x), g.h_inv(y)));
                for (std::int32_t z : std::vector<std::int32_t>(sub.begin(), sub.end()))
                    todo.push_back(g.h_mul(x, HElem::index(z)));
            }
        }
        std::vector<std::int32_t> key(sub.begin(), sub.end());
        if (!seen.insert(key).second)
            continue;
        GroupAlgebraElement e;
        for (std::int32_t z : key)
            e.add_term(HElem::index(z), Rational(1, static_cast<long>(key.size())));
        out.push_back(e);
        out.push_back(GroupAlgebraElement::scalar(g, 1) - e);
    }
    return out;
}

inline std::optional<std::size_t> repair_pivot(SeriesMatrix &m, std::size_t col, std::size_t from) {
    const TwistedGroup &g = m(from, col).grp();
    if (!g.is_finite())
        return std::nullopt;
    std::vector<GroupAlgebraElement> mults;
    for (const HElem &h : g.kernel_elements())
        for (int q : {1, -1, 2})
            mults.push_back(GroupAlgebraElement::monomial(h, q));
    for (GroupAlgebraElement &e : central_idempotents(g))
        mults.push_back(std::move(e));
    for (int window : {0, 1, 2, 3})
        for (std::size_t i = from; i < m.rows(); ++i) {
            if (m(i, col).is_zero())
                continue;
            for (std::size_t k = from; k < m.rows(); ++k) {
                if (k == i || m(k, col).is_zero())
                    continue;
                const int base = m(i, col).low() - m(k, col).low();
                for (int shift : {base - window, base + window}) {
                    for (const GroupAlgebraElement &c : mults) {
                        const TruncatedSeries f =
                            TruncatedSeries::monomial(m(k, col).group(), m(k, col).order(), shift, c);
                        const TruncatedSeries x = m(i, col) + f * m(k, col);
                        if (x.is_zero() || !is_unit(g, x.leading()))
                            continue;
                        for (std::size_t cc = 0; cc < m.cols(); ++cc)
                            m(i, cc) += f * m(k, cc);
                        return i;
                    }
                    if (window == 0)
                        break;
                }
            }
        }
    return std::nullopt;
}

} // namespace detail

/// frak L : K1(R) -> Pbar. Valuation-pivot elimination brings M to upper
/// triangular form with pivots t^v u (u in P*); the t^v and u(0) factors are
/// killed (the 1x1 matrix (t) and the image of K1(A)), the rest is L(u).
/// The result is exact up to its reported order, which drops when pivots of
/// positive valuation have to be divided out.
inline ClassSeries frak_l(const SeriesMatrix &input) {
    if (!input.is_square() || input.rows() == 0)
        throw Error(ErrorKind::InvalidArgument, "frak_l needs a nonempty square matrix");
    const GroupPtr &g = input(0, 0).group();
    SeriesMatrix m = input;
    const std::size_t n = m.rows();
    std::vector<TruncatedSeries> pivots;
    for (std::size_t j = 0; j < n; ++j) {
        auto row = detail::unit_pivot_row(m, j, j);
        if (!row)
            row = detail::repair_pivot(m, j, j);
        if (!row)
            throw Error(ErrorKind::NoUnitPivot, "no entry with unit leading coefficient in column " + std::to_string(j));
        m.swap_rows(*row, j);
        const TruncatedSeries pivot_inv = unit_invert(m(j, j));
        for (std::size_t i = j + 1; i < n; ++i) {
            if (m(i, j).is_zero())
                continue;
            const TruncatedSeries f = m(i, j) * pivot_inv;
            for (std::size_t col = j; col < n; ++col)
                m(i, col) -= f * m(j, col);
            m(i, j) = TruncatedSeries(g, m(i, j).order());
        }
        pivots.push_back(m(j, j));
    }
    int order = matrix_order(input);
    for (const auto &p : pivots)
        order = std::min(order, p.order() - p.low());
    ClassSeries result(g, order);
    for (const auto &p : pivots) {
        const TruncatedSeries u = p.shifted_left(-p.low()).truncated(order);
        SeriesMatrix one_by_one(1, 1, u);
        result += l_on_k1(one_by_one);
    }
    return result;
}

} // namespace novlog
