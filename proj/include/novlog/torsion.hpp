#pragma once

// Torsion of finite based free acyclic complexes over the truncated Novikov
// ring. Sign convention: tau(C) is the class of (d + gamma): C_odd -> C_even
// for a chain contraction gamma, so 0 -> R --(1-t)--> R -> 0 (degrees 1, 0)
// has torsion (1 - t).

#include "k1.hpp"

#include <string>
#include <vector>

namespace novlog {

/// C_0 <- C_1 <- ... <- C_n; differentials[k-1] = d_k : C_k -> C_(k-1) is an
/// r_(k-1) x r_k matrix acting on column vectors.
struct BasedComplex {
    GroupPtr group;
    int order = kDefaultTruncation;
    std::vector<std::size_t> ranks;
    std::vector<SeriesMatrix> differentials;

    std::size_t top() const { return ranks.empty() ? 0 : ranks.size() - 1; }
    std::size_t rank(std::size_t k) const { return k < ranks.size() ? ranks[k] : 0; }
    TruncatedSeries zero() const { return TruncatedSeries(group, order); }

    /// d_k, or the appropriately sized zero matrix outside 1..n.
    SeriesMatrix d(std::size_t k) const {
        if (k >= 1 && k <= differentials.size())
            return differentials[k - 1];
        return SeriesMatrix(k == 0 ? 0 : rank(k - 1), rank(k), zero());
    }

    /// Shapes match the ranks and d_(k-1) d_k = 0 to the known precision.
    void validate() const {
        if (!group)
            throw Error(ErrorKind::InvalidArgument, "complex has no group");
        if (differentials.size() + 1 != ranks.size() && !(ranks.empty() && differentials.empty()))
            throw Error(ErrorKind::InvalidArgument, "need exactly one differential per positive degree");
        for (std::size_t k = 1; k <= differentials.size(); ++k) {
            const auto &m = differentials[k - 1];
            if (m.rows() != ranks[k - 1] || m.cols() != ranks[k])
                throw Error(ErrorKind::InvalidArgument, "d_" + std::to_string(k) + " has the wrong shape");
        }
        for (std::size_t k = 2; k <= differentials.size(); ++k) {
            SeriesMatrix dd = multiply(differentials[k - 2], differentials[k - 1], zero());
            for (std::size_t i = 0; i < dd.rows(); ++i)
                for (std::size_t j = 0; j < dd.cols(); ++j)
                    if (!dd(i, j).is_zero())
                        throw Error(ErrorKind::InvalidArgument,
                                    "d_" + std::to_string(k - 1) + " d_" + std::to_string(k) + " != 0");
        }
    }
};

namespace detail {

inline SeriesMatrix identity_like(const BasedComplex &c, std::size_t n) {
    SeriesMatrix m(n, n, c.zero());
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = TruncatedSeries::one(c.group, c.order);
    return m;
}

inline bool known_zero(const SeriesMatrix &m, std::size_t row_from = 0) {
    for (std::size_t i = row_from; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (!m(i, j).is_zero())
                return false;
    return true;
}

/// L D Q = [I_r 0; 0 0] by full unit pivoting (least valuation first,
/// ties to the smaller (row, col)).
struct PivotReduction {
    SeriesMatrix left;
    SeriesMatrix right;
    std::size_t rank = 0;
};

inline PivotReduction pivot_reduce(const BasedComplex &c, SeriesMatrix work) {
    const std::size_t rows = work.rows(), cols = work.cols();
    PivotReduction red{identity_like(c, rows), identity_like(c, cols), 0};
    for (std::size_t s = 0; s < std::min(rows, cols); ++s) {
        std::optional<std::pair<std::size_t, std::size_t>> best;
        int best_v = 0;
        for (std::size_t i = s; i < rows; ++i)
            for (std::size_t j = s; j < cols; ++j) {
                const TruncatedSeries &x = work(i, j);
                if (x.is_zero() || !is_unit(*c.group, x.leading()))
                    continue;
                if (!best || x.low() < best_v) {
                    best = {i, j};
                    best_v = x.low();
                }
            }
        if (!best)
            break;
        work.swap_rows(best->first, s);
        red.left.swap_rows(best->first, s);
        work.swap_cols(best->second, s);
        red.right.swap_cols(best->second, s);
        const TruncatedSeries pinv = unit_invert(work(s, s));
        for (std::size_t j = 0; j < cols; ++j)
            work(s, j) = pinv * work(s, j);
        for (std::size_t j = 0; j < rows; ++j)
            red.left(s, j) = pinv * red.left(s, j);
        work(s, s) = TruncatedSeries::one(c.group, work(s, s).order());
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == s || work(i, s).is_zero())
                continue;
            const TruncatedSeries f = work(i, s);
            for (std::size_t j = 0; j < cols; ++j)
                work(i, j) -= f * work(s, j);
            for (std::size_t j = 0; j < rows; ++j)
                red.left(i, j) -= f * red.left(s, j);
            work(i, s) = TruncatedSeries(c.group, work(i, s).order());
        }
        for (std::size_t j = 0; j < cols; ++j) {
            if (j == s || work(s, j).is_zero())
                continue;
            const TruncatedSeries f = work(s, j);
            for (std::size_t i = 0; i < cols; ++i)
                red.right(i, j) -= red.right(i, s) * f;
            work(s, j) = TruncatedSeries(c.group, work(s, j).order());
        }
        red.rank = s + 1;
    }
    for (std::size_t i = red.rank; i < rows; ++i)
        for (std::size_t j = red.rank; j < cols; ++j)
            if (!work(i, j).is_zero())
                throw Error(ErrorKind::NotAcyclicOrNoPivot, "residual block has no entry with unit leading coefficient");
    return red;
}

/// Solves D X = B or fails when B is not in the image to known precision.
inline SeriesMatrix solve(const BasedComplex &c, const SeriesMatrix &d, const SeriesMatrix &b) {
    const PivotReduction red = pivot_reduce(c, d);
    const SeriesMatrix lb = multiply(red.left, b, c.zero());
    if (!known_zero(lb, red.rank))
        throw Error(ErrorKind::NotAcyclicOrNoPivot, "right-hand side is not in the image of the differential");
    SeriesMatrix y(d.cols(), b.cols(), c.zero());
    for (std::size_t i = 0; i < red.rank; ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            y(i, j) = lb(i, j);
    return multiply(red.right, y, c.zero());
}

} // namespace detail

/// gamma[k] : C_k -> C_(k+1) with d gamma + gamma d = id.
struct ChainContraction {
    std::vector<SeriesMatrix> gamma;
};

inline ChainContraction chain_contraction(const BasedComplex &c) {
    c.validate();
    ChainContraction out;
    const std::size_t n = c.top();
    for (std::size_t k = 0; k <= n; ++k) {
        SeriesMatrix rhs = detail::identity_like(c, c.rank(k));
        if (k >= 1)
            rhs = mat_add(rhs, multiply(out.gamma[k - 1], c.d(k), c.zero()), Rational(-1));
        if (k == n) {
            if (!detail::known_zero(rhs))
                throw Error(ErrorKind::NotAcyclicOrNoPivot, "top degree is not contracted");
            break;
        }
        out.gamma.push_back(detail::solve(c, c.d(k + 1), rhs));
    }
    return out;
}

/// Representative matrix and its frak L invariant.
struct TorsionClass {
    SeriesMatrix representative;
    ClassSeries invariant;
};

inline TorsionClass torsion(const BasedComplex &c) {
    const ChainContraction h = chain_contraction(c);
    const std::size_t n = c.top();
    std::vector<std::size_t> offset(n + 2, 0);
    std::size_t odd = 0, even = 0;
    for (std::size_t k = 0; k <= n; ++k) {
        std::size_t &total = k % 2 ? odd : even;
        offset[k] = total;
        total += c.rank(k);
    }
    if (odd != even)
        throw Error(ErrorKind::NotAcyclicOrNoPivot, "Euler characteristic is nonzero");
    if (odd == 0)
        return {SeriesMatrix(0, 0, c.zero()), ClassSeries(c.group, c.order)};
    SeriesMatrix t(even, odd, c.zero());
    for (std::size_t k = 1; k <= n; k += 2) {
        const SeriesMatrix dk = c.d(k);
        for (std::size_t i = 0; i < dk.rows(); ++i)
            for (std::size_t j = 0; j < dk.cols(); ++j)
                t(offset[k - 1] + i, offset[k] + j) = dk(i, j);
        if (k < n) {
            const SeriesMatrix &g = h.gamma[k];
            for (std::size_t i = 0; i < g.rows(); ++i)
                for (std::size_t j = 0; j < g.cols(); ++j)
                    t(offset[k + 1] + i, offset[k] + j) = g(i, j);
        }
    }
    ClassSeries inv = frak_l(t);
    return {std::move(t), std::move(inv)};
}

/// phi_k : C_k -> D_k, maps[k] is r^D_k x r^C_k.
struct ChainMap {
    BasedComplex source;
    BasedComplex target;
    std::vector<SeriesMatrix> maps;

    SeriesMatrix at(std::size_t k) const {
        if (k < maps.size())
            return maps[k];
        return SeriesMatrix(target.rank(k), source.rank(k), target.zero());
    }
};

/// Cone_k = D_k ⊕ C_(k-1),  ∂ = [[d^D, phi], [0, -d^C]], standard basis.
inline BasedComplex mapping_cone(const ChainMap &phi) {
    const BasedComplex &src = phi.source;
    const BasedComplex &dst = phi.target;
    BasedComplex cone{dst.group, std::min(src.order, dst.order), {}, {}};
    const std::size_t top = std::max(dst.ranks.size(), src.ranks.size() + 1);
    for (std::size_t k = 0; k < top; ++k)
        cone.ranks.push_back(dst.rank(k) + (k >= 1 ? src.rank(k - 1) : 0));
    while (cone.ranks.size() > 1 && cone.ranks.back() == 0)
        cone.ranks.pop_back();
    for (std::size_t k = 1; k < cone.ranks.size(); ++k) {
        SeriesMatrix m(cone.ranks[k - 1], cone.ranks[k], cone.zero());
        const SeriesMatrix dd = dst.d(k);
        for (std::size_t i = 0; i < dd.rows(); ++i)
            for (std::size_t j = 0; j < dd.cols(); ++j)
                m(i, j) = dd(i, j);
        const SeriesMatrix f = phi.at(k - 1);
        for (std::size_t i = 0; i < f.rows(); ++i)
            for (std::size_t j = 0; j < f.cols(); ++j)
                m(i, dst.rank(k) + j) = f(i, j);
        if (k >= 2) {
            const SeriesMatrix dc = src.d(k - 1);
            for (std::size_t i = 0; i < dc.rows(); ++i)
                for (std::size_t j = 0; j < dc.cols(); ++j)
                    m(dst.rank(k - 1) + i, dst.rank(k) + j) = -dc(i, j);
        }
        cone.differentials.push_back(std::move(m));
    }
    return cone;
}

inline TorsionClass torsion_of_map(const ChainMap &phi) { return torsion(mapping_cone(phi)); }

/// New basis in degree k given by coordinates change A (A_inv its inverse):
/// d_k -> d_k A_inv, d_(k+1) -> A d_(k+1).
inline BasedComplex rebased(BasedComplex c, std::size_t k, const SeriesMatrix &a, const SeriesMatrix &a_inv) {
    if (k >= 1 && k <= c.differentials.size())
        c.differentials[k - 1] = multiply(c.differentials[k - 1], a_inv, c.zero());
    if (k + 1 <= c.differentials.size())
        c.differentials[k] = multiply(a, c.differentials[k], c.zero());
    return c;
}

/// C ⊕ (R --id--> R) placed in degrees k+1, k.
inline BasedComplex elementary_expansion(const BasedComplex &c, std::size_t k) {
    BasedComplex out{c.group, c.order, c.ranks, {}};
    if (out.ranks.size() < k + 2)
        out.ranks.resize(k + 2, 0);
    out.ranks[k] += 1;
    out.ranks[k + 1] += 1;
    for (std::size_t j = 1; j < out.ranks.size(); ++j) {
        SeriesMatrix m(out.ranks[j - 1], out.ranks[j], c.zero());
        const SeriesMatrix old = c.d(j);
        for (std::size_t r = 0; r < old.rows(); ++r)
            for (std::size_t s = 0; s < old.cols(); ++s)
                m(r, s) = old(r, s);
        if (j == k + 1)
            m(out.ranks[k] - 1, out.ranks[k + 1] - 1) = TruncatedSeries::one(c.group, c.order);
        out.differentials.push_back(std::move(m));
    }
    return out;
}

} // namespace novlog
