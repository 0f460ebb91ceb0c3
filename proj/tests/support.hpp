#pragma once

// Random generators shared by the unit and acceptance suites.

#include "novlog/novlog.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <random>

namespace novlog {

// gtest printers, found by ADL.
inline void PrintTo(const GroupAlgebraElement &a, std::ostream *os) {
    *os << "{";
    for (const auto &[h, q] : a.terms())
        *os << " " << h.idx() << ":" << q;
    *os << " }";
}

inline void PrintTo(const TruncatedSeries &x, std::ostream *os) {
    *os << "series(order " << x.order() << ")";
    for (const auto &[k, a] : x.coeffs()) {
        *os << " t^" << k;
        PrintTo(a, os);
    }
}

inline void PrintTo(const ClassSeries &c, std::ostream *os) {
    *os << "classes(order " << c.order() << ")";
    for (int k = 0; k <= c.order(); ++k)
        for (const auto &[h, q] : c.degree(k))
            *os << " [" << k << "," << h.idx() << "]:" << q;
}

} // namespace novlog

namespace novlog::testing {

using Rng = std::mt19937_64;

/// H = Z/3 with rho = inversion.
inline GroupPtr z3_inversion() { return TwistedGroup::cyclic(3, 2); }

/// H = S3 (permutations of {0,1,2}) with rho = conjugation by (01).
inline GroupPtr s3_twisted() {
    std::vector<std::vector<int>> table = {{0, 1, 2, 3, 4, 5}, {1, 0, 5, 4, 3, 2}, {2, 4, 0, 5, 1, 3},
                                           {3, 5, 4, 0, 2, 1}, {4, 2, 3, 1, 5, 0}, {5, 3, 1, 2, 0, 4}};
    return TwistedGroup::finite({"e", "s01", "s02", "s12", "c", "c2"}, table, {0, 1, 3, 2, 5, 4});
}

inline int uniform(Rng &rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline HElem random_h(Rng &rng, const TwistedGroup &g) {
    if (g.is_finite())
        return HElem::index(uniform(rng, 0, static_cast<int>(g.kernel_order()) - 1));
    HElem h;
    for (int i = 0; i < g.rank(); ++i)
        h.c[i] = uniform(rng, -2, 2);
    return h;
}

inline GroupElement random_element(Rng &rng, const TwistedGroup &g, int max_t = 3) {
    return {uniform(rng, -max_t, max_t), random_h(rng, g)};
}

inline Rational small_rational(Rng &rng, int num = 3, int den = 2) {
    int p = uniform(rng, -num, num);
    int q = uniform(rng, 1, den);
    return make_rational(p, q);
}

inline GroupAlgebraElement random_algebra(Rng &rng, const TwistedGroup &g, int terms = 2) {
    GroupAlgebraElement a;
    for (int i = 0; i < terms; ++i)
        a.add_term(random_h(rng, g), small_rational(rng));
    return a;
}

/// Random element of P with exponents in [low, low + span].
inline TruncatedSeries random_series(Rng &rng, const GroupPtr &g, int order, int low = 0, int span = 4,
                                     int terms = 2) {
    TruncatedSeries s(g, order);
    for (int e = low; e <= low + span; ++e)
        if (uniform(rng, 0, 2) > 0)
            s.add_coeff(e, random_algebra(rng, *g, terms));
    return s;
}

inline TruncatedSeries random_witt(Rng &rng, const GroupPtr &g, int order, int span = 4) {
    return TruncatedSeries::one(g, order) + random_series(rng, g, order, 1, span - 1);
}

/// Unit of P: constant term q h (q != 0) plus a random tail.
inline TruncatedSeries random_unit(Rng &rng, const GroupPtr &g, int order, int span = 3) {
    Rational q = 0;
    while (q == 0)
        q = small_rational(rng);
    TruncatedSeries u = random_series(rng, g, order, 1, span - 1);
    u.add_coeff(0, GroupAlgebraElement::monomial(random_h(rng, *g), q));
    return u;
}

/// Invertible constant matrix over QH: signed monomial diagonal times elementaries.
inline SeriesMatrix random_constant_unit_matrix(Rng &rng, const GroupPtr &g, std::size_t n, int order,
                                                int moves = 3) {
    SeriesMatrix m = zero_matrix(g, n, n, order);
    for (std::size_t i = 0; i < n; ++i) {
        Rational q = 0;
        while (q == 0)
            q = small_rational(rng);
        m(i, i) = TruncatedSeries::constant(g, order, GroupAlgebraElement::monomial(random_h(rng, *g), q));
    }
    for (int k = 0; k < moves && n > 1; ++k) {
        std::size_t i = uniform(rng, 0, static_cast<int>(n) - 1), j = uniform(rng, 0, static_cast<int>(n) - 2);
        if (j >= i)
            ++j;
        m = mat_mul(elementary_matrix(g, n, i, j, TruncatedSeries::constant(g, order, random_algebra(rng, *g))), m);
    }
    return m;
}

/// I + t X with X random over P.
inline SeriesMatrix random_unipotent_matrix(Rng &rng, const GroupPtr &g, std::size_t n, int order, int span = 3) {
    SeriesMatrix m = identity_matrix(g, n, order);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (uniform(rng, 0, 2))
                m(i, j) += random_series(rng, g, order, 1, span - 1);
    return m;
}

inline SeriesMatrix random_unit_matrix(Rng &rng, const GroupPtr &g, std::size_t n, int order) {
    return mat_mul(random_unipotent_matrix(rng, g, n, order), random_constant_unit_matrix(rng, g, n, order));
}

/// Invertible matrix over R: unit over P, a signed monomial diagonal and
/// elementary moves with Laurent entries.
inline SeriesMatrix random_laurent_unit_matrix(Rng &rng, const GroupPtr &g, std::size_t n, int order) {
    SeriesMatrix m = random_unit_matrix(rng, g, n, order);
    SeriesMatrix d = zero_matrix(g, n, n, order);
    for (std::size_t i = 0; i < n; ++i)
        d(i, i) = TruncatedSeries::element(g, order, random_element(rng, *g, 2), uniform(rng, 0, 1) ? 1 : -1);
    m = mat_mul(d, m);
    for (int k = 0; k < 2 && n > 1; ++k) {
        std::size_t i = uniform(rng, 0, static_cast<int>(n) - 1), j = uniform(rng, 0, static_cast<int>(n) - 2);
        if (j >= i)
            ++j;
        auto r = random_series(rng, g, order, -1, 2, 1);
        m = mat_mul(elementary_matrix(g, n, i, j, r), m);
    }
    return m;
}

inline SeriesMatrix one_by_one(const TruncatedSeries &x) { return SeriesMatrix(1, 1, x); }

/// Sum of pieces R --u_i--> R in degrees (k_i, k_i - 1); expected invariant
/// sum (-1)^(k_i + 1) frak_l(u_i).
struct Pieces {
    BasedComplex complex;
    ClassSeries expected;
};

inline Pieces random_pieces(Rng &rng, const GroupPtr &g, int order, std::size_t count, std::size_t top) {
    BasedComplex c{g, order, std::vector<std::size_t>(top + 1, 0), {}};
    std::vector<std::pair<std::size_t, TruncatedSeries>> pieces;
    ClassSeries expected(g, order);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t k = uniform(rng, 1, static_cast<int>(top));
        auto u = ts_mul(TruncatedSeries::element(g, order, random_element(rng, *g, 1), 1), random_unit(rng, g, order));
        pieces.push_back({k, u});
        auto l = frak_l(one_by_one(u));
        expected = k % 2 ? expected + l : expected - l;
        c.ranks[k] += 1;
        c.ranks[k - 1] += 1;
    }
    std::vector<std::size_t> used(top + 1, 0);
    c.differentials.assign(top, SeriesMatrix());
    for (std::size_t k = 1; k <= top; ++k)
        c.differentials[k - 1] = zero_matrix(g, c.ranks[k - 1], c.ranks[k], order);
    // A piece occupies the next free slot in each of its two degrees.
    for (const auto &[k, u] : pieces) {
        c.differentials[k - 1](used[k - 1], used[k]) = u;
        ++used[k - 1];
        ++used[k];
    }
    return {c, expected.truncated(order)};
}

struct Change {
    SeriesMatrix a, a_inv;
};

enum class Move { Permute, Scale, Elementary };

inline Change random_change(Rng &rng, const GroupPtr &g, std::size_t n, int order, Move move) {
    Change ch{identity_matrix(g, n, order), identity_matrix(g, n, order)};
    if (n == 0)
        return ch;
    switch (move) {
    case Move::Permute: {
        std::vector<std::size_t> p(n);
        std::iota(p.begin(), p.end(), 0);
        std::shuffle(p.begin(), p.end(), rng);
        ch.a = zero_matrix(g, n, n, order);
        ch.a_inv = zero_matrix(g, n, n, order);
        for (std::size_t i = 0; i < n; ++i) {
            ch.a(i, p[i]) = TruncatedSeries::one(g, order);
            ch.a_inv(p[i], i) = TruncatedSeries::one(g, order);
        }
        break;
    }
    case Move::Scale: {
        std::size_t i = uniform(rng, 0, static_cast<int>(n) - 1);
        GroupElement x = random_element(rng, *g, 2);
        int sign = uniform(rng, 0, 1) ? 1 : -1;
        ch.a(i, i) = TruncatedSeries::element(g, order, x, sign);
        ch.a_inv(i, i) = TruncatedSeries::element(g, order, g->inv(x), sign);
        break;
    }
    case Move::Elementary: {
        if (n < 2)
            break;
        std::size_t i = uniform(rng, 0, static_cast<int>(n) - 1), j = uniform(rng, 0, static_cast<int>(n) - 2);
        if (j >= i)
            ++j;
        auto r = random_series(rng, g, order, -1, 2, 1);
        ch.a = elementary_matrix(g, n, i, j, r);
        ch.a_inv = elementary_matrix(g, n, i, j, -r);
        break;
    }
    }
    return ch;
}

inline BasedComplex random_rebase(Rng &rng, const BasedComplex &c, Move move) {
    std::size_t k = uniform(rng, 0, static_cast<int>(c.top()));
    auto ch = random_change(rng, c.group, c.rank(k), c.order, move);
    return rebased(c, k, ch.a, ch.a_inv);
}

} // namespace novlog::testing
