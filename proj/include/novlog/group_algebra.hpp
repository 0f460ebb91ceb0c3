#pragma once

#include "group.hpp"
#include "matrix.hpp"
#include "rational.hpp"

#include <map>
#include <optional>

namespace novlog {

/// Element of A = QH as a sparse map H -> Q without stored zeros.
class GroupAlgebraElement {
  public:
    using Terms = std::map<HElem, Rational>;

    GroupAlgebraElement() = default;

    static GroupAlgebraElement monomial(const HElem &h, const Rational &q = 1) {
        GroupAlgebraElement a;
        a.add_term(h, q);
        return a;
    }
    static GroupAlgebraElement scalar(const TwistedGroup &g, const Rational &q) {
        return monomial(g.identity_h(), q);
    }

    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t support_size() const { return terms_.size(); }

    Rational coeff(const HElem &h) const {
        auto it = terms_.find(h);
        return it == terms_.end() ? Rational(0) : it->second;
    }

    void add_term(const HElem &h, const Rational &q) {
        if (q == 0)
            return;
        auto [it, inserted] = terms_.try_emplace(h, q);
        if (!inserted) {
            it->second += q;
            if (it->second == 0)
                terms_.erase(it);
        }
    }

    GroupAlgebraElement &operator+=(const GroupAlgebraElement &o) {
        for (const auto &[h, q] : o.terms_)
            add_term(h, q);
        return *this;
    }
    GroupAlgebraElement &operator-=(const GroupAlgebraElement &o) {
        for (const auto &[h, q] : o.terms_)
            add_term(h, -q);
        return *this;
    }
    GroupAlgebraElement &operator*=(const Rational &s) {
        if (s == 0) {
            terms_.clear();
            return *this;
        }
        for (auto &[h, q] : terms_)
            q *= s;
        return *this;
    }

    friend GroupAlgebraElement operator+(GroupAlgebraElement a, const GroupAlgebraElement &b) { return a += b; }
    friend GroupAlgebraElement operator-(GroupAlgebraElement a, const GroupAlgebraElement &b) { return a -= b; }
    friend GroupAlgebraElement operator-(GroupAlgebraElement a) { return a *= Rational(-1); }
    friend GroupAlgebraElement operator*(GroupAlgebraElement a, const Rational &s) { return a *= s; }
    friend GroupAlgebraElement operator*(const Rational &s, GroupAlgebraElement a) { return a *= s; }
    friend bool operator==(const GroupAlgebraElement &, const GroupAlgebraElement &) = default;

  private:
    Terms terms_;
};

inline GroupAlgebraElement mul(const TwistedGroup &g, const GroupAlgebraElement &a,
                               const GroupAlgebraElement &b) {
    GroupAlgebraElement out;
    for (const auto &[x, p] : a.terms())
        for (const auto &[y, q] : b.terms())
            out.add_term(g.h_mul(x, y), p * q);
    return out;
}

inline GroupAlgebraElement rho_pow(const TwistedGroup &g, const GroupAlgebraElement &a, std::int64_t n) {
    if (n == 0 || g.rho_is_identity())
        return a;
    GroupAlgebraElement out;
    for (const auto &[h, q] : a.terms())
        out.add_term(g.rho_pow(h, n), q);
    return out;
}

inline Rational augmentation(const GroupAlgebraElement &a) {
    Rational s = 0;
    for (const auto &[h, q] : a.terms())
        s += q;
    return s;
}

namespace detail {

inline std::size_t h_slot(const HElem &h) { return static_cast<std::size_t>(h.idx()); }

/// Matrix of x -> a x on QH in the basis H (finite kernels).
inline RationalMatrix left_regular(const TwistedGroup &g, const GroupAlgebraElement &a) {
    const std::size_t n = g.kernel_order();
    RationalMatrix m(n, n, Rational(0));
    for (const auto &[x, q] : a.terms())
        for (std::size_t y = 0; y < n; ++y)
            m(h_slot(g.h_mul(x, HElem::index(static_cast<std::int32_t>(y)))), y) += q;
    return m;
}

} // namespace detail

/// Two-sided inverse in QH. Finite kernels: decided through the regular
/// representation. Free abelian kernels: Q[Z^r] is a domain whose units
/// are the nonzero scalar multiples of monomials.
inline std::optional<GroupAlgebraElement> inverse(const TwistedGroup &g, const GroupAlgebraElement &a) {
    if (a.is_zero())
        return std::nullopt;
    if (a.support_size() == 1) {
        const auto &[h, q] = *a.terms().begin();
        return GroupAlgebraElement::monomial(g.h_inv(h), 1 / q);
    }
    if (!g.is_finite())
        return std::nullopt;
    auto inv = invert(detail::left_regular(g, a));
    if (!inv)
        return std::nullopt;
    GroupAlgebraElement out;
    const std::size_t e = detail::h_slot(g.identity_h());
    for (std::size_t i = 0; i < g.kernel_order(); ++i)
        out.add_term(HElem::index(static_cast<std::int32_t>(i)), (*inv)(i, e));
    return out;
}

inline bool is_unit(const TwistedGroup &g, const GroupAlgebraElement &a) { return inverse(g, a).has_value(); }

using AlgebraMatrix = Matrix<GroupAlgebraElement>;

inline AlgebraMatrix algebra_identity(const TwistedGroup &g, std::size_t n) {
    AlgebraMatrix m(n, n, GroupAlgebraElement{});
    for (std::size_t i = 0; i < n; ++i)
        m(i, i) = GroupAlgebraElement::scalar(g, 1);
    return m;
}

inline AlgebraMatrix algebra_multiply(const TwistedGroup &g, const AlgebraMatrix &a, const AlgebraMatrix &b) {
    AlgebraMatrix out(a.rows(), b.cols(), GroupAlgebraElement{});
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero())
                continue;
            for (std::size_t j = 0; j < b.cols(); ++j)
                out(i, j) += mul(g, a(i, k), b(k, j));
        }
    return out;
}

/// Inverse in GL_n(QH), or nullopt when the matrix is not invertible.
inline std::optional<AlgebraMatrix> inverse(const TwistedGroup &g, const AlgebraMatrix &m) {
    const std::size_t n = m.rows();
    if (!m.is_square())
        return std::nullopt;
    if (g.is_finite()) {
        // M acts on A^n ~ Q^(n|H|); block (i, j) is the regular matrix of M_ij.
        const std::size_t h = g.kernel_order();
        RationalMatrix big(n * h, n * h, Rational(0));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (m(i, j).is_zero())
                    continue;
                RationalMatrix block = detail::left_regular(g, m(i, j));
                for (std::size_t r = 0; r < h; ++r)
                    for (std::size_t c = 0; c < h; ++c)
                        if (block(r, c) != 0)
                            big(i * h + r, j * h + c) = block(r, c);
            }
        auto inv = invert(std::move(big));
        if (!inv)
            return std::nullopt;
        AlgebraMatrix out(n, n, GroupAlgebraElement{});
        const std::size_t e = detail::h_slot(g.identity_h());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t r = 0; r < h; ++r)
                    out(i, j).add_term(HElem::index(static_cast<std::int32_t>(r)), (*inv)(i * h + r, j * h + e));
        return out;
    }
    // Commutative domain: Gauss-Jordan with monomial pivots.
    AlgebraMatrix a = m;
    AlgebraMatrix inv = algebra_identity(g, n);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t p = col;
        std::optional<GroupAlgebraElement> pinv;
        for (; p < n; ++p)
            if ((pinv = inverse(g, a(p, col))))
                break;
        if (p == n)
            return std::nullopt;
        a.swap_rows(p, col);
        inv.swap_rows(p, col);
        for (std::size_t j = 0; j < n; ++j) {
            a(col, j) = mul(g, *pinv, a(col, j));
            inv(col, j) = mul(g, *pinv, inv(col, j));
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || a(i, col).is_zero())
                continue;
            GroupAlgebraElement f = a(i, col);
            for (std::size_t j = 0; j < n; ++j) {
                a(i, j) -= mul(g, f, a(col, j));
                inv(i, j) -= mul(g, f, inv(col, j));
            }
        }
    }
    return inv;
}

} // namespace novlog
