#pragma once

// Logarithms of Witt vectors 1 + a1 t + a2 t^2 + ... and the kernel of
// Log: W -> Pbar. Over rings where every element is a sum of units (QH),
// that kernel is the closure of W ∩ [P*, P*]; commutator_factorize makes
// this constructive degree by degree.

#include "class_series.hpp"

#include <utility>
#include <vector>

namespace novlog {

inline bool is_witt_vector(const TruncatedSeries &w) {
    if (w.low() < 0)
        return false;
    return w.coeff(0) == GroupAlgebraElement::scalar(w.grp(), 1);
}

inline void require_witt(const TruncatedSeries &w, const char *op) {
    if (!is_witt_vector(w))
        throw Error(ErrorKind::NotWittVector, std::string(op) + ": expected 1 + a1 t + a2 t^2 + ...");
}

/// log(1 + mu) = mu - mu^2/2 + mu^3/3 - ...
inline TruncatedSeries series_log(const TruncatedSeries &w) {
    require_witt(w, "series_log");
    const TruncatedSeries mu = w - TruncatedSeries::one(w.group(), w.order());
    TruncatedSeries result(w.group(), w.order());
    TruncatedSeries power = mu;
    for (int k = 1; k <= w.order() && !power.is_zero(); ++k) {
        result += power * Rational((k % 2 == 1) ? 1 : -1, k);
        power = power * mu;
    }
    return result;
}

/// exp y = 1 + y + y^2/2 + ..., defined for v(y) >= 1.
inline TruncatedSeries series_exp(const TruncatedSeries &y) {
    if (y.low() < 1 && !y.is_zero())
        throw Error(ErrorKind::PositiveValuationRequired, "series_exp needs v(y) >= 1");
    TruncatedSeries result = TruncatedSeries::one(y.group(), y.order());
    TruncatedSeries term = result;
    for (int k = 1; k <= y.order(); ++k) {
        term = term * y * Rational(1, k);
        if (term.is_zero())
            break;
        result += term;
    }
    return result;
}

/// Log = pr o log : W -> Pbar, a group homomorphism.
inline ClassSeries log_hom(const TruncatedSeries &w) { return project_pbar(series_log(w)); }

/// log(e^X e^Y) - X - Y; a Lie series in X, Y, hence zero in Pbar.
inline TruncatedSeries bchd_defect(const TruncatedSeries &x, const TruncatedSeries &y) {
    detail::require_same(x, y, "bchd_defect");
    if ((x.low() < 1 && !x.is_zero()) || (y.low() < 1 && !y.is_zero()))
        throw Error(ErrorKind::PositiveValuationRequired, "bchd_defect needs v(X), v(Y) >= 1");
    return series_log(series_exp(x) * series_exp(y)) - x - y;
}

/// Group commutator x y x^-1 y^-1 of two units.
inline TruncatedSeries group_commutator(const TruncatedSeries &x, const TruncatedSeries &y) {
    return x * y * unit_invert(x) * unit_invert(y);
}

using CommutatorPair = std::pair<TruncatedSeries, TruncatedSeries>;

inline TruncatedSeries commutator_product(const GroupPtr &group, int order, const std::vector<CommutatorPair> &pairs) {
    TruncatedSeries acc = TruncatedSeries::one(group, order);
    for (const auto &[x, y] : pairs)
        acc = acc * group_commutator(x, y);
    return acc;
}

namespace detail {

/// One ring commutator  q t^n (m - p)  realized as a group commutator whose
/// expansion is 1 + q t^n (m - p) + O(t^(n+1)).
struct OrbitMove {
    enum class Kind { Twisted, Rho } kind;
    HElem k; // Twisted: m = rho^n(k) p k^-1
};

inline CommutatorPair realize_move(const GroupPtr &gp, int order, int n, const OrbitMove &move,
                                   const HElem &p, const Rational &q) {
    const TwistedGroup &g = *gp;
    auto one = TruncatedSeries::one(gp, order);
    if (move.kind == OrbitMove::Kind::Twisted) {
        // u = k, v = q t^n (p k^-1):  uv - vu = q t^n (rho^n(k) p k^-1 - p).
        auto u = TruncatedSeries::constant(gp, order, GroupAlgebraElement::monomial(move.k));
        auto v = TruncatedSeries::monomial(gp, order, n, GroupAlgebraElement::monomial(g.h_mul(p, g.h_inv(move.k)), q));
        return {u, one + v * u};
    }
    // m = rho(p).
    if (n == 1) {
        // u = p, v = q t:  uv - vu = q t (rho(p) - p).
        auto u = TruncatedSeries::constant(gp, order, GroupAlgebraElement::monomial(p));
        auto v = TruncatedSeries::monomial(gp, order, 1, GroupAlgebraElement::scalar(g, q));
        return {u, one + v * u};
    }
    // x = t, y = -q t^(n-1) p:  xy - yx = q t^n (rho(p) - p), both of positive valuation.
    auto x = TruncatedSeries::monomial(gp, order, 1, GroupAlgebraElement::scalar(g, 1));
    auto y = TruncatedSeries::monomial(gp, order, n - 1, GroupAlgebraElement::monomial(p, -q));
    return {one - x, one - y};
}

/// Writes c in A (orbit sums zero at level -n) as a sum of q (m - p) along
/// a BFS spanning forest of the orbit graph, pushing coefficients from the
/// deepest leaves to the canonical root. Each push strictly shrinks the
/// support outside the roots.
inline std::vector<CommutatorPair> decompose_degree(const GroupPtr &gp, int order, int n,
                                                    const GroupAlgebraElement &c) {
    const TwistedGroup &g = *gp;
    const std::size_t size = g.kernel_order();
    struct Node {
        int parent = -1;
        int depth = 0;
        OrbitMove move{OrbitMove::Kind::Rho, {}};
        bool forward = true; // node == move(parent) when true, parent == move(node) otherwise
    };
    std::vector<Node> nodes(size);
    std::vector<bool> seen(size, false);
    std::vector<int> order_nodes;
    for (std::size_t root = 0; root < size; ++root) {
        const HElem rh = HElem::index(static_cast<std::int32_t>(root));
        if (seen[root] || g.conj_class({n, rh}).rep.h != rh)
            continue;
        std::vector<int> queue{static_cast<int>(root)};
        seen[root] = true;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const int cur = queue[head];
            order_nodes.push_back(cur);
            const HElem ch = HElem::index(cur);
            auto visit = [&](const HElem &next, OrbitMove mv, bool forward) {
                const int ni = next.idx();
                if (seen[ni])
                    return;
                seen[ni] = true;
                nodes[ni] = {cur, nodes[cur].depth + 1, mv, forward};
                queue.push_back(ni);
            };
            visit(g.rho_pow(ch, 1), {OrbitMove::Kind::Rho, {}}, true);
            visit(g.rho_pow(ch, -1), {OrbitMove::Kind::Rho, {}}, false);
            for (const HElem &k : g.kernel_elements())
                visit(g.h_mul(g.h_mul(g.rho_pow(k, n), ch), g.h_inv(k)), {OrbitMove::Kind::Twisted, k}, true);
        }
    }
    std::vector<Rational> weight(size, Rational(0));
    for (const auto &[h, q] : c.terms())
        weight[h.idx()] = q;
    std::vector<CommutatorPair> out;
    for (auto it = order_nodes.rbegin(); it != order_nodes.rend(); ++it) {
        const int m = *it;
        const Node &node = nodes[m];
        if (node.parent < 0 || weight[m] == 0)
            continue;
        const Rational q = weight[m];
        const HElem mh = HElem::index(m);
        const HElem ph = HElem::index(node.parent);
        // q m = q (m - p) + q p
        if (node.forward)
            out.push_back(realize_move(gp, order, n, node.move, ph, q));
        else
            out.push_back(realize_move(gp, order, n, node.move, mh, -q)); // q(m - p) = -q(rho(m) - m)
        weight[node.parent] += q;
        weight[m] = 0;
    }
    return out;
}

} // namespace detail

/// For alpha in ker Log, returns units (x_i, y_i) with
///   v(1 - alpha * prod [x_i, y_i]) > order.
inline std::vector<CommutatorPair> commutator_factorize(const TruncatedSeries &alpha) {
    require_witt(alpha, "commutator_factorize");
    const GroupPtr &gp = alpha.group();
    if (!gp->is_finite())
        throw Error(ErrorKind::UnsupportedGroup, "commutator factorization needs a finite kernel");
    if (!log_hom(alpha).is_zero())
        throw Error(ErrorKind::NotInKernel, "Log(alpha) is nonzero");
    const int order = alpha.order();
    std::vector<CommutatorPair> pairs;
    TruncatedSeries current = alpha;
    for (int n = 1; n <= order; ++n) {
        // current = 1 + x t^n + ..., x in P'_n; cancel it with X_n = -x.
        const GroupAlgebraElement x = current.coeff(n);
        if (x.is_zero())
            continue;
        auto step = detail::decompose_degree(gp, order, n, -x);
        TruncatedSeries correction = commutator_product(gp, order, step);
        current = current * correction;
        pairs.insert(pairs.end(), std::make_move_iterator(step.begin()), std::make_move_iterator(step.end()));
    }
    return pairs;
}

} // namespace novlog
