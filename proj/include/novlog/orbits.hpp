#pragma once

// Combinatorial stand-in for the gradient descent: per degree s a signed,
// G-labeled digraph whose matrix is tau_s. Closed walks play the role of
// closed orbits. A walk p0 -e1-> p1 -e2-> ... -ek-> p0 carries the label
// product g(ek) ... g(e1) (later edges on the left), which is exactly the
// word appearing in the (p0, p0) entry of tau^k.

#include "k1.hpp"
#include "zeta.hpp"

#include <string>
#include <vector>

namespace novlog {

struct OrbitEdge {
    std::size_t from = 0;
    std::size_t to = 0;
    int sign = 1;
    GroupElement label;
};

struct LabeledOrbitModel {
    int degree = 0;
    std::vector<std::string> nodes;
    std::vector<OrbitEdge> edges;

    void validate() const {
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const auto &e = edges[i];
            if (e.from >= nodes.size() || e.to >= nodes.size())
                throw Error(ErrorKind::InvalidArgument, "edge " + std::to_string(i) + " references a missing node");
            if (e.sign != 1 && e.sign != -1)
                throw Error(ErrorKind::InvalidArgument, "edge " + std::to_string(i) + " sign must be +1 or -1");
            if (TwistedGroup::xi(e.label) != -1)
                throw Error(ErrorKind::BadLabelLevel, "edge " + std::to_string(i) + " label must satisfy xi = -1");
        }
    }
};

struct TauMatrix {
    int degree = 0;
    SeriesMatrix matrix;
};

/// Entry (q, p) = sum over edges p -> q of sign * label.
inline TauMatrix build_tau(const GroupPtr &g, const LabeledOrbitModel &model, int order) {
    model.validate();
    const std::size_t n = model.nodes.size();
    TauMatrix tau{model.degree, zero_matrix(g, n, n, order)};
    for (const auto &e : model.edges)
        tau.matrix(e.to, e.from) += TruncatedSeries::element(g, order, e.label, e.sign);
    return tau;
}

/// Trace of tau^k: a formal sum over G_(-k), returned as its H-coefficient
/// c with kappa_k = t^k c.
inline GroupAlgebraElement kappa(const TauMatrix &tau, int k) {
    if (k < 1)
        throw Error(ErrorKind::InvalidArgument, "kappa needs k >= 1");
    const SeriesMatrix &m = tau.matrix;
    if (m.rows() == 0)
        return {};
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            for (const auto &[e, a] : m(i, j).coeffs())
                if (e != 1)
                    throw Error(ErrorKind::BadLabelLevel, "tau entries must lie in G_(-1)");
    // The trace lives in degree k; run at that precision.
    const SeriesMatrix base = truncated(m, k).map([k](const TruncatedSeries &x) { return x.extended(k); });
    SeriesMatrix power = base;
    for (int i = 1; i < k; ++i)
        power = mat_mul(power, base);
    GroupAlgebraElement tr;
    for (std::size_t i = 0; i < power.rows(); ++i)
        tr += power(i, i).coeff(k);
    return tr;
}

/// eta = sum_s (-1)^(s+1) pr(K-lift of frak L(1 - tau_s)), where the lift
/// is -sum_k kappa_k / k.
inline ClassSeries eta_from_traces(const GroupPtr &g, const std::vector<TauMatrix> &taus, int order) {
    ClassSeries eta(g, order);
    for (const auto &tau : taus) {
        const SeriesMatrix &m = tau.matrix;
        if (m.rows() == 0)
            continue;
        const SeriesMatrix base = m.map([order](const TruncatedSeries &x) {
            for (const auto &[e, a] : x.coeffs())
                if (e != 1)
                    throw Error(ErrorKind::BadLabelLevel, "tau entries must lie in G_(-1)");
            return x.truncated(order).extended(order);
        });
        TruncatedSeries k_lift(g, order);
        SeriesMatrix power = base;
        for (int k = 1; k <= order; ++k) {
            TruncatedSeries tr(g, order);
            for (std::size_t i = 0; i < power.rows(); ++i)
                tr += power(i, i);
            k_lift -= tr * Rational(1, k);
            if (k < order)
                power = mat_mul(power, base);
        }
        const Rational sign = tau.degree % 2 == 0 ? Rational(-1) : Rational(1); // (-1)^(s+1)
        eta += project_pbar(k_lift) * sign;
    }
    return eta;
}

inline std::vector<TauMatrix> build_taus(const GroupPtr &g, const std::vector<LabeledOrbitModel> &models, int order) {
    std::vector<TauMatrix> out;
    for (const auto &m : models)
        out.push_back(build_tau(g, m, order));
    return out;
}

namespace detail {

/// True when `walk` is the lexicographically least of its rotations;
/// `period` receives the primitive period.
inline bool canonical_rotation(const std::vector<std::size_t> &walk, std::size_t &period) {
    const std::size_t k = walk.size();
    period = k;
    for (std::size_t r = 1; r < k; ++r) {
        int cmp = 0;
        for (std::size_t i = 0; i < k && cmp == 0; ++i) {
            const std::size_t a = walk[(i + r) % k], b = walk[i];
            cmp = a < b ? -1 : a > b ? 1 : 0;
        }
        if (cmp < 0)
            return false;
        if (cmp == 0 && period == k)
            period = r;
    }
    return true;
}

struct WalkSearch {
    const TwistedGroup &group;
    const LabeledOrbitModel &model;
    std::vector<std::vector<std::size_t>> out_edges;
    int max_len;
    std::size_t first_edge = 0;
    std::vector<std::size_t> walk;
    ClassSeries *eta;
    Rational degree_sign;

    void extend(std::size_t node, const GroupElement &product, int sign) {
        const std::size_t start = model.edges[first_edge].from;
        if (node == start) {
            std::size_t period = 0;
            if (canonical_rotation(walk, period)) {
                const Rational m(static_cast<long>(walk.size() / period));
                eta->add(group.conj_class(product), degree_sign * sign / m);
            }
        }
        if (static_cast<int>(walk.size()) == max_len)
            return;
        for (std::size_t e : out_edges[node]) {
            if (e < first_edge)
                continue; // a canonical rotation starts at its least edge
            const auto &edge = model.edges[e];
            walk.push_back(e);
            extend(edge.to, group.mul(edge.label, product), sign * edge.sign);
            walk.pop_back();
        }
    }
};

} // namespace detail

/// eta by closed-orbit enumeration: every cyclic walk of length k <= order
/// up to rotation, weighted by (-1)^s * (product of signs) / multiplicity.
inline ClassSeries eta_direct(const GroupPtr &g, const std::vector<LabeledOrbitModel> &models, int order) {
    ClassSeries eta(g, order);
    for (const auto &model : models) {
        model.validate();
        detail::WalkSearch search{*g, model, std::vector<std::vector<std::size_t>>(model.nodes.size()), order, 0, {},
                                  &eta, model.degree % 2 == 0 ? Rational(1) : Rational(-1)};
        for (std::size_t e = 0; e < model.edges.size(); ++e)
            search.out_edges[model.edges[e].from].push_back(e);
        for (std::size_t e = 0; e < model.edges.size() && order >= 1; ++e) {
            const auto &edge = model.edges[e];
            search.first_edge = e;
            search.walk = {e};
            search.extend(edge.to, edge.label, edge.sign);
        }
    }
    return eta;
}

} // namespace novlog
