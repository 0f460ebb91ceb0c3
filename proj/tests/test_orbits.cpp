#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>
#include <numeric>

using namespace novlog;
using namespace novlog::testing;

namespace {

OrbitEdge edge(std::size_t from, std::size_t to, int sign, const HElem &h) { return {from, to, sign, {1, h}}; }

LabeledOrbitModel model(int degree, std::size_t nodes, std::vector<OrbitEdge> edges) {
    LabeledOrbitModel m{degree, {}, std::move(edges)};
    for (std::size_t i = 0; i < nodes; ++i)
        m.nodes.push_back("p" + std::to_string(i));
    return m;
}

LabeledOrbitModel random_model(Rng &rng, const TwistedGroup &g, int degree, int max_nodes, int max_edges) {
    std::size_t n = uniform(rng, 1, max_nodes);
    int e = uniform(rng, 0, max_edges);
    std::vector<OrbitEdge> edges;
    for (int i = 0; i < e; ++i)
        edges.push_back(edge(uniform(rng, 0, n - 1), uniform(rng, 0, n - 1), uniform(rng, 0, 1) ? 1 : -1,
                             random_h(rng, g)));
    return model(degree, n, std::move(edges));
}

/// Every closed walk of length k from every start, no deduplication:
/// calls f(sign, label product) with later edges on the left.
template <typename F> void for_each_closed_walk(const TwistedGroup &g, const LabeledOrbitModel &m, int k, F &&f) {
    std::function<void(std::size_t, std::size_t, int, GroupElement, int)> go = [&](std::size_t start, std::size_t node,
                                                                                    int len, GroupElement prod,
                                                                                    int sign) {
        if (len == k) {
            if (node == start)
                f(sign, prod);
            return;
        }
        for (const auto &e : m.edges)
            if (e.from == node)
                go(start, e.to, len + 1, g.mul(e.label, prod), sign * e.sign);
    };
    for (std::size_t p = 0; p < m.nodes.size(); ++p)
        go(p, p, 0, g.identity(), 1);
}

GroupAlgebraElement kappa_by_walks(const TwistedGroup &g, const LabeledOrbitModel &m, int k) {
    GroupAlgebraElement out;
    for_each_closed_walk(g, m, k, [&](int sign, const GroupElement &prod) {
        out.add_term(prod.h, sign);
    });
    return out;
}

/// (-1)^s sum_k (1/k) sum_{closed walks of length k} sign {product}.
ClassSeries eta_by_walks(const GroupPtr &g, const std::vector<LabeledOrbitModel> &models, int order) {
    ClassSeries eta(g, order);
    for (const auto &m : models)
        for (int k = 1; k <= order; ++k)
            for_each_closed_walk(*g, m, k, [&](int sign, const GroupElement &prod) {
                eta.add(g->conj_class(prod), Rational(m.degree % 2 ? -sign : sign, k));
            });
    return eta;
}

IntMatrix random_int_matrix(Rng &rng, std::size_t n, int bound = 2) {
    IntMatrix m(n, n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            m(i, j) = uniform(rng, -bound, bound);
    return m;
}

/// tau = t F as a model: |F_qp| parallel edges p -> q with the sign of F_qp.
LabeledOrbitModel model_of(const TwistedGroup &g, int degree, const IntMatrix &f) {
    std::vector<OrbitEdge> edges;
    for (std::size_t q = 0; q < f.rows(); ++q)
        for (std::size_t p = 0; p < f.cols(); ++p)
            for (std::int64_t c = 0; c < std::abs(f(q, p)); ++c)
                edges.push_back(edge(p, q, f(q, p) > 0 ? 1 : -1, g.identity_h()));
    return model(degree, f.rows(), std::move(edges));
}

/// Leibniz determinant of I - t F over Q[[t]].
RationalSeries leibniz_det_one_minus_tf(const IntMatrix &f, int order) {
    std::vector<std::size_t> perm(f.rows());
    std::iota(perm.begin(), perm.end(), 0);
    RationalSeries det(order);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                inversions += perm[i] > perm[j];
        RationalSeries term(order, 1);
        for (std::size_t i = 0; i < perm.size(); ++i) {
            RationalSeries entry(order, i == perm[i] ? 1 : 0);
            if (order >= 1)
                entry[1] = -Rational(static_cast<long>(f(i, perm[i])));
            term = term * entry;
        }
        det = inversions % 2 ? det - term : det + term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

ClassSeries log_one_minus_t(const GroupPtr &g, int order, const Rational &scale = 1) {
    ClassSeries c(g, order);
    for (int k = 1; k <= order; ++k)
        c.add(k, g->identity_h(), Rational(-1, k) * scale);
    return c;
}

} // namespace

TEST(Orbits, BuildTauExamples) {
    auto g = z3_inversion();
    const HElem e = HElem::index(0), a = HElem::index(1);
    auto loop = build_tau(g, model(0, 1, {edge(0, 0, 1, e)}), 4);
    EXPECT_EQ(loop.matrix(0, 0), TruncatedSeries::element(g, 4, g->t(), 1));
    auto empty = build_tau(g, model(1, 2, {}), 4);
    EXPECT_EQ(empty.degree, 1);
    EXPECT_TRUE(empty.matrix(0, 1).is_zero() && empty.matrix(1, 1).is_zero());
    auto cancel = build_tau(g, model(0, 1, {edge(0, 0, 1, a), edge(0, 0, -1, a)}), 4);
    EXPECT_TRUE(cancel.matrix(0, 0).is_zero());
    auto arrow = build_tau(g, model(0, 2, {edge(0, 1, -1, a)}), 4);
    EXPECT_EQ(arrow.matrix(1, 0), TruncatedSeries::element(g, 4, {1, a}, -1));
    EXPECT_TRUE(arrow.matrix(0, 1).is_zero());

    auto bad = model(0, 1, {OrbitEdge{0, 0, 1, {2, e}}});
    try {
        build_tau(g, bad, 4);
        FAIL();
    } catch (const Error &err) {
        EXPECT_EQ(err.kind(), ErrorKind::BadLabelLevel);
    }
}

TEST(Orbits, KappaExamples) {
    auto g = TwistedGroup::integers();
    auto loop = build_tau(g, model(0, 1, {edge(0, 0, 1, g->identity_h())}), 6);
    for (int k = 1; k <= 6; ++k)
        EXPECT_EQ(kappa(loop, k), GroupAlgebraElement::scalar(*g, 1));
    EXPECT_TRUE(kappa(build_tau(g, model(0, 2, {}), 6), 3).is_zero());
}

TEST(Orbits, KappaMatchesWalkEnumeration) {
    Rng rng(41);
    for (auto g : {z3_inversion(), s3_twisted()}) {
        for (int i = 0; i < 30; ++i) {
            auto m = random_model(rng, *g, 0, 3, 7);
            auto tau = build_tau(g, m, 6);
            for (int k = 1; k <= 6; ++k)
                EXPECT_EQ(kappa(tau, k), kappa_by_walks(*g, m, k));
        }
    }
}

TEST(Orbits, EtaExamples) {
    auto g = TwistedGroup::integers();
    const int n = 12;
    auto loop = model(0, 1, {edge(0, 0, 1, g->identity_h())});
    auto expected = log_one_minus_t(g, n, -1);
    EXPECT_EQ(eta_direct(g, {loop}, n), expected);
    EXPECT_EQ(eta_from_traces(g, build_taus(g, {loop}, n), n), expected);
    auto acyclic = model(1, 3, {edge(0, 1, 1, g->identity_h()), edge(1, 2, -1, g->identity_h())});
    EXPECT_TRUE(eta_direct(g, {acyclic}, n).is_zero());
    EXPECT_TRUE(eta_from_traces(g, build_taus(g, {acyclic}, n), n).is_zero());
    EXPECT_TRUE(eta_direct(g, {}, n).is_zero());
}

TEST(Orbits, TwoCycle) {
    auto g = s3_twisted();
    const int n = 6;
    const HElem h1 = HElem::index(1), h2 = HElem::index(4);
    auto m = model(0, 2, {edge(0, 1, 1, h1), edge(1, 0, 1, h2)});
    auto eta = eta_direct(g, {m}, n);
    GroupElement prod = g->mul({1, h2}, {1, h1});
    EXPECT_EQ(prod, (GroupElement{2, g->h_mul(g->rho_pow(h2, 1), h1)}));
    EXPECT_EQ(eta.coeff_of({2, g->h_mul(g->rho_pow(h1, 1), h2)}), 1);
    EXPECT_EQ(eta.coeff_of(g->mul(prod, prod)), Rational(1, 2));
    EXPECT_TRUE(eta.degree(1).empty() && eta.degree(3).empty());
    EXPECT_EQ(eta, eta_from_traces(g, build_taus(g, {m}, n), n));
    EXPECT_EQ(eta, eta_by_walks(g, {m}, n));
}

TEST(Orbits, RotationInvariance) {
    Rng rng(42);
    auto g = s3_twisted();
    for (int i = 0; i < 100; ++i) {
        int k = uniform(rng, 1, 6);
        std::vector<GroupElement> labels;
        for (int j = 0; j < k; ++j)
            labels.push_back({1, random_h(rng, *g)});
        auto product = [&](int r) {
            GroupElement p = g->identity();
            for (int j = 0; j < k; ++j)
                p = g->mul(labels[(j + r) % k], p);
            return p;
        };
        auto c = g->conj_class(product(0));
        for (int r = 1; r < k; ++r)
            EXPECT_EQ(g->conj_class(product(r)).rep, c.rep);
    }
}

TEST(Orbits, OrbitsRegroupWalks) {
    Rng rng(43);
    for (auto g : {TwistedGroup::integers(), z3_inversion(), s3_twisted()}) {
        for (int i = 0; i < 20; ++i) {
            std::vector<LabeledOrbitModel> models = {random_model(rng, *g, 0, 3, 6), random_model(rng, *g, 1, 3, 6)};
            EXPECT_EQ(eta_direct(g, models, 7), eta_by_walks(g, models, 7));
        }
    }
}

TEST(Orbits, DirectEqualsTraces) {
    Rng rng(44);
    for (auto g : {TwistedGroup::integers(), z3_inversion(), s3_twisted()}) {
        for (int i = 0; i < 15; ++i) {
            std::vector<LabeledOrbitModel> models;
            for (int s = 0; s < 3; ++s)
                models.push_back(random_model(rng, *g, s, 3, 6));
            EXPECT_EQ(eta_direct(g, models, 8), eta_from_traces(g, build_taus(g, models, 8), 8));
        }
    }
}

TEST(Orbits, ZetaExamples) {
    const int n = 10;
    IntMatrix one(1, 1, 1), two(1, 1, 2), zero(2, 2, 0);
    auto circle = zeta_det({one, two}, n);
    EXPECT_EQ(circle[0], 1);
    for (int k = 1; k <= n; ++k)
        EXPECT_EQ(circle[k], -1);
    std::vector<Rational> counts;
    for (int k = 1; k <= n; ++k)
        counts.push_back(1 - (mpz_class(1) << k));
    EXPECT_EQ(zeta_from_counts(counts, n), circle);
    auto geometric = zeta_det({one}, n);
    for (int k = 0; k <= n; ++k)
        EXPECT_EQ(geometric[k], 1);
    EXPECT_EQ(zeta_from_counts(std::vector<Rational>(n, Rational(1)), n), geometric);
    EXPECT_EQ(zeta_det({zero, zero}, n), RationalSeries(n, 1));
    EXPECT_EQ(zeta_from_counts(std::vector<Rational>(n, Rational(0)), n), RationalSeries(n, 1));
}

TEST(Orbits, ZetaConsistency) {
    Rng rng(45);
    const int n = 10;
    for (int i = 0; i < 100; ++i) {
        std::vector<IntMatrix> maps;
        int degrees = uniform(rng, 1, 3);
        for (int d = 0; d < degrees; ++d)
            maps.push_back(random_int_matrix(rng, uniform(rng, 1, 3)));
        auto z = zeta_det(maps, n);
        EXPECT_EQ(zeta_from_counts(lefschetz_numbers(maps, n), n), z);
        RationalSeries oracle(n, 1);
        for (std::size_t d = 0; d < maps.size(); ++d) {
            auto det = leibniz_det_one_minus_tf(maps[d], n);
            oracle = oracle * (d % 2 ? det : inverse(det));
        }
        EXPECT_EQ(z, oracle);
    }
}

TEST(Orbits, AbelianZeta) {
    auto g = TwistedGroup::integers();
    const int n = 8;
    auto geometric = abelian_zeta(log_one_minus_t(g, n, -1));
    for (int k = 0; k <= n; ++k)
        EXPECT_EQ(geometric[k], 1);
    EXPECT_EQ(abelian_zeta(ClassSeries(g, n)), RationalSeries(n, 1));
    try {
        abelian_zeta(ClassSeries(z3_inversion(), n));
        FAIL();
    } catch (const Error &err) {
        EXPECT_EQ(err.kind(), ErrorKind::NonAbelianGroup);
    }
    // tau = t F: exp(eta) = det(I - t F)^-1 in degree 0.
    Rng rng(46);
    for (int i = 0; i < 20; ++i) {
        auto f = random_int_matrix(rng, 2, 1);
        auto eta = eta_direct(g, {model_of(*g, 0, f)}, n);
        EXPECT_EQ(abelian_zeta(eta), inverse(leibniz_det_one_minus_tf(f, n)));
    }
}

TEST(Orbits, MainCheckCircle) {
    auto g = TwistedGroup::integers();
    const int n = 32;
    auto loop = model(0, 1, {edge(0, 0, 1, g->identity_h())});
    auto one_minus_t = TruncatedSeries::one(g, n) - TruncatedSeries::element(g, n, g->t(), 1);
    BasedComplex circle{g, n, {1, 1}, {SeriesMatrix(1, 1, one_minus_t)}};
    auto report = main_theorem_check(g, {loop}, circle);
    EXPECT_TRUE(report.verdict);
    EXPECT_EQ(report.compared_order, n);
    EXPECT_EQ(report.torsion_invariant, log_one_minus_t(g, n));
    EXPECT_EQ(report.tau_product, log_one_minus_t(g, n));
    EXPECT_EQ(report.minus_eta, log_one_minus_t(g, n));
}

TEST(Orbits, MainCheckEmptyAndMismatch) {
    auto g = z3_inversion();
    const int n = 6;
    BasedComplex trivial{g, n, {1, 1}, {identity_matrix(g, 1, n)}};
    auto report = main_theorem_check(g, {}, trivial);
    EXPECT_TRUE(report.verdict);
    EXPECT_TRUE(report.torsion_invariant.is_zero() && report.tau_product.is_zero() && report.minus_eta.is_zero());
    auto loop = model(0, 1, {edge(0, 0, 1, g->identity_h())});
    EXPECT_FALSE(main_theorem_check(g, {loop}, trivial).verdict);
}

TEST(Orbits, MainCheckAbelianMappingTorus) {
    Rng rng(47);
    auto g = TwistedGroup::integers();
    const int n = 10;
    for (int i = 0; i < 20; ++i) {
        auto f = random_int_matrix(rng, 2, 1);
        auto m = model_of(*g, 0, f);
        auto tau = build_tau(g, m, n);
        BasedComplex c{g, n, {2, 2}, {one_minus_tau(g, tau, n)}};
        auto report = main_theorem_check(g, {m}, c);
        EXPECT_TRUE(report.verdict);
        auto det = leibniz_det_one_minus_tf(f, n);
        EXPECT_EQ(exp(augmented(report.tau_product)), det);
        EXPECT_EQ(inverse(abelian_zeta(-report.minus_eta)), det);
    }
}
