// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

using namespace novlog;
using namespace novlog::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

TruncatedSeries mono(const GroupPtr &g, int order, int n, const HElem &h, const Rational &q = 1) {
    return TruncatedSeries::monomial(g, order, n, GroupAlgebraElement::monomial(h, q));
}

struct Verdict {
    bool pass = true;
    std::string detail;
};

/// Counts failed cases and keeps the first failure message.
struct Tally {
    int cases = 0, failed = 0;
    std::string first;

    void check(bool ok, const std::string &what) {
        ++cases;
        if (!ok && failed++ == 0)
            first = what;
    }
    Verdict verdict(const std::string &extra = "") const {
        std::string d = std::to_string(cases - failed) + "/" + std::to_string(cases) + " cases";
        if (failed)
            d += ", first failure: " + first;
        if (!extra.empty())
            d += ", " + extra;
        return {failed == 0, d};
    }
};

std::string fmt_seconds(double s) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f s", s);
    return buf;
}

LabeledOrbitModel random_model(Rng &rng, const TwistedGroup &g, int degree, int max_nodes, int max_edges) {
    LabeledOrbitModel m{degree, {}, {}};
    const int n = uniform(rng, 1, max_nodes);
    for (int i = 0; i < n; ++i)
        m.nodes.push_back("p" + std::to_string(i));
    const int e = uniform(rng, 1, max_edges);
    for (int i = 0; i < e; ++i)
        m.edges.push_back({static_cast<std::size_t>(uniform(rng, 0, n - 1)),
                           static_cast<std::size_t>(uniform(rng, 0, n - 1)), uniform(rng, 0, 1) ? 1 : -1,
                           {1, random_h(rng, g)}});
    return m;
}

/// Number of walks of length 1..order, an upper bound on the orbit search.
double walk_count(const LabeledOrbitModel &m, int order) {
    const std::size_t n = m.nodes.size();
    std::vector<double> paths(n, 1.0);
    double total = 0;
    for (int k = 1; k <= order; ++k) {
        std::vector<double> next(n, 0.0);
        for (const auto &e : m.edges)
            next[e.to] += paths[e.from];
        paths = next;
        for (double p : paths)
            total += p;
    }
    return total;
}

/// Redraws until the orbit search stays within the walk budget.
LabeledOrbitModel budgeted_model(Rng &rng, const TwistedGroup &g, int degree, int max_nodes, int max_edges, int order,
                                 double budget, int &redrawn) {
    LabeledOrbitModel m = random_model(rng, g, degree, max_nodes, max_edges);
    while (walk_count(m, order) > budget) {
        ++redrawn;
        m = random_model(rng, g, degree, max_nodes, max_edges);
    }
    return m;
}

/// Leibniz determinant over a commutative series ring.
TruncatedSeries leibniz_det(const SeriesMatrix &m) {
    const GroupPtr &g = m(0, 0).group();
    const int order = m(0, 0).order();
    std::vector<std::size_t> perm(m.rows());
    std::iota(perm.begin(), perm.end(), 0);
    TruncatedSeries det(g, order);
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < perm.size(); ++i)
            for (std::size_t j = i + 1; j < perm.size(); ++j)
                inversions += perm[i] > perm[j];
        TruncatedSeries term = TruncatedSeries::one(g, order);
        for (std::size_t i = 0; i < perm.size(); ++i)
            term = ts_mul(term, m(i, perm[i]));
        det = inversions % 2 ? det - term : det + term;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return det;
}

/// A class series of an abelian G read as an element of QH[[t]].
TruncatedSeries as_series(const ClassSeries &c) {
    TruncatedSeries s(c.group(), c.order());
    for (int k = 0; k <= c.order(); ++k)
        for (const auto &[h, q] : c.degree(k))
            s.add_coeff(k, GroupAlgebraElement::monomial(h, q));
    return s;
}

RationalSeries augmentation(const TruncatedSeries &s) {
    RationalSeries out(s.order());
    for (const auto &[k, a] : s.coeffs())
        if (k >= 0 && k <= s.order())
            for (const auto &[h, q] : a.terms())
                out[k] += q;
    return out;
}

std::optional<ClassSeries> certified_frak_l(const SeriesMatrix &m) {
    try {
        return frak_l(m);
    } catch (const Error &err) {
        if (err.kind() != ErrorKind::NoUnitPivot)
            throw;
        return std::nullopt;
    }
}

Verdict circle_golden() {
    const auto start = Clock::now();
    const int n = 32;
    auto g = TwistedGroup::integers();
    ClassSeries minus_log(g, n), log_series(g, n);
    for (int k = 1; k <= n; ++k) {
        minus_log.add(k, g->identity_h(), Rational(-1, k));
        log_series.add(k, g->identity_h(), Rational(1, k));
    }
    const TruncatedSeries d = TruncatedSeries::one(g, n) - mono(g, n, 1, g->identity_h());
    const BasedComplex circle{g, n, {1, 1}, {one_by_one(d)}};
    const LabeledOrbitModel loop{0, {"p"}, {{0, 0, 1, g->t()}}};
    Tally t;
    t.check(torsion(circle).invariant == minus_log, "torsion invariant");
    t.check(eta_direct(g, {loop}, n) == log_series, "eta_direct");
    const auto report = main_theorem_check(g, {loop}, circle);
    t.check(report.verdict && report.compared_order == n, "check-main verdict");
    const double secs = seconds_since(start);
    t.check(secs < 1.0, "runtime");
    return t.verdict(fmt_seconds(secs));
}

Verdict log_homomorphism() {
    Rng rng(101);
    const int n = 12;
    auto g = z3_inversion();
    Tally t;
    for (int i = 0; i < 200; ++i) {
        auto w1 = random_witt(rng, g, n), w2 = random_witt(rng, g, n);
        t.check(log_hom(ts_mul(w1, w2)) == log_hom(w1) + log_hom(w2), "pair " + std::to_string(i));
    }
    for (int i = 0; i < 200; ++i) {
        auto c = group_commutator(random_unit(rng, g, n), random_unit(rng, g, n));
        t.check(log_hom(c).is_zero(), "commutator " + std::to_string(i));
    }
    return t.verdict();
}

Verdict bch_projection() {
    Rng rng(102);
    const int n = 10;
    Tally t;
    for (auto g : {z3_inversion(), s3_twisted()})
        for (int i = 0; i < 100; ++i) {
            auto x = random_series(rng, g, n, 1, 3), y = random_series(rng, g, n, 1, 3);
            t.check(project_pbar(bchd_defect(x, y)).is_zero(), "pair " + std::to_string(i));
        }
    return t.verdict();
}

Verdict exp_log_round_trips() {
    Rng rng(103);
    const int n = 12;
    Tally t;
    for (auto g : {z3_inversion(), s3_twisted()})
        for (int i = 0; i < 100; ++i) {
            auto w = random_witt(rng, g, n);
            t.check(series_exp(series_log(w)) == w, "exp log " + std::to_string(i));
            auto y = random_series(rng, g, n, 1, 3);
            t.check(series_log(series_exp(y)) == y, "log exp " + std::to_string(i));
        }
    return t.verdict();
}

Verdict trace_orbit_identity() {
    const auto start = Clock::now();
    Rng rng(104);
    const int n = 10;
    const double budget = 2e7;
    Tally t;
    int rejected = 0;
    const GroupPtr groups[] = {TwistedGroup::integers(), z3_inversion()};
    for (int i = 0; i < 100; ++i) {
        const GroupPtr &g = groups[i % 2];
        std::vector<LabeledOrbitModel> models;
        for (int s = 0; s < 2; ++s)
            models.push_back(budgeted_model(rng, *g, s, 5, 10, n, budget, rejected));
        const ClassSeries direct = eta_direct(g, models, n);
        const ClassSeries traces = eta_from_traces(g, build_taus(g, models, n), n);
        t.check(direct == traces, "model family " + std::to_string(i));
    }
    const double secs = seconds_since(start);
    t.check(secs < 60.0, "runtime");
    return t.verdict(fmt_seconds(secs) + ", " + std::to_string(rejected) + " draws over the walk budget redrawn");
}

Verdict determinant_zeta() {
    const int n = 24;
    Tally t;
    for (std::int64_t d : {2, 3, 5}) {
        const std::vector<IntMatrix> maps = {IntMatrix(1, 1, 1), IntMatrix(1, 1, d)};
        std::vector<Rational> counts;
        Rational power = 1;
        for (int k = 1; k <= n; ++k) {
            power *= static_cast<long>(d);
            counts.push_back(1 - power);
        }
        std::vector<Rational> rational(n + 1, Rational(1 - d));
        rational[0] = 1;
        const auto expansion = RationalSeries::from_coefficients(rational);
        const std::string tag = "d = " + std::to_string(d);
        t.check(lefschetz_numbers(maps, n) == counts, tag + " Lefschetz numbers");
        t.check(zeta_det(maps, n) == zeta_from_counts(counts, n), tag + " det vs counts");
        t.check(zeta_from_counts(counts, n) == expansion, tag + " counts vs expansion");
    }
    return t.verdict();
}

Verdict abelian_bridge() {
    Rng rng(105);
    const int n = 12;
    Tally t;
    int redrawn = 0;
    const GroupPtr groups[] = {TwistedGroup::integers(), TwistedGroup::cyclic(3, 1)};
    for (int i = 0; i < 50; ++i) {
        const GroupPtr &g = groups[i % 2];
        std::vector<LabeledOrbitModel> models;
        for (int s = 0; s < 2; ++s)
            models.push_back(budgeted_model(rng, *g, s, 3, 6, n, 2e5, redrawn));
        const auto taus = build_taus(g, models, n);
        const ClassSeries lift = frak_l_of_tau_product(g, taus, n);
        TruncatedSeries dets = TruncatedSeries::one(g, n);
        for (const auto &tau : taus) {
            const TruncatedSeries d = leibniz_det(one_minus_tau(g, tau, n));
            dets = ts_mul(dets, tau.degree % 2 == 0 ? d : unit_invert(d));
        }
        const std::string tag = "instance " + std::to_string(i);
        t.check(lift.order() == n && series_exp(as_series(lift)) == dets, tag + " exp of lift vs determinants");
        t.check(inverse(abelian_zeta(eta_direct(g, models, n))) == augmentation(dets), tag + " zeta of eta");
    }
    return t.verdict(std::to_string(redrawn) + " draws over the walk budget redrawn");
}

Verdict commutator_factorization() {
    Rng rng(106);
    const int n = 8;
    auto g = z3_inversion();
    Tally t;
    for (int i = 0; i < 50; ++i) {
        auto alpha = TruncatedSeries::one(g, n);
        const int count = uniform(rng, 1, 3);
        for (int c = 0; c < count; ++c)
            alpha = ts_mul(alpha, group_commutator(random_unit(rng, g, n), random_unit(rng, g, n)));
        const auto pairs = commutator_factorize(alpha);
        const auto residual = ts_mul(alpha, commutator_product(g, n, pairs)) - TruncatedSeries::one(g, n);
        t.check(residual.is_zero(), "input " + std::to_string(i));
    }
    return t.verdict();
}

Verdict frak_l_contracts() {
    Rng rng(107);
    const int n = 8, slack = 16;
    auto g = z3_inversion();
    Tally t;
    for (int i = 0; i < 50; ++i) {
        auto m = random_constant_unit_matrix(rng, g, 2, n);
        t.check(frak_l(m).is_zero(), "constant " + std::to_string(i));
    }
    for (int e = -3; e <= 3; ++e)
        for (const HElem &h : g->kernel_elements())
            for (int sign : {1, -1})
                t.check(frak_l(one_by_one(mono(g, n, e, h, sign))).is_zero(), "monomial t^" + std::to_string(e));
    int uncertified = 0;
    for (int i = 0; i < 100; ++i) {
        const auto m = random_laurent_unit_matrix(rng, g, 2, n + slack);
        const std::size_t r = uniform(rng, 0, 1);
        const auto e = elementary_matrix(g, 2, r, 1 - r, random_series(rng, g, n + slack, -1, 3, 1));
        const auto moved = uniform(rng, 0, 1) ? mat_mul(e, m) : mat_mul(m, e);
        const auto before = certified_frak_l(m), after = certified_frak_l(moved);
        const std::string tag = "elementary " + std::to_string(i);
        if (!before || !after) {
            ++uncertified;
            t.check(false, tag + " has no unit pivot");
            continue;
        }
        t.check(std::min(before->order(), after->order()) >= n && after->agrees_with(*before, n), tag);
    }
    return t.verdict(std::to_string(uncertified) + " uncertified");
}

Verdict torsion_invariance() {
    Rng rng(108);
    const int n = 8, slack = 40;
    Tally t;
    const GroupPtr groups[] = {TwistedGroup::integers(), z3_inversion()};
    for (int i = 0; i < 50; ++i) {
        const GroupPtr &g = groups[i % 2];
        BasedComplex c = random_pieces(rng, g, n + slack, 2, 2).complex;
        for (int k = 0; k < 2; ++k)
            c = random_rebase(rng, c, Move::Elementary);
        const ClassSeries before = torsion(c).invariant;
        for (int k = 0; k < 4; ++k)
            c = random_rebase(rng, c, static_cast<Move>(uniform(rng, 0, 2)));
        c = elementary_expansion(c, uniform(rng, 0, static_cast<int>(c.top())));
        std::size_t total = 0;
        for (std::size_t r : c.ranks)
            total += r;
        const ClassSeries after = torsion(c).invariant;
        t.check(total <= 6 && std::min(before.order(), after.order()) >= n && after.agrees_with(before, n),
                "complex " + std::to_string(i));
    }
    return t.verdict();
}

} // namespace

int main() {
    const std::pair<const char *, std::function<Verdict()>> criteria[] = {
        {"circle golden values", circle_golden},
        {"Log homomorphism and commutators", log_homomorphism},
        {"BCH projection vanishes", bch_projection},
        {"exp/log round trips", exp_log_round_trips},
        {"trace/orbit identity", trace_orbit_identity},
        {"determinant zeta", determinant_zeta},
        {"abelian bridge", abelian_bridge},
        {"commutator factorization", commutator_factorization},
        {"frak L contracts trivial units", frak_l_contracts},
        {"torsion invariance", torsion_invariance},
    };
    int failures = 0, index = 0;
    for (const auto &[name, run] : criteria) {
        ++index;
        const auto start = Clock::now();
        Verdict v;
        try {
            v = run();
        } catch (const std::exception &err) {
            v = {false, std::string("exception: ") + err.what()};
        }
        failures += !v.pass;
        std::printf("criterion %2d %s  %s (%s; %s)\n", index, v.pass ? "PASS" : "FAIL", name, v.detail.c_str(),
                    fmt_seconds(seconds_since(start)).c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
