#pragma once

#include "orbits.hpp"
#include "torsion.hpp"

namespace novlog {

struct MainTheoremReport {
    ClassSeries torsion_invariant;  // frak L(tau(C))
    ClassSeries tau_product;        // sum_s (-1)^s frak L(1 - tau_s)
    ClassSeries minus_eta;          // -eta_direct
    int compared_order = 0;
    bool verdict = false;
};

/// 1 - tau_s as a matrix over P.
inline SeriesMatrix one_minus_tau(const GroupPtr &g, const TauMatrix &tau, int order) {
    return mat_add(identity_matrix(g, tau.matrix.rows(), order), tau.matrix, Rational(-1));
}

inline ClassSeries frak_l_of_tau_product(const GroupPtr &g, const std::vector<TauMatrix> &taus, int order) {
    ClassSeries acc(g, order);
    for (const auto &tau : taus) {
        if (tau.matrix.rows() == 0)
            continue;
        const ClassSeries l = frak_l(one_minus_tau(g, tau, order));
        acc += tau.degree % 2 == 0 ? l : -l;
    }
    return acc;
}

/// Compares frak L(tau(C)), the frak L-image of prod (1 - tau_s)^((-1)^s),
/// and -eta computed from closed orbits, degree by degree.
inline MainTheoremReport main_theorem_check(const GroupPtr &g, const std::vector<LabeledOrbitModel> &models,
                                            const BasedComplex &complex) {
    const int order = complex.order;
    MainTheoremReport r;
    r.torsion_invariant = torsion(complex).invariant;
    r.tau_product = frak_l_of_tau_product(g, build_taus(g, models, order), order);
    r.minus_eta = -eta_direct(g, models, order);
    r.compared_order = std::min({r.torsion_invariant.order(), r.tau_product.order(), r.minus_eta.order()});
    r.verdict = r.torsion_invariant.agrees_with(r.tau_product, r.compared_order) &&
                r.tau_product.agrees_with(r.minus_eta, r.compared_order);
    return r;
}

} // namespace novlog
