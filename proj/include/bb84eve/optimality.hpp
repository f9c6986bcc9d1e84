// Numeric certificates for attack optimality: the projector-parallelism
// check, the refined condition chain over Eve's space, and the equivalence
// between the measurement frame and the frame the IVs themselves define.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "states.hpp"

namespace bb84eve {

// Prefactors below this are treated as switching a sub-condition off.
inline constexpr double vacuous_cutoff = 1e-12;

struct NscReport {
    bool passed = false;
    double max_residual = 0.0;
    std::map<std::string, double> per_condition;
    std::vector<std::string> vacuous;

    void add(const std::string& id, double residual) {
        per_condition[id] = residual;
        if (residual > max_residual) max_residual = residual;
    }
    void add_vacuous(const std::string& id) {
        per_condition[id] = 0.0;
        vacuous.push_back(id);
    }
    void finalize(double tol) { passed = max_residual <= tol; }
};

// | F_xy <xi0|xi1> + D_xy <zeta0|zeta1> - (1 - 2 d_uv) |. Zero for any IV
// set that a genuine unitary interaction with these rates can produce.
inline double lemma1_residual(const InteractionVectors& ivs_xy, const ErrorRates& rates) {
    if (ivs_xy.basis != Basis::Computational)
        throw std::invalid_argument("lemma1_residual: expects computational-basis IVs");
    cplx lhs = rates.f(Basis::Computational) * inner(ivs_xy.xi0, ivs_xy.xi1) +
               rates.d(Basis::Computational) * inner(ivs_xy.zeta0, ivs_xy.zeta1);
    return std::abs(lhs - cplx(1.0 - 2.0 * rates.d(Basis::Hadamard)));
}

// Projector-parallelism certificate. For W in {U, V} (the conjugate-basis
// joint states) and each outcome, sqrt(D)(B_a (x) E_l)|U> must align with
// eps_l sqrt(F)(B_a (x) E_l)|V> entrywise, once for a = 0 and once for a = 1.
inline NscReport check_fuchs_nsc(const Pijs& pijs, const MeasurementSetup& e_setup,
                                 const ErrorRates& rates, double tol) {
    if (conjugate(pijs.basis()) != e_setup.basis)
        throw std::invalid_argument("check_fuchs_nsc: setup must serve the conjugate basis");
    const Basis pb = pijs.basis();
    const double sd = std::sqrt(rates.d(pb)), sf = std::sqrt(rates.f(pb));
    NscReport rep;
    if (sd < vacuous_cutoff) {
        rep.add_vacuous("fuchs_u");
        rep.add_vacuous("fuchs_v");
        rep.finalize(tol);
        return rep;
    }
    double res_u = 0.0, res_v = 0.0;
    for (int a = 0; a < 2; ++a) {
        CMat bob = outer(encode(a, pb), encode(a, pb));
        for (std::size_t l = 0; l < 4; ++l) {
            CMat proj = kron(bob, outer(e_setup.directions[l], e_setup.directions[l]));
            CVec pu = proj * pijs.x_state;
            CVec pv = proj * pijs.y_state;
            double eps = double(e_setup.signs[l]);
            if (a == 0)
                res_u = std::max(res_u, max_abs_diff(sd * pu, (eps * sf) * pv));
            else
                res_v = std::max(res_v, max_abs_diff(sd * pv, (eps * sf) * pu));
        }
    }
    rep.add("fuchs_u", res_u);
    rep.add("fuchs_v", res_v);
    rep.finalize(tol);
    return rep;
}

// <E_l|xi_0> == eps_l <E_l|zeta_1> and <E_l|xi_1> == eps_l <E_l|zeta_0>,
// with the IVs taken in the basis conjugate to the one the setup serves.
inline NscReport check_condition1(const InteractionVectors& ivs, const MeasurementSetup& e_setup,
                                  double tol) {
    if (conjugate(ivs.basis) != e_setup.basis)
        throw std::invalid_argument("check_condition1: setup must serve the conjugate basis");
    NscReport rep;
    double res = 0.0;
    for (std::size_t l = 0; l < 4; ++l) {
        const CVec& el = e_setup.directions[l];
        double eps = double(e_setup.signs[l]);
        res = std::max(res, std::abs(inner(el, ivs.xi0) - eps * inner(el, ivs.zeta1)));
        res = std::max(res, std::abs(inner(el, ivs.xi1) - eps * inner(el, ivs.zeta0)));
    }
    rep.add("cond1", res);
    rep.finalize(tol);
    return rep;
}

// Headline overlap law on Eve's space alone: both same-kind overlaps must be
// real and equal 1 - 2 d_conjugate.
inline NscReport check_corollary_overlaps(const InteractionVectors& ivs, const ErrorRates& rates,
                                          double tol) {
    const double target = 1.0 - 2.0 * rates.d(conjugate(ivs.basis));
    NscReport rep;
    double res = std::max(std::abs(inner(ivs.xi0, ivs.xi1) - cplx(target)),
                          std::abs(inner(ivs.zeta0, ivs.zeta1) - cplx(target)));
    rep.add("corollary", res);
    rep.finalize(tol);
    return rep;
}

// Ratio law <E_l|xi_0>/<E_l|xi_1> == <E_l|zeta_0>/<E_l|zeta_1> ==
// (D+/D-)^eps_l, tested cross-multiplied so vanishing overlaps stay finite.
inline NscReport check_condition2(const InteractionVectors& ivs, const MeasurementSetup& e_setup,
                                  const ErrorRates& rates, double tol) {
    if (ivs.basis != e_setup.basis)
        throw std::invalid_argument("check_condition2: setup must serve the ivs basis");
    auto [dp, dm] = delta_pm(rates.d(conjugate(ivs.basis)));
    NscReport rep;
    double res = 0.0;
    for (std::size_t l = 0; l < 4; ++l) {
        const CVec& el = e_setup.directions[l];
        cplx a = inner(el, ivs.xi0), b = inner(el, ivs.xi1);
        cplx c = inner(el, ivs.zeta0), f = inner(el, ivs.zeta1);
        double hi = e_setup.signs[l] > 0 ? dm : dp;  // ratio == (hi-side)/(lo-side)
        double lo = e_setup.signs[l] > 0 ? dp : dm;
        res = std::max(res, std::abs(a * hi - b * lo));
        res = std::max(res, std::abs(c * hi - f * lo));
        res = std::max(res, std::abs(a * f - b * c));
    }
    rep.add("cond2", res);
    rep.finalize(tol);
    return rep;
}

// Inversion of the amplitude mixing: recover the orthonormal frame
// (E+_xi, E-_xi, E+_zeta, E-_zeta) the IVs are built on. The 2x2 system has
// determinant (D+)^2 - (D-)^2 = 2 sqrt(d(1-d)) and is singular at d = 0.
struct Condition3Decomposition {
    std::array<CVec, 4> directions;  // order: E+_xi, E-_xi, E+_zeta, E-_zeta
    double residual = 0.0;
};

inline Condition3Decomposition decompose_condition3(const InteractionVectors& ivs,
                                                    const ErrorRates& rates) {
    auto [dp, dm] = delta_pm(rates.d(conjugate(ivs.basis)));
    const double det = dp * dp - dm * dm;
    if (det < 1e-6) throw std::domain_error("decompose_condition3: amplitude system is singular");
    Condition3Decomposition out;
    out.directions[0] = (1.0 / det) * (dp * ivs.xi0 - dm * ivs.xi1);
    out.directions[1] = (1.0 / det) * (dp * ivs.xi1 - dm * ivs.xi0);
    out.directions[2] = (1.0 / det) * (dp * ivs.zeta0 - dm * ivs.zeta1);
    out.directions[3] = (1.0 / det) * (dp * ivs.zeta1 - dm * ivs.zeta0);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            double want = (i == j) ? 1.0 : 0.0;
            out.residual = std::max(
                out.residual, std::abs(inner(out.directions[i], out.directions[j]) - cplx(want)));
        }
    return out;
}

inline NscReport check_condition3(const InteractionVectors& ivs, const ErrorRates& rates,
                                  double tol) {
    NscReport rep;
    rep.add("cond3", decompose_condition3(ivs, rates).residual);
    rep.finalize(tol);
    return rep;
}

// Frame-change relation between the measurement frame M_old = [E_0..E_3] and
// the data-determined frame M_new from decompose_condition3:
//     M_new == M_old * S_w * diag(R+, R-) * S_w
// where S_w swaps the middle two coordinates. R+ mixes the two +bet
// directions, R- the two -bet directions; both blocks come out unitary
// exactly when the IVs are optimal for some measurement sharing those spans.
struct OldNewResult {
    CMat r;  // 4x4, block-diagonal up to `residual`
    double residual = 0.0;
};

inline CMat swap_middle_permutation() {
    CMat s(4, 4);
    s(0, 0) = 1.0;
    s(1, 2) = 1.0;
    s(2, 1) = 1.0;
    s(3, 3) = 1.0;
    return s;
}

inline OldNewResult old_new_equivalence(const InteractionVectors& ivs,
                                        const MeasurementSetup& e_setup, const ErrorRates& rates) {
    if (ivs.basis != e_setup.basis)
        throw std::invalid_argument("old_new_equivalence: setup must serve the ivs basis");
    Condition3Decomposition dec = decompose_condition3(ivs, rates);
    CMat m_old = from_columns({e_setup.directions[0], e_setup.directions[1], e_setup.directions[2],
                               e_setup.directions[3]});
    CMat m_new = from_columns({dec.directions[0], dec.directions[1], dec.directions[2],
                               dec.directions[3]});
    CMat sw = swap_middle_permutation();
    OldNewResult res;
    res.r = sw * (dagger(m_old) * m_new) * sw;
    res.residual = dec.residual;
    // off-block leakage
    static const std::size_t off[8][2] = {{0, 2}, {0, 3}, {1, 2}, {1, 3},
                                          {2, 0}, {2, 1}, {3, 0}, {3, 1}};
    for (auto& ij : off) res.residual = std::max(res.residual, std::abs(res.r(ij[0], ij[1])));
    for (std::size_t blk = 0; blk < 2; ++blk) {
        CMat b(2, 2);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) b(i, j) = res.r(2 * blk + i, 2 * blk + j);
        res.residual = std::max(res.residual, max_abs_diff(dagger(b) * b, CMat::identity(2)));
    }
    res.residual = std::max(res.residual, max_abs_diff(m_new, m_old * (sw * res.r * sw)));
    return res;
}

/* COMBINED BATTERY */

// Runs all five certificates on one IV set and the setup serving its basis.
// The conjugate-side checks use the basis-change map; when the conjugate
// rate makes the disturbed components undefined those checks are vacuous.
inline NscReport full_battery(const InteractionVectors& ivs, const MeasurementSetup& setup,
                              const ErrorRates& rates, double tol) {
    if (ivs.basis != setup.basis)
        throw std::invalid_argument("full_battery: setup must serve the ivs basis");
    NscReport rep;
    auto merge = [&rep](const NscReport& part) {
        for (const auto& [id, r] : part.per_condition) rep.per_condition[id] = r;
        for (const auto& id : part.vacuous) rep.vacuous.push_back(id);
        rep.max_residual = std::max(rep.max_residual, part.max_residual);
    };

    merge(check_corollary_overlaps(ivs, rates, tol));
    merge(check_condition2(ivs, setup, rates, tol));
    const double det = 2.0 * std::sqrt(rates.d(conjugate(ivs.basis)) *
                                       rates.f(conjugate(ivs.basis)));
    if (det < 1e-6)
        rep.add_vacuous("cond3");
    else
        merge(check_condition3(ivs, rates, tol));

    ConjugatedIvs conj = conjugate_ivs(ivs, rates);
    if (!conj.zeta_defined)
        rep.add_vacuous("cond1");
    else
        merge(check_condition1(conj.ivs, setup, tol));
    // An undefined disturbed branch carries Schmidt weight zero, so the
    // joint states below stay exact and the parallelism check goes vacuous
    // on its own.
    Pijs pijs_conj = pijs_from_ivs(conj.ivs.basis, rates, conj.ivs, conjugate_setup(setup));
    merge(check_fuchs_nsc(pijs_conj, setup, rates, tol));

    rep.finalize(tol);
    return rep;
}

/* FUZZING */

// Rotates the bit-1 vectors by exp(i*angle*K) with seeded Hermitian K.
// Touching only half the set breaks the overlap law for generic K, which a
// simultaneous rotation of all four vectors never would.
inline InteractionVectors perturb_ivs(const InteractionVectors& ivs, double angle,
                                      std::uint64_t seed) {
    CMat g = hermitian_phase_rotation(random_hermitian(4, seed), angle);
    InteractionVectors out = ivs;
    out.xi1 = g * ivs.xi1;
    out.zeta1 = g * ivs.zeta1;
    return out;
}

}  // namespace bb84eve
