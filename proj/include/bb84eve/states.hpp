// Encoding bases, error-rate amplitudes, measurement setups, Eve's optimal
// interaction vectors, and the post-interaction joint states built from them.
//
// Tensor order everywhere: Alice/Bob qubit is the most significant factor,
// then ancilla qubits E1, E2. A dim-4 ancilla vector is E1 (x) E2.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "linalg.hpp"

namespace bb84eve {

enum class Basis { Computational, Hadamard };

inline Basis conjugate(Basis b) {
    return b == Basis::Computational ? Basis::Hadamard : Basis::Computational;
}

inline const char* basis_tag(Basis b) { return b == Basis::Computational ? "xy" : "uv"; }

struct ErrorRates {
    double d_xy = 0.0;
    double d_uv = 0.0;

    double d(Basis b) const { return b == Basis::Computational ? d_xy : d_uv; }
    double f(Basis b) const { return 1.0 - d(b); }
};

inline void validate(const ErrorRates& r) {
    if (!(r.d_xy >= 0.0 && r.d_xy <= 0.5 && r.d_uv >= 0.0 && r.d_uv <= 0.5))
        throw std::domain_error("error rates must lie in [0, 1/2]");
}

// H^basis |bit>
inline CVec encode(int bit, Basis basis) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("encode: bit must be 0 or 1");
    CVec v = basis_vector(2, std::size_t(bit));
    if (basis == Basis::Hadamard) v = hadamard() * v;
    return v;
}

// (Delta+, Delta-) = ((sqrt(1-d)+sqrt(d))/sqrt2, (sqrt(1-d)-sqrt(d))/sqrt2).
// Satisfy (D+)^2+(D-)^2 = 1, 2 D+ D- = 1-2d, (D+)^2-(D-)^2 = 2 sqrt(d(1-d)).
inline std::pair<double, double> delta_pm(double d) {
    if (!(d >= 0.0 && d <= 0.5)) throw std::domain_error("delta_pm: d must lie in [0, 1/2]");
    const double s = 1.0 / std::sqrt(2.0);
    return {(std::sqrt(1.0 - d) + std::sqrt(d)) * s, (std::sqrt(1.0 - d) - std::sqrt(d)) * s};
}

// (|Delta>, |Delta^H>) with |Delta^H> = H |Delta>.
inline std::pair<CVec, CVec> delta_kets(double d) {
    if (!(d >= 0.0 && d <= 0.5)) throw std::domain_error("delta_kets: d must lie in [0, 1/2]");
    auto [dp, dm] = delta_pm(d);
    return {CVec{std::sqrt(1.0 - d), std::sqrt(d)}, CVec{dp, dm}};
}

/* MEASUREMENT SETUPS */

// Ordered 4-outcome projective measurement on the ancilla plus the bet sign
// per outcome. `basis` is the reconciled basis this setup serves.
struct MeasurementSetup {
    std::array<CVec, 4> directions;
    std::array<int, 4> signs{+1, -1, +1, -1};
    Basis basis = Basis::Computational;
};

inline bool setup_is_valid(const MeasurementSetup& m, double tol = tol_unitary) {
    int plus = 0;
    for (int s : m.signs) {
        if (s != 1 && s != -1) return false;
        if (s == 1) ++plus;
    }
    if (plus != 2) return false;
    for (std::size_t i = 0; i < 4; ++i) {
        if (m.directions[i].size() != 4) return false;
        for (std::size_t j = 0; j < 4; ++j) {
            double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(inner(m.directions[i], m.directions[j]) - cplx(want)) > tol) return false;
        }
    }
    return true;
}

inline MeasurementSetup computational_setup(Basis served = Basis::Computational) {
    MeasurementSetup m;
    for (std::size_t k = 0; k < 4; ++k) m.directions[k] = basis_vector(4, k);
    m.basis = served;
    return m;
}

// Directions |00>, |11>, |10>, |01> in outcome order.
inline MeasurementSetup fuchs_setup(Basis served = Basis::Computational) {
    MeasurementSetup m;
    m.directions = {basis_vector(4, 0), basis_vector(4, 3), basis_vector(4, 2), basis_vector(4, 1)};
    m.basis = served;
    return m;
}

inline MeasurementSetup random_setup(std::uint64_t seed, Basis served = Basis::Computational) {
    CMat u = haar_random_unitary(4, seed);
    MeasurementSetup m;
    for (std::size_t k = 0; k < 4; ++k) m.directions[k] = column(u, k);
    m.basis = served;
    return m;
}

// Optimal setup for the conjugate reconciled basis. The coefficient matrix
// (1/2 of the sign pattern) is an involution, so applying this twice
// returns the input.
inline MeasurementSetup conjugate_setup(const MeasurementSetup& e) {
    static const int c[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, -1, 1}, {1, -1, 1, -1}};
    MeasurementSetup f;
    for (std::size_t k = 0; k < 4; ++k) {
        CVec v(4, 0.0);
        for (std::size_t l = 0; l < 4; ++l) v = v + (0.5 * double(c[k][l])) * e.directions[l];
        f.directions[k] = v;
    }
    f.signs = e.signs;
    f.basis = conjugate(e.basis);
    return f;
}

/* INTERACTION VECTORS */

// Eve's ancilla states after the interaction: xi for undisturbed rounds,
// zeta for disturbed ones, indexed by Alice's bit in `basis`.
struct InteractionVectors {
    CVec xi0, xi1, zeta0, zeta1;
    Basis basis = Basis::Computational;
};

// Optimal IVs of `basis` expressed in the directions of the setup serving it.
// The amplitudes use the conjugate basis rate: the overlap law reads
// <xi0|xi1> = <zeta0|zeta1> = 1 - 2 d_conjugate.
inline InteractionVectors optimal_ivs(Basis basis, const ErrorRates& rates,
                                      const MeasurementSetup& m) {
    validate(rates);
    if (m.basis != basis) throw std::invalid_argument("optimal_ivs: setup serves a different basis");
    auto [dp, dm] = delta_pm(rates.d(conjugate(basis)));
    InteractionVectors iv;
    iv.xi0 = dp * m.directions[0] + dm * m.directions[1];
    iv.xi1 = dm * m.directions[0] + dp * m.directions[1];
    iv.zeta0 = dp * m.directions[2] + dm * m.directions[3];
    iv.zeta1 = dm * m.directions[2] + dp * m.directions[3];
    iv.basis = basis;
    return iv;
}

/* POST-INTERACTION JOINT STATES */

// |S_a> = sqrt(F_b)|a>^b (x) |xi_a> + sqrt(D_b)|abar>^b (x) |zeta_a>, dim 8.
struct Pijs {
    CVec x_state, y_state;
    ErrorRates rates;
    MeasurementSetup measurement;

    Basis basis() const { return measurement.basis; }
};

inline Pijs pijs_from_ivs(Basis basis, const ErrorRates& rates, const InteractionVectors& ivs,
                          const MeasurementSetup& m) {
    validate(rates);
    if (ivs.basis != basis) throw std::invalid_argument("pijs_from_ivs: ivs basis mismatch");
    if (m.basis != basis) throw std::invalid_argument("pijs_from_ivs: setup basis mismatch");
    const double sf = std::sqrt(rates.f(basis)), sd = std::sqrt(rates.d(basis));
    Pijs p;
    p.x_state = sf * kron(encode(0, basis), ivs.xi0) + sd * kron(encode(1, basis), ivs.zeta0);
    p.y_state = sf * kron(encode(1, basis), ivs.xi1) + sd * kron(encode(0, basis), ivs.zeta1);
    p.rates = rates;
    p.measurement = m;
    return p;
}

// Conjugation output; zeta components are undefined when the target-basis
// rate vanishes (they are returned as zero vectors and flagged).
struct ConjugatedIvs {
    InteractionVectors ivs;
    bool zeta_defined = true;
};

// Change of encoding basis for a fixed interaction. Source-basis amplitudes
// weigh the inputs; target-basis amplitudes normalize the outputs.
inline ConjugatedIvs conjugate_ivs(const InteractionVectors& in, const ErrorRates& rates) {
    validate(rates);
    const Basis target = conjugate(in.basis);
    const double sf_s = std::sqrt(rates.f(in.basis)), sd_s = std::sqrt(rates.d(in.basis));
    const double sf_t = std::sqrt(rates.f(target)), sd_t = std::sqrt(rates.d(target));
    const CVec xi_sum = sf_s * (in.xi0 + in.xi1);
    const CVec xi_dif = sf_s * (in.xi0 - in.xi1);
    const CVec zeta_sum = sd_s * (in.zeta0 + in.zeta1);
    const CVec zeta_dif = sd_s * (in.zeta1 - in.zeta0);
    ConjugatedIvs out;
    out.ivs.basis = target;
    out.ivs.xi0 = (0.5 / sf_t) * (xi_sum + zeta_sum);
    out.ivs.xi1 = (0.5 / sf_t) * (xi_sum - zeta_sum);
    if (sd_t < 1e-12) {
        out.zeta_defined = false;
        out.ivs.zeta0 = CVec(in.xi0.size(), 0.0);
        out.ivs.zeta1 = CVec(in.xi0.size(), 0.0);
    } else {
        out.ivs.zeta0 = (0.5 / sd_t) * (xi_dif + zeta_dif);
        out.ivs.zeta1 = (0.5 / sd_t) * (xi_dif - zeta_dif);
    }
    return out;
}

inline ConjugatedIvs ivs_uv_from_xy(const InteractionVectors& ivs_xy, const ErrorRates& rates) {
    if (ivs_xy.basis != Basis::Computational)
        throw std::invalid_argument("ivs_uv_from_xy: input must be computational-basis IVs");
    return conjugate_ivs(ivs_xy, rates);
}

inline ConjugatedIvs ivs_xy_from_uv(const InteractionVectors& ivs_uv, const ErrorRates& rates) {
    if (ivs_uv.basis != Basis::Hadamard)
        throw std::invalid_argument("ivs_xy_from_uv: input must be Hadamard-basis IVs");
    return conjugate_ivs(ivs_uv, rates);
}

// Inverse of pijs_from_ivs: project Bob's factor onto |a>, |abar> and strip
// the Schmidt weights. Disturbed components are undefined at D below 1e-12.
struct SplitIvs {
    InteractionVectors ivs;
    bool zeta_defined = true;
};

namespace detail {
// <b|_Bob applied to a dim-8 joint vector, leaving the dim-4 ancilla part.
inline CVec project_bob(const CVec& joint, const CVec& bob) {
    if (joint.size() != 8 || bob.size() != 2) throw std::invalid_argument("project_bob: bad dims");
    CVec v(4, 0.0);
    for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t e = 0; e < 4; ++e) v[e] += std::conj(bob[b]) * joint[b * 4 + e];
    return v;
}
}  // namespace detail

inline SplitIvs ivs_from_pijs(const Pijs& p) {
    const Basis b = p.basis();
    const double sf = std::sqrt(p.rates.f(b)), sd = std::sqrt(p.rates.d(b));
    SplitIvs out;
    out.ivs.basis = b;
    out.ivs.xi0 = (1.0 / sf) * detail::project_bob(p.x_state, encode(0, b));
    out.ivs.xi1 = (1.0 / sf) * detail::project_bob(p.y_state, encode(1, b));
    if (sd < 1e-12) {
        out.zeta_defined = false;
        out.ivs.zeta0 = CVec(4, 0.0);
        out.ivs.zeta1 = CVec(4, 0.0);
    } else {
        out.ivs.zeta0 = (1.0 / sd) * detail::project_bob(p.x_state, encode(1, b));
        out.ivs.zeta1 = (1.0 / sd) * detail::project_bob(p.y_state, encode(0, b));
    }
    return out;
}

}  // namespace bb84eve
