// Construction of 8x8 attack unitaries from the optimal joint states, and
// their transport across initial ancilla states and measurement frames.
#pragma once

#include <utility>

#include "optimality.hpp"
#include "states.hpp"

namespace bb84eve {

// u applied to |a> (x) initial_state must reproduce the optimal joint states
// for (rates, measurement), a = 0, 1.
struct AttackUnitary {
    CMat u;              // 8x8
    CVec initial_state;  // dim 4
    MeasurementSetup measurement;
    ErrorRates rates;
};

struct Factorization {
    CMat u_xy;  // columns: X_0..X_3, Y_0..Y_3
    CMat w;     // columns: completion of the initial state
};

inline Pijs optimal_pijs_pair(const ErrorRates& rates, const MeasurementSetup& m) {
    return pijs_from_ivs(m.basis, rates, optimal_ivs(m.basis, rates, m), m);
}

inline std::pair<CVec, CVec> anchor_images(const AttackUnitary& a) {
    return {a.u * kron(encode(0, a.measurement.basis), a.initial_state),
            a.u * kron(encode(1, a.measurement.basis), a.initial_state)};
}

inline double anchor_defect(const AttackUnitary& a) {
    Pijs target = optimal_pijs_pair(a.rates, a.measurement);
    auto [im0, im1] = anchor_images(a);
    return std::max(max_abs_diff(im0, target.x_state), max_abs_diff(im1, target.y_state));
}

inline bool attack_is_valid(const AttackUnitary& a, double tol_u = tol_unitary,
                            double tol_anchor = 1e-9) {
    return is_unitary(a.u, tol_u) && anchor_defect(a) <= tol_anchor;
}

inline std::size_t nonzero_count(const CMat& m, double eps = 1e-12) {
    std::size_t n = 0;
    for (const auto& x : m.a)
        if (std::abs(x) > eps) ++n;
    return n;
}

/* DIRECT CONSTRUCTION */

// Block form [U_x | U_y] with U_x = (|00> |11>) (x) I2 and
// U_y = (|10> |01>) (x) sigma_x, read off against the initial state
// |Delta_xy> (x) |Delta^H_uv>. The result is a 0/1 permutation matrix.
inline AttackUnitary synth_delta_hadamard(const ErrorRates& rates) {
    validate(rates);
    CMat wx = from_columns({basis_vector(4, 0), basis_vector(4, 3)});
    CMat wy = from_columns({basis_vector(4, 2), basis_vector(4, 1)});
    CMat ux = kron(wx, CMat::identity(2));
    CMat uy = kron(wy, pauli_x());
    CMat u(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            u(i, j) = ux(i, j);
            u(i, 4 + j) = uy(i, j);
        }
    AttackUnitary a;
    a.u = u;
    a.initial_state = kron(delta_kets(rates.d_xy).first, delta_kets(rates.d_uv).second);
    a.measurement = computational_setup();
    a.rates = rates;
    return a;
}

/* GENERAL SOLUTION BY BASIS COMPLETION */

// U = sum_i |X_i><0,psi_i| + |Y_i><1,psi_i| with X_0, Y_0 the optimal joint
// states and the rest filled by the deterministic completions.
inline AttackUnitary synth_by_basis_completion(const Pijs& pijs, const CVec& psi0) {
    if (psi0.size() != 4) throw std::invalid_argument("synth_by_basis_completion: psi0 must be dim 4");
    if (std::abs(norm(psi0) - 1.0) > tol_norm)
        throw std::invalid_argument("synth_by_basis_completion: psi0 must be normalized");
    std::vector<CVec> psis = complete_orthonormal_basis({psi0}, 4);
    std::vector<CVec> xys = complete_orthonormal_basis({pijs.x_state, pijs.y_state}, 8);
    CMat u(8, 8);
    for (std::size_t i = 0; i < 4; ++i) {
        const CVec& xi = (i == 0) ? xys[0] : xys[1 + i];   // X_0, then xys[2..4]
        const CVec& yi = (i == 0) ? xys[1] : xys[4 + i];   // Y_0, then xys[5..7]
        u = u + outer(xi, kron(encode(0, pijs.basis()), psis[i])) +
            outer(yi, kron(encode(1, pijs.basis()), psis[i]));
    }
    AttackUnitary a;
    a.u = u;
    a.initial_state = psi0;
    a.measurement = pijs.measurement;
    a.rates = pijs.rates;
    return a;
}

inline Factorization factorize(const AttackUnitary& a) {
    Factorization f;
    f.w = from_columns(complete_orthonormal_basis({a.initial_state}, 4));
    f.u_xy = a.u * kron(CMat::identity(2), f.w);
    return f;
}

/* ALTERNATE SOLUTIONS */

// Right-multiplies by I2 (x) Gamma where Gamma acts as t_perp^dagger on the
// orthogonal complement of the initial state and fixes the state itself, so
// the anchor images never move.
inline AttackUnitary alternate_via_is_subspace(const AttackUnitary& a, const CMat& t_perp) {
    if (t_perp.rows != 3 || t_perp.cols != 3 || !is_unitary(t_perp))
        throw std::invalid_argument("alternate_via_is_subspace: t_perp must be 3x3 unitary");
    CMat v = from_columns(complete_orthonormal_basis({a.initial_state}, 4));
    CMat small = CMat::identity(4);
    CMat td = dagger(t_perp);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) small(1 + i, 1 + j) = td(i, j);
    CMat gamma = v * small * dagger(v);
    AttackUnitary out = a;
    out.u = a.u * kron(CMat::identity(2), gamma);
    return out;
}

// Right-multiplies the factored form by diag(gamma_x, gamma_y); each block
// must fix its first column (the optimal joint-state direction).
inline AttackUnitary alternate_via_pijs_subspace(const Factorization& f, const CMat& gamma_x,
                                                 const CMat& gamma_y, const Pijs& pijs) {
    for (const CMat* g : {&gamma_x, &gamma_y}) {
        if (g->rows != 4 || g->cols != 4 || !is_unitary(*g))
            throw std::invalid_argument("alternate_via_pijs_subspace: blocks must be 4x4 unitary");
        if (max_abs_diff(column(*g, 0), basis_vector(4, 0)) > 1e-9)
            throw std::invalid_argument("alternate_via_pijs_subspace: block must fix e0");
    }
    CMat big(8, 8);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            big(i, j) = gamma_x(i, j);
            big(4 + i, 4 + j) = gamma_y(i, j);
        }
    AttackUnitary a;
    a.u = f.u_xy * big * kron(CMat::identity(2), dagger(f.w));
    a.initial_state = column(f.w, 0);
    a.measurement = pijs.measurement;
    a.rates = pijs.rates;
    return a;
}

/* TRANSPORT */

inline AttackUnitary change_initial_state(const AttackUnitary& a, const CMat& t_ef) {
    if (t_ef.rows != 4 || t_ef.cols != 4 || !is_unitary(t_ef))
        throw std::invalid_argument("change_initial_state: t_ef must be 4x4 unitary");
    AttackUnitary out = a;
    out.u = a.u * kron(CMat::identity(2), dagger(t_ef));
    out.initial_state = t_ef * a.initial_state;
    return out;
}

// Pivot between measurement frames serving the same basis:
// u' = (I2 (x) M_new M_old^dagger) u. Anchor images move with the frame.
inline AttackUnitary change_measurement(const AttackUnitary& a, const MeasurementSetup& m_new) {
    if (m_new.basis != a.measurement.basis)
        throw std::invalid_argument("change_measurement: new setup serves a different basis");
    if (m_new.signs != a.measurement.signs)
        throw std::invalid_argument("change_measurement: sign layouts differ");
    CMat m_old_mat = from_columns({a.measurement.directions[0], a.measurement.directions[1],
                                   a.measurement.directions[2], a.measurement.directions[3]});
    CMat m_new_mat = from_columns({m_new.directions[0], m_new.directions[1], m_new.directions[2],
                                   m_new.directions[3]});
    AttackUnitary out = a;
    out.u = kron(CMat::identity(2), m_new_mat * dagger(m_old_mat)) * a.u;
    out.measurement = m_new;
    return out;
}

/* TRANSPORT BUILDING BLOCKS */

// Controlled flip with the most significant qubit as control.
inline CMat cnot() {
    CMat m(4, 4);
    m(0, 0) = 1.0;
    m(1, 1) = 1.0;
    m(2, 3) = 1.0;
    m(3, 2) = 1.0;
    return m;
}

// sqrt(1-d) sigma_z + sqrt(d) sigma_x; Hermitian involution sending the
// rate ket |Delta_d> to |0>.
inline CMat rate_rotation(double d) {
    if (!(d >= 0.0 && d <= 0.5)) throw std::domain_error("rate_rotation: d must lie in [0, 1/2]");
    CMat m(2, 2);
    const double a = std::sqrt(1.0 - d), b = std::sqrt(d);
    m(0, 0) = a;
    m(0, 1) = b;
    m(1, 0) = b;
    m(1, 1) = -a;
    return m;
}

// Joint states of the conjugate encoding under the same unitary; they pass
// the conjugate-basis battery against conjugate_setup(a.measurement).
inline Pijs conjugate_pijs_of(const AttackUnitary& a) {
    Basis cb = conjugate(a.measurement.basis);
    Pijs p;
    p.x_state = a.u * kron(encode(0, cb), a.initial_state);
    p.y_state = a.u * kron(encode(1, cb), a.initial_state);
    p.rates = a.rates;
    p.measurement = conjugate_setup(a.measurement);
    return p;
}

}  // namespace bb84eve
