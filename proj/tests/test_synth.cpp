#include <catch2/catch_amalgamated.hpp>

#include "bb84eve/optimality.hpp"
#include "bb84eve/synth.hpp"

using namespace bb84eve;
using Catch::Matchers::WithinAbs;

namespace {

// Anchor targets in product form for the computational measurement setup.
std::pair<CVec, CVec> product_anchors(const ErrorRates& r) {
    auto [dk, dkh] = delta_kets(r.d_uv);
    double sf = std::sqrt(1.0 - r.d_xy), sd = std::sqrt(r.d_xy);
    CVec phi = {cplx(sf, 0), 0.0, 0.0, cplx(sd, 0)};
    CVec psi = {0.0, cplx(sd, 0), cplx(sf, 0), 0.0};
    return {kron(phi, dkh), kron(psi, pauli_x() * dkh)};
}

CMat worked_t_perp() {
    double s = 1 / std::sqrt(2.0);
    CMat t = CMat::zero(3, 3);
    t(0, 0) = s;
    t(0, 2) = s;
    t(1, 1) = 1.0;
    t(2, 0) = s;
    t(2, 2) = -s;
    return t;
}

bool conjugate_battery_passes(const AttackUnitary& a, double tol) {
    Pijs conj = conjugate_pijs_of(a);
    SplitIvs split = ivs_from_pijs(conj);
    if (!split.zeta_defined) return false;
    return full_battery(split.ivs, conj.measurement, a.rates, tol).passed;
}

} // namespace

TEST_CASE("direct construction is a permutation hitting the product anchors") {
    ErrorRates r{0.1, 0.1};
    AttackUnitary a = synth_delta_hadamard(r);
    REQUIRE(is_unitary(a.u, 1e-12));
    REQUIRE(nonzero_count(a.u) == 8);
    for (const cplx& v : a.u.a)
        REQUIRE((std::abs(v) < 1e-15 || std::abs(v - cplx(1, 0)) < 1e-15));

    auto [x, y] = anchor_images(a);
    auto [wx, wy] = product_anchors(r);
    REQUIRE(max_abs_diff(x, wx) < 1e-12);
    REQUIRE(max_abs_diff(y, wy) < 1e-12);
    REQUIRE(attack_is_valid(a));
}

TEST_CASE("direct construction stays sparse at generic rates") {
    AttackUnitary a = synth_delta_hadamard(ErrorRates{0.23, 0.41});
    REQUIRE(nonzero_count(a.u) <= 16);
    REQUIRE(attack_is_valid(a));
}

TEST_CASE("basis completion from the rate product state matches the direct form") {
    ErrorRates r{0.1, 0.1};
    AttackUnitary dh = synth_delta_hadamard(r);
    Pijs p = optimal_pijs_pair(r, computational_setup());
    AttackUnitary bc = synth_by_basis_completion(p, dh.initial_state);
    auto [x0, y0] = anchor_images(dh);
    auto [x1, y1] = anchor_images(bc);
    REQUIRE(max_abs_diff(x0, x1) < 1e-12);
    REQUIRE(max_abs_diff(y0, y1) < 1e-12);
    REQUIRE(attack_is_valid(bc));
}

TEST_CASE("basis completion is valid for arbitrary seeds and measurements") {
    for (uint64_t seed = 1; seed <= 50; ++seed) {
        ErrorRates r{0.02 + 0.009 * double(seed), 0.46 - 0.008 * double(seed)};
        MeasurementSetup m = random_setup(seed * 7);
        Pijs p = optimal_pijs_pair(r, m);
        CVec psi0 = column(haar_random_unitary(4, seed * 13 + 1), 0);
        AttackUnitary a = synth_by_basis_completion(p, psi0);
        REQUIRE(attack_is_valid(a, 1e-9, 1e-9));
        REQUIRE(max_abs_diff(a.initial_state, psi0) < 1e-12);
    }
}

TEST_CASE("basis completion rejects a non normalized seed state") {
    Pijs p = optimal_pijs_pair(ErrorRates{0.1, 0.1}, computational_setup());
    CVec bad(4, cplx(0.5, 0));
    bad[0] = cplx(2.0, 0);
    REQUIRE_THROWS_AS(synth_by_basis_completion(p, bad), std::invalid_argument);
}

TEST_CASE("factoring against a standard basis initial state is trivial") {
    ErrorRates r{0.12, 0.2};
    Pijs p = optimal_pijs_pair(r, computational_setup());
    AttackUnitary a = synth_by_basis_completion(p, basis_vector(4, 0));
    Factorization f = factorize(a);
    REQUIRE(max_abs_diff(f.w, CMat::identity(4)) < 1e-12);
    REQUIRE(max_abs_diff(f.u_xy, a.u) < 1e-12);
}

TEST_CASE("factoring splits the unitary into joint state columns") {
    ErrorRates r{0.17, 0.08};
    AttackUnitary a = synth_delta_hadamard(r);
    Factorization f = factorize(a);
    auto [x, y] = anchor_images(a);
    REQUIRE(max_abs_diff(column(f.u_xy, 0), x) < 1e-10);
    REQUIRE(max_abs_diff(column(f.u_xy, 4), y) < 1e-10);
    REQUIRE(max_abs_diff(f.u_xy * kron(CMat::identity(2), dagger(f.w)), a.u) < 1e-10);
}

TEST_CASE("initial state subspace rotations preserve the anchors") {
    ErrorRates r{0.1, 0.1};
    AttackUnitary a = synth_delta_hadamard(r);
    AttackUnitary same = alternate_via_is_subspace(a, CMat::identity(3));
    REQUIRE(max_abs_diff(same.u, a.u) < 1e-12);

    AttackUnitary alt = alternate_via_is_subspace(a, worked_t_perp());
    REQUIRE(attack_is_valid(alt));
    REQUIRE(nonzero_count(alt.u) > 8);
    auto [x0, y0] = anchor_images(a);
    auto [x1, y1] = anchor_images(alt);
    REQUIRE(max_abs_diff(x0, x1) < 1e-10);
    REQUIRE(max_abs_diff(y0, y1) < 1e-10);
}

TEST_CASE("initial state subspace rotations compose contravariantly") {
    AttackUnitary a = synth_delta_hadamard(ErrorRates{0.2, 0.14});
    CMat t1 = worked_t_perp();
    CMat t2 = CMat::zero(3, 3);
    // a 3x3 permutation
    t2(0, 1) = 1.0;
    t2(1, 2) = 1.0;
    t2(2, 0) = 1.0;
    AttackUnitary chained = alternate_via_is_subspace(alternate_via_is_subspace(a, t1), t2);
    AttackUnitary direct = alternate_via_is_subspace(a, t2 * t1);
    REQUIRE(max_abs_diff(chained.u, direct.u) < 1e-10);
    REQUIRE_THROWS_AS(alternate_via_is_subspace(a, CMat::identity(4)), std::invalid_argument);
}

TEST_CASE("joint state subspace rotations keep the anchors and move the rest") {
    ErrorRates r{0.1, 0.1};
    Pijs p = optimal_pijs_pair(r, computational_setup());
    AttackUnitary a = synth_by_basis_completion(p, basis_vector(4, 0));
    Factorization f = factorize(a);

    AttackUnitary same = alternate_via_pijs_subspace(f, CMat::identity(4), CMat::identity(4), p);
    REQUIRE(max_abs_diff(same.u, a.u) < 1e-10);

    CMat gx = CMat::identity(4);
    // rotation among the completion columns, first column untouched
    double c = std::cos(0.4), s = std::sin(0.4);
    gx(1, 1) = c;
    gx(1, 2) = -s;
    gx(2, 1) = s;
    gx(2, 2) = c;
    AttackUnitary alt = alternate_via_pijs_subspace(f, gx, CMat::identity(4), p);
    REQUIRE(attack_is_valid(alt));
    REQUIRE(max_abs_diff(alt.u, a.u) > 1e-3);
    auto [x0, y0] = anchor_images(a);
    auto [x1, y1] = anchor_images(alt);
    REQUIRE(max_abs_diff(x0, x1) < 1e-10);
    REQUIRE(max_abs_diff(y0, y1) < 1e-10);

    CMat notfix = haar_random_unitary(4, 3);
    REQUIRE_THROWS_AS(alternate_via_pijs_subspace(f, notfix, CMat::identity(4), p),
                      std::invalid_argument);
}

TEST_CASE("initial state transport walks the standard chain") {
    ErrorRates r{0.1, 0.07};
    AttackUnitary a = synth_delta_hadamard(r);

    AttackUnitary on_delta = change_initial_state(a, kron(CMat::identity(2), hadamard()));
    auto [dk, dkh] = delta_kets(r.d_xy);
    auto [ek, ekh] = delta_kets(r.d_uv);
    REQUIRE(max_abs_diff(on_delta.initial_state, kron(dk, ek)) < 1e-12);
    REQUIRE(attack_is_valid(on_delta));

    AttackUnitary on_zero = change_initial_state(
        on_delta, kron(rate_rotation(r.d_xy), rate_rotation(r.d_uv)));
    REQUIRE(max_abs_diff(on_zero.initial_state, basis_vector(4, 0)) < 1e-12);
    REQUIRE(attack_is_valid(on_zero));

    AttackUnitary on_bell = change_initial_state(on_zero, cnot() * kron(hadamard(), CMat::identity(2)));
    CVec bell = {cplx(1 / std::sqrt(2.0), 0), 0.0, 0.0, cplx(1 / std::sqrt(2.0), 0)};
    REQUIRE(max_abs_diff(on_bell.initial_state, bell) < 1e-12);
    REQUIRE(attack_is_valid(on_bell));
}

TEST_CASE("measurement transport pivots the anchors with the frame") {
    ErrorRates r{0.1, 0.1};
    AttackUnitary a = synth_delta_hadamard(r);
    AttackUnitary same = change_measurement(a, computational_setup());
    REQUIRE(max_abs_diff(same.u, a.u) < 1e-12);

    MeasurementSetup f = fuchs_setup();
    AttackUnitary moved = change_measurement(a, f);
    REQUIRE(attack_is_valid(moved));
    CMat m_old = from_columns({a.measurement.directions[0], a.measurement.directions[1],
                               a.measurement.directions[2], a.measurement.directions[3]});
    CMat m_new = from_columns({f.directions[0], f.directions[1], f.directions[2],
                               f.directions[3]});
    CMat pivot = kron(CMat::identity(2), m_new * dagger(m_old));
    auto [x0, y0] = anchor_images(a);
    auto [x1, y1] = anchor_images(moved);
    REQUIRE(max_abs_diff(x1, pivot * x0) < 1e-12);
    REQUIRE(max_abs_diff(y1, pivot * y0) < 1e-12);
}

TEST_CASE("measurement transport rejects mismatched frames") {
    AttackUnitary a = synth_delta_hadamard(ErrorRates{0.1, 0.1});
    MeasurementSetup wrong_basis = fuchs_setup(Basis::Hadamard);
    REQUIRE_THROWS_AS(change_measurement(a, wrong_basis), std::invalid_argument);
    MeasurementSetup wrong_signs = fuchs_setup();
    wrong_signs.signs = {-1, +1, -1, +1};
    REQUIRE_THROWS_AS(change_measurement(a, wrong_signs), std::invalid_argument);
}

TEST_CASE("transport operations commute") {
    ErrorRates r{0.21, 0.09};
    AttackUnitary a = synth_delta_hadamard(r);
    CMat t = kron(CMat::identity(2), hadamard());
    MeasurementSetup f = fuchs_setup();
    AttackUnitary ab = change_measurement(change_initial_state(a, t), f);
    AttackUnitary ba = change_initial_state(change_measurement(a, f), t);
    REQUIRE(max_abs_diff(ab.u, ba.u) < 1e-10);
    REQUIRE(max_abs_diff(ab.initial_state, ba.initial_state) < 1e-12);
}

TEST_CASE("the same unitary is optimal for the conjugate encoding") {
    for (auto rates : {ErrorRates{0.1, 0.1}, ErrorRates{0.3, 0.05}, ErrorRates{0.08, 0.42}}) {
        AttackUnitary a = synth_delta_hadamard(rates);
        REQUIRE(conjugate_battery_passes(a, 1e-9));
    }
    // still true after transport to another frame and initial state
    AttackUnitary a = synth_delta_hadamard(ErrorRates{0.1, 0.1});
    AttackUnitary moved = change_measurement(
        change_initial_state(a, kron(CMat::identity(2), hadamard())), fuchs_setup());
    REQUIRE(conjugate_battery_passes(moved, 1e-9));
}
