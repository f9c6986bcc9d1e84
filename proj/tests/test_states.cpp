#include <catch2/catch_amalgamated.hpp>

#include "bb84eve/states.hpp"

using namespace bb84eve;
using Catch::Matchers::WithinAbs;

namespace {

const double inv_sqrt2 = 0.70710678118654752440;

// Partial trace over Bob's qubit of |s><s| for a dim-8 joint vector.
CMat trace_out_bob(const CVec& s) {
    CMat rho = CMat::zero(4, 4);
    for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t e = 0; e < 4; ++e)
            for (std::size_t f = 0; f < 4; ++f) rho(e, f) += s[b * 4 + e] * std::conj(s[b * 4 + f]);
    return rho;
}

} // namespace

TEST_CASE("encode produces the four signal states") {
    REQUIRE(max_abs_diff(encode(0, Basis::Computational), basis_vector(2, 0)) < 1e-15);
    REQUIRE(max_abs_diff(encode(1, Basis::Computational), basis_vector(2, 1)) < 1e-15);
    CVec plus = {cplx(inv_sqrt2, 0), cplx(inv_sqrt2, 0)};
    CVec minus = {cplx(inv_sqrt2, 0), cplx(-inv_sqrt2, 0)};
    REQUIRE(max_abs_diff(encode(0, Basis::Hadamard), plus) < 1e-15);
    REQUIRE(max_abs_diff(encode(1, Basis::Hadamard), minus) < 1e-15);
}

TEST_CASE("rate validation rejects values outside the half interval") {
    REQUIRE_THROWS_AS(validate(ErrorRates{-0.01, 0.1}), std::domain_error);
    REQUIRE_THROWS_AS(validate(ErrorRates{0.1, 0.51}), std::domain_error);
    REQUIRE_NOTHROW(validate(ErrorRates{0.0, 0.5}));
}

TEST_CASE("delta amplitudes at the endpoints and a frozen interior point") {
    auto [p0, m0] = delta_pm(0.0);
    REQUIRE_THAT(p0, WithinAbs(inv_sqrt2, 1e-15));
    REQUIRE_THAT(m0, WithinAbs(inv_sqrt2, 1e-15));
    auto [ph, mh] = delta_pm(0.5);
    REQUIRE_THAT(ph, WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(mh, WithinAbs(0.0, 1e-15));
    auto [p1, m1] = delta_pm(0.1);
    REQUIRE_THAT(p1, WithinAbs(0.89442719099991587856, 1e-15));
    REQUIRE_THAT(m1, WithinAbs(0.44721359549995793928, 1e-15));
    REQUIRE_THROWS_AS(delta_pm(0.6), std::domain_error);
}

TEST_CASE("delta amplitude identities hold across the rate range") {
    for (int k = 0; k <= 50; ++k) {
        double d = 0.01 * k;
        auto [dp, dm] = delta_pm(d);
        REQUIRE_THAT(dp * dp + dm * dm, WithinAbs(1.0, 1e-14));
        REQUIRE_THAT(2.0 * dp * dm, WithinAbs(1.0 - 2.0 * d, 1e-14));
        REQUIRE_THAT(dp * dp - dm * dm, WithinAbs(2.0 * std::sqrt(d * (1.0 - d)), 1e-14));
    }
}

TEST_CASE("delta kets are hadamard conjugates of each other") {
    auto [dk, dkh] = delta_kets(0.25);
    REQUIRE_THAT(std::real(dk[0]), WithinAbs(std::sqrt(0.75), 1e-15));
    REQUIRE_THAT(std::real(dk[1]), WithinAbs(0.5, 1e-15));
    REQUIRE(max_abs_diff(hadamard() * dk, dkh) < 1e-14);
    auto [z, zh] = delta_kets(0.0);
    REQUIRE(max_abs_diff(z, basis_vector(2, 0)) < 1e-15);
    REQUIRE_THAT(std::real(zh[0]), WithinAbs(inv_sqrt2, 1e-15));
}

TEST_CASE("standard setups have the expected directions") {
    MeasurementSetup c = computational_setup();
    for (std::size_t k = 0; k < 4; ++k)
        REQUIRE(max_abs_diff(c.directions[k], basis_vector(4, k)) < 1e-15);
    REQUIRE(setup_is_valid(c));

    MeasurementSetup f = fuchs_setup();
    REQUIRE(max_abs_diff(f.directions[0], basis_vector(4, 0)) < 1e-15);
    REQUIRE(max_abs_diff(f.directions[1], basis_vector(4, 3)) < 1e-15);
    REQUIRE(max_abs_diff(f.directions[2], basis_vector(4, 2)) < 1e-15);
    REQUIRE(max_abs_diff(f.directions[3], basis_vector(4, 1)) < 1e-15);
    REQUIRE(setup_is_valid(f));
    REQUIRE(setup_is_valid(random_setup(3)));
}

TEST_CASE("conjugate setup of the fuchs directions is the four sign patterns") {
    MeasurementSetup g = conjugate_setup(fuchs_setup());
    double want[4][4] = {{1, 1, 1, 1}, {1, -1, -1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}};
    for (std::size_t k = 0; k < 4; ++k)
        for (std::size_t i = 0; i < 4; ++i)
            REQUIRE_THAT(std::real(g.directions[k][i]), WithinAbs(0.5 * want[k][i], 1e-14));
    REQUIRE(g.basis == Basis::Hadamard);
    REQUIRE(setup_is_valid(g, 1e-12));
}

TEST_CASE("conjugate setup is an involution") {
    for (uint64_t seed : {10u, 11u, 12u}) {
        MeasurementSetup m = random_setup(seed);
        MeasurementSetup back = conjugate_setup(conjugate_setup(m));
        REQUIRE(back.basis == m.basis);
        for (std::size_t k = 0; k < 4; ++k)
            REQUIRE(max_abs_diff(back.directions[k], m.directions[k]) < 1e-12);
    }
}

TEST_CASE("optimal iv overlaps follow the conjugate rate law") {
    for (double dxy : {0.01, 0.1, 0.25, 0.4, 0.49})
        for (double duv : {0.01, 0.1, 0.25, 0.4, 0.49})
            for (uint64_t seed : {1u, 2u}) {
                ErrorRates r{dxy, duv};
                MeasurementSetup m = random_setup(seed);
                InteractionVectors iv = optimal_ivs(Basis::Computational, r, m);
                REQUIRE(std::abs(inner(iv.xi0, iv.xi1) - cplx(1.0 - 2.0 * duv, 0)) < 1e-12);
                REQUIRE(std::abs(inner(iv.zeta0, iv.zeta1) - cplx(1.0 - 2.0 * duv, 0)) < 1e-12);
                // unit norm, xi block orthogonal to zeta block
                for (const CVec* v : {&iv.xi0, &iv.xi1, &iv.zeta0, &iv.zeta1})
                    REQUIRE_THAT(norm(*v), WithinAbs(1.0, 1e-12));
                REQUIRE(std::abs(inner(iv.xi0, iv.zeta1)) < 1e-9);
                REQUIRE(std::abs(inner(iv.xi1, iv.zeta0)) < 1e-9);
            }
}

TEST_CASE("optimal ivs collapse or split at the conjugate rate endpoints") {
    MeasurementSetup m = computational_setup();
    InteractionVectors same = optimal_ivs(Basis::Computational, {0.2, 0.0}, m);
    REQUIRE(max_abs_diff(same.xi0, same.xi1) < 1e-15);
    CVec mid = normalized(m.directions[0] + m.directions[1]);
    REQUIRE(max_abs_diff(same.xi0, mid) < 1e-14);

    InteractionVectors split = optimal_ivs(Basis::Computational, {0.2, 0.5}, m);
    REQUIRE(std::abs(inner(split.xi0, split.xi1)) < 1e-14);
    REQUIRE(max_abs_diff(split.xi0, m.directions[0]) < 1e-14);
    REQUIRE(max_abs_diff(split.xi1, m.directions[1]) < 1e-14);
}

TEST_CASE("optimal ivs reject a setup serving the other basis") {
    MeasurementSetup m = computational_setup(Basis::Hadamard);
    REQUIRE_THROWS_AS(optimal_ivs(Basis::Computational, ErrorRates{0.1, 0.1}, m),
                      std::invalid_argument);
}

TEST_CASE("joint states are normalized and orthogonal") {
    for (uint64_t seed : {5u, 6u}) {
        ErrorRates r{0.13, 0.27};
        MeasurementSetup m = random_setup(seed);
        InteractionVectors iv = optimal_ivs(Basis::Computational, r, m);
        Pijs p = pijs_from_ivs(Basis::Computational, r, iv, m);
        REQUIRE_THAT(norm(p.x_state), WithinAbs(1.0, 1e-12));
        REQUIRE_THAT(norm(p.y_state), WithinAbs(1.0, 1e-12));
        REQUIRE(std::abs(inner(p.x_state, p.y_state)) < 1e-12);
    }
}

TEST_CASE("joint states factorize when the serving basis is error free") {
    ErrorRates r{0.0, 0.2};
    MeasurementSetup m = computational_setup();
    InteractionVectors iv = optimal_ivs(Basis::Computational, r, m);
    Pijs p = pijs_from_ivs(Basis::Computational, r, iv, m);
    REQUIRE(max_abs_diff(p.x_state, kron(encode(0, Basis::Computational), iv.xi0)) < 1e-14);
    REQUIRE(max_abs_diff(p.y_state, kron(encode(1, Basis::Computational), iv.xi1)) < 1e-14);
}

TEST_CASE("joint states take the entangled product form on the computational setup") {
    ErrorRates r{0.1, 0.1};
    MeasurementSetup m = computational_setup();
    InteractionVectors iv = optimal_ivs(Basis::Computational, r, m);
    Pijs p = pijs_from_ivs(Basis::Computational, r, iv, m);

    auto [dk, dkh] = delta_kets(r.d_uv);
    double sf = std::sqrt(1.0 - r.d_xy), sd = std::sqrt(r.d_xy);
    CVec phi = {cplx(sf, 0), 0.0, 0.0, cplx(sd, 0)};
    CVec psi = {0.0, cplx(sd, 0), cplx(sf, 0), 0.0};
    REQUIRE(max_abs_diff(p.x_state, kron(phi, dkh)) < 1e-14);
    REQUIRE(max_abs_diff(p.y_state, kron(psi, pauli_x() * dkh)) < 1e-14);
}

TEST_CASE("tracing bob out of a joint state leaves the iv mixture") {
    ErrorRates r{0.17, 0.32};
    MeasurementSetup m = random_setup(8);
    InteractionVectors iv = optimal_ivs(Basis::Computational, r, m);
    Pijs p = pijs_from_ivs(Basis::Computational, r, iv, m);
    CMat want = cplx(1.0 - r.d_xy, 0) * outer(iv.xi0, iv.xi0) +
                cplx(r.d_xy, 0) * outer(iv.zeta0, iv.zeta0);
    REQUIRE(max_abs_diff(trace_out_bob(p.x_state), want) < 1e-12);
}

TEST_CASE("basis conjugation reproduces the conjugate optimum") {
    ErrorRates r{0.1, 0.1};
    MeasurementSetup m = fuchs_setup();
    InteractionVectors xy = optimal_ivs(Basis::Computational, r, m);
    ConjugatedIvs uv = ivs_uv_from_xy(xy, r);
    REQUIRE(uv.zeta_defined);
    InteractionVectors want = optimal_ivs(Basis::Hadamard, r, conjugate_setup(m));
    REQUIRE(max_abs_diff(uv.ivs.xi0, want.xi0) < 1e-9);
    REQUIRE(max_abs_diff(uv.ivs.xi1, want.xi1) < 1e-9);
    REQUIRE(max_abs_diff(uv.ivs.zeta0, want.zeta0) < 1e-9);
    REQUIRE(max_abs_diff(uv.ivs.zeta1, want.zeta1) < 1e-9);
    // overlaps in the conjugate basis are governed by the source rate
    REQUIRE(std::abs(inner(uv.ivs.xi0, uv.ivs.xi1) - cplx(1.0 - 2.0 * r.d_xy, 0)) < 1e-12);
}

TEST_CASE("basis conjugation round trips") {
    ErrorRates r{0.22, 0.08};
    MeasurementSetup m = random_setup(14);
    InteractionVectors xy = optimal_ivs(Basis::Computational, r, m);
    ConjugatedIvs uv = ivs_uv_from_xy(xy, r);
    ConjugatedIvs back = ivs_xy_from_uv(uv.ivs, r);
    REQUIRE(back.zeta_defined);
    REQUIRE(max_abs_diff(back.ivs.xi0, xy.xi0) < 1e-9);
    REQUIRE(max_abs_diff(back.ivs.xi1, xy.xi1) < 1e-9);
    REQUIRE(max_abs_diff(back.ivs.zeta0, xy.zeta0) < 1e-9);
    REQUIRE(max_abs_diff(back.ivs.zeta1, xy.zeta1) < 1e-9);
}

TEST_CASE("conjugation flags undefined disturbed components") {
    ErrorRates r{0.2, 0.0};
    InteractionVectors xy = optimal_ivs(Basis::Computational, r, computational_setup());
    ConjugatedIvs uv = ivs_uv_from_xy(xy, r);
    REQUIRE_FALSE(uv.zeta_defined);
    REQUIRE(norm(uv.ivs.zeta0) == 0.0);
    REQUIRE(norm(uv.ivs.xi0) > 0.9);
}

TEST_CASE("conjugation direction wrappers reject the wrong input basis") {
    ErrorRates r{0.1, 0.1};
    InteractionVectors xy = optimal_ivs(Basis::Computational, r, computational_setup());
    InteractionVectors uv =
        optimal_ivs(Basis::Hadamard, r, computational_setup(Basis::Hadamard));
    REQUIRE_THROWS_AS(ivs_uv_from_xy(uv, r), std::invalid_argument);
    REQUIRE_THROWS_AS(ivs_xy_from_uv(xy, r), std::invalid_argument);
}

TEST_CASE("splitting a joint state recovers its ivs") {
    ErrorRates r{0.31, 0.12};
    MeasurementSetup m = random_setup(19);
    InteractionVectors iv = optimal_ivs(Basis::Computational, r, m);
    Pijs p = pijs_from_ivs(Basis::Computational, r, iv, m);
    SplitIvs s = ivs_from_pijs(p);
    REQUIRE(s.zeta_defined);
    REQUIRE(max_abs_diff(s.ivs.xi0, iv.xi0) < 1e-12);
    REQUIRE(max_abs_diff(s.ivs.xi1, iv.xi1) < 1e-12);
    REQUIRE(max_abs_diff(s.ivs.zeta0, iv.zeta0) < 1e-12);
    REQUIRE(max_abs_diff(s.ivs.zeta1, iv.zeta1) < 1e-12);
}
