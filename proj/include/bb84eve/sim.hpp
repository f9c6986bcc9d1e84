// Exact Born-rule outcome tables, the seeded prepare-and-measure Monte
// Carlo, the entanglement-based Bell estimate, and the brute-force
// measurement search that bounds Eve's information gain.
#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>

#include "synth.hpp"

namespace bb84eve {

// Partial trace of |S_bit><S_bit| over the Bob qubit (most significant).
inline CMat eve_reduced_density(const Pijs& pijs, int bit) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("eve_reduced_density: bit must be 0 or 1");
    const CVec& s = bit == 0 ? pijs.x_state : pijs.y_state;
    CMat rho(4, 4);
    for (std::size_t b = 0; b < 2; ++b)
        for (std::size_t e = 0; e < 4; ++e)
            for (std::size_t e2 = 0; e2 < 4; ++e2)
                rho(e, e2) += s[b * 4 + e] * std::conj(s[b * 4 + e2]);
    return rho;
}

/* EXACT OUTCOME TABLE */

// P(a, b, lambda): Alice bit, Bob bit in the same basis, Eve outcome.
struct JointTable {
    Basis basis = Basis::Computational;
    std::array<std::array<std::array<double, 4>, 2>, 2> p{};
};

inline JointTable exact_joint_distribution(const AttackUnitary& attack, Basis basis,
                                           const MeasurementSetup& eve_setup) {
    JointTable t;
    t.basis = basis;
    for (int a = 0; a < 2; ++a) {
        CVec s = attack.u * kron(encode(a, basis), attack.initial_state);
        for (int b = 0; b < 2; ++b) {
            CVec w = detail::project_bob(s, encode(b, basis));
            for (std::size_t l = 0; l < 4; ++l) {
                double amp = std::abs(inner(eve_setup.directions[l], w));
                t.p[a][b][l] = amp * amp;
            }
        }
    }
    return t;
}

inline double bob_error(const JointTable& t) {
    double e = 0.0;
    for (int a = 0; a < 2; ++a)
        for (std::size_t l = 0; l < 4; ++l) e += 0.5 * t.p[a][1 - a][l];
    return e;
}

// Strategy: bet 0 on +sign outcomes, 1 on -sign outcomes.
inline double eve_success(const JointTable& t, const std::array<int, 4>& signs) {
    double s = 0.0;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (std::size_t l = 0; l < 4; ++l) {
                int guess = signs[l] > 0 ? 0 : 1;
                if (guess == a) s += 0.5 * t.p[a][b][l];
            }
    return s;
}

/* PREPARE-AND-MEASURE MONTE CARLO */

struct SimConfig {
    ErrorRates rates;
    long long n_rounds = 0;
    std::uint64_t seed = 0;
    AttackUnitary attack;
    MeasurementSetup eve_xy;  // Eve's setup when reconciliation lands on xy
    MeasurementSetup eve_uv;  // and on uv
};

struct SimStats {
    long long n_rounds = 0;
    long long sifted = 0;
    double sift_rate = 0.0;
    double qber_xy = 0.0, qber_uv = 0.0;
    double eve_accuracy = 0.0, eve_accuracy_xy = 0.0, eve_accuracy_uv = 0.0;
    double mi_ab_hat = 0.0, mi_ae_hat = 0.0;
    // counts[basis][a][b][lambda] over sifted rounds; basis 0 = xy, 1 = uv
    std::array<std::array<std::array<std::array<long long, 4>, 2>, 2>, 2> counts{};
};

namespace detail {
// Plug-in mutual information of an empirical joint distribution.
template <std::size_t NA, std::size_t NB>
inline double plugin_mi(const std::array<std::array<double, NB>, NA>& p) {
    std::array<double, NA> pa{};
    std::array<double, NB> pb{};
    for (std::size_t i = 0; i < NA; ++i)
        for (std::size_t j = 0; j < NB; ++j) {
            pa[i] += p[i][j];
            pb[j] += p[i][j];
        }
    double mi = 0.0;
    for (std::size_t i = 0; i < NA; ++i)
        for (std::size_t j = 0; j < NB; ++j)
            if (p[i][j] > 0.0) mi += p[i][j] * std::log2(p[i][j] / (pa[i] * pb[j]));
    return mi;
}
}  // namespace detail

// Each round draws its randomness from a counter keyed by (seed, round),
// so the statistics are independent of execution order.
inline SimStats run_pm(const SimConfig& config) {
    if (config.n_rounds <= 0) throw std::invalid_argument("run_pm: n_rounds must be positive");
    const std::array<Basis, 2> bases{Basis::Computational, Basis::Hadamard};
    const std::array<const MeasurementSetup*, 2> setups{&config.eve_xy, &config.eve_uv};
    // cumulative distribution over the 8 (b, lambda) cells, per basis and bit
    double cdf[2][2][8];
    for (int bi = 0; bi < 2; ++bi) {
        JointTable t = exact_joint_distribution(config.attack, bases[bi], *setups[bi]);
        for (int a = 0; a < 2; ++a) {
            double acc = 0.0;
            for (int cell = 0; cell < 8; ++cell) {
                acc += t.p[a][cell / 4][cell % 4];
                cdf[bi][a][cell] = acc;
            }
            cdf[bi][a][7] = 1.0;  // guard rounding drift in the last cell
        }
    }
    SimStats st;
    st.n_rounds = config.n_rounds;
    for (long long r = 0; r < config.n_rounds; ++r) {
        int a = uniform01(config.seed, std::uint64_t(r), 0) < 0.5 ? 0 : 1;
        int basis_a = uniform01(config.seed, std::uint64_t(r), 1) < 0.5 ? 0 : 1;
        int basis_b = uniform01(config.seed, std::uint64_t(r), 2) < 0.5 ? 0 : 1;
        if (basis_a != basis_b) continue;
        double u = uniform01(config.seed, std::uint64_t(r), 3);
        int cell = 0;
        while (cell < 7 && u >= cdf[basis_a][a][cell]) ++cell;
        ++st.counts[basis_a][a][cell / 4][cell % 4];
        ++st.sifted;
    }
    st.sift_rate = double(st.n_rounds ? double(st.sifted) / double(st.n_rounds) : 0.0);
    if (st.sifted == 0) return st;

    std::array<std::array<double, 2>, 2> joint_ab{};
    std::array<std::array<double, 4>, 2> joint_al{};
    long long sift_b[2] = {0, 0}, err_b[2] = {0, 0}, hit_b[2] = {0, 0};
    for (int bi = 0; bi < 2; ++bi)
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b)
                for (std::size_t l = 0; l < 4; ++l) {
                    long long c = st.counts[bi][a][b][l];
                    if (!c) continue;
                    sift_b[bi] += c;
                    if (b != a) err_b[bi] += c;
                    int guess = setups[bi]->signs[l] > 0 ? 0 : 1;
                    if (guess == a) hit_b[bi] += c;
                    joint_ab[a][b] += double(c);
                    joint_al[a][l] += double(c);
                }
    for (auto& row : joint_ab)
        for (auto& x : row) x /= double(st.sifted);
    for (auto& row : joint_al)
        for (auto& x : row) x /= double(st.sifted);
    st.qber_xy = sift_b[0] ? double(err_b[0]) / double(sift_b[0]) : 0.0;
    st.qber_uv = sift_b[1] ? double(err_b[1]) / double(sift_b[1]) : 0.0;
    st.eve_accuracy_xy = sift_b[0] ? double(hit_b[0]) / double(sift_b[0]) : 0.0;
    st.eve_accuracy_uv = sift_b[1] ? double(hit_b[1]) / double(sift_b[1]) : 0.0;
    st.eve_accuracy = double(hit_b[0] + hit_b[1]) / double(st.sifted);
    st.mi_ab_hat = detail::plugin_mi(joint_ab);
    st.mi_ae_hat = detail::plugin_mi(joint_al);
    return st;
}

/* ENTANGLEMENT-BASED BELL ESTIMATE */

struct ChshRun {
    double s = 0.0;
    double std_err = 0.0;
    long long n = 0;
};

// Alice measures sigma_z / sigma_x, Bob the diagonal pair; the attack
// contracts Bob's correlations by 1-2d, so <A B> = (1-2d) E0_ij with
// E0 = (1, 1, 1, -1)/sqrt(2) over the four setting pairs.
inline ChshRun run_eb_chsh(double d, long long n_rounds, std::uint64_t seed) {
    if (!(d >= 0.0 && d <= 0.5)) throw std::domain_error("run_eb_chsh: d must lie in [0, 1/2]");
    if (n_rounds <= 0) throw std::invalid_argument("run_eb_chsh: n_rounds must be positive");
    const double r = 1.0 / std::sqrt(2.0);
    const double e0[2][2] = {{r, r}, {r, -r}};
    const double eta = 1.0 - 2.0 * d;
    long long n[2][2] = {{0, 0}, {0, 0}};
    long long sum[2][2] = {{0, 0}, {0, 0}};
    for (long long round = 0; round < n_rounds; ++round) {
        int i = uniform01(seed, std::uint64_t(round), 0) < 0.5 ? 0 : 1;
        int j = uniform01(seed, std::uint64_t(round), 1) < 0.5 ? 0 : 1;
        int a = uniform01(seed, std::uint64_t(round), 2) < 0.5 ? 1 : -1;
        double p_same = 0.5 * (1.0 + eta * e0[i][j]);
        int b = uniform01(seed, std::uint64_t(round), 3) < p_same ? a : -a;
        ++n[i][j];
        sum[i][j] += a * b;
    }
    ChshRun out;
    out.n = n_rounds;
    double var = 0.0;
    double e[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            e[i][j] = n[i][j] ? double(sum[i][j]) / double(n[i][j]) : 0.0;
            var += n[i][j] ? (1.0 - e[i][j] * e[i][j]) / double(n[i][j]) : 1.0;
        }
    out.s = e[0][0] + e[0][1] + e[1][0] - e[1][1];
    out.std_err = std::sqrt(var);
    return out;
}

/* BRUTE-FORCE MEASUREMENT SEARCH */

struct IgOracle {
    double best_ig = 0.0;
    double eigen_ig = 0.0;
};

// Distinguishing advantage of a 4-outcome orthonormal measurement at equal
// prior: half the L1 distance of the two outcome distributions.
inline double povm_ig(const CMat& rho0, const CMat& rho1, const std::array<CVec, 4>& dirs) {
    double ig = 0.0;
    for (std::size_t l = 0; l < 4; ++l) {
        double p0 = std::real(inner(dirs[l], rho0 * dirs[l]));
        double p1 = std::real(inner(dirs[l], rho1 * dirs[l]));
        ig += 0.5 * std::abs(p0 - p1);
    }
    return ig;
}

namespace detail {
inline void validate_density(const CMat& rho, const char* who) {
    if (rho.rows != 4 || rho.cols != 4) throw std::invalid_argument(std::string(who) + ": must be 4x4");
    if (max_abs_diff(rho, dagger(rho)) > 1e-9)
        throw std::invalid_argument(std::string(who) + ": not Hermitian");
    cplx tr = 0.0;
    for (std::size_t i = 0; i < 4; ++i) tr += rho(i, i);
    if (std::abs(tr - cplx(1.0)) > 1e-9)
        throw std::invalid_argument(std::string(who) + ": trace must be 1");
    for (double v : eigh(rho).values)
        if (v < -1e-9) throw std::invalid_argument(std::string(who) + ": not positive semidefinite");
}
}  // namespace detail

inline IgOracle brute_force_ig(const CMat& rho0, const CMat& rho1, long long n_povms,
                               std::uint64_t seed) {
    detail::validate_density(rho0, "brute_force_ig: rho0");
    detail::validate_density(rho1, "brute_force_ig: rho1");
    IgOracle out;
    EigResult e = eigh(rho0 - rho1);
    std::array<CVec, 4> eig_dirs;
    for (std::size_t k = 0; k < 4; ++k) eig_dirs[k] = column(e.vectors, k);
    out.eigen_ig = povm_ig(rho0, rho1, eig_dirs);
    for (long long k = 0; k < n_povms; ++k) {
        CMat u = haar_random_unitary(4, counter_hash(seed, std::uint64_t(k), 0));
        std::array<CVec, 4> dirs;
        for (std::size_t c = 0; c < 4; ++c) dirs[c] = column(u, c);
        double ig = povm_ig(rho0, rho1, dirs);
        if (ig > out.best_ig) out.best_ig = ig;
    }
    return out;
}

}  // namespace bb84eve
