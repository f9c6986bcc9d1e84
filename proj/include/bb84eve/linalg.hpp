// Small dense complex linear algebra: vectors/matrices of dim 2/4/8,
// Kronecker products, deterministic basis completion, seeded Haar sampling,
// and a Jacobi eigensolver for small Hermitian matrices.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace bb84eve {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

inline constexpr double tol_norm = 1e-10;
inline constexpr double tol_unitary = 1e-9;

struct CMat {
    std::size_t rows = 0, cols = 0;
    std::vector<cplx> a;  // row-major, a.size() == rows*cols

    CMat() = default;
    CMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

    cplx& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }

    static CMat zero(std::size_t r, std::size_t c) { return CMat(r, c); }
    static CMat identity(std::size_t n) {
        CMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }
};

/* VECTOR ARITHMETIC */

inline CVec operator+(const CVec& u, const CVec& v) {
    if (u.size() != v.size()) throw std::invalid_argument("vector size mismatch");
    CVec w(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = u[i] + v[i];
    return w;
}

inline CVec operator-(const CVec& u, const CVec& v) {
    if (u.size() != v.size()) throw std::invalid_argument("vector size mismatch");
    CVec w(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) w[i] = u[i] - v[i];
    return w;
}

inline CVec operator*(cplx s, const CVec& v) {
    CVec w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = s * v[i];
    return w;
}

inline CVec operator*(double s, const CVec& v) { return cplx(s, 0.0) * v; }

// Conjugate-linear in the first argument.
inline cplx inner(const CVec& u, const CVec& v) {
    if (u.size() != v.size()) throw std::invalid_argument("inner: dimension mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += std::conj(u[i]) * v[i];
    return s;
}

inline double norm(const CVec& v) { return std::sqrt(std::real(inner(v, v))); }

inline CVec normalized(const CVec& v) {
    double n = norm(v);
    if (n < 1e-300) throw std::domain_error("normalized: zero vector");
    return (1.0 / n) * v;
}

inline double max_abs_diff(const CVec& u, const CVec& v) {
    if (u.size() != v.size()) throw std::invalid_argument("vector size mismatch");
    double m = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) m = std::max(m, std::abs(u[i] - v[i]));
    return m;
}

inline CVec basis_vector(std::size_t dim, std::size_t k) {
    CVec v(dim, 0.0);
    v.at(k) = 1.0;
    return v;
}

/* MATRIX ARITHMETIC */

inline CMat operator*(const CMat& m, const CMat& n) {
    if (m.cols != n.rows) throw std::invalid_argument("matmul: dimension mismatch");
    CMat r(m.rows, n.cols);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t k = 0; k < m.cols; ++k) {
            cplx mik = m(i, k);
            if (mik == cplx(0.0)) continue;
            for (std::size_t j = 0; j < n.cols; ++j) r(i, j) += mik * n(k, j);
        }
    return r;
}

inline CMat operator+(const CMat& m, const CMat& n) {
    if (m.rows != n.rows || m.cols != n.cols) throw std::invalid_argument("matadd: shape mismatch");
    CMat r = m;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] += n.a[i];
    return r;
}

inline CMat operator-(const CMat& m, const CMat& n) {
    if (m.rows != n.rows || m.cols != n.cols) throw std::invalid_argument("matsub: shape mismatch");
    CMat r = m;
    for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] -= n.a[i];
    return r;
}

inline CMat operator*(cplx s, const CMat& m) {
    CMat r = m;
    for (auto& x : r.a) x *= s;
    return r;
}

inline CVec operator*(const CMat& m, const CVec& v) {
    if (m.cols != v.size()) throw std::invalid_argument("matvec: dimension mismatch");
    CVec w(m.rows, 0.0);
    for (std::size_t i = 0; i < m.rows; ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * v[j];
        w[i] = s;
    }
    return w;
}

inline CMat dagger(const CMat& m) {
    CMat r(m.cols, m.rows);
    for (std::size_t i = 0; i < m.rows; ++i)
        for (std::size_t j = 0; j < m.cols; ++j) r(j, i) = std::conj(m(i, j));
    return r;
}

inline CMat kron(const CMat& x, const CMat& y) {
    CMat r(x.rows * y.rows, x.cols * y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) {
            cplx xij = x(i, j);
            if (xij == cplx(0.0)) continue;
            for (std::size_t k = 0; k < y.rows; ++k)
                for (std::size_t l = 0; l < y.cols; ++l)
                    r(i * y.rows + k, j * y.cols + l) = xij * y(k, l);
        }
    return r;
}

inline CVec kron(const CVec& u, const CVec& v) {
    CVec w(u.size() * v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) w[i * v.size() + j] = u[i] * v[j];
    return w;
}

// |u><v|
inline CMat outer(const CVec& u, const CVec& v) {
    CMat r(u.size(), v.size());
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r(i, j) = u[i] * std::conj(v[j]);
    return r;
}

inline double max_abs(const CMat& m) {
    double r = 0.0;
    for (const auto& x : m.a) r = std::max(r, std::abs(x));
    return r;
}

inline double max_abs_diff(const CMat& m, const CMat& n) { return max_abs(m - n); }

inline bool is_unitary(const CMat& m, double tol = tol_unitary) {
    if (m.rows != m.cols) throw std::invalid_argument("is_unitary: non-square input");
    return max_abs_diff(dagger(m) * m, CMat::identity(m.rows)) <= tol;
}

inline CVec column(const CMat& m, std::size_t j) {
    CVec v(m.rows);
    for (std::size_t i = 0; i < m.rows; ++i) v[i] = m(i, j);
    return v;
}

inline CMat from_columns(const std::vector<CVec>& cols) {
    if (cols.empty()) throw std::invalid_argument("from_columns: empty");
    CMat m(cols[0].size(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j].size() != m.rows) throw std::invalid_argument("from_columns: ragged input");
        for (std::size_t i = 0; i < m.rows; ++i) m(i, j) = cols[j][i];
    }
    return m;
}

/* FIXED 2x2 BUILDING BLOCKS */

inline CMat pauli_x() {
    CMat m(2, 2);
    m(0, 1) = 1.0;
    m(1, 0) = 1.0;
    return m;
}

inline CMat pauli_y() {
    CMat m(2, 2);
    m(0, 1) = cplx(0.0, -1.0);
    m(1, 0) = cplx(0.0, 1.0);
    return m;
}

inline CMat pauli_z() {
    CMat m(2, 2);
    m(0, 0) = 1.0;
    m(1, 1) = -1.0;
    return m;
}

inline CMat hadamard() {
    const double s = 1.0 / std::sqrt(2.0);
    CMat m(2, 2);
    m(0, 0) = s;
    m(0, 1) = s;
    m(1, 0) = s;
    m(1, 1) = -s;
    return m;
}

/* BASIS COMPLETION */

// Deterministic completion: sweep e_0..e_{dim-1} in index order, two-pass
// Gram-Schmidt against accepted vectors, accept when the residual norm
// exceeds 1e-6. Seeds are returned unmodified in their given order.
inline std::vector<CVec> complete_orthonormal_basis(const std::vector<CVec>& seed_vecs,
                                                    std::size_t dim) {
    if (seed_vecs.size() > dim) throw std::invalid_argument("completion: too many seeds");
    for (std::size_t i = 0; i < seed_vecs.size(); ++i) {
        if (seed_vecs[i].size() != dim) throw std::invalid_argument("completion: seed dim mismatch");
        for (std::size_t j = 0; j <= i; ++j) {
            cplx g = inner(seed_vecs[i], seed_vecs[j]);
            double want = (i == j) ? 1.0 : 0.0;
            if (std::abs(g - want) > 1e-8) throw std::invalid_argument("completion: seeds not orthonormal");
        }
    }
    std::vector<CVec> basis = seed_vecs;
    for (std::size_t k = 0; k < dim && basis.size() < dim; ++k) {
        CVec v = basis_vector(dim, k);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) v = v - inner(b, v) * b;
        if (norm(v) > 1e-6) basis.push_back(normalized(v));
    }
    if (basis.size() != dim) throw std::logic_error("completion: failed to reach full dimension");
    return basis;
}

/* COUNTER-BASED RNG */

// Stateless; a draw is fully determined by (seed, hi, lo), so results are
// independent of execution order and thread count.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo) {
    std::uint64_t x = splitmix64(seed);
    x = splitmix64(x ^ (hi + 0x9e3779b97f4a7c15ull));
    x = splitmix64(x ^ (lo + 0xd1b54a32d192ed03ull));
    return x;
}

// Uniform in [0,1), 53-bit mantissa.
inline double uniform01(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo) {
    return double(counter_hash(seed, hi, lo) >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller; consumes counters (hi, 2*lo) and (hi, 2*lo+1).
inline double gaussian(std::uint64_t seed, std::uint64_t hi, std::uint64_t lo) {
    double u1 = double((counter_hash(seed, hi, 2 * lo) >> 11) + 1) * 0x1.0p-53;  // (0,1]
    double u2 = uniform01(seed, hi, 2 * lo + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793238462643 * u2);
}

// Ginibre ensemble + Gram-Schmidt QR with positive diagonal of R, which
// makes the distribution Haar and the output deterministic per seed.
inline CMat haar_random_unitary(std::size_t dim, std::uint64_t seed) {
    if (dim < 1) throw std::invalid_argument("haar_random_unitary: dim must be >= 1");
    std::vector<CVec> cols(dim, CVec(dim));
    for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t i = 0; i < dim; ++i) {
            std::uint64_t k = j * dim + i;
            cols[j][i] = cplx(gaussian(seed, k, 0), gaussian(seed, k, 1));
        }
    for (std::size_t j = 0; j < dim; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t i = 0; i < j; ++i) cols[j] = cols[j] - inner(cols[i], cols[j]) * cols[i];
        cols[j] = normalized(cols[j]);
    }
    return from_columns(cols);
}

/* HERMITIAN EIGENSOLVER */

struct EigResult {
    std::vector<double> values;  // descending
    CMat vectors;                // column k pairs with values[k]
};

// Cyclic complex Jacobi; adequate for the 4x4 problems this library needs,
// works for any small dimension.
inline EigResult eigh(const CMat& m) {
    if (m.rows != m.cols) throw std::invalid_argument("eigh: non-square input");
    const std::size_t n = m.rows;
    if (max_abs_diff(m, dagger(m)) > 1e-9) throw std::invalid_argument("eigh: input not Hermitian");
    CMat a = m;
    CMat v = CMat::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(a(p, q)));
        if (off < 1e-15) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                cplx apq = a(p, q);
                if (std::abs(apq) < 1e-18) continue;
                double app = std::real(a(p, p)), aqq = std::real(a(q, q));
                cplx phase = apq / std::abs(apq);
                double theta;
                if (std::abs(app - aqq) < 1e-300 * std::abs(apq))
                    theta = 0.25 * 3.141592653589793238462643;
                else
                    theta = 0.5 * std::atan2(2.0 * std::abs(apq), app - aqq);
                double c = std::cos(theta), s = std::sin(theta);
                cplx sp = s * std::conj(phase);  // rotation: col_p' = c*col_p + sp*col_q etc.
                for (std::size_t i = 0; i < n; ++i) {
                    cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip + sp * aiq;
                    a(i, q) = -std::conj(sp) * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj + std::conj(sp) * aqj;
                    a(q, j) = -sp * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip + sp * viq;
                    v(i, q) = -std::conj(sp) * vip + c * viq;
                }
            }
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return std::real(a(x, x)) > std::real(a(y, y)); });
    EigResult r;
    r.values.resize(n);
    r.vectors = CMat(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        r.values[k] = std::real(a(order[k], order[k]));
        for (std::size_t i = 0; i < n; ++i) r.vectors(i, k) = v(i, order[k]);
    }
    return r;
}

// exp(i*angle*K) for Hermitian K; used to fuzz states without breaking norms.
inline CMat hermitian_phase_rotation(const CMat& k, double angle) {
    EigResult e = eigh(k);
    const std::size_t n = k.rows;
    CMat d(n, n);
    for (std::size_t i = 0; i < n; ++i)
        d(i, i) = std::exp(cplx(0.0, angle * e.values[i]));
    return e.vectors * d * dagger(e.vectors);
}

// Seeded random Hermitian with entries of unit scale.
inline CMat random_hermitian(std::size_t dim, std::uint64_t seed) {
    CMat k(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        k(i, i) = gaussian(seed, i * dim + i, 0);
        for (std::size_t j = i + 1; j < dim; ++j) {
            cplx z(gaussian(seed, i * dim + j, 0), gaussian(seed, i * dim + j, 1));
            k(i, j) = z;
            k(j, i) = std::conj(z);
        }
    }
    return k;
}

}  // namespace bb84eve
