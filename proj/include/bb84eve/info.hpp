// Closed-form scalar curves: entropies, mutual informations, key rate,
// threshold error rate, discrimination fidelity, Bell sum, Bloch shrink.
#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bb84eve {

// (1+z)log2(1+z) + (1-z)log2(1-z), with 0 log 0 := 0.
inline double phi(double z) {
    if (!(z >= 0.0 && z <= 1.0)) throw std::domain_error("phi: z must lie in [0, 1]");
    auto xlog2x = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
    return xlog2x(1.0 + z) + xlog2x(1.0 - z);
}

inline double binary_entropy(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p must lie in [0, 1]");
    auto xlog2x = [](double x) { return x > 0.0 ? x * std::log2(x) : 0.0; };
    return -xlog2x(p) - xlog2x(1.0 - p);
}

// Eve's optimal information gain 2 sqrt(d(1-d)).
inline double ig_star(double d) {
    if (!(d >= 0.0 && d <= 0.5)) throw std::domain_error("ig_star: d must lie in [0, 1/2]");
    return 2.0 * std::sqrt(d * (1.0 - d));
}

struct MiPair {
    double mi_ab = 0.0;
    double mi_ae = 0.0;
};

// MI_AB = 1 - H(d); MI_AE = 1 - H(D_E) with Eve's guess error
// D_E = 1/2 - sqrt(d(1-d)). Both equal the half-phi forms.
inline MiPair mi_curves(double d) {
    if (!(d >= 0.0 && d <= 0.5)) throw std::domain_error("mi_curves: d must lie in [0, 1/2]");
    const double d_e = 0.5 - std::sqrt(d * (1.0 - d));
    return {1.0 - binary_entropy(d), 1.0 - binary_entropy(d_e)};
}

inline double key_rate(double d) {
    if (!(d >= 0.0 && d <= 0.5)) throw std::domain_error("key_rate: d must lie in [0, 1/2]");
    const double d_e = 0.5 - std::sqrt(d * (1.0 - d));
    return std::max(0.0, binary_entropy(d_e) - binary_entropy(d));
}

// Disturbance at which the key rate hits zero: (1 - 1/sqrt(2))/2.
inline double qber_threshold() { return 0.5 * (1.0 - 1.0 / std::sqrt(2.0)); }

// Success probability for discriminating the two parity states whose
// overlap is 1-2d: 1/2 + sqrt(d(1-d)).
inline double helstrom_fidelity(double d) {
    if (!(d >= 0.0 && d <= 0.5)) throw std::domain_error("helstrom_fidelity: d must lie in [0, 1/2]");
    return 0.5 + std::sqrt(d * (1.0 - d));
}

inline double chsh_sum(double d) {
    if (!(d >= 0.0 && d <= 0.5)) throw std::domain_error("chsh_sum: d must lie in [0, 1/2]");
    return (1.0 - 2.0 * d) * 2.0 * std::sqrt(2.0);
}

inline double bloch_shrink(double d) {
    if (!(d >= 0.0 && d <= 0.5)) throw std::domain_error("bloch_shrink: d must lie in [0, 1/2]");
    return 1.0 - 2.0 * d;
}

// Lower bound on the secrecy capacity; may be negative, caller clamps.
inline double secrecy_bound(double i_ab, double i_ae, double i_eb) {
    return std::max(i_ab - i_ae, i_ab - i_eb);
}

struct RateCurvePoint {
    double d = 0.0;
    double ig_star = 0.0;
    double mi_ab = 0.0;
    double mi_ae = 0.0;
    double key_rate = 0.0;
    double chsh = 0.0;
    double shrink = 0.0;
};

inline RateCurvePoint rate_curve_point(double d) {
    RateCurvePoint p;
    p.d = d;
    p.ig_star = ig_star(d);
    MiPair mi = mi_curves(d);
    p.mi_ab = mi.mi_ab;
    p.mi_ae = mi.mi_ae;
    p.key_rate = key_rate(d);
    p.chsh = chsh_sum(d);
    p.shrink = bloch_shrink(d);
    return p;
}

}  // namespace bb84eve
