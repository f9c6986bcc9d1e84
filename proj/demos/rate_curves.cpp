// Prints the rate curves on a coarse grid: Alice-Bob and Alice-Eve mutual
// information, distillable key rate, and the CHSH value the attack leaves.
#include <cstdio>

#include "bb84eve/info.hpp"

int main() {
    std::printf("%8s %10s %10s %10s %10s %10s\n", "d", "ig*", "I(A;B)", "I(A;E)", "key", "chsh");
    for (int k = 0; k <= 25; ++k) {
        bb84eve::RateCurvePoint p = bb84eve::rate_curve_point(0.01 * k);
        std::printf("%8.3f %10.6f %10.6f %10.6f %10.6f %10.6f\n", p.d, p.ig_star, p.mi_ab,
                    p.mi_ae, p.key_rate, p.chsh);
    }
    std::printf("\ncurves cross at d = %.12f\n", bb84eve::qber_threshold());
    return 0;
}
