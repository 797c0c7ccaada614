#pragma once

// Brute-force reference for gamma(s) on the unit circle under squared error:
// a (y1, phi) grid with the full distance |x - y|^2, periodic trapezoid rule
// in phi, and repeated local refinement of the best y1.

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rectent::oracle {

inline double brute_force_log_profile(double s, double y1, int phi_points) {
    const double h = 2.0 * std::numbers::pi / phi_points;
    const double d_min = (1.0 - y1) * (1.0 - y1);
    double sum = 0.0;
    for (int j = 0; j < phi_points; ++j) {
        const double phi = j * h;
        const double dx = std::cos(phi) - y1;
        const double dy = std::sin(phi);
        sum += std::exp(-s * (dx * dx + dy * dy - d_min));
    }
    return -s * d_min + std::log(sum * h);
}

struct BruteForceGamma {
    double y1 = 0.0;
    double log_gamma = 0.0;
};

inline BruteForceGamma brute_force_gamma(double s, int y_points = 2000, int phi_points = 4000) {
    double lo = 0.0;
    double hi = 1.0;
    BruteForceGamma best{0.0, brute_force_log_profile(s, 0.0, phi_points)};
    for (int round = 0; round < 4; ++round) {
        const int points = round == 0 ? y_points : 200;
        const double step = (hi - lo) / (points - 1);
        for (int i = 0; i < points; ++i) {
            const double y = lo + i * step;
            const double v = brute_force_log_profile(s, y, phi_points);
            if (v > best.log_gamma) best = {y, v};
        }
        lo = std::max(0.0, best.y1 - 2.0 * step);
        hi = std::min(1.0, best.y1 + 2.0 * step);
    }
    return best;
}

}  // namespace rectent::oracle
