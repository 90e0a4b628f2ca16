#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "dbeq/errors.hpp"
#include "dbeq/game.hpp"

namespace dbeq {

/**
 * All distributions over k actions whose entries are multiples of
 * 1/round(1/resolution), enumerated lexicographically. The resolution must
 * be (close to) a reciprocal integer so the grid hits the simplex exactly.
 */
inline std::vector<MixedStrategy> barycentric_grid(std::size_t k, double resolution) {
    if (!(resolution > 0.0) || resolution > 0.5 + 1e-12)
        throw shape_error("grid resolution must lie in (0, 0.5]");
    const double steps = 1.0 / resolution;
    const long long m = std::llround(steps);
    if (m < 2 || std::abs(steps - double(m)) > 1e-6)
        throw shape_error("grid resolution must divide 1 (e.g. 0.05, 0.02, 0.01)");

    std::vector<MixedStrategy> out;
    std::vector<long long> counts(k, 0);
    std::function<void(std::size_t, long long)> rec = [&](std::size_t pos, long long left) {
        if (pos + 1 == k) {
            counts[pos] = left;
            std::vector<double> p(k);
            for (std::size_t a = 0; a < k; ++a) p[a] = double(counts[a]) / double(m);
            out.push_back(MixedStrategy::normalized(std::move(p)));
            return;
        }
        for (long long c = left; c >= 0; --c) {
            counts[pos] = c;
            rec(pos + 1, left - c);
        }
    };
    rec(0, m);
    return out;
}

inline std::size_t barycentric_grid_size(std::size_t k, double resolution) {
    const long long m = std::llround(1.0 / resolution);
    // C(m + k - 1, k - 1)
    double c = 1.0;
    for (std::size_t i = 1; i < k; ++i) c = c * double(m + long long(i)) / double(i);
    return std::size_t(std::llround(c));
}

/**
 * Euclidean projection of an arbitrary vector onto the probability simplex
 * (sort-based thresholding). Used by the l2 inner solver, where the minimum
 * of a linear function over ball-and-simplex is traced along the projected
 * gradient path.
 */
inline std::vector<double> project_to_simplex(std::vector<double> v) {
    if (v.empty()) throw shape_error("cannot project an empty vector");
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<>());
    double css = 0.0, theta = 0.0;
    std::size_t rho = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        css += u[i];
        double t = (css - 1.0) / double(i + 1);
        if (u[i] - t > 0.0) {
            rho = i + 1;
            theta = t;
        }
    }
    (void)rho;
    for (double& x : v) x = std::max(0.0, x - theta);
    double sum = 0.0;
    for (double x : v) sum += x;
    for (double& x : v) x /= sum;
    return v;
}

} // namespace dbeq
