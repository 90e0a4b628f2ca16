#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "dbeq/errors.hpp"
#include "dbeq/game.hpp"
#include "dbeq/metric.hpp"

namespace dbeq {

/**
 * A belief set realised as an explicit vertex list. Expected utilities are
 * multilinear in the opponents' strategies, so over a product of polytopes
 * every extreme value is attained at one of these vertices. The belief is
 * kept alongside for provenance.
 */
struct VertexPolytope {
    BeliefSet belief;
    std::vector<SubProfile> vertices;
};

namespace detail {

inline bool near(const SubProfile& a, const SubProfile& b, double eps) {
    for (std::size_t j = 0; j < a.size(); ++j)
        for (std::size_t c = 0; c < a[j].size(); ++c)
            if (std::abs(a[j][c] - b[j][c]) > eps) return false;
    return true;
}

inline void dedup_vertices(std::vector<SubProfile>& verts, double eps = 1e-9) {
    std::vector<SubProfile> out;
    for (auto& v : verts) {
        bool dup = false;
        for (const auto& w : out)
            if (near(v, w, eps)) {
                dup = true;
                break;
            }
        if (!dup) out.push_back(std::move(v));
    }
    verts = std::move(out);
}

// Cartesian product of per-opponent vertex lists, in lexicographic order.
inline std::vector<SubProfile> product_of(const std::vector<std::vector<MixedStrategy>>& parts,
                                          std::size_t guard = 200000) {
    std::size_t total = 1;
    for (const auto& p : parts) {
        if (p.empty()) throw shape_error("empty vertex list for an opponent");
        if (total > guard / p.size() + 1) throw capability_error("vertex product too large");
        total *= p.size();
    }
    std::vector<SubProfile> out;
    out.reserve(total);
    std::vector<std::size_t> idx(parts.size(), 0);
    while (true) {
        SubProfile v;
        v.reserve(parts.size());
        for (std::size_t j = 0; j < parts.size(); ++j) v.push_back(parts[j][idx[j]]);
        out.push_back(std::move(v));
        std::size_t k = parts.size();
        while (k > 0) {
            --k;
            if (++idx[k] < parts[k].size()) break;
            idx[k] = 0;
            if (k == 0) return out;
        }
        if (parts.empty()) return out;
    }
}

// Gaussian elimination with partial pivoting; false when near-singular.
inline bool solve_square(std::vector<std::vector<double>> A, std::vector<double> b,
                         std::vector<double>& x, double pivot_eps = 1e-10) {
    const std::size_t n = A.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        if (std::abs(A[piv][col]) < pivot_eps) return false;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            double f = A[r][col] / A[col][col];
            if (f == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / A[i][i];
    return true;
}

} // namespace detail

/**
 * Vertices of one opponent's slice {y in simplex : |y_a - c_a| <= r}. At a
 * vertex at most one coordinate sits strictly between its box bounds, so it
 * suffices to pick the free coordinate and clamp the rest to a bound.
 */
inline std::vector<MixedStrategy> box_simplex_vertices(const MixedStrategy& center, double r) {
    const std::size_t k = center.size();
    std::vector<double> lo(k), hi(k);
    for (std::size_t a = 0; a < k; ++a) {
        lo[a] = std::max(0.0, center[a] - r);
        hi[a] = std::min(1.0, center[a] + r);
    }
    std::vector<SubProfile> found;
    if (k == 1) {
        found.push_back({MixedStrategy::pure(1, 0)});
    } else {
        for (std::size_t f = 0; f < k; ++f) {
            const std::size_t others = k - 1;
            for (std::size_t mask = 0; mask < (std::size_t(1) << others); ++mask) {
                std::vector<double> y(k, 0.0);
                double sum = 0.0;
                std::size_t bit = 0;
                for (std::size_t a = 0; a < k; ++a) {
                    if (a == f) continue;
                    y[a] = (mask >> bit & 1) ? hi[a] : lo[a];
                    sum += y[a];
                    ++bit;
                }
                double yf = 1.0 - sum;
                if (yf < lo[f] - 1e-12 || yf > hi[f] + 1e-12) continue;
                y[f] = std::clamp(yf, lo[f], hi[f]);
                found.push_back({MixedStrategy::normalized(std::move(y))});
            }
        }
    }
    detail::dedup_vertices(found);
    std::vector<MixedStrategy> out;
    out.reserve(found.size());
    for (auto& v : found) out.push_back(std::move(v[0]));
    return out;
}

inline std::vector<MixedStrategy> simplex_corner_list(std::size_t k) {
    std::vector<MixedStrategy> out;
    out.reserve(k);
    for (std::size_t a = 0; a < k; ++a) out.push_back(MixedStrategy::pure(k, a));
    return out;
}

// Product of the opponents' full simplices (the r >= diameter case).
inline std::vector<SubProfile> simplex_product_vertices(const SubProfile& shape_like) {
    std::vector<std::vector<MixedStrategy>> parts;
    parts.reserve(shape_like.size());
    for (const auto& s : shape_like) parts.push_back(simplex_corner_list(s.size()));
    return detail::product_of(parts);
}

namespace detail {

/**
 * Vertex enumeration for the l1 ball intersected with the product of
 * opponent simplices. Generic active-set search: with K coordinates and one
 * sum equality per opponent block, every vertex has K - blocks additional
 * tight constraints among { y_c >= 0 } and the 2^K sign facets
 * s.(y - x) <= r. All subsets of that size are tried; near-singular and
 * infeasible picks are dropped, survivors deduplicated.
 */
inline std::vector<SubProfile> l1_ball_vertices(const SubProfile& center, double r) {
    std::vector<std::size_t> sizes;
    std::size_t K = 0;
    for (const auto& s : center) {
        sizes.push_back(s.size());
        K += s.size();
    }
    const std::size_t blocks = center.size();
    if (K > 6) throw capability_error("l1 ball vertex enumeration supports at most 6 opponent coordinates");
    std::vector<double> x;
    x.reserve(K);
    for (const auto& s : center)
        for (std::size_t a = 0; a < s.size(); ++a) x.push_back(s[a]);

    // Rows: first K are -y_c <= 0, then 2^K sign facets.
    const std::size_t num_rows = K + (std::size_t(1) << K);
    const std::size_t extra = K - blocks;

    std::vector<std::vector<double>> rows(num_rows, std::vector<double>(K, 0.0));
    std::vector<double> rhs(num_rows, 0.0);
    for (std::size_t c = 0; c < K; ++c) rows[c][c] = -1.0;
    for (std::size_t s = 0; s < (std::size_t(1) << K); ++s) {
        double b = r;
        for (std::size_t c = 0; c < K; ++c) {
            double sign = (s >> c & 1) ? 1.0 : -1.0;
            rows[K + s][c] = sign;
            b += sign * x[c];
        }
        rhs[K + s] = b;
    }

    std::vector<std::vector<double>> eq(blocks, std::vector<double>(K, 0.0));
    {
        std::size_t off = 0;
        for (std::size_t j = 0; j < blocks; ++j) {
            for (std::size_t a = 0; a < sizes[j]; ++a) eq[j][off + a] = 1.0;
            off += sizes[j];
        }
    }

    // combination count guard keeps this at desk scale
    {
        double combos = 1.0;
        for (std::size_t i = 0; i < extra; ++i)
            combos *= double(num_rows - i) / double(i + 1);
        if (combos > 1.5e6) throw capability_error("l1 ball vertex enumeration too large");
    }

    std::vector<SubProfile> found;
    std::vector<std::size_t> pick(extra);
    for (std::size_t i = 0; i < extra; ++i) pick[i] = i;
    auto emit = [&](const std::vector<std::size_t>& chosen) {
        std::vector<std::vector<double>> A;
        std::vector<double> b;
        A.reserve(K);
        b.reserve(K);
        for (std::size_t j = 0; j < blocks; ++j) {
            A.push_back(eq[j]);
            b.push_back(1.0);
        }
        for (std::size_t idx : chosen) {
            A.push_back(rows[idx]);
            b.push_back(rhs[idx]);
        }
        std::vector<double> y;
        if (!solve_square(std::move(A), std::move(b), y)) return;
        for (double v : y)
            if (v < -1e-9) return;
        double dist = 0.0;
        for (std::size_t c = 0; c < K; ++c) dist += std::abs(y[c] - x[c]);
        if (dist > r + 1e-9) return;
        SubProfile point;
        std::size_t off = 0;
        for (std::size_t j = 0; j < blocks; ++j) {
            std::vector<double> block(y.begin() + off, y.begin() + off + sizes[j]);
            point.push_back(MixedStrategy::normalized(std::move(block)));
            off += sizes[j];
        }
        found.push_back(std::move(point));
    };

    if (extra == 0) {
        emit({});
    } else {
        while (true) {
            emit(pick);
            // next combination
            std::size_t i = extra;
            while (i > 0) {
                --i;
                if (pick[i] + (extra - i) < num_rows) {
                    ++pick[i];
                    for (std::size_t j = i + 1; j < extra; ++j) pick[j] = pick[j - 1] + 1;
                    break;
                }
                if (i == 0) {
                    dedup_vertices(found);
                    return found;
                }
            }
        }
    }
    dedup_vertices(found);
    return found;
}

} // namespace detail

/**
 * Exact vertex list of a belief ball, for the metrics whose balls are
 * polytopes. l2 balls are round; callers take the iterative path instead.
 */
inline VertexPolytope ball_vertices(const BeliefSet& belief) {
    if (belief.radius == 0.0) return {belief, {belief.center}};
    switch (belief.metric) {
        case Metric::LinfProduct: {
            std::vector<std::vector<MixedStrategy>> parts;
            parts.reserve(belief.center.size());
            for (const auto& s : belief.center)
                parts.push_back(box_simplex_vertices(s, belief.radius));
            return {belief, detail::product_of(parts)};
        }
        case Metric::L1Concat:
            return {belief, detail::l1_ball_vertices(belief.center, belief.radius)};
        case Metric::L2Concat:
            throw capability_error("l2 balls are not polytopes; use the iterative solver path");
    }
    throw shape_error("unknown metric");
}

/**
 * Extreme points of the eps-contaminated neighbourhood of a pure sub-profile:
 * each opponent j either plays their action exactly or shifts eps of mass
 * onto a single alternative. Feeding these into a best-response scan is the
 * certificate form of the robustness check.
 */
inline std::vector<SubProfile> noisy_variant_vertices(const SubProfile& pure_center, double eps) {
    if (!(eps > 0.0) || !(eps < 1.0)) throw shape_error("noise level must lie in (0, 1)");
    std::vector<std::vector<MixedStrategy>> parts;
    parts.reserve(pure_center.size());
    for (const auto& s : pure_center) {
        auto a = s.pure_action();
        if (!a) throw shape_error("noisy variants require a pure sub-profile");
        std::vector<MixedStrategy> part;
        part.push_back(s);
        for (std::size_t b = 0; b < s.size(); ++b) {
            if (b == *a) continue;
            std::vector<double> p(s.size(), 0.0);
            p[*a] = 1.0 - eps;
            p[b] = eps;
            part.push_back(MixedStrategy(std::move(p)));
        }
        parts.push_back(std::move(part));
    }
    return detail::product_of(parts);
}

} // namespace dbeq
