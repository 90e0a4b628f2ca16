#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dbeq/errors.hpp"
#include "dbeq/game.hpp"

namespace dbeq {

// How distances between opponent sub-profiles are measured.
//
//   L2Concat:    Euclidean norm on the concatenated opponent vectors.
//   L1Concat:    l1 norm on the concatenation.
//   LinfProduct: max over opponents of the max absolute coordinate gap.
//                Balls in this metric factor into per-opponent boxes, which
//                is what makes exact vertex enumeration possible for any
//                number of players.
enum class Metric { L2Concat, L1Concat, LinfProduct };

inline std::string to_string(Metric m) {
    switch (m) {
        case Metric::L2Concat: return "l2";
        case Metric::L1Concat: return "l1";
        case Metric::LinfProduct: return "linf";
    }
    return "?";
}

inline Metric parse_metric(const std::string& s) {
    if (s == "l2") return Metric::L2Concat;
    if (s == "l1") return Metric::L1Concat;
    if (s == "linf") return Metric::LinfProduct;
    throw shape_error("unknown metric \"" + s + "\" (expected l2, l1, or linf)");
}

inline void check_same_shape(const SubProfile& x, const SubProfile& y) {
    if (x.size() != y.size()) throw shape_error("sub-profiles have different opponent counts");
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j].size() != y[j].size()) throw shape_error("sub-profile strategy sizes differ");
}

inline double distance(Metric metric, const SubProfile& x, const SubProfile& y) {
    check_same_shape(x, y);
    switch (metric) {
        case Metric::L2Concat: {
            double s = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j)
                for (std::size_t a = 0; a < x[j].size(); ++a) {
                    double d = x[j][a] - y[j][a];
                    s += d * d;
                }
            return std::sqrt(s);
        }
        case Metric::L1Concat: {
            double s = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j)
                for (std::size_t a = 0; a < x[j].size(); ++a) s += std::abs(x[j][a] - y[j][a]);
            return s;
        }
        case Metric::LinfProduct: {
            double m = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j)
                for (std::size_t a = 0; a < x[j].size(); ++a)
                    m = std::max(m, std::abs(x[j][a] - y[j][a]));
            return m;
        }
    }
    throw shape_error("unknown metric");
}

/**
 * The set of opponent sub-profiles player `owner` considers possible: all
 * valid sub-profiles within `radius` of `center` under `metric`. radius 0
 * collapses the set to the center point.
 */
struct BeliefSet {
    std::size_t owner = 0;
    SubProfile center;
    double radius = 0.0;
    Metric metric = Metric::LinfProduct;

    BeliefSet(std::size_t owner_, SubProfile center_, double radius_, Metric metric_)
        : owner(owner_), center(std::move(center_)), radius(radius_), metric(metric_) {
        if (!(radius >= 0.0) || !std::isfinite(radius))
            throw shape_error("belief radius must be a finite non-negative real");
        if (center.empty()) throw shape_error("belief center must have at least one opponent");
    }
};

// Membership test. Candidates are valid sub-profiles by construction, so
// only the distance needs checking; the slack absorbs boundary rounding.
inline bool contains(const BeliefSet& belief, const SubProfile& point, double slack = 1e-12) {
    return distance(belief.metric, belief.center, point) <= belief.radius + slack;
}

} // namespace dbeq
