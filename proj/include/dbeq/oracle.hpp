#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dbeq/errors.hpp"
#include "dbeq/game.hpp"
#include "dbeq/metric.hpp"
#include "dbeq/simplex_grid.hpp"

namespace dbeq {

struct OracleSettings {
    double resolution = 0.05;
    // Verdict slack; defaults to payoff_spread * resolution * 2, which
    // covers the value error of snapping strategies and ball points to the
    // grid. Pass a tiny value to resolve knife-edge claims at the cost of
    // trusting the grid geometry.
    std::optional<double> verdict_tol;
    std::size_t max_table = 2'000'000;  // candidate count times point count
};

struct OracleVerdict {
    bool is_w = false, is_b = false, is_wr = false, is_u = false, is_d = false, is_sd = false;
    std::size_t candidates = 0;
    std::size_t ball_points = 0;
    double verdict_tol = 0.0;

    bool flag_of(const std::string& name) const {
        if (name == "W") return is_w;
        if (name == "B") return is_b;
        if (name == "WR") return is_wr;
        if (name == "U") return is_u;
        if (name == "D") return is_d;
        if (name == "SD") return is_sd;
        throw shape_error("unknown flag \"" + name + "\"");
    }
};

/**
 * Brute-force classifier used to cross-check the solver: every notion is
 * evaluated by exhaustive comparison over a barycentric grid of own
 * strategies and a grid of ball points, with no polytope, path, or cutting
 * plane machinery shared with the solver. Values are exact at the sampled
 * points (the regret inner maximum is attained at pure actions, which every
 * unit-resolution-divisible grid contains); the only approximation is the
 * sampling itself, absorbed by verdict_tol.
 */
inline OracleVerdict oracle_classify(const Game& game, const BeliefSet& belief,
                                     const MixedStrategy& own, const OracleSettings& os = {}) {
    const std::size_t i = belief.owner;
    const std::size_t k = game.num_actions(i);
    if (own.size() != k) throw shape_error("own strategy size mismatch");

    // own-strategy candidates: the grid plus the strategy under test
    std::vector<std::vector<double>> cands;
    {
        auto grid = barycentric_grid(k, os.resolution);
        cands.reserve(grid.size() + 1);
        for (auto& g : grid) cands.push_back(g.probs());
        cands.push_back(own.probs());
    }
    const std::size_t own_idx = cands.size() - 1;

    // ball points: the product of opponent grids filtered by the belief
    // set, plus the exact center
    std::vector<SubProfile> points;
    {
        std::vector<std::vector<MixedStrategy>> grids;
        for (const auto& opp : belief.center)
            grids.push_back(barycentric_grid(opp.size(), os.resolution));
        std::vector<std::size_t> idx(grids.size(), 0);
        while (true) {
            SubProfile pt;
            pt.reserve(grids.size());
            for (std::size_t j = 0; j < grids.size(); ++j) pt.push_back(grids[j][idx[j]]);
            if (contains(belief, pt)) points.push_back(std::move(pt));
            std::size_t j = grids.size();
            bool done = true;
            while (j > 0) {
                --j;
                if (++idx[j] < grids[j].size()) {
                    done = false;
                    break;
                }
                idx[j] = 0;
            }
            if (done) break;
        }
        points.push_back(belief.center);
    }
    if (cands.size() * points.size() > os.max_table)
        throw capability_error("oracle table would need " +
                               std::to_string(cands.size() * points.size()) +
                               " entries; coarsen the resolution");

    OracleVerdict v;
    v.candidates = cands.size();
    v.ball_points = points.size();
    v.verdict_tol = os.verdict_tol.value_or(game.payoff_spread() * os.resolution * 2.0);
    const double vtol = v.verdict_tol;
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> worst(cands.size(), inf), best(cands.size(), -inf),
        worst_regret(cands.size(), -inf), gain(cands.size(), inf);
    // pure-vs-pure margins for the dominance notions
    std::vector<double> pure_min(k, inf), pure_max(k, -inf);
    const auto own_pure = own.pure_action();

    for (const auto& pt : points) {
        auto av = action_values(game, i, pt);
        double pure_best = *std::max_element(av.begin(), av.end());
        double own_value = 0.0;
        for (std::size_t a = 0; a < k; ++a) own_value += own[a] * av[a];
        for (std::size_t c = 0; c < cands.size(); ++c) {
            double val = 0.0;
            for (std::size_t a = 0; a < k; ++a) val += cands[c][a] * av[a];
            worst[c] = std::min(worst[c], val);
            best[c] = std::max(best[c], val);
            worst_regret[c] = std::max(worst_regret[c], pure_best - val);
            gain[c] = std::min(gain[c], val - own_value);
        }
        if (own_pure) {
            for (std::size_t b = 0; b < k; ++b) {
                double margin = av[*own_pure] - av[b];
                pure_min[b] = std::min(pure_min[b], margin);
                pure_max[b] = std::max(pure_max[b], margin);
            }
        }
    }

    double best_worst = -inf, best_best = -inf, least_regret = inf, top_gain = -inf;
    for (std::size_t c = 0; c < cands.size(); ++c) {
        best_worst = std::max(best_worst, worst[c]);
        best_best = std::max(best_best, best[c]);
        least_regret = std::min(least_regret, worst_regret[c]);
        if (c != own_idx) top_gain = std::max(top_gain, gain[c]);
    }
    v.is_w = worst[own_idx] >= best_worst - vtol;
    v.is_b = best[own_idx] >= best_best - vtol;
    v.is_wr = worst_regret[own_idx] <= least_regret + vtol;
    v.is_u = top_gain <= vtol;
    if (own_pure) {
        bool weak_all = true, strict_all = true, tie_free = true;
        for (std::size_t b = 0; b < k; ++b) {
            if (b == *own_pure) continue;
            weak_all = weak_all && pure_min[b] >= -vtol;
            strict_all = strict_all && pure_min[b] > vtol;
            tie_free = tie_free && !(pure_max[b] <= vtol);
        }
        v.is_d = weak_all && tie_free;
        v.is_sd = strict_all;
    }
    return v;
}

// ---- threshold location ----

enum class ClaimPattern { Monotone, AlwaysTrue, AlwaysFalse, NonMonotone };

inline std::string to_string(ClaimPattern p) {
    switch (p) {
        case ClaimPattern::Monotone: return "monotone";
        case ClaimPattern::AlwaysTrue: return "always-true";
        case ClaimPattern::AlwaysFalse: return "always-false";
        case ClaimPattern::NonMonotone: return "non-monotone";
    }
    return "?";
}

struct ThresholdResult {
    double threshold = 0.0;
    ClaimPattern pattern = ClaimPattern::Monotone;
    std::string note;
    double break_false = 0.0;  // on non-monotone claims: a failing radius
    double break_true = 0.0;   // followed by a larger passing radius
};

/**
 * Locates the radius where a claim flips from holding to failing. The claim
 * is probed at nine evenly spaced radii first: if it never fails the result
 * is hi (the claim may hold everywhere), if it never holds the result is lo,
 * and if it recovers after failing the claim is not monotone and the
 * offending pair is reported. Otherwise the first flip is bisected to xtol.
 */
inline ThresholdResult oracle_threshold(const std::function<bool(double)>& claim, double lo,
                                        double hi, double xtol = 1e-4) {
    if (!(lo < hi)) throw shape_error("threshold search needs lo < hi");
    ThresholdResult res;
    constexpr int kProbes = 9;
    bool probe[kProbes];
    double at[kProbes];
    for (int j = 0; j < kProbes; ++j) {
        at[j] = lo + (hi - lo) * double(j) / double(kProbes - 1);
        probe[j] = claim(at[j]);
    }
    int first_false = -1;
    for (int j = 0; j < kProbes; ++j)
        if (!probe[j]) {
            first_false = j;
            break;
        }
    if (first_false < 0) {
        res.pattern = ClaimPattern::AlwaysTrue;
        res.threshold = hi;
        res.note = "claim held at every probed radius; threshold is at least hi";
        return res;
    }
    for (int j = first_false + 1; j < kProbes; ++j)
        if (probe[j]) {
            res.pattern = ClaimPattern::NonMonotone;
            res.break_false = at[first_false];
            res.break_true = at[j];
            res.note = "claim fails at " + std::to_string(at[first_false]) +
                       " but holds again at " + std::to_string(at[j]);
            res.threshold = std::numeric_limits<double>::quiet_NaN();
            return res;
        }
    if (first_false == 0) {
        res.pattern = ClaimPattern::AlwaysFalse;
        res.threshold = lo;
        res.note = "claim failed at every probed radius; threshold is at most lo";
        return res;
    }
    double a = at[first_false - 1], b = at[first_false];
    while (b - a > xtol) {
        double m = 0.5 * (a + b);
        if (claim(m))
            a = m;
        else
            b = m;
    }
    res.threshold = 0.5 * (a + b);
    return res;
}

} // namespace dbeq
