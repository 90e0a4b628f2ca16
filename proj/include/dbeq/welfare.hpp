#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dbeq/equilibrium.hpp"
#include "dbeq/errors.hpp"
#include "dbeq/game.hpp"
#include "dbeq/metric.hpp"
#include "dbeq/random.hpp"
#include "dbeq/response.hpp"

namespace dbeq {

struct PoaResult {
    double optimum = 0.0;          // best social welfare over pure profiles
    double worst_equilibrium = 0.0;  // worst social welfare among the given equilibria
    double ratio = 1.0;
    bool defined = false;  // false when no equilibrium was supplied / found
};

/** Price of anarchy over an explicit equilibrium list. */
inline PoaResult price_of_anarchy(const Game& game,
                                  const std::vector<std::vector<MixedStrategy>>& equilibria) {
    PoaResult res;
    std::vector<std::size_t> actions(game.num_players(), 0);
    res.optimum = -std::numeric_limits<double>::infinity();
    while (true) {
        res.optimum = std::max(res.optimum, social_welfare_pure(game, actions));
        std::size_t j = game.num_players();
        bool done = true;
        while (j > 0) {
            --j;
            if (++actions[j] < game.num_actions(j)) {
                done = false;
                break;
            }
            actions[j] = 0;
        }
        if (done) break;
    }
    if (equilibria.empty()) return res;
    res.defined = true;
    res.worst_equilibrium = std::numeric_limits<double>::infinity();
    for (const auto& eq : equilibria) {
        Profile prof(game, eq);
        res.worst_equilibrium = std::min(res.worst_equilibrium, social_welfare(game, prof));
    }
    if (res.worst_equilibrium <= 0.0)
        throw shape_error("price of anarchy needs positive welfare at equilibria; shift payoffs "
                          "to be positive first");
    res.ratio = res.optimum / res.worst_equilibrium;
    return res;
}

// ---- distance sensitivity of expected utilities ----

struct DeltaEstimate {
    double lower = 1.0;  // largest ratio seen across samples (a certified lower bound)
    double upper = 1.0;  // max payoff over min payoff (always valid)
    std::size_t samples = 0;
};

/**
 * Estimates how far expected utilities can drift between nearby profiles:
 * the supremum of u_i(center) / u_i(point) over players and over points
 * within distance r of the center. Requires strictly positive payoffs so
 * the ratio is meaningful; otherwise instructs the caller to shift.
 *
 * Sampling walks straight segments from random centers toward random
 * targets, plus segments anchored at pure profiles (where the extremes of
 * multilinear ratios tend to live). Along a segment the utility is linear
 * in the step, so the ratio against the fixed center value is monotone in
 * the step size; the per-segment maximum sits at the largest step, which
 * makes the lower estimate nondecreasing in r for a fixed seed.
 */
inline DeltaEstimate delta_estimate(const Game& game, double r, Metric metric,
                                    std::uint64_t seed = 17, std::size_t num_segments = 64) {
    if (game.min_payoff() <= 0.0)
        throw shape_error("delta estimate needs strictly positive payoffs; add a constant to "
                          "every payoff first");
    if (r < 0.0) throw shape_error("radius must be nonnegative");
    DeltaEstimate est;
    est.upper = game.max_payoff() / game.min_payoff();
    if (r == 0.0) {
        est.lower = 1.0;
        est.upper = 1.0;
        return est;
    }
    const std::size_t n = game.num_players();

    auto push_segment = [&](const std::vector<MixedStrategy>& center,
                            const std::vector<MixedStrategy>& target) {
        // walk each player's belief: opponents drift from center toward target
        for (std::size_t i = 0; i < n; ++i) {
            SubProfile base, goal;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                base.push_back(center[j]);
                goal.push_back(target[j]);
            }
            double d = 0.0;
            switch (metric) {
                case Metric::L2Concat: {
                    double s = 0.0;
                    for (std::size_t j = 0; j < base.size(); ++j)
                        for (std::size_t a = 0; a < base[j].size(); ++a)
                            s += (goal[j][a] - base[j][a]) * (goal[j][a] - base[j][a]);
                    d = std::sqrt(s);
                    break;
                }
                case Metric::L1Concat: {
                    double s = 0.0;
                    for (std::size_t j = 0; j < base.size(); ++j)
                        for (std::size_t a = 0; a < base[j].size(); ++a)
                            s += std::abs(goal[j][a] - base[j][a]);
                    d = s;
                    break;
                }
                case Metric::LinfProduct: {
                    for (std::size_t j = 0; j < base.size(); ++j)
                        for (std::size_t a = 0; a < base[j].size(); ++a)
                            d = std::max(d, std::abs(goal[j][a] - base[j][a]));
                    break;
                }
            }
            if (d <= 0.0) continue;
            const double t_max = std::min(1.0, r / d);
            auto own_values_at = [&](double t) {
                SubProfile rest;
                for (std::size_t j = 0; j < base.size(); ++j) {
                    std::vector<double> p(base[j].size());
                    for (std::size_t a = 0; a < p.size(); ++a)
                        p[a] = (1.0 - t) * base[j][a] + t * goal[j][a];
                    rest.push_back(MixedStrategy::normalized(std::move(p)));
                }
                return action_values(game, i, rest);
            };
            auto at_center = own_values_at(0.0);
            for (int step = 1; step <= 8; ++step) {
                double t = t_max * double(step) / 8.0;
                auto at_t = own_values_at(t);
                for (std::size_t a = 0; a < at_t.size(); ++a) {
                    est.lower = std::max(est.lower, at_center[a] / at_t[a]);
                    est.lower = std::max(est.lower, at_t[a] / at_center[a]);
                }
                ++est.samples;
            }
        }
    };

    // structured segments: pure center toward each pure target
    std::vector<std::vector<std::size_t>> pures;
    {
        std::vector<std::size_t> actions(n, 0);
        while (true) {
            pures.push_back(actions);
            std::size_t j = n;
            bool done = true;
            while (j > 0) {
                --j;
                if (++actions[j] < game.num_actions(j)) {
                    done = false;
                    break;
                }
                actions[j] = 0;
            }
            if (done) break;
        }
    }
    auto as_profile = [&](const std::vector<std::size_t>& acts) {
        std::vector<MixedStrategy> prof;
        for (std::size_t j = 0; j < n; ++j)
            prof.push_back(MixedStrategy::pure(game.num_actions(j), acts[j]));
        return prof;
    };
    if (pures.size() <= 64) {
        for (const auto& c : pures)
            for (const auto& t : pures)
                if (c != t) push_segment(as_profile(c), as_profile(t));
    }

    Rng rng(seed);
    for (std::size_t s = 0; s < num_segments; ++s) {
        std::vector<MixedStrategy> center, target;
        for (std::size_t j = 0; j < n; ++j) {
            center.push_back(random_mixed(rng, game.num_actions(j)));
            target.push_back(random_mixed(rng, game.num_actions(j)));
        }
        push_segment(center, target);
    }
    return est;
}

// ---- smoothness ----

struct SmoothnessFit {
    double lambda = 0.0;
    double mu = 0.0;
    bool found = false;
};

/**
 * Searches for constants lambda > 0, mu >= 0 such that for every pair of
 * pure profiles (a, a*):  sum_i u_i(a*_i, a_-i) >= lambda * SW(a*) - mu * SW(a).
 * Parametrised by t = lambda / (1 + mu), which bisects cleanly: larger t is
 * harder to satisfy, and for a fixed t the smallest feasible mu is a max of
 * per-pair ratios.
 */
inline SmoothnessFit smoothness_fit(const Game& game) {
    if (game.min_payoff() <= 0.0)
        throw shape_error("smoothness fit needs strictly positive payoffs; add a constant to "
                          "every payoff first");
    const std::size_t n = game.num_players();
    std::vector<std::vector<std::size_t>> pures;
    {
        std::vector<std::size_t> actions(n, 0);
        while (true) {
            pures.push_back(actions);
            std::size_t j = n;
            bool done = true;
            while (j > 0) {
                --j;
                if (++actions[j] < game.num_actions(j)) {
                    done = false;
                    break;
                }
                actions[j] = 0;
            }
            if (done) break;
        }
    }
    struct Pair {
        double deviation_sum;  // sum_i u_i(a*_i, a_-i)
        double sw_star;
        double sw_a;
    };
    std::vector<Pair> pairs;
    pairs.reserve(pures.size() * pures.size());
    for (const auto& a : pures) {
        double sw_a = social_welfare_pure(game, a);
        for (const auto& astar : pures) {
            double dev = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<std::size_t> mixed = a;
                mixed[i] = astar[i];
                dev += game.payoff(i, mixed);
            }
            pairs.push_back({dev, social_welfare_pure(game, astar), sw_a});
        }
    }

    // Feasibility of t: need mu >= 0 with, for every pair,
    //   mu * (t * sw_star - sw_a)  <=  dev - t * sw_star.
    // Coefficients with c <= 0 give lower bounds on mu (or are free);
    // c > 0 gives an upper bound.
    auto min_mu_for = [&](double t) -> std::optional<double> {
        double lo = 0.0, hi = std::numeric_limits<double>::infinity();
        for (const auto& p : pairs) {
            double c = t * p.sw_star - p.sw_a;
            double rhs = p.deviation_sum - t * p.sw_star;
            if (c > 1e-12) {
                hi = std::min(hi, rhs / c);
            } else if (c < -1e-12) {
                lo = std::max(lo, rhs / c);
            } else if (rhs < -1e-12) {
                return std::nullopt;
            }
        }
        if (lo > hi + 1e-12) return std::nullopt;
        return lo;
    };

    SmoothnessFit fit;
    double t_lo = 0.0, t_hi = 1.0;
    if (!min_mu_for(1e-9)) return fit;  // not smooth in any useful sense
    for (int it = 0; it < 80; ++it) {
        double t = 0.5 * (t_lo + t_hi);
        if (min_mu_for(t))
            t_lo = t;
        else
            t_hi = t;
    }
    double t = t_lo > 0.0 ? t_lo : 1e-9;
    auto mu = min_mu_for(t);
    if (!mu) {
        t = 1e-9;
        mu = min_mu_for(t);
        if (!mu) return fit;
    }
    fit.mu = std::max(*mu, 0.0);
    fit.lambda = t * (1.0 + fit.mu);
    fit.found = fit.lambda > 1e-12;
    return fit;
}

struct PoaBound {
    bool applicable = false;
    double lambda = 0.0;
    double mu = 0.0;
    double delta_upper = 1.0;
    double bound = 0.0;       // guaranteed fraction of optimal welfare
    double optimum = 0.0;
    bool holds = true;        // every supplied equilibrium meets the bound
    std::vector<std::size_t> failures;  // indices of equilibria that broke it
};

/**
 * Welfare guarantee from smoothness: in a (lambda, mu)-smooth game with
 * positive payoffs, any profile whose strategies are worst-case or
 * best-case optimal at radius r (and any Nash profile, which is the r = 0
 * case) earns at least lambda / (delta^2 + mu) of the optimal welfare,
 * where delta bounds the utility drift across radius r. The provable
 * factor is lambda / (delta + mu); the reported one is the conservative
 * square. No such guarantee is claimed for the regret or undominated
 * notions.
 */
inline PoaBound poa_bound_check(const Game& game,
                                const std::vector<std::vector<MixedStrategy>>& equilibria,
                                double r, Metric metric, std::uint64_t seed = 17) {
    PoaBound out;
    SmoothnessFit fit = smoothness_fit(game);
    if (!fit.found) return out;
    DeltaEstimate delta = delta_estimate(game, r, metric, seed);
    out.applicable = true;
    out.lambda = fit.lambda;
    out.mu = fit.mu;
    out.delta_upper = delta.upper;
    out.bound = fit.lambda / (delta.upper * delta.upper + fit.mu);
    out.optimum = price_of_anarchy(game, {}).optimum;
    for (std::size_t e = 0; e < equilibria.size(); ++e) {
        Profile prof(game, equilibria[e]);
        double sw = social_welfare(game, prof);
        if (sw < out.bound * out.optimum - 1e-9) {
            out.holds = false;
            out.failures.push_back(e);
        }
    }
    return out;
}

// ---- consensus games ----

/**
 * Builds the n-player consensus game on k actions: everyone who matches the
 * modal action earns reward, everyone else earns penalty, and full agreement
 * on the distinguished first action earns bonus instead of reward. With
 * bonus > reward > penalty the all-first profile is the unique optimum.
 */
inline Game consensus_generate(std::size_t players, std::size_t actions_per_player,
                               double reward, double bonus, double penalty = 0.0) {
    if (players < 2) throw shape_error("consensus games need at least two players");
    if (actions_per_player < 2) throw shape_error("consensus games need at least two actions");
    if (!(bonus > reward) || !(reward > penalty))
        throw shape_error("consensus games need bonus > reward > penalty");
    std::vector<std::vector<std::string>> labels(players);
    for (std::size_t j = 0; j < players; ++j)
        for (std::size_t a = 0; a < actions_per_player; ++a)
            labels[j].push_back("c" + std::to_string(a));
    std::vector<std::size_t> shape(players, actions_per_player);
    std::size_t total = 1;
    for (std::size_t j = 0; j < players; ++j) total *= actions_per_player;
    std::vector<std::vector<double>> payoffs(players, std::vector<double>(total, 0.0));
    std::vector<std::size_t> profile(players, 0);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (std::size_t j = players; j > 0; --j) {
            profile[j - 1] = rem % actions_per_player;
            rem /= actions_per_player;
        }
        std::vector<std::size_t> count(actions_per_player, 0);
        for (std::size_t j = 0; j < players; ++j) ++count[profile[j]];
        std::size_t modal = 0;
        for (std::size_t a = 1; a < actions_per_player; ++a)
            if (count[a] > count[modal]) modal = a;
        bool unanimity_first = count[0] == players;
        for (std::size_t j = 0; j < players; ++j) {
            double v = penalty;
            if (unanimity_first)
                v = bonus;
            else if (profile[j] == modal && count[modal] > 1)
                v = reward;
            payoffs[j][flat] = v;
        }
    }
    std::vector<std::vector<double>> tensors;
    tensors.reserve(players);
    for (auto& p : payoffs) tensors.push_back(std::move(p));
    Game g(labels, tensors);
    return g;
}

struct ConsensusAudit {
    bool structure_recognized = false;  // payoff pattern matches the family
    std::size_t players = 0;
    std::size_t actions = 0;
    double reward = 0.0;
    double bonus = 0.0;
    bool unanimity_profiles_equilibria = true;  // every all-same profile passes W..U
    bool first_unanimity_sd_small_radius = true;
    std::vector<double> radii_checked;
    double poa_at_unanimity = 1.0;  // ratio using only the best unanimity profile
    double nash_poa = 1.0;          // ratio over all unanimity equilibria
};

/**
 * Checks the characteristic facts of a consensus game: every unanimity
 * profile is a ★-equilibrium for the permissive notions at small radii, the
 * optimum is all-first with PoA exactly 1 at that profile, and the worst
 * unanimity equilibrium drags Nash PoA to bonus / reward.
 */
inline ConsensusAudit consensus_audit(const Game& game, const std::vector<double>& radii,
                                      Metric metric, const SolverSettings& settings = {}) {
    ConsensusAudit rep;
    rep.players = game.num_players();
    rep.actions = game.num_actions(0);
    rep.radii_checked = radii;
    bool uniform_actions = true;
    for (std::size_t j = 0; j < rep.players; ++j)
        if (game.num_actions(j) != rep.actions) uniform_actions = false;
    if (!uniform_actions || rep.actions < 2) return rep;

    std::vector<std::size_t> all_first(rep.players, 0), all_second(rep.players, 1);
    rep.bonus = game.payoff(0, all_first);
    rep.reward = game.payoff(0, all_second);
    rep.structure_recognized = rep.bonus > rep.reward;
    if (!rep.structure_recognized) return rep;

    for (std::size_t a = 0; a < rep.actions; ++a) {
        std::vector<std::size_t> unanimous(rep.players, a);
        Profile prof = Profile::pure(game, unanimous);
        for (double r : radii) {
            EquilibriumReport er = verify_equilibrium(
                game, prof, std::vector<double>(rep.players, r), metric, settings);
            if (!(er.w && er.b && er.wr && er.u)) rep.unanimity_profiles_equilibria = false;
            if (a == 0 && r <= 0.0 && !er.nash) rep.unanimity_profiles_equilibria = false;
        }
    }

    // the distinguished unanimity stays strictly dominant only while the
    // radius is small relative to the bonus margin; probe the given radii
    {
        Profile prof = Profile::pure(game, all_first);
        for (double r : radii) {
            if (r > 0.05) continue;
            for (std::size_t i = 0; i < rep.players; ++i) {
                BeliefSet belief(i, prof.opponents(i), r, metric);
                detail::BeliefContext ctx(game, belief, settings);
                // strict dominance of the action, not the profile: compare
                // the first action against alternatives over the ball
                if (!detail::dominance_flags(ctx, prof.strategy(i), ctx.decision_tol())
                         .strictly_dominant &&
                    r > 0.0)
                    rep.first_unanimity_sd_small_radius = false;
            }
        }
    }

    double opt = price_of_anarchy(game, {}).optimum;
    double best_unanimity = social_welfare_pure(game, all_first);
    rep.poa_at_unanimity = opt / best_unanimity;
    double worst = best_unanimity;
    for (std::size_t a = 1; a < rep.actions; ++a) {
        std::vector<std::size_t> unanimous(rep.players, a);
        worst = std::min(worst, social_welfare_pure(game, unanimous));
    }
    rep.nash_poa = worst > 0.0 ? opt / worst : std::numeric_limits<double>::infinity();
    return rep;
}

} // namespace dbeq
