#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dbeq/errors.hpp"
#include "dbeq/game.hpp"
#include "dbeq/metric.hpp"
#include "dbeq/random.hpp"
#include "dbeq/response.hpp"
#include "dbeq/simplex_grid.hpp"
#include "dbeq/threads.hpp"

namespace dbeq {

enum class Notion { Nash, W, B, WR, U, D, SD };

inline std::string to_string(Notion n) {
    switch (n) {
        case Notion::Nash: return "nash";
        case Notion::W: return "W";
        case Notion::B: return "B";
        case Notion::WR: return "WR";
        case Notion::U: return "U";
        case Notion::D: return "D";
        case Notion::SD: return "SD";
    }
    return "?";
}

inline Notion parse_notion(const std::string& s) {
    if (s == "nash" || s == "NASH") return Notion::Nash;
    if (s == "W") return Notion::W;
    if (s == "B") return Notion::B;
    if (s == "WR") return Notion::WR;
    if (s == "U") return Notion::U;
    if (s == "D") return Notion::D;
    if (s == "SD") return Notion::SD;
    throw shape_error("unknown notion \"" + s + "\" (expected nash, W, B, WR, U, D, or SD)");
}

namespace detail {

inline bool best_response_at(const Game& game, std::size_t player, const MixedStrategy& own,
                             const SubProfile& rest, double tol) {
    auto av = action_values(game, player, rest);
    double best = *std::max_element(av.begin(), av.end());
    double mine = 0.0;
    for (std::size_t a = 0; a < av.size(); ++a) mine += own[a] * av[a];
    return mine >= best - tol;
}

} // namespace detail

/** One player's side of a notion check, at the given decision tolerance. */
inline bool player_satisfies(const Game& game, const BeliefSet& belief, const MixedStrategy& own,
                             Notion notion, const SolverSettings& settings = {}) {
    if (notion == Notion::Nash)
        return detail::best_response_at(game, belief.owner, own, belief.center, settings.tol);
    detail::BeliefContext ctx(game, belief, settings);
    if (own.size() != ctx.own_actions()) throw shape_error("own strategy size mismatch");
    const double dtol = ctx.decision_tol();
    switch (notion) {
        case Notion::W:
            return ctx.extreme(own.probs(), false).value >= detail::outer_maximin(ctx).value - dtol;
        case Notion::B:
            return ctx.extreme(own.probs(), true).value >= detail::outer_maximax(ctx).value - dtol;
        case Notion::WR:
            return detail::worst_regret_of(ctx, own).value <=
                   detail::outer_min_regret(ctx).value + dtol;
        case Notion::U:
            return detail::undominated(ctx, own, dtol).undominated;
        case Notion::D:
            return detail::dominance_flags(ctx, own, dtol).dominant;
        case Notion::SD:
            return detail::dominance_flags(ctx, own, dtol).strictly_dominant;
        default:
            throw shape_error("unknown notion");
    }
}

struct EquilibriumReport {
    std::vector<MixedStrategy> strategies;
    std::vector<double> radii;
    Metric metric = Metric::LinfProduct;
    std::vector<ResponseClassification> per_player;
    bool nash = false;
    bool w = false, b = false, wr = false, u = false, d = false, sd = false;

    bool flag(Notion n) const {
        switch (n) {
            case Notion::Nash: return nash;
            case Notion::W: return w;
            case Notion::B: return b;
            case Notion::WR: return wr;
            case Notion::U: return u;
            case Notion::D: return d;
            case Notion::SD: return sd;
        }
        return false;
    }

    // Aggregated view of the per-player implication lattice.
    bool lattice_consistent() const {
        if (sd && !d) return false;
        if (d && !(w && b && wr && u)) return false;
        for (const auto& rc : per_player)
            if (!rc.flags_consistent()) return false;
        return true;
    }
};

/**
 * Classifies every player's strategy against beliefs centred at the others'
 * play, radius radii[i]. A profile is a ★-equilibrium when every player's
 * flag holds. The nash flag is the radius-zero best-response check and does
 * not depend on radii or metric.
 */
inline EquilibriumReport verify_equilibrium(const Game& game, const Profile& profile,
                                            const std::vector<double>& radii, Metric metric,
                                            const SolverSettings& settings = {}) {
    if (radii.size() != game.num_players())
        throw shape_error("one belief radius per player required");
    EquilibriumReport rep;
    rep.strategies = profile.strategies();
    rep.radii = radii;
    rep.metric = metric;
    rep.nash = rep.w = rep.b = rep.wr = rep.u = rep.d = rep.sd = true;
    for (std::size_t i = 0; i < game.num_players(); ++i) {
        BeliefSet belief(i, profile.opponents(i), radii[i], metric);
        ResponseClassification rc = classify_response(game, belief, profile.strategy(i), settings);
        rep.nash = rep.nash && detail::best_response_at(game, i, profile.strategy(i),
                                                        belief.center, settings.tol);
        rep.w = rep.w && rc.is_w;
        rep.b = rep.b && rc.is_b;
        rep.wr = rep.wr && rc.is_wr;
        rep.u = rep.u && rc.is_u;
        rep.d = rep.d && rc.is_d;
        rep.sd = rep.sd && rc.is_sd;
        rep.per_player.push_back(std::move(rc));
    }
    return rep;
}

/** All pure profiles that are ★-equilibria at the given radii. */
inline std::vector<std::vector<std::size_t>> enumerate_pure(const Game& game, Notion notion,
                                                            const std::vector<double>& radii,
                                                            Metric metric,
                                                            const SolverSettings& settings = {}) {
    if (radii.size() != game.num_players())
        throw shape_error("one belief radius per player required");
    std::vector<std::vector<std::size_t>> hits;
    std::vector<std::size_t> actions(game.num_players(), 0);
    while (true) {
        Profile prof = Profile::pure(game, actions);
        bool all = true;
        for (std::size_t i = 0; i < game.num_players() && all; ++i) {
            if (notion == Notion::Nash) {
                all = detail::best_response_at(game, i, prof.strategy(i), prof.opponents(i),
                                               settings.tol);
            } else {
                BeliefSet belief(i, prof.opponents(i), radii[i], metric);
                all = player_satisfies(game, belief, prof.strategy(i), notion, settings);
            }
        }
        if (all) hits.push_back(actions);
        std::size_t j = game.num_players();
        while (j > 0) {
            --j;
            if (++actions[j] < game.num_actions(j)) break;
            actions[j] = 0;
            if (j == 0) return hits;
        }
    }
}

// ---- support enumeration for exact Nash points (two players) ----

struct NashPoint {
    std::vector<MixedStrategy> strategies;
    bool totally_mixed = false;
};

struct NashEnumeration {
    std::vector<NashPoint> equilibria;
    std::vector<std::string> degenerate_notes;
};

/**
 * Classic equal-size support enumeration: for each support pair, solve the
 * indifference systems and keep solutions that are nonnegative and deviation
 * free. Singular indifference systems are skipped with a note; they flag a
 * degenerate game whose equilibria may form components this method cannot
 * list exhaustively.
 */
inline NashEnumeration nash_support_enumeration(const Game& game,
                                                const SolverSettings& settings = {}) {
    if (game.num_players() != 2)
        throw capability_error("support enumeration is implemented for two players");
    const std::size_t k0 = game.num_actions(0), k1 = game.num_actions(1);
    if (k0 > 5 || k1 > 5) throw capability_error("support enumeration capped at 5 actions");

    // payoff matrices U0[a][c], U1[a][c] with a = player 0's action
    std::vector<std::vector<double>> U0(k0, std::vector<double>(k1)),
        U1(k0, std::vector<double>(k1));
    for (std::size_t a = 0; a < k0; ++a)
        for (std::size_t c = 0; c < k1; ++c) {
            U0[a][c] = game.payoff(0, {a, c});
            U1[a][c] = game.payoff(1, {a, c});
        }

    NashEnumeration out;
    auto subsets = [](std::size_t k, std::size_t s) {
        std::vector<std::vector<std::size_t>> subs;
        std::vector<std::size_t> pick(s);
        for (std::size_t i = 0; i < s; ++i) pick[i] = i;
        while (true) {
            subs.push_back(pick);
            std::size_t i = s;
            bool done = true;
            while (i > 0) {
                --i;
                if (pick[i] + (s - i) < k) {
                    ++pick[i];
                    for (std::size_t j = i + 1; j < s; ++j) pick[j] = pick[j - 1] + 1;
                    done = false;
                    break;
                }
            }
            if (done) break;
        }
        return subs;
    };

    // Solve for the opponent mix y over support T that makes the rows in S
    // indifferent; nullopt on a singular system.
    auto indifferent_mix =
        [&](const std::vector<std::vector<double>>& U, const std::vector<std::size_t>& S,
            const std::vector<std::size_t>& T) -> std::optional<std::vector<double>> {
        const std::size_t s = S.size();
        std::vector<std::vector<double>> A(s, std::vector<double>(s, 0.0));
        std::vector<double> b(s, 0.0);
        for (std::size_t l = 0; l + 1 < s; ++l)
            for (std::size_t j = 0; j < s; ++j) A[l][j] = U[S[l + 1]][T[j]] - U[S[0]][T[j]];
        for (std::size_t j = 0; j < s; ++j) A[s - 1][j] = 1.0;
        b[s - 1] = 1.0;
        std::vector<double> y;
        if (!detail::solve_square(std::move(A), std::move(b), y, 1e-12)) return std::nullopt;
        return y;
    };

    auto expand = [](const std::vector<double>& y, const std::vector<std::size_t>& T,
                     std::size_t k) {
        std::vector<double> full(k, 0.0);
        for (std::size_t j = 0; j < T.size(); ++j) full[T[j]] = y[j];
        return full;
    };

    const double eps = 1e-9;
    for (std::size_t s = 1; s <= std::min(k0, k1); ++s) {
        for (const auto& S0 : subsets(k0, s)) {
            for (const auto& S1 : subsets(k1, s)) {
                auto y = indifferent_mix(U0, S0, S1);  // player 1's mix
                auto x = [&]() -> std::optional<std::vector<double>> {
                    // player 2's indifference over S1 determines player 1's mix
                    std::vector<std::vector<double>> U1t(k1, std::vector<double>(k0));
                    for (std::size_t a = 0; a < k0; ++a)
                        for (std::size_t c = 0; c < k1; ++c) U1t[c][a] = U1[a][c];
                    return indifferent_mix(U1t, S1, S0);
                }();
                if (!y || !x) {
                    out.degenerate_notes.push_back(
                        "singular indifference system for supports {" + std::to_string(s) +
                        "}-sized; skipped");
                    continue;
                }
                bool ok = true;
                for (double v : *y)
                    if (v < -eps) ok = false;
                for (double v : *x)
                    if (v < -eps) ok = false;
                if (!ok) continue;
                std::vector<double> xf = expand(*x, S0, k0), yf = expand(*y, S1, k1);
                for (double& v : xf) v = std::max(v, 0.0);
                for (double& v : yf) v = std::max(v, 0.0);
                MixedStrategy mx = MixedStrategy::normalized(std::move(xf));
                MixedStrategy my = MixedStrategy::normalized(std::move(yf));
                // no profitable deviation for either player
                if (!detail::best_response_at(game, 0, mx, {my}, eps)) continue;
                if (!detail::best_response_at(game, 1, my, {mx}, eps)) continue;
                bool dup = false;
                for (const auto& e : out.equilibria)
                    if (linf_gap(e.strategies[0], mx) < 1e-8 && linf_gap(e.strategies[1], my) < 1e-8)
                        dup = true;
                if (dup) continue;
                NashPoint pt;
                pt.strategies = {mx, my};
                pt.totally_mixed = mx.totally_mixed() && my.totally_mixed();
                out.equilibria.push_back(std::move(pt));
            }
        }
    }
    (void)settings;
    return out;
}

// ---- grid search over mixed profiles (two players) ----

struct GridSearchResult {
    std::vector<std::vector<MixedStrategy>> profiles;
    double grid_tol = 0.0;
    double resolution = 0.0;
    bool coarse_warning = false;  // grid tolerance too large to mean much
    bool suspected_bug = false;   // empty for a notion whose equilibria always exist
};

/**
 * Scans the product of barycentric grids for profiles where every player is
 * within grid tolerance of a ★-response. The tolerance spread * resolution
 * * (total actions) covers both the own-strategy rounding and the belief
 * center shift: moving a center by d moves the ball's extreme values by at
 * most the payoff Lipschitz constant times d (shrink any point of the
 * enlarged ball toward the center to land in the original one).
 */
inline GridSearchResult grid_search_mixed(const Game& game, Notion notion,
                                          const std::vector<double>& radii, Metric metric,
                                          double resolution,
                                          const SolverSettings& settings = {}) {
    if (game.num_players() != 2)
        throw capability_error("grid search is implemented for two players");
    if (game.num_actions(0) > 3 || game.num_actions(1) > 3)
        throw capability_error("grid search capped at 3 actions per player");
    if (!(resolution > 0.0) || resolution > 0.25)
        throw shape_error("grid resolution must lie in (0, 0.25]");
    if (radii.size() != 2) throw shape_error("one belief radius per player required");
    if (notion == Notion::Nash)
        throw shape_error("grid search takes a belief-set notion; use support enumeration for "
                          "exact equilibria");

    const std::size_t k0 = game.num_actions(0), k1 = game.num_actions(1);
    const double grid_tol =
        game.payoff_spread() * resolution * double(k0 + k1);
    auto grid0 = barycentric_grid(k0, resolution);
    auto grid1 = barycentric_grid(k1, resolution);

    // Per-center data for one player's check, cached across own candidates.
    struct CenterData {
        std::optional<detail::BeliefContext> ctx;
        double threshold = 0.0;  // maximin / maximax / min worst regret
    };
    auto make_center = [&](std::size_t player, const MixedStrategy& center_strategy,
                           double r) {
        CenterData cd;
        BeliefSet belief(player, {center_strategy}, r, metric);
        cd.ctx.emplace(game, belief, settings);
        switch (notion) {
            case Notion::W: cd.threshold = detail::outer_maximin(*cd.ctx).value; break;
            case Notion::B: cd.threshold = detail::outer_maximax(*cd.ctx).value; break;
            case Notion::WR: cd.threshold = detail::outer_min_regret(*cd.ctx).value; break;
            default: break;
        }
        return cd;
    };
    auto passes = [&](CenterData& cd, const MixedStrategy& own) {
        const auto& ctx = *cd.ctx;
        switch (notion) {
            case Notion::W:
                return ctx.extreme(own.probs(), false).value >= cd.threshold - grid_tol;
            case Notion::B:
                return ctx.extreme(own.probs(), true).value >= cd.threshold - grid_tol;
            case Notion::WR:
                return detail::worst_regret_of(ctx, own).value <= cd.threshold + grid_tol;
            case Notion::U: {
                // guaranteed-gain relaxation: nothing beats own by more than
                // grid_tol everywhere on the belief set
                if (!ctx.iterative())
                    return detail::max_guaranteed_gain_vertex(ctx, own).value <= grid_tol;
                return detail::undominated_l2(ctx, own, grid_tol).undominated;
            }
            case Notion::D:
                return detail::dominance_flags(ctx, own, grid_tol).dominant;
            case Notion::SD:
                return detail::dominance_flags(ctx, own, grid_tol).strictly_dominant;
            default:
                return false;
        }
    };

    // player 0 checked against centers from grid1 and vice versa
    std::vector<CenterData> centers0, centers1;
    centers0.reserve(grid1.size());
    for (const auto& c : grid1) centers0.push_back(make_center(0, c, radii[0]));
    centers1.reserve(grid0.size());
    for (const auto& c : grid0) centers1.push_back(make_center(1, c, radii[1]));

    GridSearchResult res;
    res.grid_tol = grid_tol;
    res.resolution = resolution;
    res.coarse_warning = grid_tol > 0.25 * game.payoff_spread();
    for (std::size_t i1 = 0; i1 < grid1.size(); ++i1) {
        std::vector<std::size_t> pass0;
        for (std::size_t i0 = 0; i0 < grid0.size(); ++i0)
            if (passes(centers0[i1], grid0[i0])) pass0.push_back(i0);
        for (std::size_t i0 : pass0)
            if (passes(centers1[i0], grid1[i1]))
                res.profiles.push_back({grid0[i0], grid1[i1]});
    }
    bool must_exist = notion == Notion::W || notion == Notion::B || notion == Notion::WR;
    res.suspected_bug = must_exist && res.profiles.empty();
    return res;
}

// ---- robustness against one-action trembles ----

struct RobustnessViolation {
    std::size_t player = 0;
    SubProfile vertex;
    std::size_t better_action = 0;
    double gap = 0.0;
};

struct RobustnessReport {
    bool robust = true;
    double eps = 0.0;
    std::vector<RobustnessViolation> violations;
};

/**
 * A pure profile is eps-robust when each player's action stays a best
 * response while every opponent independently leaks up to eps of mass onto
 * one alternative action. By multilinearity it suffices to check the
 * extreme leak combinations.
 */
inline RobustnessReport robust_check(const Game& game, const std::vector<std::size_t>& pure,
                                     double eps, const SolverSettings& settings = {}) {
    Profile prof = Profile::pure(game, pure);
    RobustnessReport rep;
    rep.eps = eps;
    for (std::size_t i = 0; i < game.num_players(); ++i) {
        auto variants = noisy_variant_vertices(prof.opponents(i), eps);
        for (const auto& v : variants) {
            auto av = action_values(game, i, v);
            std::size_t best = 0;
            for (std::size_t a = 1; a < av.size(); ++a)
                if (av[a] > av[best]) best = a;
            if (av[pure[i]] < av[best] - settings.tol) {
                rep.robust = false;
                rep.violations.push_back({i, v, best, av[best] - av[pure[i]]});
            }
        }
    }
    return rep;
}

// ---- trembling-hand ladders ----

struct LadderRung {
    int index = 0;
    double eps = 0.0;
    std::vector<bool> best;      // per player: strategy still a best response
    std::vector<bool> strict;    // per player: strictly better than every other action
    std::vector<double> margin;  // per player: value minus best alternative value
    bool all_best = false;
};

struct LadderFamily {
    std::string label;
    std::vector<LadderRung> rungs;
    bool all_best = false;
    bool tail_fail = false;    // some player fails at every late rung
    bool strict_tail = false;  // every player strict at every late rung
};

enum class LadderVerdict { Supported, Refuted, Inconclusive };

inline std::string to_string(LadderVerdict v) {
    switch (v) {
        case LadderVerdict::Supported: return "supported";
        case LadderVerdict::Refuted: return "refuted";
        case LadderVerdict::Inconclusive: return "inconclusive";
    }
    return "?";
}

struct LadderReport {
    LadderVerdict verdict = LadderVerdict::Inconclusive;
    std::vector<LadderFamily> families;
    bool strict_t_evidence = false;
    bool strict_tp_evidence = false;
    std::string note = "finite tremble ladder: evidence about the limit notions, not a certificate";
};

/**
 * Tests the profile against vanishing trembles eps_k = 2^-k along built-in
 * totally mixed families: the uniform contamination and, for each choice of
 * a leaned-on action per player, a directional contamination (blended with
 * a little uniform mass to stay totally mixed). Supported means some family
 * passes every rung; refuted means every family eventually fails for some
 * player; everything else is inconclusive.
 */
inline LadderReport trembling_ladder(const Game& game, const Profile& profile, int max_rung = 40,
                                     const SolverSettings& settings = {}) {
    const std::size_t n = game.num_players();
    const int tail_from = max_rung / 2;
    const double gamma = 0.1;  // uniform share inside a directional tremble

    std::vector<std::pair<std::string, std::vector<MixedStrategy>>> families;
    {
        std::vector<MixedStrategy> uni;
        for (std::size_t j = 0; j < n; ++j) uni.push_back(MixedStrategy::uniform(game.num_actions(j)));
        families.push_back({"uniform", std::move(uni)});
        std::size_t combos = 1;
        bool small = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (combos > 64 / game.num_actions(j)) {
                small = false;
                break;
            }
            combos *= game.num_actions(j);
        }
        if (small) {
            std::vector<std::size_t> dir(n, 0);
            while (true) {
                std::vector<MixedStrategy> target;
                std::string label = "toward(";
                for (std::size_t j = 0; j < n; ++j) {
                    const std::size_t kj = game.num_actions(j);
                    std::vector<double> p(kj, gamma / double(kj));
                    p[dir[j]] += 1.0 - gamma;
                    target.push_back(MixedStrategy::normalized(std::move(p)));
                    label += (j ? "," : "") + game.action_labels(j)[dir[j]];
                }
                label += ")";
                families.push_back({std::move(label), std::move(target)});
                std::size_t j = n;
                bool done = true;
                while (j > 0) {
                    --j;
                    if (++dir[j] < game.num_actions(j)) {
                        done = false;
                        break;
                    }
                    dir[j] = 0;
                }
                if (done) break;
            }
        }
    }

    LadderReport rep;
    for (auto& [label, target] : families) {
        LadderFamily fam;
        fam.label = label;
        fam.all_best = true;
        std::vector<int> fail_streak_from(n, -1);  // first rung of an unbroken failure tail
        std::vector<int> strict_broken_at(n, -1);
        for (int kk = 1; kk <= max_rung; ++kk) {
            LadderRung rung;
            rung.index = kk;
            rung.eps = std::ldexp(1.0, -kk);
            std::vector<MixedStrategy> perturbed;
            for (std::size_t j = 0; j < n; ++j) {
                std::vector<double> p(game.num_actions(j));
                for (std::size_t a = 0; a < p.size(); ++a)
                    p[a] = (1.0 - rung.eps) * profile.strategy(j)[a] + rung.eps * target[j][a];
                perturbed.push_back(MixedStrategy::normalized(std::move(p)));
            }
            rung.all_best = true;
            for (std::size_t i = 0; i < n; ++i) {
                SubProfile rest;
                for (std::size_t j = 0; j < n; ++j)
                    if (j != i) rest.push_back(perturbed[j]);
                auto av = action_values(game, i, rest);
                double mine = 0.0, best = av[0];
                for (std::size_t a = 0; a < av.size(); ++a) {
                    mine += profile.strategy(i)[a] * av[a];
                    best = std::max(best, av[a]);
                }
                bool is_best = mine >= best - settings.tol;
                bool is_strict = false;
                if (auto own = profile.strategy(i).pure_action()) {
                    is_strict = true;
                    for (std::size_t a = 0; a < av.size(); ++a)
                        if (a != *own && av[*own] <= av[a] + settings.tol) is_strict = false;
                }
                rung.best.push_back(is_best);
                rung.strict.push_back(is_strict);
                rung.margin.push_back(mine - best);
                rung.all_best = rung.all_best && is_best;
                if (!is_best) {
                    if (fail_streak_from[i] < 0) fail_streak_from[i] = kk;
                } else {
                    fail_streak_from[i] = -1;
                }
                if (!is_strict && kk >= tail_from && strict_broken_at[i] < 0)
                    strict_broken_at[i] = kk;
            }
            fam.all_best = fam.all_best && rung.all_best;
            fam.rungs.push_back(std::move(rung));
        }
        for (std::size_t i = 0; i < n; ++i)
            if (fail_streak_from[i] >= 0 && fail_streak_from[i] <= tail_from) fam.tail_fail = true;
        fam.strict_tail = true;
        for (std::size_t i = 0; i < n; ++i)
            if (strict_broken_at[i] >= 0) fam.strict_tail = false;
        rep.families.push_back(std::move(fam));
    }

    bool any_all_best = false, all_tail_fail = true;
    bool any_strict_tail = false, all_strict_tail = true;
    for (const auto& fam : rep.families) {
        any_all_best = any_all_best || fam.all_best;
        all_tail_fail = all_tail_fail && fam.tail_fail;
        any_strict_tail = any_strict_tail || (fam.all_best && fam.strict_tail);
        all_strict_tail = all_strict_tail && fam.strict_tail;
    }
    rep.verdict = any_all_best ? LadderVerdict::Supported
                               : (all_tail_fail ? LadderVerdict::Refuted
                                                : LadderVerdict::Inconclusive);
    rep.strict_t_evidence = any_strict_tail;
    rep.strict_tp_evidence = all_strict_tail && any_all_best;
    return rep;
}

struct Perfect2pReport {
    bool perfect = false;
    bool nash = false;
    std::vector<bool> undominated;
};

/**
 * Exact two-player check via the standard characterisation: a profile is
 * trembling-hand perfect iff it is a Nash equilibrium in which neither
 * strategy is weakly dominated (over the opponent's full simplex).
 */
inline Perfect2pReport trembling_perfect_2p(const Game& game, const Profile& profile,
                                            const SolverSettings& settings = {}) {
    if (game.num_players() != 2)
        throw capability_error("the exact perfection check is two-player only");
    Perfect2pReport rep;
    rep.nash = true;
    for (std::size_t i = 0; i < 2; ++i)
        rep.nash = rep.nash && detail::best_response_at(game, i, profile.strategy(i),
                                                        profile.opponents(i), settings.tol);
    for (std::size_t i = 0; i < 2; ++i) {
        // radius 1 under the box metric covers the whole opponent simplex
        BeliefSet full(i, profile.opponents(i), 1.0, Metric::LinfProduct);
        detail::BeliefContext ctx(game, full, settings);
        rep.undominated.push_back(
            detail::undominated_vertex(ctx, profile.strategy(i), settings.tol).undominated);
    }
    rep.perfect = rep.nash && rep.undominated[0] && rep.undominated[1];
    return rep;
}

// ---- randomized implication audit ----

struct AuditViolation {
    std::size_t game_index = 0;
    std::string rule;
    std::string detail;
};

struct AuditReport {
    std::size_t games = 0;
    std::uint64_t checks = 0;
    std::vector<AuditViolation> violations;
};

namespace detail {

inline std::string profile_key(const std::vector<MixedStrategy>& strategies) {
    std::string s;
    for (const auto& st : strategies) {
        s += "(";
        for (std::size_t a = 0; a < st.size(); ++a)
            s += (a ? "," : "") + std::to_string(st[a]);
        s += ")";
    }
    return s;
}

} // namespace detail

/**
 * Hammers randomly generated games with every cross-implication the notions
 * must satisfy: the dominance chain, the radius monotonicity of strict
 * dominance, the uniqueness bridges into undominatedness, the zero-radius
 * collapse onto best responses, and the tremble-robustness bridge for pure
 * profiles under the Euclidean metric. Any violation is reported with the
 * seed and profile that reproduce it.
 */
inline AuditReport implication_audit(std::uint64_t seed, std::size_t num_games,
                                     const std::vector<std::size_t>& shape,
                                     const std::vector<double>& radii_in, Metric metric,
                                     const SolverSettings& settings = {}) {
    if (shape.size() < 2 || shape.size() > 3)
        throw shape_error("audit supports 2 or 3 players");
    for (std::size_t k : shape)
        if (k < 2 || k > 3) throw shape_error("audit supports 2 or 3 actions per player");
    std::vector<double> radii = radii_in;
    std::sort(radii.begin(), radii.end());
    const std::size_t n = shape.size();

    struct GameResult {
        std::uint64_t checks = 0;
        std::vector<AuditViolation> violations;
    };
    std::vector<GameResult> results(num_games);

    parallel_for(num_games, [&](std::size_t g) {
        GameResult& out = results[g];
        Rng rng(derive_seed(seed, g));
        Game game = random_game(rng, shape);
        auto note = [&](const std::string& rule, const std::string& detail_str) {
            out.violations.push_back({g, rule, detail_str});
        };

        std::vector<std::vector<MixedStrategy>> profiles;
        {
            std::vector<std::size_t> actions(n, 0);
            while (true) {
                std::vector<MixedStrategy> prof;
                for (std::size_t j = 0; j < n; ++j)
                    prof.push_back(MixedStrategy::pure(shape[j], actions[j]));
                profiles.push_back(std::move(prof));
                std::size_t j = n;
                bool done = true;
                while (j > 0) {
                    --j;
                    if (++actions[j] < shape[j]) {
                        done = false;
                        break;
                    }
                    actions[j] = 0;
                }
                if (done) break;
            }
            for (int extra = 0; extra < 2; ++extra) {
                std::vector<MixedStrategy> prof;
                for (std::size_t j = 0; j < n; ++j) prof.push_back(random_mixed(rng, shape[j]));
                profiles.push_back(std::move(prof));
            }
        }

        for (const auto& strategies : profiles) {
            Profile prof(game, strategies);
            for (std::size_t i = 0; i < n; ++i) {
                std::vector<bool> sd_by_radius;
                for (double r : radii) {
                    BeliefSet belief(i, prof.opponents(i), r, metric);
                    ResponseClassification rc = classify_response(game, belief, strategies[i],
                                                                  settings);
                    ++out.checks;
                    if (!rc.flags_consistent())
                        note("dominance-chain", detail::profile_key(strategies) + " player " +
                                                    std::to_string(i) + " r=" + std::to_string(r));
                    sd_by_radius.push_back(rc.is_sd);
                    if (r == 0.0) {
                        bool br = detail::best_response_at(game, i, strategies[i],
                                                           prof.opponents(i), settings.tol);
                        if (rc.is_w != br || rc.is_b != br || rc.is_wr != br || rc.is_u != br ||
                            rc.is_d != rc.is_sd)
                            note("zero-radius-collapse",
                                 detail::profile_key(strategies) + " player " + std::to_string(i));
                    }
                    if (rc.path == PathKind::Vertex) {
                        // a unique outer-notion witness must itself be undominated
                        if (maximin_witness_unique(game, belief, settings) &&
                            !player_satisfies(game, belief, rc.maximin.strategy, Notion::U,
                                              settings))
                            note("unique-maximin-undominated",
                                 detail::profile_key(strategies) + " player " + std::to_string(i) +
                                     " r=" + std::to_string(r));
                        if (min_regret_witness_unique(game, belief, settings) &&
                            !player_satisfies(game, belief, rc.min_worst_regret.strategy,
                                              Notion::U, settings))
                            note("unique-minregret-undominated",
                                 detail::profile_key(strategies) + " player " + std::to_string(i) +
                                     " r=" + std::to_string(r));
                        if (maximax_witness_unique(game, belief, settings) &&
                            !player_satisfies(game, belief, rc.maximax.strategy, Notion::U,
                                              settings))
                            note("unique-maximax-undominated",
                                 detail::profile_key(strategies) + " player " + std::to_string(i) +
                                     " r=" + std::to_string(r));
                    }
                }
                for (std::size_t lo = 0; lo < sd_by_radius.size(); ++lo)
                    for (std::size_t hi = lo + 1; hi < sd_by_radius.size(); ++hi)
                        if (sd_by_radius[hi] && !sd_by_radius[lo])
                            note("sd-radius-monotone",
                                 detail::profile_key(strategies) + " player " + std::to_string(i));
            }
        }

        // tremble-robustness bridge, pure profiles only
        std::vector<std::size_t> actions(n, 0);
        while (true) {
            for (double r : radii) {
                if (r <= 0.0 || r >= 1.0) continue;
                ++out.checks;
                Profile prof = Profile::pure(game, actions);
                bool d_eq = true;
                for (std::size_t i = 0; i < n && d_eq; ++i) {
                    BeliefSet belief(i, prof.opponents(i), r, Metric::L2Concat);
                    d_eq = player_satisfies(game, belief, prof.strategy(i), Notion::D, settings);
                }
                if (robust_check(game, actions, r, settings).robust && !d_eq)
                    note("robust-implies-dominant", detail::profile_key(prof.strategies()) +
                                                        " eps=" + std::to_string(r));
                // a single leaking opponent moves the concatenated point by
                // eps * sqrt(2), so eps = r / sqrt(2 (n-1)) keeps every
                // tremble vertex inside the Euclidean ball of radius r
                double shrunk = r / std::sqrt(2.0 * double(n - 1));
                if (d_eq && !robust_check(game, actions, shrunk, settings).robust)
                    note("dominant-implies-robust", detail::profile_key(prof.strategies()) +
                                                        " r=" + std::to_string(r));
            }
            std::size_t j = n;
            bool done = true;
            while (j > 0) {
                --j;
                if (++actions[j] < shape[j]) {
                    done = false;
                    break;
                }
                actions[j] = 0;
            }
            if (done) break;
        }
    });

    AuditReport rep;
    rep.games = num_games;
    for (auto& r : results) {
        rep.checks += r.checks;
        for (auto& v : r.violations) rep.violations.push_back(std::move(v));
    }
    return rep;
}

} // namespace dbeq
