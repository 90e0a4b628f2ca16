#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dbeq/errors.hpp"
#include "dbeq/game.hpp"
#include "dbeq/linprog.hpp"
#include "dbeq/metric.hpp"
#include "dbeq/polytope.hpp"
#include "dbeq/simplex_grid.hpp"

namespace dbeq {

/**
 * All verdicts are tolerance-parameterised; these are the knobs. The vertex
 * path (polytope belief sets) decides at `tol`, the iterative l2 path at
 * `iter_tol` since its inner solves are bisections rather than closed-form.
 */
struct SolverSettings {
    double tol = 1e-9;
    double iter_tol = 1e-6;
    double cut_eps = 1e-9;    // convergence slack for cut generation
    int max_cuts = 400;
    double face_tol = 1e-7;   // optimizer-face width below which it counts as unique
};

// How a belief set got realised for computation.
//   Vertex:      explicit polytope vertices, exact scans and LPs.
//   L2Iterative: two players, round ball, projected-path inner solves.
//   L2Enclosure: 3+ players with a pure center; the ball is replaced by its
//                per-coordinate enclosure, which is the same polytope the
//                max-coordinate metric induces and the hull of the one-action
//                noise variants. Documented with the robustness bridge.
enum class PathKind { Vertex, L2Iterative, L2Enclosure };

inline std::string to_string(PathKind p) {
    switch (p) {
        case PathKind::Vertex: return "vertex";
        case PathKind::L2Iterative: return "l2-iterative";
        case PathKind::L2Enclosure: return "l2-enclosure";
    }
    return "?";
}

struct InnerPoint {
    double value = 0.0;
    SubProfile point;
};

struct RegretWitness {
    double value = 0.0;
    SubProfile point;
    std::size_t deviation = 0;  // the pure action the regret measures against
};

enum class OuterObjective { Maximin, Maximax, MinWorstRegret };

struct OuterOptimum {
    double value = 0.0;
    MixedStrategy strategy;
    SubProfile witness;  // the belief point where the optimum is realised
};

enum class DominanceRelation { None, Weak, Strict };

inline std::string to_string(DominanceRelation r) {
    switch (r) {
        case DominanceRelation::None: return "none";
        case DominanceRelation::Weak: return "weak";
        case DominanceRelation::Strict: return "strict";
    }
    return "?";
}

/**
 * Candidate-vs-incumbent comparison over a belief set. min_margin and
 * max_margin are the extreme values of the payoff difference; `margin` is
 * the one that certifies the relation (the minimum for strict, the witness
 * maximum for weak).
 */
struct DominanceVerdict {
    DominanceRelation relation = DominanceRelation::None;
    double margin = 0.0;
    double min_margin = 0.0;
    double max_margin = 0.0;
    std::optional<SubProfile> witness_better;
};

struct ResponseClassification {
    bool is_w = false, is_b = false, is_wr = false, is_u = false, is_d = false, is_sd = false;

    double worst_value = 0.0, best_value = 0.0, worst_regret = 0.0;
    double maximin = 0.0, maximax = 0.0, min_worst_regret = 0.0;

    SubProfile worst_witness, best_witness, regret_witness;
    std::optional<MixedStrategy> dominator;  // set when !is_u

    PathKind path = PathKind::Vertex;
    double decision_tol = 0.0;

    // The unconditional part of the implication lattice: strictly dominant
    // implies dominant, dominant implies all three outer notions and
    // undominated. (W/B/WR imply U only when their witness is unique.)
    bool flags_consistent() const {
        if (is_sd && !is_d) return false;
        if (is_d && !(is_w && is_b && is_wr && is_u)) return false;
        return true;
    }
};

namespace detail {

// ---- exact l2 inner solves (two players, one opponent simplex) ----

inline double l2_dist(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

/**
 * min w.v over { v in simplex : |v - x|_2 <= r }, exact witness included.
 *
 * Walks v(t) = proj(x - t w); |v(t) - x| is nondecreasing in t, and any t
 * with |v(t) - x| = r satisfies the KKT conditions of the constrained
 * problem exactly, so bisection on t solves it to bisection precision. If
 * the path never reaches the sphere, its limit is the simplex minimiser
 * nearest to x and lies inside the ball, so it is returned directly.
 */
inline InnerPoint l2_linear_min(const std::vector<double>& w, const std::vector<double>& x,
                                double r) {
    const std::size_t k = w.size();
    auto as_point = [](std::vector<double> v) {
        return SubProfile{MixedStrategy::normalized(std::move(v))};
    };

    std::size_t cmin = 0;
    double wmin = w[0], wmax = w[0], wnorm = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        if (w[c] < wmin) {
            wmin = w[c];
            cmin = c;
        }
        wmax = std::max(wmax, w[c]);
        wnorm += w[c] * w[c];
    }
    wnorm = std::sqrt(wnorm);

    std::vector<double> corner(k, 0.0);
    corner[cmin] = 1.0;
    if (l2_dist(corner, x) <= r) return {wmin, as_point(std::move(corner))};
    if (wmax - wmin <= 1e-14) {
        double v = 0.0;
        for (std::size_t c = 0; c < k; ++c) v += w[c] * x[c];
        return {v, as_point(x)};
    }

    auto point_at = [&](double t) {
        std::vector<double> y(k);
        for (std::size_t c = 0; c < k; ++c) y[c] = x[c] - t * w[c];
        return project_to_simplex(std::move(y));
    };

    double t_hi = r / wnorm;
    std::vector<double> v_hi = point_at(t_hi);
    int guard = 0;
    while (l2_dist(v_hi, x) < r && guard++ < 120) {
        t_hi *= 2.0;
        if (t_hi > 1e12) break;
        v_hi = point_at(t_hi);
    }
    if (l2_dist(v_hi, x) < r) {
        // path saturated inside the ball: simplex optimum is reachable
        double v = 0.0;
        for (std::size_t c = 0; c < k; ++c) v += w[c] * v_hi[c];
        return {v, as_point(std::move(v_hi))};
    }

    double lo = 0.0, hi = t_hi;
    std::vector<double> v_best = v_hi;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        std::vector<double> v_mid = point_at(mid);
        double g = l2_dist(v_mid, x);
        if (g < r) {
            lo = mid;
        } else {
            hi = mid;
            v_best = std::move(v_mid);
        }
        if (std::abs(g - r) <= 1e-14 || (hi - lo) <= 1e-15 * (1.0 + hi)) {
            if (g >= r) v_best = point_at(mid);
            break;
        }
    }
    // snap onto the sphere so the witness passes the membership check
    double g = l2_dist(v_best, x);
    if (g > r) {
        double f = r / g;
        for (std::size_t c = 0; c < k; ++c) v_best[c] = x[c] + f * (v_best[c] - x[c]);
    }
    double val = 0.0;
    for (std::size_t c = 0; c < k; ++c) val += w[c] * v_best[c];
    return {val, as_point(std::move(v_best))};
}

inline InnerPoint l2_linear_max(const std::vector<double>& w, const std::vector<double>& x,
                                double r) {
    std::vector<double> neg(w.size());
    for (std::size_t c = 0; c < w.size(); ++c) neg[c] = -w[c];
    InnerPoint p = l2_linear_min(neg, x, r);
    p.value = -p.value;
    return p;
}

// ---- belief realisation ----

class BeliefContext {
public:
    BeliefContext(const Game& game, const BeliefSet& belief, const SolverSettings& st)
        : game_(game), belief_(belief), st_(st) {
        check_sub_profile(game, belief.owner, belief.center);
        const std::size_t n = game.num_players();
        if (belief.radius == 0.0) {
            path_ = PathKind::Vertex;
            verts_ = {belief.center};
        } else {
            switch (belief.metric) {
                case Metric::LinfProduct:
                    path_ = PathKind::Vertex;
                    verts_ = ball_vertices(belief).vertices;
                    break;
                case Metric::L1Concat:
                    if (n != 2)
                        throw capability_error(
                            "l1 belief sets couple the opponents for 3+ players; extreme "
                            "values need not sit at product vertices, so this path is not "
                            "offered");
                    path_ = PathKind::Vertex;
                    verts_ = ball_vertices(belief).vertices;
                    break;
                case Metric::L2Concat:
                    if (covers_product()) {
                        path_ = PathKind::Vertex;
                        verts_ = simplex_product_vertices(belief.center);
                    } else if (n == 2) {
                        path_ = PathKind::L2Iterative;
                    } else if (center_pure()) {
                        path_ = PathKind::L2Enclosure;
                        BeliefSet twin(belief.owner, belief.center, belief.radius,
                                       Metric::LinfProduct);
                        verts_ = ball_vertices(twin).vertices;
                    } else {
                        throw capability_error(
                            "l2 belief sets with 3+ players are only supported around pure "
                            "centers (per-coordinate enclosure); mixed centers have no "
                            "exact finite realisation here");
                    }
                    break;
            }
        }
        if (path_ != PathKind::L2Iterative) {
            vav_.reserve(verts_.size());
            for (const auto& v : verts_) vav_.push_back(action_values(game_, belief_.owner, v));
        } else {
            // two players: the opponent is the other one
            const std::size_t opp = belief.owner == 0 ? 1 : 0;
            const std::size_t ka = game.num_actions(belief.owner);
            const std::size_t kc = game.num_actions(opp);
            payoff_rows_.assign(ka, std::vector<double>(kc, 0.0));
            std::vector<std::size_t> prof(2, 0);
            for (std::size_t a = 0; a < ka; ++a)
                for (std::size_t c = 0; c < kc; ++c) {
                    prof[belief.owner] = a;
                    prof[opp] = c;
                    payoff_rows_[a][c] = game.payoff(belief.owner, prof);
                }
            center_vec_ = belief.center[0].probs();
        }
    }

    const Game& game() const { return game_; }
    const BeliefSet& belief() const { return belief_; }
    const SolverSettings& settings() const { return st_; }
    std::size_t owner() const { return belief_.owner; }
    std::size_t own_actions() const { return game_.num_actions(belief_.owner); }
    PathKind path() const { return path_; }
    bool iterative() const { return path_ == PathKind::L2Iterative; }
    double decision_tol() const { return iterative() ? st_.iter_tol : st_.tol; }

    const std::vector<SubProfile>& vertices() const { return verts_; }
    const std::vector<std::vector<double>>& vertex_values() const { return vav_; }

    // Opponent-space coefficients of one own-action mixture (l2 path).
    std::vector<double> opp_coeffs(const std::vector<double>& own_coeffs) const {
        const std::size_t kc = payoff_rows_[0].size();
        std::vector<double> w(kc, 0.0);
        for (std::size_t a = 0; a < own_coeffs.size(); ++a) {
            if (own_coeffs[a] == 0.0) continue;
            for (std::size_t c = 0; c < kc; ++c) w[c] += own_coeffs[a] * payoff_rows_[a][c];
        }
        return w;
    }

    /**
     * Extreme value of v -> sum_a own_coeffs[a] * u(a, v) over the belief
     * set, with a witness. This one primitive carries values, regrets and
     * dominance margins on both paths.
     */
    InnerPoint extreme(const std::vector<double>& own_coeffs, bool maximize) const {
        if (own_coeffs.size() != own_actions()) throw shape_error("own coefficient length mismatch");
        if (!iterative()) {
            double best = 0.0;
            std::size_t arg = 0;
            for (std::size_t v = 0; v < verts_.size(); ++v) {
                double s = 0.0;
                for (std::size_t a = 0; a < own_coeffs.size(); ++a)
                    s += own_coeffs[a] * vav_[v][a];
                if (v == 0 || (maximize ? s > best : s < best)) {
                    best = s;
                    arg = v;
                }
            }
            return {best, verts_[arg]};
        }
        auto w = opp_coeffs(own_coeffs);
        return maximize ? l2_linear_max(w, center_vec_, belief_.radius)
                        : l2_linear_min(w, center_vec_, belief_.radius);
    }

    // Action values at an arbitrary belief point (cut generation).
    std::vector<double> values_at(const SubProfile& v) const {
        return action_values(game_, belief_.owner, v);
    }

private:
    bool covers_product() const {
        std::size_t corners = 1;
        for (const auto& s : belief_.center) {
            if (corners > 4096 / s.size()) return false;
            corners *= s.size();
        }
        auto parts = simplex_product_vertices(belief_.center);
        for (const auto& corner : parts)
            if (distance(belief_.metric, belief_.center, corner) > belief_.radius) return false;
        return true;
    }

    bool center_pure() const {
        for (const auto& s : belief_.center)
            if (!s.pure_action()) return false;
        return true;
    }

    const Game& game_;
    BeliefSet belief_;
    SolverSettings st_;
    PathKind path_ = PathKind::Vertex;
    std::vector<SubProfile> verts_;
    std::vector<std::vector<double>> vav_;
    std::vector<std::vector<double>> payoff_rows_;  // l2 path: own x opponent payoffs
    std::vector<double> center_vec_;
};

// ---- outer solvers, vertex path ----

// max over own mixtures of the worst-case value: LP on (pi, t+, t-).
inline OuterOptimum maximin_vertex(const BeliefContext& ctx) {
    const auto& vav = ctx.vertex_values();
    const std::size_t k = ctx.own_actions();
    LpRows rows;
    for (const auto& av : vav) {
        std::vector<double> row(k + 2, 0.0);
        for (std::size_t a = 0; a < k; ++a) row[a] = -av[a];
        row[k] = 1.0;
        row[k + 1] = -1.0;
        rows.add(std::move(row), 0.0);
    }
    std::vector<double> ones(k + 2, 0.0);
    for (std::size_t a = 0; a < k; ++a) ones[a] = 1.0;
    rows.add_equality(ones, 1.0);
    std::vector<double> c(k + 2, 0.0);
    c[k] = 1.0;
    c[k + 1] = -1.0;
    LpResult res = lp_maximize(rows.A, rows.b, c);
    if (res.status != LpStatus::Optimal) throw convergence_error("maximin master LP failed");
    MixedStrategy pi = MixedStrategy::normalized(
        std::vector<double>(res.x.begin(), res.x.begin() + long(k)));
    InnerPoint worst = ctx.extreme(pi.probs(), false);
    return {worst.value, std::move(pi), std::move(worst.point)};
}

inline OuterOptimum maximax_vertex(const BeliefContext& ctx) {
    const auto& vav = ctx.vertex_values();
    const std::size_t k = ctx.own_actions();
    double best = vav[0][0];
    std::size_t ba = 0, bv = 0;
    for (std::size_t v = 0; v < vav.size(); ++v)
        for (std::size_t a = 0; a < k; ++a)
            if (vav[v][a] > best) {
                best = vav[v][a];
                ba = a;
                bv = v;
            }
    return {best, MixedStrategy::pure(k, ba), ctx.vertices()[bv]};
}

// min over own mixtures of the worst-case regret: LP on (pi, s).
inline OuterOptimum min_worst_regret_vertex(const BeliefContext& ctx) {
    const auto& vav = ctx.vertex_values();
    const std::size_t k = ctx.own_actions();
    LpRows rows;
    for (const auto& av : vav)
        for (std::size_t a = 0; a < k; ++a) {
            std::vector<double> row(k + 1, 0.0);
            for (std::size_t b = 0; b < k; ++b) row[b] = -av[b];
            row[k] = -1.0;
            rows.add(std::move(row), -av[a]);
        }
    std::vector<double> ones(k + 1, 0.0);
    for (std::size_t a = 0; a < k; ++a) ones[a] = 1.0;
    rows.add_equality(ones, 1.0);
    std::vector<double> c(k + 1, 0.0);
    c[k] = -1.0;
    LpResult res = lp_maximize(rows.A, rows.b, c);
    if (res.status != LpStatus::Optimal) throw convergence_error("min-regret master LP failed");
    MixedStrategy pi = MixedStrategy::normalized(
        std::vector<double>(res.x.begin(), res.x.begin() + long(k)));
    // recover the witness: the (a, v) pair of maximum regret for pi
    double wr = 0.0;
    std::size_t bv = 0;
    for (std::size_t v = 0; v < vav.size(); ++v) {
        double sval = 0.0, amax = vav[v][0];
        for (std::size_t a = 0; a < k; ++a) {
            sval += pi[a] * vav[v][a];
            amax = std::max(amax, vav[v][a]);
        }
        if (amax - sval > wr) {
            wr = amax - sval;
            bv = v;
        }
    }
    return {wr, std::move(pi), ctx.vertices()[bv]};
}

// ---- outer solvers, iterative l2 path (cut generation) ----

inline OuterOptimum maximin_l2(const BeliefContext& ctx) {
    const std::size_t k = ctx.own_actions();
    std::vector<SubProfile> cuts{ctx.belief().center};
    {
        auto u = MixedStrategy::uniform(k);
        cuts.push_back(ctx.extreme(u.probs(), false).point);
    }
    for (int it = 0; it < ctx.settings().max_cuts; ++it) {
        LpRows rows;
        for (const auto& v : cuts) {
            auto av = ctx.values_at(v);
            std::vector<double> row(k + 2, 0.0);
            for (std::size_t a = 0; a < k; ++a) row[a] = -av[a];
            row[k] = 1.0;
            row[k + 1] = -1.0;
            rows.add(std::move(row), 0.0);
        }
        std::vector<double> ones(k + 2, 0.0);
        for (std::size_t a = 0; a < k; ++a) ones[a] = 1.0;
        rows.add_equality(ones, 1.0);
        std::vector<double> c(k + 2, 0.0);
        c[k] = 1.0;
        c[k + 1] = -1.0;
        LpResult res = lp_maximize(rows.A, rows.b, c);
        if (res.status != LpStatus::Optimal) throw convergence_error("maximin master LP failed");
        MixedStrategy pi = MixedStrategy::normalized(
            std::vector<double>(res.x.begin(), res.x.begin() + long(k)));
        InnerPoint worst = ctx.extreme(pi.probs(), false);
        if (res.value - worst.value <= ctx.settings().cut_eps)
            return {worst.value, std::move(pi), std::move(worst.point)};
        cuts.push_back(worst.point);
    }
    throw convergence_error("maximin cut generation did not converge");
}

inline OuterOptimum min_worst_regret_l2(const BeliefContext& ctx) {
    const std::size_t k = ctx.own_actions();
    auto worst_regret_of = [&](const MixedStrategy& pi) {
        RegretWitness wit;
        for (std::size_t a = 0; a < k; ++a) {
            std::vector<double> coeffs(k, 0.0);
            for (std::size_t b = 0; b < k; ++b) coeffs[b] = -pi[b];
            coeffs[a] += 1.0;
            InnerPoint p = ctx.extreme(coeffs, true);
            if (a == 0 || p.value > wit.value) wit = {p.value, p.point, a};
        }
        wit.value = std::max(wit.value, 0.0);
        return wit;
    };
    std::vector<SubProfile> cuts{ctx.belief().center};
    for (int it = 0; it < ctx.settings().max_cuts; ++it) {
        LpRows rows;
        for (const auto& v : cuts) {
            auto av = ctx.values_at(v);
            for (std::size_t a = 0; a < k; ++a) {
                std::vector<double> row(k + 1, 0.0);
                for (std::size_t b = 0; b < k; ++b) row[b] = -av[b];
                row[k] = -1.0;
                rows.add(std::move(row), -av[a]);
            }
        }
        std::vector<double> ones(k + 1, 0.0);
        for (std::size_t a = 0; a < k; ++a) ones[a] = 1.0;
        rows.add_equality(ones, 1.0);
        std::vector<double> c(k + 1, 0.0);
        c[k] = -1.0;
        LpResult res = lp_maximize(rows.A, rows.b, c);
        if (res.status != LpStatus::Optimal) throw convergence_error("min-regret master LP failed");
        MixedStrategy pi = MixedStrategy::normalized(
            std::vector<double>(res.x.begin(), res.x.begin() + long(k)));
        RegretWitness wit = worst_regret_of(pi);
        if (wit.value - (-res.value) <= ctx.settings().cut_eps)
            return {wit.value, std::move(pi), std::move(wit.point)};
        cuts.push_back(wit.point);
    }
    throw convergence_error("min-regret cut generation did not converge");
}

inline OuterOptimum maximax_l2(const BeliefContext& ctx) {
    const std::size_t k = ctx.own_actions();
    OuterOptimum best{0.0, MixedStrategy::pure(k, 0), ctx.belief().center};
    for (std::size_t a = 0; a < k; ++a) {
        std::vector<double> coeffs(k, 0.0);
        coeffs[a] = 1.0;
        InnerPoint p = ctx.extreme(coeffs, true);
        if (a == 0 || p.value > best.value)
            best = {p.value, MixedStrategy::pure(k, a), std::move(p.point)};
    }
    return best;
}

// ---- shared pieces ----

inline RegretWitness worst_regret_of(const BeliefContext& ctx, const MixedStrategy& own) {
    const std::size_t k = ctx.own_actions();
    if (!ctx.iterative()) {
        const auto& vav = ctx.vertex_values();
        RegretWitness wit;
        bool first = true;
        for (std::size_t v = 0; v < vav.size(); ++v) {
            double sval = 0.0;
            for (std::size_t a = 0; a < k; ++a) sval += own[a] * vav[v][a];
            for (std::size_t a = 0; a < k; ++a) {
                double reg = vav[v][a] - sval;
                if (first || reg > wit.value) {
                    wit = {reg, ctx.vertices()[v], a};
                    first = false;
                }
            }
        }
        wit.value = std::max(wit.value, 0.0);
        return wit;
    }
    RegretWitness wit;
    for (std::size_t a = 0; a < k; ++a) {
        std::vector<double> coeffs(k, 0.0);
        for (std::size_t b = 0; b < k; ++b) coeffs[b] = -own[b];
        coeffs[a] += 1.0;
        InnerPoint p = ctx.extreme(coeffs, true);
        if (a == 0 || p.value > wit.value) wit = {p.value, p.point, a};
    }
    wit.value = std::max(wit.value, 0.0);
    return wit;
}

struct UndominatedResult {
    bool undominated = true;
    std::optional<MixedStrategy> dominator;
};

struct GuaranteedGain {
    double value = 0.0;  // best gain a deviation can secure everywhere on the belief set
    MixedStrategy deviation;
};

// Stage 1 of the weak-dominance test: max_pi' min_v (u(pi', v) - u(own, v)).
// Nonnegative by construction (pi' = own scores zero).
inline GuaranteedGain max_guaranteed_gain_vertex(const BeliefContext& ctx,
                                                 const MixedStrategy& own) {
    const auto& vav = ctx.vertex_values();
    const std::size_t k = ctx.own_actions();
    std::vector<double> sval(vav.size());
    for (std::size_t v = 0; v < vav.size(); ++v) {
        double s = 0.0;
        for (std::size_t a = 0; a < k; ++a) s += own[a] * vav[v][a];
        sval[v] = s;
    }
    LpRows rows;
    for (std::size_t v = 0; v < vav.size(); ++v) {
        std::vector<double> row(k + 2, 0.0);
        for (std::size_t a = 0; a < k; ++a) row[a] = -vav[v][a];
        row[k] = 1.0;
        row[k + 1] = -1.0;
        rows.add(std::move(row), -sval[v]);
    }
    std::vector<double> ones(k + 2, 0.0);
    for (std::size_t a = 0; a < k; ++a) ones[a] = 1.0;
    rows.add_equality(ones, 1.0);
    std::vector<double> c(k + 2, 0.0);
    c[k] = 1.0;
    c[k + 1] = -1.0;
    LpResult stage1 = lp_maximize(rows.A, rows.b, c);
    if (stage1.status != LpStatus::Optimal) throw convergence_error("domination stage-1 LP failed");
    return {stage1.value, MixedStrategy::normalized(std::vector<double>(
                              stage1.x.begin(), stage1.x.begin() + long(k)))};
}

/**
 * Two-stage weak-dominance test. Stage 1 maximises the guaranteed gain of a
 * deviation over the belief set; a positive optimum is outright domination.
 * When it is zero the deviation ties somewhere, and stage 2 searches the
 * tie face for a deviation that is strictly better at one belief point.
 */
inline UndominatedResult undominated_vertex(const BeliefContext& ctx, const MixedStrategy& own,
                                            double dtol) {
    const auto& vav = ctx.vertex_values();
    const std::size_t k = ctx.own_actions();
    std::vector<double> sval(vav.size());
    for (std::size_t v = 0; v < vav.size(); ++v) {
        double s = 0.0;
        for (std::size_t a = 0; a < k; ++a) s += own[a] * vav[v][a];
        sval[v] = s;
    }
    GuaranteedGain gain = max_guaranteed_gain_vertex(ctx, own);
    if (gain.value > dtol) return {false, gain.deviation};
    // stage 2: on the tie face, look for strictness at each vertex
    LpRows face;
    for (std::size_t v = 0; v < vav.size(); ++v) {
        std::vector<double> row(k, 0.0);
        for (std::size_t a = 0; a < k; ++a) row[a] = -vav[v][a];
        face.add(std::move(row), -sval[v]);
    }
    std::vector<double> ones_k(k, 1.0);
    face.add_equality(ones_k, 1.0);
    for (std::size_t v = 0; v < vav.size(); ++v) {
        LpResult res = lp_maximize(face.A, face.b, vav[v]);
        if (res.status != LpStatus::Optimal) continue;  // face numerically empty: no dominator here
        if (res.value > sval[v] + dtol)
            return {false, MixedStrategy::normalized(std::move(res.x))};
    }
    return {true, std::nullopt};
}

inline UndominatedResult undominated_l2(const BeliefContext& ctx, const MixedStrategy& own,
                                        double dtol) {
    const std::size_t k = ctx.own_actions();
    const double ceps = ctx.settings().cut_eps;
    std::vector<SubProfile> cuts{ctx.belief().center};
    std::vector<std::vector<double>> cut_av{ctx.values_at(cuts[0])};
    auto sval_at = [&](const std::vector<double>& av) {
        double s = 0.0;
        for (std::size_t a = 0; a < k; ++a) s += own[a] * av[a];
        return s;
    };
    auto diff_min = [&](const MixedStrategy& cand) {
        std::vector<double> coeffs(k);
        for (std::size_t a = 0; a < k; ++a) coeffs[a] = cand[a] - own[a];
        return ctx.extreme(coeffs, false);
    };

    // stage 1
    for (int it = 0; it < ctx.settings().max_cuts; ++it) {
        LpRows rows;
        for (const auto& av : cut_av) {
            std::vector<double> row(k + 2, 0.0);
            for (std::size_t a = 0; a < k; ++a) row[a] = -av[a];
            row[k] = 1.0;
            row[k + 1] = -1.0;
            rows.add(std::move(row), -sval_at(av));
        }
        std::vector<double> ones(k + 2, 0.0);
        for (std::size_t a = 0; a < k; ++a) ones[a] = 1.0;
        rows.add_equality(ones, 1.0);
        std::vector<double> c(k + 2, 0.0);
        c[k] = 1.0;
        c[k + 1] = -1.0;
        LpResult res = lp_maximize(rows.A, rows.b, c);
        if (res.status != LpStatus::Optimal)
            throw convergence_error("domination stage-1 master failed");
        MixedStrategy best_cand = MixedStrategy::normalized(
            std::vector<double>(res.x.begin(), res.x.begin() + long(k)));
        InnerPoint low = diff_min(best_cand);
        if (res.value - low.value <= ceps) {
            if (low.value > dtol) return {false, best_cand};
            break;
        }
        cut_av.push_back(ctx.values_at(low.point));
        cuts.push_back(low.point);
        if (it + 1 == ctx.settings().max_cuts)
            throw convergence_error("domination stage-1 cuts did not converge");
    }

    // stage 2: the ball is full-dimensional in the simplex, so a deviation
    // that ties everywhere on it induces the all-zero difference function;
    // probing the difference at each opponent pure action in both signs
    // over the feasible face finds any deviation that does not.
    const std::size_t kc = ctx.opp_coeffs(std::vector<double>(k, 0.0)).size();
    for (std::size_t cidx = 0; cidx < kc; ++cidx) {
        for (int sign = -1; sign <= 1; sign += 2) {
            for (int it = 0; it < ctx.settings().max_cuts; ++it) {
                LpRows rows;
                for (const auto& av : cut_av) {
                    std::vector<double> row(k, 0.0);
                    for (std::size_t a = 0; a < k; ++a) row[a] = -av[a];
                    rows.add(std::move(row), -sval_at(av));
                }
                std::vector<double> ones(k, 1.0);
                rows.add_equality(ones, 1.0);
                std::vector<double> c(k);
                // sign * (u(pi', pure c) - u(own, pure c)) up to a constant
                for (std::size_t a = 0; a < k; ++a) {
                    std::vector<double> unit(k, 0.0);
                    unit[a] = 1.0;
                    c[a] = double(sign) * ctx.opp_coeffs(unit)[cidx];
                }
                LpResult res = lp_maximize(rows.A, rows.b, c);
                if (res.status != LpStatus::Optimal) break;  // face numerically empty
                MixedStrategy cand = MixedStrategy::normalized(std::move(res.x));
                InnerPoint low = diff_min(cand);
                if (low.value < -ceps) {
                    cut_av.push_back(ctx.values_at(low.point));
                    cuts.push_back(low.point);
                    if (it + 1 == ctx.settings().max_cuts)
                        throw convergence_error("domination stage-2 cuts did not converge");
                    continue;
                }
                std::vector<double> diff(k);
                for (std::size_t a = 0; a < k; ++a) diff[a] = cand[a] - own[a];
                double wc = ctx.opp_coeffs(diff)[cidx];
                if (double(sign) * wc > dtol) return {false, cand};
                break;
            }
        }
    }
    return {true, std::nullopt};
}

struct DominanceFlags {
    bool dominant = false;
    bool strictly_dominant = false;
};

/**
 * Pure-action reduction of local dominance over the belief set: own must be
 * pure, weakly above every alternative action everywhere, and no other
 * action may tie it everywhere. Any mixture of non-tying actions is then
 * strictly beaten somewhere, so checking actions suffices; and a mixed own
 * strategy always has a distinct everywhere-tying deviation, so it can
 * never be dominant.
 */
inline DominanceFlags dominance_flags(const BeliefContext& ctx, const MixedStrategy& own,
                                      double dtol) {
    const std::size_t k = ctx.own_actions();
    auto pure = own.pure_action();
    if (!pure) return {};
    bool weak_everywhere = true, strict_everywhere = true, tie_free = true;
    for (std::size_t b = 0; b < k; ++b) {
        if (b == *pure) continue;
        std::vector<double> coeffs(k, 0.0);
        for (std::size_t a = 0; a < k; ++a) coeffs[a] = own[a];
        coeffs[b] -= 1.0;
        double dmin = ctx.extreme(coeffs, false).value;
        if (dmin < -dtol) {
            weak_everywhere = false;
            strict_everywhere = false;
            break;
        }
        if (dmin <= dtol) {
            strict_everywhere = false;
            double dmax = ctx.extreme(coeffs, true).value;
            if (dmax <= dtol) tie_free = false;  // b ties own everywhere
        }
    }
    DominanceFlags f;
    f.dominant = weak_everywhere && tie_free;
    f.strictly_dominant = strict_everywhere;
    return f;
}

inline OuterOptimum outer_maximin(const BeliefContext& ctx) {
    return ctx.iterative() ? maximin_l2(ctx) : maximin_vertex(ctx);
}

inline OuterOptimum outer_maximax(const BeliefContext& ctx) {
    return ctx.iterative() ? maximax_l2(ctx) : maximax_vertex(ctx);
}

inline OuterOptimum outer_min_regret(const BeliefContext& ctx) {
    return ctx.iterative() ? min_worst_regret_l2(ctx) : min_worst_regret_vertex(ctx);
}

inline UndominatedResult undominated(const BeliefContext& ctx, const MixedStrategy& own,
                                     double dtol) {
    return ctx.iterative() ? undominated_l2(ctx, own, dtol) : undominated_vertex(ctx, own, dtol);
}

} // namespace detail

// ---- public operations ----

/** Exact extreme of a mixed strategy's expected value over a belief set. */
inline InnerPoint inner_extreme(const Game& game, const BeliefSet& belief,
                                const MixedStrategy& own, bool maximize,
                                const SolverSettings& settings = {}) {
    detail::BeliefContext ctx(game, belief, settings);
    if (own.size() != ctx.own_actions()) throw shape_error("own strategy size mismatch");
    return ctx.extreme(own.probs(), maximize);
}

/** Regret of a strategy at one fixed opponent sub-profile. */
inline double regret(const Game& game, std::size_t player, const MixedStrategy& own,
                     const SubProfile& rest) {
    auto av = action_values(game, player, rest);
    double best = *std::max_element(av.begin(), av.end());
    double mine = 0.0;
    for (std::size_t a = 0; a < av.size(); ++a) mine += own[a] * av[a];
    return std::max(best - mine, 0.0);
}

/** Largest regret the belief set can inflict on a fixed strategy. */
inline RegretWitness worst_case_regret(const Game& game, const BeliefSet& belief,
                                       const MixedStrategy& own,
                                       const SolverSettings& settings = {}) {
    detail::BeliefContext ctx(game, belief, settings);
    if (own.size() != ctx.own_actions()) throw shape_error("own strategy size mismatch");
    return detail::worst_regret_of(ctx, own);
}

/** Optimal value and strategy for one of the three outer objectives. */
inline OuterOptimum outer_optimum(const Game& game, const BeliefSet& belief,
                                  OuterObjective objective,
                                  const SolverSettings& settings = {}) {
    detail::BeliefContext ctx(game, belief, settings);
    switch (objective) {
        case OuterObjective::Maximin:
            return ctx.iterative() ? detail::maximin_l2(ctx) : detail::maximin_vertex(ctx);
        case OuterObjective::Maximax:
            return ctx.iterative() ? detail::maximax_l2(ctx) : detail::maximax_vertex(ctx);
        case OuterObjective::MinWorstRegret:
            return ctx.iterative() ? detail::min_worst_regret_l2(ctx)
                                   : detail::min_worst_regret_vertex(ctx);
    }
    throw shape_error("unknown outer objective");
}

/** Does `candidate` locally dominate `incumbent` over the belief set? */
inline DominanceVerdict locally_dominates(const Game& game, const BeliefSet& belief,
                                          const MixedStrategy& candidate,
                                          const MixedStrategy& incumbent,
                                          const SolverSettings& settings = {}) {
    detail::BeliefContext ctx(game, belief, settings);
    if (candidate.size() != ctx.own_actions() || incumbent.size() != ctx.own_actions())
        throw shape_error("strategy size mismatch");
    DominanceVerdict verdict;
    if (candidate == incumbent) return verdict;  // a strategy never dominates itself
    const std::size_t k = ctx.own_actions();
    std::vector<double> coeffs(k);
    for (std::size_t a = 0; a < k; ++a) coeffs[a] = candidate[a] - incumbent[a];
    InnerPoint lo = ctx.extreme(coeffs, false);
    InnerPoint hi = ctx.extreme(coeffs, true);
    verdict.min_margin = lo.value;
    verdict.max_margin = hi.value;
    const double dtol = ctx.decision_tol();
    if (lo.value > dtol) {
        verdict.relation = DominanceRelation::Strict;
        verdict.margin = lo.value;
        verdict.witness_better = hi.point;
    } else if (lo.value >= -dtol && hi.value > dtol) {
        verdict.relation = DominanceRelation::Weak;
        verdict.margin = hi.value;
        verdict.witness_better = hi.point;
    }
    return verdict;
}

/**
 * Full six-notion classification of one strategy against one belief set.
 * Every notion is computed independently; the implication lattice between
 * them is a checkable consequence, not an assumption.
 */
inline ResponseClassification classify_response(const Game& game, const BeliefSet& belief,
                                                const MixedStrategy& own,
                                                const SolverSettings& settings = {}) {
    detail::BeliefContext ctx(game, belief, settings);
    if (own.size() != ctx.own_actions()) throw shape_error("own strategy size mismatch");
    ResponseClassification rc;
    rc.path = ctx.path();
    rc.decision_tol = ctx.decision_tol();

    InnerPoint wv = ctx.extreme(own.probs(), false);
    InnerPoint bv = ctx.extreme(own.probs(), true);
    rc.worst_value = wv.value;
    rc.best_value = bv.value;
    rc.worst_witness = wv.point;
    rc.best_witness = bv.point;

    OuterOptimum mm = detail::outer_maximin(ctx);
    OuterOptimum mx = detail::outer_maximax(ctx);
    OuterOptimum mr = detail::outer_min_regret(ctx);
    rc.maximin = mm.value;
    rc.maximax = mx.value;
    rc.min_worst_regret = mr.value;

    RegretWitness wr = detail::worst_regret_of(ctx, own);
    rc.worst_regret = wr.value;
    rc.regret_witness = wr.point;

    const double dtol = rc.decision_tol;
    rc.is_w = rc.worst_value >= rc.maximin - dtol;
    rc.is_b = rc.best_value >= rc.maximax - dtol;
    rc.is_wr = rc.worst_regret <= rc.min_worst_regret + dtol;

    detail::UndominatedResult u = detail::undominated(ctx, own, dtol);
    rc.is_u = u.undominated;
    rc.dominator = std::move(u.dominator);

    detail::DominanceFlags d = detail::dominance_flags(ctx, own, dtol);
    rc.is_d = d.dominant;
    rc.is_sd = d.strictly_dominant;
    return rc;
}

namespace detail {

// coordinate extents of {pi in simplex : A pi <= b}; true when every width
// stays below width_tol (the face is a single point at tolerance scale)
inline bool face_singleton(std::vector<std::vector<double>> A, std::vector<double> b,
                           std::size_t k, double width_tol) {
    std::vector<double> ones(k, 1.0), neg_ones(k, -1.0);
    A.push_back(ones);
    b.push_back(1.0);
    A.push_back(neg_ones);
    b.push_back(-1.0);
    for (std::size_t a = 0; a < k; ++a) {
        std::vector<double> c(k, 0.0);
        c[a] = 1.0;
        LpResult hi = lp_maximize(A, b, c);
        c[a] = -1.0;
        LpResult lo = lp_maximize(A, b, c);
        if (hi.status != LpStatus::Optimal || lo.status != LpStatus::Optimal) return false;
        if (hi.value + lo.value > width_tol) return false;  // max - min
    }
    return true;
}

} // namespace detail

/**
 * Whether the maximin / min-regret optimiser is a single point (up to
 * face_tol). A strategy that is the unique such optimiser is undominated;
 * the audit uses these to exercise that implication. Polytope paths only.
 */
inline bool maximin_witness_unique(const Game& game, const BeliefSet& belief,
                                   const SolverSettings& settings = {}) {
    detail::BeliefContext ctx(game, belief, settings);
    if (ctx.iterative())
        throw capability_error("optimizer-face extents need a polytope belief set");
    OuterOptimum mm = detail::maximin_vertex(ctx);
    const auto& vav = ctx.vertex_values();
    const std::size_t k = ctx.own_actions();
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (const auto& av : vav) {
        std::vector<double> row(k);
        for (std::size_t a = 0; a < k; ++a) row[a] = -av[a];
        A.push_back(std::move(row));
        b.push_back(-(mm.value - 1e-10));
    }
    return detail::face_singleton(std::move(A), std::move(b), k, settings.face_tol);
}

inline bool min_regret_witness_unique(const Game& game, const BeliefSet& belief,
                                      const SolverSettings& settings = {}) {
    detail::BeliefContext ctx(game, belief, settings);
    if (ctx.iterative())
        throw capability_error("optimizer-face extents need a polytope belief set");
    OuterOptimum mr = detail::min_worst_regret_vertex(ctx);
    const auto& vav = ctx.vertex_values();
    const std::size_t k = ctx.own_actions();
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (const auto& av : vav)
        for (std::size_t a = 0; a < k; ++a) {
            std::vector<double> row(k);
            for (std::size_t c = 0; c < k; ++c) row[c] = -av[c];
            A.push_back(std::move(row));
            b.push_back(mr.value + 1e-10 - av[a]);
        }
    return detail::face_singleton(std::move(A), std::move(b), k, settings.face_tol);
}

inline bool maximax_witness_unique(const Game& game, const BeliefSet& belief,
                                   const SolverSettings& settings = {}) {
    detail::BeliefContext ctx(game, belief, settings);
    if (ctx.iterative())
        throw capability_error("optimizer-face extents need a polytope belief set");
    OuterOptimum mx = detail::maximax_vertex(ctx);
    const auto& vav = ctx.vertex_values();
    const std::size_t k = ctx.own_actions();
    // the attainers form a union of per-vertex faces; unique means every
    // nonempty face is the same singleton
    std::optional<MixedStrategy> seen;
    for (std::size_t v = 0; v < vav.size(); ++v) {
        double amax = *std::max_element(vav[v].begin(), vav[v].end());
        if (amax < mx.value - 1e-10) continue;
        std::vector<std::vector<double>> A(1, std::vector<double>(k));
        for (std::size_t a = 0; a < k; ++a) A[0][a] = -vav[v][a];
        std::vector<double> b{-(mx.value - 1e-10)};
        if (!detail::face_singleton(A, b, k, settings.face_tol)) return false;
        // representative point of this face
        std::vector<double> ones(k, 1.0), neg(k, -1.0), c(k, 0.0);
        A.push_back(ones);
        b.push_back(1.0);
        A.push_back(neg);
        b.push_back(-1.0);
        LpResult res = lp_maximize(A, b, vav[v]);
        if (res.status != LpStatus::Optimal) continue;
        MixedStrategy pt = MixedStrategy::normalized(std::move(res.x));
        if (seen && linf_gap(*seen, pt) > settings.face_tol) return false;
        if (!seen) seen = std::move(pt);
    }
    return true;
}

} // namespace dbeq
