#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dbeq/errors.hpp"

namespace dbeq {

// Probability vectors must sum to one within this slack; anything looser is
// rejected rather than silently renormalised.
inline constexpr double kProbSumTol = 1e-12;
inline constexpr double kProbEps = 1e-12;

/**
 * A probability distribution over one player's actions.
 *
 * The strict constructor enforces the invariant (entries >= 0, sum == 1
 * within kProbSumTol). Solver output that carries rounding noise goes
 * through normalized(), which clamps tiny negatives and rescales.
 */
class MixedStrategy {
public:
    explicit MixedStrategy(std::vector<double> probs) : probs_(std::move(probs)) {
        if (probs_.empty()) throw shape_error("mixed strategy needs at least one action");
        double sum = 0.0;
        for (double p : probs_) {
            if (!std::isfinite(p)) throw shape_error("mixed strategy entry is not finite");
            if (p < -kProbEps) throw shape_error("mixed strategy entry is negative");
            sum += p;
        }
        if (std::abs(sum - 1.0) > kProbSumTol)
            throw shape_error("mixed strategy entries do not sum to 1");
        for (double& p : probs_)
            if (p < 0.0) p = 0.0;
    }

    static MixedStrategy pure(std::size_t num_actions, std::size_t action) {
        if (action >= num_actions) throw shape_error("pure action index out of range");
        std::vector<double> p(num_actions, 0.0);
        p[action] = 1.0;
        return MixedStrategy(std::move(p));
    }

    static MixedStrategy uniform(std::size_t num_actions) {
        if (num_actions == 0) throw shape_error("mixed strategy needs at least one action");
        return MixedStrategy(std::vector<double>(num_actions, 1.0 / double(num_actions)));
    }

    // Clamps small negatives and rescales; rejects junk that is not close to
    // a distribution (guards against solver blowups masquerading as noise).
    static MixedStrategy normalized(std::vector<double> probs, double slack = 1e-7) {
        if (probs.empty()) throw shape_error("mixed strategy needs at least one action");
        double sum = 0.0;
        for (double& p : probs) {
            if (!std::isfinite(p)) throw shape_error("mixed strategy entry is not finite");
            if (p < -slack) throw shape_error("mixed strategy entry is negative beyond slack");
            if (p < 0.0) p = 0.0;
            sum += p;
        }
        if (std::abs(sum - 1.0) > slack) throw shape_error("mixed strategy mass is off beyond slack");
        for (double& p : probs) p /= sum;
        return MixedStrategy(std::move(probs));
    }

    std::size_t size() const { return probs_.size(); }
    double operator[](std::size_t a) const { return probs_[a]; }
    const std::vector<double>& probs() const { return probs_; }

    std::vector<std::size_t> support(double eps = kProbEps) const {
        std::vector<std::size_t> s;
        for (std::size_t a = 0; a < probs_.size(); ++a)
            if (probs_[a] > eps) s.push_back(a);
        return s;
    }

    // Index of the single supported action, if there is exactly one.
    std::optional<std::size_t> pure_action(double eps = kProbEps) const {
        auto s = support(eps);
        if (s.size() == 1) return s.front();
        return std::nullopt;
    }

    bool totally_mixed(double eps = kProbEps) const {
        return std::all_of(probs_.begin(), probs_.end(), [eps](double p) { return p > eps; });
    }

    friend bool operator==(const MixedStrategy& a, const MixedStrategy& b) {
        return a.probs_ == b.probs_;
    }

private:
    std::vector<double> probs_;
};

inline double linf_gap(const MixedStrategy& a, const MixedStrategy& b) {
    if (a.size() != b.size()) throw shape_error("strategy sizes differ");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

/**
 * A finite normal-form game: n >= 2 players, per-player action labels, and
 * one payoff tensor per player stored flat in row-major order (the last
 * player's action index varies fastest).
 */
class Game {
public:
    Game(std::vector<std::vector<std::string>> actions,
         std::vector<std::vector<double>> payoffs,
         std::string name = "")
        : name_(std::move(name)), actions_(std::move(actions)), payoffs_(std::move(payoffs)) {
        if (actions_.size() < 2) throw shape_error("game needs at least two players");
        if (payoffs_.size() != actions_.size())
            throw shape_error("one payoff tensor per player required");
        shape_.reserve(actions_.size());
        for (const auto& labels : actions_) {
            if (labels.empty()) throw shape_error("every player needs at least one action");
            std::set<std::string> seen(labels.begin(), labels.end());
            if (seen.size() != labels.size())
                throw shape_error("action labels must be unique per player");
            shape_.push_back(labels.size());
        }
        total_ = 1;
        for (std::size_t k : shape_) {
            if (total_ > (std::size_t(1) << 40) / k)
                throw shape_error("payoff tensor too large");
            total_ *= k;
        }
        strides_.assign(shape_.size(), 1);
        for (std::size_t j = shape_.size(); j-- > 1;)
            strides_[j - 1] = strides_[j] * shape_[j];
        for (const auto& tensor : payoffs_) {
            if (tensor.size() != total_) throw shape_error("payoff tensor length mismatch");
            for (double v : tensor)
                if (!std::isfinite(v)) throw shape_error("payoff entry is not finite");
        }
    }

    // Convenience for generated games: labels a0, a1, ...
    static Game from_tensors(const std::vector<std::size_t>& shape,
                             std::vector<std::vector<double>> payoffs,
                             std::string name = "") {
        std::vector<std::vector<std::string>> actions;
        actions.reserve(shape.size());
        for (std::size_t k : shape) {
            std::vector<std::string> labels;
            labels.reserve(k);
            for (std::size_t a = 0; a < k; ++a) labels.push_back("a" + std::to_string(a));
            actions.push_back(std::move(labels));
        }
        return Game(std::move(actions), std::move(payoffs), std::move(name));
    }

    const std::string& name() const { return name_; }
    std::size_t num_players() const { return shape_.size(); }
    std::size_t num_actions(std::size_t player) const { return shape_.at(player); }
    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t num_profiles() const { return total_; }
    const std::vector<std::string>& action_labels(std::size_t player) const {
        return actions_.at(player);
    }
    const std::vector<double>& payoff_tensor(std::size_t player) const {
        return payoffs_.at(player);
    }

    std::size_t flat_index(const std::vector<std::size_t>& profile) const {
        if (profile.size() != shape_.size()) throw shape_error("profile length mismatch");
        std::size_t idx = 0;
        for (std::size_t j = 0; j < profile.size(); ++j) {
            if (profile[j] >= shape_[j]) throw shape_error("action index out of range");
            idx += profile[j] * strides_[j];
        }
        return idx;
    }

    double payoff(std::size_t player, const std::vector<std::size_t>& profile) const {
        return payoffs_.at(player)[flat_index(profile)];
    }

    double payoff_flat(std::size_t player, std::size_t flat) const {
        return payoffs_.at(player)[flat];
    }

    std::size_t stride(std::size_t player) const { return strides_.at(player); }

    double min_payoff() const {
        double m = payoffs_[0][0];
        for (const auto& t : payoffs_)
            m = std::min(m, *std::min_element(t.begin(), t.end()));
        return m;
    }

    double max_payoff() const {
        double m = payoffs_[0][0];
        for (const auto& t : payoffs_)
            m = std::max(m, *std::max_element(t.begin(), t.end()));
        return m;
    }

    double payoff_spread() const { return max_payoff() - min_payoff(); }

private:
    std::string name_;
    std::vector<std::vector<std::string>> actions_;
    std::vector<std::vector<double>> payoffs_;
    std::vector<std::size_t> shape_;
    std::vector<std::size_t> strides_;
    std::size_t total_ = 0;
};

// Strategies of one player's opponents, in increasing player order.
using SubProfile = std::vector<MixedStrategy>;

/** One mixed strategy per player. */
class Profile {
public:
    Profile(const Game& game, std::vector<MixedStrategy> strategies)
        : strategies_(std::move(strategies)) {
        if (strategies_.size() != game.num_players())
            throw shape_error("profile needs one strategy per player");
        for (std::size_t j = 0; j < strategies_.size(); ++j)
            if (strategies_[j].size() != game.num_actions(j))
                throw shape_error("strategy size does not match player's action count");
    }

    static Profile pure(const Game& game, const std::vector<std::size_t>& actions) {
        if (actions.size() != game.num_players()) throw shape_error("profile length mismatch");
        std::vector<MixedStrategy> s;
        s.reserve(actions.size());
        for (std::size_t j = 0; j < actions.size(); ++j)
            s.push_back(MixedStrategy::pure(game.num_actions(j), actions[j]));
        return Profile(game, std::move(s));
    }

    std::size_t num_players() const { return strategies_.size(); }
    const MixedStrategy& strategy(std::size_t player) const { return strategies_.at(player); }
    const std::vector<MixedStrategy>& strategies() const { return strategies_; }

    SubProfile opponents(std::size_t player) const {
        if (player >= strategies_.size()) throw shape_error("player index out of range");
        SubProfile rest;
        rest.reserve(strategies_.size() - 1);
        for (std::size_t j = 0; j < strategies_.size(); ++j)
            if (j != player) rest.push_back(strategies_[j]);
        return rest;
    }

    // Inverse of opponents(): reinsert the player's own strategy.
    static Profile with_player(const Game& game, std::size_t player, MixedStrategy own,
                               const SubProfile& rest) {
        if (rest.size() + 1 != game.num_players()) throw shape_error("sub-profile length mismatch");
        std::vector<MixedStrategy> s;
        s.reserve(game.num_players());
        std::size_t r = 0;
        for (std::size_t j = 0; j < game.num_players(); ++j) {
            if (j == player)
                s.push_back(own);
            else
                s.push_back(rest[r++]);
        }
        return Profile(game, std::move(s));
    }

private:
    std::vector<MixedStrategy> strategies_;
};

inline void check_sub_profile(const Game& game, std::size_t player, const SubProfile& rest) {
    if (player >= game.num_players()) throw shape_error("player index out of range");
    if (rest.size() + 1 != game.num_players()) throw shape_error("sub-profile length mismatch");
    std::size_t r = 0;
    for (std::size_t j = 0; j < game.num_players(); ++j) {
        if (j == player) continue;
        if (rest[r++].size() != game.num_actions(j))
            throw shape_error("sub-profile strategy size mismatch");
    }
}

/**
 * Expected utility of `player` for each of their own pure actions against a
 * fixed opponent sub-profile. Everything downstream (values, regrets,
 * dominance margins) is a linear functional of this vector.
 */
inline std::vector<double> action_values(const Game& game, std::size_t player,
                                         const SubProfile& rest) {
    check_sub_profile(game, player, rest);
    const std::size_t n = game.num_players();
    const std::size_t own = game.num_actions(player);
    std::vector<std::size_t> opp_players;
    opp_players.reserve(n - 1);
    for (std::size_t j = 0; j < n; ++j)
        if (j != player) opp_players.push_back(j);

    std::vector<double> values(own, 0.0);
    std::vector<std::size_t> idx(opp_players.size(), 0);
    while (true) {
        double w = 1.0;
        std::size_t base = 0;
        for (std::size_t k = 0; k < opp_players.size(); ++k) {
            w *= rest[k][idx[k]];
            base += idx[k] * game.stride(opp_players[k]);
        }
        if (w != 0.0) {
            for (std::size_t a = 0; a < own; ++a)
                values[a] += w * game.payoff_flat(player, base + a * game.stride(player));
        }
        // odometer over opponents' pure actions, last fastest
        std::size_t k = opp_players.size();
        while (k > 0) {
            --k;
            if (++idx[k] < game.num_actions(opp_players[k])) break;
            idx[k] = 0;
            if (k == 0) return values;
        }
        if (opp_players.empty()) return values;
    }
}

inline double expected_utility(const Game& game, std::size_t player, const MixedStrategy& own,
                               const SubProfile& rest) {
    if (own.size() != game.num_actions(player)) throw shape_error("own strategy size mismatch");
    auto values = action_values(game, player, rest);
    double u = 0.0;
    for (std::size_t a = 0; a < values.size(); ++a) u += own[a] * values[a];
    return u;
}

inline double expected_utility(const Game& game, const Profile& profile, std::size_t player) {
    return expected_utility(game, player, profile.strategy(player), profile.opponents(player));
}

inline double social_welfare(const Game& game, const Profile& profile) {
    double sw = 0.0;
    for (std::size_t i = 0; i < game.num_players(); ++i) sw += expected_utility(game, profile, i);
    return sw;
}

inline double social_welfare_pure(const Game& game, const std::vector<std::size_t>& actions) {
    double sw = 0.0;
    std::size_t flat = game.flat_index(actions);
    for (std::size_t i = 0; i < game.num_players(); ++i) sw += game.payoff_flat(i, flat);
    return sw;
}

} // namespace dbeq
