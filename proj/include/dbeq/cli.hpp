#pragma once

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dbeq/equilibrium.hpp"
#include "dbeq/errors.hpp"
#include "dbeq/game.hpp"
#include "dbeq/game_io.hpp"
#include "dbeq/metric.hpp"
#include "dbeq/oracle.hpp"
#include "dbeq/response.hpp"
#include "dbeq/welfare.hpp"

namespace dbeq::cli {

inline constexpr const char* kSchema = "dbeq/1";

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

inline Game load_game(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw parse_error("cannot open game file \"" + path + "\"");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_game(buf.str());
}

inline double parse_double(const std::string& tok, const std::string& what) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw parse_error("");
        return v;
    } catch (const std::exception&) {
        throw parse_error("bad " + what + " \"" + tok + "\"");
    }
}

/** "p0:0.5,0.5;p1:1,0" or just "0.5,0.5;1,0" — one block per player. */
inline std::vector<MixedStrategy> parse_strategies_literal(const Game& game,
                                                           const std::string& text) {
    auto blocks = split(text, ';');
    if (blocks.size() != game.num_players())
        throw parse_error("profile literal has " + std::to_string(blocks.size()) +
                          " blocks but the game has " + std::to_string(game.num_players()) +
                          " players");
    std::vector<MixedStrategy> out;
    for (std::size_t j = 0; j < blocks.size(); ++j) {
        std::string body = blocks[j];
        auto colon = body.find(':');
        if (colon != std::string::npos) {
            std::string prefix = body.substr(0, colon);
            if (prefix != "p" + std::to_string(j))
                throw parse_error("profile block " + std::to_string(j) + " is labelled \"" +
                                  prefix + "\"; blocks must appear in player order");
            body = body.substr(colon + 1);
        }
        auto toks = split(body, ',');
        if (toks.size() != game.num_actions(j))
            throw parse_error("player " + std::to_string(j) + " needs " +
                              std::to_string(game.num_actions(j)) + " probabilities, got " +
                              std::to_string(toks.size()));
        std::vector<double> probs;
        for (const auto& t : toks) probs.push_back(parse_double(t, "probability"));
        try {
            out.push_back(MixedStrategy::normalized(std::move(probs), 1e-6));
        } catch (const shape_error& e) {
            throw parse_error("player " + std::to_string(j) + ": " + e.what());
        }
    }
    return out;
}

/** "0,1" or "Stag,Hare" — one action per player, index or label. */
inline std::vector<std::size_t> parse_pure_literal(const Game& game, const std::string& text) {
    auto toks = split(text, ',');
    if (toks.size() != game.num_players())
        throw parse_error("pure profile needs one action per player");
    std::vector<std::size_t> actions;
    for (std::size_t j = 0; j < toks.size(); ++j) {
        const auto& labels = game.action_labels(j);
        bool found = false;
        for (std::size_t a = 0; a < labels.size(); ++a)
            if (labels[a] == toks[j]) {
                actions.push_back(a);
                found = true;
                break;
            }
        if (found) continue;
        bool digits = !toks[j].empty();
        for (char c : toks[j])
            if (!std::isdigit(static_cast<unsigned char>(c))) digits = false;
        if (!digits)
            throw parse_error("player " + std::to_string(j) + " has no action \"" + toks[j] +
                              "\"");
        std::size_t a = std::stoul(toks[j]);
        if (a >= game.num_actions(j))
            throw parse_error("action index " + toks[j] + " out of range for player " +
                              std::to_string(j));
        actions.push_back(a);
    }
    return actions;
}

inline std::vector<double> parse_radii(const Game& game, double r, const std::string& r_vec) {
    if (r_vec.empty()) return std::vector<double>(game.num_players(), r);
    auto toks = split(r_vec, ',');
    if (toks.size() != game.num_players())
        throw parse_error("--r-vec needs one radius per player");
    std::vector<double> radii;
    for (const auto& t : toks) radii.push_back(parse_double(t, "radius"));
    return radii;
}

inline bool parse_bool(const std::string& s, const std::string& what) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw parse_error("bad " + what + " \"" + s + "\" (expected true or false)");
}

inline nlohmann::ordered_json strategies_json(const std::vector<MixedStrategy>& strategies) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& s : strategies) {
        nlohmann::ordered_json p = nlohmann::ordered_json::array();
        for (std::size_t a = 0; a < s.size(); ++a) p.push_back(s[a]);
        arr.push_back(std::move(p));
    }
    return arr;
}

inline nlohmann::ordered_json report_json(const EquilibriumReport& rep) {
    nlohmann::ordered_json j;
    j["nash"] = rep.nash;
    j["W"] = rep.w;
    j["B"] = rep.b;
    j["WR"] = rep.wr;
    j["U"] = rep.u;
    j["D"] = rep.d;
    j["SD"] = rep.sd;
    return j;
}

inline nlohmann::ordered_json classification_json(const ResponseClassification& rc) {
    nlohmann::ordered_json j;
    j["W"] = rc.is_w;
    j["B"] = rc.is_b;
    j["WR"] = rc.is_wr;
    j["U"] = rc.is_u;
    j["D"] = rc.is_d;
    j["SD"] = rc.is_sd;
    j["worst_value"] = rc.worst_value;
    j["best_value"] = rc.best_value;
    j["worst_regret"] = rc.worst_regret;
    j["maximin"] = rc.maximin.value;
    j["maximax"] = rc.maximax.value;
    j["min_worst_regret"] = rc.min_worst_regret.value;
    j["path"] = to_string(rc.path);
    j["decision_tol"] = rc.decision_tol;
    return j;
}

inline const char* yn(bool b) { return b ? "yes" : "no"; }

inline void emit(std::ostream& out, const nlohmann::ordered_json& j) { out << j.dump(2) << "\n"; }

// ---- per-verb option bags ----

struct CommonOpts {
    std::string game_path;
    std::string metric = "linf";
    double r = 0.0;
    std::string r_vec;
    std::string format;  // json, table, or csv; verbs pick their own default
};

inline nlohmann::ordered_json header(const std::string& verb) {
    nlohmann::ordered_json j;
    j["schema"] = kSchema;
    j["verb"] = verb;
    return j;
}

inline int expect_outcome(bool outcome, const std::optional<bool>& expect) {
    if (!expect) return 0;
    return outcome == *expect ? 0 : 1;
}

inline int run_verify(const CommonOpts& c, const std::string& profile_lit,
                      const std::string& notion_str, const std::string& expect_str,
                      std::ostream& out) {
    Game game = load_game(c.game_path);
    Metric metric = parse_metric(c.metric);
    auto radii = parse_radii(game, c.r, c.r_vec);
    Profile prof(game, parse_strategies_literal(game, profile_lit));
    EquilibriumReport rep = verify_equilibrium(game, prof, radii, metric);

    std::optional<bool> expect;
    if (!expect_str.empty()) expect = parse_bool(expect_str, "--expect");
    std::optional<Notion> notion;
    if (!notion_str.empty()) notion = parse_notion(notion_str);
    if (expect && !notion) throw parse_error("--expect needs --notion to know which flag to test");
    bool outcome = notion ? rep.flag(*notion) : (rep.w && rep.b && rep.wr && rep.u);

    if (c.format == "json") {
        auto j = header("verify");
        j["game"] = game.name();
        j["metric"] = to_string(metric);
        j["radii"] = radii;
        j["flags"] = report_json(rep);
        nlohmann::ordered_json players = nlohmann::ordered_json::array();
        for (const auto& rc : rep.per_player) players.push_back(classification_json(rc));
        j["players"] = std::move(players);
        if (notion) {
            j["notion"] = to_string(*notion);
            j["outcome"] = outcome;
        }
        emit(out, j);
    } else {
        out << "profile: nash=" << yn(rep.nash) << " W=" << yn(rep.w) << " B=" << yn(rep.b)
            << " WR=" << yn(rep.wr) << " U=" << yn(rep.u) << " D=" << yn(rep.d)
            << " SD=" << yn(rep.sd) << "\n";
        for (std::size_t i = 0; i < rep.per_player.size(); ++i) {
            const auto& rc = rep.per_player[i];
            out << "player " << i << ": W=" << yn(rc.is_w) << " B=" << yn(rc.is_b)
                << " WR=" << yn(rc.is_wr) << " U=" << yn(rc.is_u) << " D=" << yn(rc.is_d)
                << " SD=" << yn(rc.is_sd) << " worst=" << fmt(rc.worst_value)
                << " best=" << fmt(rc.best_value) << " regret=" << fmt(rc.worst_regret)
                << " maximin=" << fmt(rc.maximin.value) << " path=" << to_string(rc.path)
                << "\n";
        }
        if (notion) out << "notion " << to_string(*notion) << ": " << yn(outcome) << "\n";
    }
    return expect_outcome(outcome, expect);
}

inline int run_enumerate(const CommonOpts& c, const std::string& notion_str, std::ostream& out) {
    Game game = load_game(c.game_path);
    Metric metric = parse_metric(c.metric);
    auto radii = parse_radii(game, c.r, c.r_vec);
    Notion notion = parse_notion(notion_str);
    auto hits = enumerate_pure(game, notion, radii, metric);
    if (c.format == "json") {
        auto j = header("enumerate");
        j["game"] = game.name();
        j["notion"] = to_string(notion);
        j["metric"] = to_string(metric);
        j["radii"] = radii;
        nlohmann::ordered_json eqs = nlohmann::ordered_json::array();
        for (const auto& h : hits) {
            nlohmann::ordered_json labels = nlohmann::ordered_json::array();
            for (std::size_t jdx = 0; jdx < h.size(); ++jdx)
                labels.push_back(game.action_labels(jdx)[h[jdx]]);
            eqs.push_back(std::move(labels));
        }
        j["count"] = hits.size();
        j["equilibria"] = std::move(eqs);
        emit(out, j);
    } else {
        out << hits.size() << " pure " << to_string(notion) << "-equilibria\n";
        for (const auto& h : hits) {
            out << "(";
            for (std::size_t jdx = 0; jdx < h.size(); ++jdx)
                out << (jdx ? ", " : "") << game.action_labels(jdx)[h[jdx]];
            out << ")\n";
        }
    }
    return 0;
}

inline int run_search(const CommonOpts& c, const std::string& notion_str, double resolution,
                      std::ostream& out) {
    Game game = load_game(c.game_path);
    Metric metric = parse_metric(c.metric);
    auto radii = parse_radii(game, c.r, c.r_vec);
    Notion notion = parse_notion(notion_str);
    GridSearchResult res = grid_search_mixed(game, notion, radii, metric, resolution);
    if (c.format == "json") {
        auto j = header("search");
        j["game"] = game.name();
        j["notion"] = to_string(notion);
        j["metric"] = to_string(metric);
        j["radii"] = radii;
        j["resolution"] = res.resolution;
        j["grid_tol"] = res.grid_tol;
        j["coarse_warning"] = res.coarse_warning;
        j["suspected_bug"] = res.suspected_bug;
        j["count"] = res.profiles.size();
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& p : res.profiles) arr.push_back(strategies_json(p));
        j["profiles"] = std::move(arr);
        emit(out, j);
    } else {
        out << res.profiles.size() << " grid profiles within tolerance " << fmt(res.grid_tol)
            << (res.coarse_warning ? " (warning: tolerance is a large share of the payoff range)"
                                   : "")
            << "\n";
        for (const auto& p : res.profiles) {
            for (std::size_t jdx = 0; jdx < p.size(); ++jdx) {
                out << (jdx ? " ; " : "");
                for (std::size_t a = 0; a < p[jdx].size(); ++a)
                    out << (a ? "," : "") << fmt(p[jdx][a]);
            }
            out << "\n";
        }
        if (res.suspected_bug)
            out << "warning: no profiles found for a notion that always has one; grid too "
                   "coarse or solver bug\n";
    }
    return 0;
}

inline int run_robust(const CommonOpts& c, const std::string& pure_lit, double eps,
                      const std::string& expect_str, std::ostream& out) {
    Game game = load_game(c.game_path);
    auto pure = parse_pure_literal(game, pure_lit);
    RobustnessReport rep = robust_check(game, pure, eps);
    std::optional<bool> expect;
    if (!expect_str.empty()) expect = parse_bool(expect_str, "--expect");
    if (c.format == "json") {
        auto j = header("robust");
        j["game"] = game.name();
        j["eps"] = eps;
        j["robust"] = rep.robust;
        nlohmann::ordered_json viols = nlohmann::ordered_json::array();
        for (const auto& v : rep.violations) {
            nlohmann::ordered_json vj;
            vj["player"] = v.player;
            vj["better_action"] = game.action_labels(v.player)[v.better_action];
            vj["gap"] = v.gap;
            viols.push_back(std::move(vj));
        }
        j["violations"] = std::move(viols);
        emit(out, j);
    } else {
        out << "robust(" << fmt(eps) << "): " << yn(rep.robust) << "\n";
        for (const auto& v : rep.violations)
            out << "player " << v.player << " prefers "
                << game.action_labels(v.player)[v.better_action] << " by " << fmt(v.gap) << "\n";
    }
    return expect_outcome(rep.robust, expect);
}

inline int run_ladder(const CommonOpts& c, const std::string& profile_lit, int rungs,
                      const std::string& expect_verdict, std::ostream& out) {
    Game game = load_game(c.game_path);
    Profile prof(game, parse_strategies_literal(game, profile_lit));
    LadderReport rep = trembling_ladder(game, prof, rungs);
    if (c.format == "json") {
        auto j = header("ladder");
        j["game"] = game.name();
        j["rungs"] = rungs;
        j["verdict"] = to_string(rep.verdict);
        j["strict_t_evidence"] = rep.strict_t_evidence;
        j["strict_tp_evidence"] = rep.strict_tp_evidence;
        j["note"] = rep.note;
        nlohmann::ordered_json fams = nlohmann::ordered_json::array();
        for (const auto& f : rep.families) {
            nlohmann::ordered_json fj;
            fj["label"] = f.label;
            fj["all_best"] = f.all_best;
            fj["tail_fail"] = f.tail_fail;
            fj["strict_tail"] = f.strict_tail;
            fams.push_back(std::move(fj));
        }
        j["families"] = std::move(fams);
        emit(out, j);
    } else {
        out << "verdict: " << to_string(rep.verdict) << " (" << rep.note << ")\n";
        for (const auto& f : rep.families)
            out << f.label << ": all_best=" << yn(f.all_best) << " tail_fail=" << yn(f.tail_fail)
                << " strict_tail=" << yn(f.strict_tail) << "\n";
    }
    if (!expect_verdict.empty() && to_string(rep.verdict) != expect_verdict) return 1;
    return 0;
}

inline int run_audit(std::uint64_t seed, std::size_t games, const std::string& shape_str,
                     const std::string& metric_str, const std::string& r_vec,
                     const std::string& format, std::ostream& out) {
    std::vector<std::size_t> shape;
    for (const auto& t : split(shape_str, ','))
        shape.push_back(static_cast<std::size_t>(parse_double(t, "shape entry")));
    std::vector<double> radii;
    for (const auto& t : split(r_vec, ',')) radii.push_back(parse_double(t, "radius"));
    Metric metric = parse_metric(metric_str);
    AuditReport rep = implication_audit(seed, games, shape, radii, metric);
    if (format == "json") {
        auto j = header("audit");
        j["seed"] = seed;
        j["games"] = rep.games;
        j["checks"] = rep.checks;
        nlohmann::ordered_json viols = nlohmann::ordered_json::array();
        for (const auto& v : rep.violations) {
            nlohmann::ordered_json vj;
            vj["game_index"] = v.game_index;
            vj["rule"] = v.rule;
            vj["detail"] = v.detail;
            viols.push_back(std::move(vj));
        }
        j["violations"] = std::move(viols);
        emit(out, j);
    } else {
        out << rep.games << " games, " << rep.checks << " checks, " << rep.violations.size()
            << " violations\n";
        for (const auto& v : rep.violations)
            out << "game " << v.game_index << " " << v.rule << ": " << v.detail << "\n";
    }
    return rep.violations.empty() ? 0 : 1;
}

inline int run_oracle(const CommonOpts& c, const std::string& profile_lit, std::size_t player,
                      double resolution, double verdict_tol, bool compare, std::ostream& out) {
    Game game = load_game(c.game_path);
    Metric metric = parse_metric(c.metric);
    auto radii = parse_radii(game, c.r, c.r_vec);
    Profile prof(game, parse_strategies_literal(game, profile_lit));
    if (player >= game.num_players()) throw parse_error("--player out of range");
    BeliefSet belief(player, prof.opponents(player), radii[player], metric);
    OracleSettings os;
    os.resolution = resolution;
    if (verdict_tol >= 0.0) os.verdict_tol = verdict_tol;
    OracleVerdict ov = oracle_classify(game, belief, prof.strategy(player), os);

    auto flags_of = [](auto&& src) {
        nlohmann::ordered_json j;
        j["W"] = src.is_w;
        j["B"] = src.is_b;
        j["WR"] = src.is_wr;
        j["U"] = src.is_u;
        j["D"] = src.is_d;
        j["SD"] = src.is_sd;
        return j;
    };
    bool agree = true;
    nlohmann::ordered_json engine_flags;
    if (compare) {
        ResponseClassification rc = classify_response(game, belief, prof.strategy(player));
        engine_flags = flags_of(rc);
        agree = rc.is_w == ov.is_w && rc.is_b == ov.is_b && rc.is_wr == ov.is_wr &&
                rc.is_u == ov.is_u && rc.is_d == ov.is_d && rc.is_sd == ov.is_sd;
    }
    if (c.format == "json") {
        auto j = header("oracle");
        j["game"] = game.name();
        j["player"] = player;
        j["metric"] = to_string(metric);
        j["r"] = radii[player];
        j["resolution"] = resolution;
        j["verdict_tol"] = ov.verdict_tol;
        j["candidates"] = ov.candidates;
        j["ball_points"] = ov.ball_points;
        j["oracle"] = flags_of(ov);
        if (compare) {
            j["engine"] = engine_flags;
            j["agree"] = agree;
        }
        emit(out, j);
    } else {
        out << "oracle: W=" << yn(ov.is_w) << " B=" << yn(ov.is_b) << " WR=" << yn(ov.is_wr)
            << " U=" << yn(ov.is_u) << " D=" << yn(ov.is_d) << " SD=" << yn(ov.is_sd) << " ("
            << ov.candidates << " candidates x " << ov.ball_points << " points, tol "
            << fmt(ov.verdict_tol) << ")\n";
        if (compare) out << "engine agrees: " << yn(agree) << "\n";
    }
    return agree ? 0 : 1;
}

inline int run_poa(const CommonOpts& c, const std::string& notion_str, std::ostream& out) {
    Game game = load_game(c.game_path);
    Metric metric = parse_metric(c.metric);
    auto radii = parse_radii(game, c.r, c.r_vec);
    Notion notion = parse_notion(notion_str);
    auto hits = enumerate_pure(game, notion, radii, metric);
    std::vector<std::vector<MixedStrategy>> eqs;
    for (const auto& h : hits) eqs.push_back(Profile::pure(game, h).strategies());
    PoaResult res = price_of_anarchy(game, eqs);
    if (c.format == "json") {
        auto j = header("poa");
        j["game"] = game.name();
        j["notion"] = to_string(notion);
        j["metric"] = to_string(metric);
        j["radii"] = radii;
        j["equilibria"] = eqs.size();
        j["optimum"] = res.optimum;
        j["defined"] = res.defined;
        if (res.defined) {
            j["worst_equilibrium"] = res.worst_equilibrium;
            j["ratio"] = res.ratio;
        }
        emit(out, j);
    } else {
        out << "optimum welfare " << fmt(res.optimum) << ", " << eqs.size() << " pure "
            << to_string(notion) << "-equilibria\n";
        if (res.defined)
            out << "worst equilibrium welfare " << fmt(res.worst_equilibrium) << ", ratio "
                << fmt(res.ratio) << "\n";
        else
            out << "price of anarchy undefined (no equilibria found)\n";
    }
    return 0;
}

inline int run_delta(const CommonOpts& c, std::uint64_t seed, std::size_t segments,
                     std::ostream& out) {
    Game game = load_game(c.game_path);
    Metric metric = parse_metric(c.metric);
    DeltaEstimate est = delta_estimate(game, c.r, metric, seed, segments);
    if (c.format == "json") {
        auto j = header("delta");
        j["game"] = game.name();
        j["metric"] = to_string(metric);
        j["r"] = c.r;
        j["lower"] = est.lower;
        j["upper"] = est.upper;
        j["samples"] = est.samples;
        emit(out, j);
    } else {
        out << "delta(" << fmt(c.r) << ") in [" << fmt(est.lower) << ", " << fmt(est.upper)
            << "] from " << est.samples << " samples\n";
    }
    return 0;
}

inline int run_smoothness(const CommonOpts& c, bool with_bound, std::ostream& out) {
    Game game = load_game(c.game_path);
    SmoothnessFit fit = smoothness_fit(game);
    nlohmann::ordered_json j = header("smoothness");
    j["game"] = game.name();
    j["found"] = fit.found;
    j["lambda"] = fit.lambda;
    j["mu"] = fit.mu;
    std::string bound_line;
    if (with_bound && fit.found) {
        Metric metric = parse_metric(c.metric);
        auto radii = parse_radii(game, c.r, c.r_vec);
        auto hits = enumerate_pure(game, Notion::Nash, radii, metric);
        std::vector<std::vector<MixedStrategy>> eqs;
        for (const auto& h : hits) eqs.push_back(Profile::pure(game, h).strategies());
        PoaBound bound = poa_bound_check(game, eqs, c.r, metric);
        nlohmann::ordered_json bj;
        bj["applicable"] = bound.applicable;
        bj["delta_upper"] = bound.delta_upper;
        bj["bound"] = bound.bound;
        bj["optimum"] = bound.optimum;
        bj["holds"] = bound.holds;
        bj["equilibria"] = eqs.size();
        j["bound"] = std::move(bj);
        bound_line = "welfare bound " + fmt(bound.bound) + " x optimum, holds=" +
                     std::string(yn(bound.holds)) + " over " + std::to_string(eqs.size()) +
                     " pure equilibria";
    }
    if (c.format == "json") {
        emit(out, j);
    } else {
        if (fit.found)
            out << "smooth with lambda=" << fmt(fit.lambda) << " mu=" << fmt(fit.mu) << "\n";
        else
            out << "no useful smoothness constants\n";
        if (!bound_line.empty()) out << bound_line << "\n";
    }
    return 0;
}

inline int run_consensus(std::size_t players, std::size_t actions, double reward, double bonus,
                         double penalty, const std::string& save_path, bool audit,
                         const std::string& metric_str, const std::string& r_vec,
                         const std::string& format, std::ostream& out) {
    Game game = consensus_generate(players, actions, reward, bonus, penalty);
    if (!save_path.empty()) {
        std::ofstream f(save_path);
        if (!f) throw parse_error("cannot write \"" + save_path + "\"");
        f << serialize_game(game) << "\n";
    }
    if (audit) {
        std::vector<double> radii;
        for (const auto& t : split(r_vec.empty() ? std::string("0,0.01,0.05") : r_vec, ','))
            radii.push_back(parse_double(t, "radius"));
        ConsensusAudit rep = consensus_audit(game, radii, parse_metric(metric_str));
        if (format == "json") {
            auto j = header("consensus");
            j["players"] = rep.players;
            j["actions"] = rep.actions;
            j["structure_recognized"] = rep.structure_recognized;
            j["unanimity_profiles_equilibria"] = rep.unanimity_profiles_equilibria;
            j["first_unanimity_sd_small_radius"] = rep.first_unanimity_sd_small_radius;
            j["poa_at_unanimity"] = rep.poa_at_unanimity;
            j["nash_poa"] = rep.nash_poa;
            j["radii"] = rep.radii_checked;
            emit(out, j);
        } else {
            out << "structure=" << yn(rep.structure_recognized)
                << " unanimity_equilibria=" << yn(rep.unanimity_profiles_equilibria)
                << " first_sd_small_r=" << yn(rep.first_unanimity_sd_small_radius)
                << " poa_at_best=" << fmt(rep.poa_at_unanimity) << " nash_poa="
                << fmt(rep.nash_poa) << "\n";
        }
        bool ok = rep.structure_recognized && rep.unanimity_profiles_equilibria;
        return ok ? 0 : 1;
    }
    if (save_path.empty()) out << serialize_game(game) << "\n";
    return 0;
}

inline int run_sweep(const CommonOpts& c, const std::string& profile_lit, double r_from,
                     double r_to, int steps, std::ostream& out) {
    if (steps < 2) throw parse_error("--steps must be at least 2");
    if (!(r_from <= r_to)) throw parse_error("--r-from must not exceed --r-to");
    Game game = load_game(c.game_path);
    Metric metric = parse_metric(c.metric);
    Profile prof(game, parse_strategies_literal(game, profile_lit));
    std::string format = c.format.empty() ? "csv" : c.format;

    struct Row {
        double r;
        EquilibriumReport rep;
    };
    std::vector<Row> rows;
    for (int s = 0; s < steps; ++s) {
        double r = r_from + (r_to - r_from) * double(s) / double(steps - 1);
        std::vector<double> radii(game.num_players(), r);
        rows.push_back({r, verify_equilibrium(game, prof, radii, metric)});
    }
    if (format == "json") {
        auto j = header("sweep");
        j["game"] = game.name();
        j["metric"] = to_string(metric);
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& row : rows) {
            nlohmann::ordered_json rj;
            rj["r"] = row.r;
            rj["flags"] = report_json(row.rep);
            arr.push_back(std::move(rj));
        }
        j["rows"] = std::move(arr);
        emit(out, j);
    } else {
        // csv (the table format prints the same grid)
        out << "r,nash,W,B,WR,U,D,SD\n";
        for (const auto& row : rows)
            out << fmt(row.r) << "," << int(row.rep.nash) << "," << int(row.rep.w) << ","
                << int(row.rep.b) << "," << int(row.rep.wr) << "," << int(row.rep.u) << ","
                << int(row.rep.d) << "," << int(row.rep.sd) << "\n";
    }
    return 0;
}

/** Entry point shared by the binary and the tests. */
inline int dbeq_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"distance-based equilibria of finite games"};
    app.require_subcommand(1);

    CommonOpts c;
    std::string profile_lit, notion_str, expect_str, pure_lit, expect_verdict;
    std::string shape_str = "2,2", audit_r_vec = "0,0.1,0.5", save_path;
    double resolution = 0.1, eps = 0.05, verdict_tol = -1.0;
    double reward = 1.0, bonus = 2.0, penalty = 0.0, r_from = 0.0, r_to = 1.0;
    std::uint64_t seed = 17;
    std::size_t games = 50, segments = 64, player = 0, players = 2, actions = 2;
    int rungs = 40, steps = 11;
    bool compare = false, with_bound = false, audit_flag = false;

    auto add_common = [&](CLI::App* sub, bool needs_game) {
        if (needs_game) sub->add_option("--game,-g", c.game_path, "game JSON file")->required();
        sub->add_option("--metric,-m", c.metric, "l2, l1, or linf (default linf)");
        sub->add_option("--r", c.r, "belief radius for every player");
        sub->add_option("--r-vec", c.r_vec, "comma-separated per-player radii");
        sub->add_option("--format,-f", c.format, "json, table, or csv");
    };

    auto* verify = app.add_subcommand("verify", "classify a profile under every notion");
    add_common(verify, true);
    verify->add_option("--profile,-p", profile_lit, "p0:0.5,0.5;p1:1,0")->required();
    verify->add_option("--notion,-n", notion_str, "nash, W, B, WR, U, D, or SD");
    verify->add_option("--expect", expect_str, "exit 1 unless the notion flag matches");

    auto* enumerate = app.add_subcommand("enumerate", "list pure equilibria of one notion");
    add_common(enumerate, true);
    enumerate->add_option("--notion,-n", notion_str, "notion to enumerate")->required();

    auto* search = app.add_subcommand("search", "grid search for mixed equilibria");
    add_common(search, true);
    search->add_option("--notion,-n", notion_str, "notion to search")->required();
    search->add_option("--resolution", resolution, "barycentric grid step (default 0.1)");

    auto* robust = app.add_subcommand("robust", "tremble robustness of a pure profile");
    add_common(robust, true);
    robust->add_option("--pure", pure_lit, "comma-separated actions, labels or indices")
        ->required();
    robust->add_option("--eps", eps, "tremble size (default 0.05)");
    robust->add_option("--expect", expect_str, "exit 1 unless robustness matches");

    auto* ladder = app.add_subcommand("ladder", "vanishing-tremble evidence for a profile");
    add_common(ladder, true);
    ladder->add_option("--profile,-p", profile_lit, "profile literal")->required();
    ladder->add_option("--rungs", rungs, "number of halvings (default 40)");
    ladder->add_option("--expect-verdict", expect_verdict,
                       "supported, refuted, or inconclusive; exit 1 on mismatch");

    auto* audit = app.add_subcommand("audit", "randomized cross-implication audit");
    audit->add_option("--seed", seed, "base seed (default 17)");
    audit->add_option("--games", games, "number of random games (default 50)");
    audit->add_option("--shape", shape_str, "actions per player, e.g. 2,2 (default)");
    audit->add_option("--metric,-m", c.metric, "metric for the belief sets");
    audit->add_option("--r-vec", audit_r_vec, "radii to cross-check (default 0,0.1,0.5)");
    audit->add_option("--format,-f", c.format, "json or table");

    auto* oracle = app.add_subcommand("oracle", "grid-based second opinion on one player");
    add_common(oracle, true);
    oracle->add_option("--profile,-p", profile_lit, "profile literal")->required();
    oracle->add_option("--player", player, "whose response to classify (default 0)");
    oracle->add_option("--resolution", resolution, "grid step (default 0.1)");
    oracle->add_option("--verdict-tol", verdict_tol, "override the grid slack");
    oracle->add_flag("--compare", compare, "also run the solver; exit 1 on any disagreement");

    auto* poa = app.add_subcommand("poa", "price of anarchy over pure equilibria");
    add_common(poa, true);
    poa->add_option("--notion,-n", notion_str, "notion defining equilibria (default nash)");

    auto* delta = app.add_subcommand("delta", "utility drift ratio across a radius");
    add_common(delta, true);
    delta->add_option("--seed", seed, "sampling seed (default 17)");
    delta->add_option("--segments", segments, "random segments (default 64)");

    auto* smoothness = app.add_subcommand("smoothness", "fit smoothness constants");
    add_common(smoothness, true);
    smoothness->add_flag("--bound", with_bound, "also check the welfare bound at --r");

    auto* consensus = app.add_subcommand("consensus", "generate or audit a consensus game");
    consensus->add_option("--players", players, "number of players (default 2)");
    consensus->add_option("--actions", actions, "actions per player (default 2)");
    consensus->add_option("--reward", reward, "majority payoff (default 1)");
    consensus->add_option("--bonus", bonus, "distinguished unanimity payoff (default 2)");
    consensus->add_option("--penalty", penalty, "minority payoff (default 0)");
    consensus->add_option("--save", save_path, "write the game JSON here instead of stdout");
    consensus->add_flag("--audit", audit_flag, "check the family's equilibrium facts");
    consensus->add_option("--metric,-m", c.metric, "metric for the audit");
    consensus->add_option("--r-vec", audit_r_vec, "radii for the audit");
    consensus->add_option("--format,-f", c.format, "json or table");

    auto* sweep = app.add_subcommand("sweep", "flags of one profile across radii");
    add_common(sweep, true);
    sweep->add_option("--profile,-p", profile_lit, "profile literal")->required();
    sweep->add_option("--r-from", r_from, "first radius (default 0)");
    sweep->add_option("--r-to", r_to, "last radius (default 1)");
    sweep->add_option("--steps", steps, "number of radii (default 11)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*verify) return run_verify(c, profile_lit, notion_str, expect_str, out);
        if (*enumerate) return run_enumerate(c, notion_str, out);
        if (*search) return run_search(c, notion_str, resolution, out);
        if (*robust) return run_robust(c, pure_lit, eps, expect_str, out);
        if (*ladder) return run_ladder(c, profile_lit, rungs, expect_verdict, out);
        if (*audit)
            return run_audit(seed, games, shape_str, c.metric, audit_r_vec,
                             c.format.empty() ? "table" : c.format, out);
        if (*oracle) return run_oracle(c, profile_lit, player, resolution, verdict_tol, compare, out);
        if (*poa) return run_poa(c, notion_str.empty() ? "nash" : notion_str, out);
        if (*delta) return run_delta(c, seed, segments, out);
        if (*smoothness) return run_smoothness(c, with_bound, out);
        if (*consensus)
            return run_consensus(players, actions, reward, bonus, penalty, save_path, audit_flag,
                                 c.metric, audit_r_vec, c.format.empty() ? "table" : c.format,
                                 out);
        if (*sweep) return run_sweep(c, profile_lit, r_from, r_to, steps, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no verb\n";
    return 2;
}

} // namespace dbeq::cli
