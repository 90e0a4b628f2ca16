#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "dbeq/errors.hpp"
#include "dbeq/game.hpp"

namespace dbeq {

/**
 * Game document format:
 *
 *   {
 *     "name":    optional string,
 *     "players": n,
 *     "actions": [ [label, ...], ... ]          one list per player
 *     "payoffs": [ [real, ...], ... ]           one flat tensor per player,
 *   }                                           last player's index fastest
 *
 * Numbers are parsed from their decimal text by the JSON layer (strtod
 * semantics), so payoffs survive a parse/serialize round trip bit-exactly.
 */
inline Game parse_game(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(std::string("game document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw parse_error("game document must be a JSON object");
    if (!doc.contains("players") || !doc["players"].is_number_integer())
        throw parse_error("missing or non-integer \"players\"");
    if (!doc.contains("actions") || !doc["actions"].is_array())
        throw parse_error("missing or non-array \"actions\"");
    if (!doc.contains("payoffs") || !doc["payoffs"].is_array())
        throw parse_error("missing or non-array \"payoffs\"");

    const long long players = doc["players"].get<long long>();
    if (players < 2) throw parse_error("\"players\" must be at least 2");
    if (doc["actions"].size() != std::size_t(players))
        throw parse_error("\"actions\" must list one label array per player");
    if (doc["payoffs"].size() != std::size_t(players))
        throw parse_error("\"payoffs\" must list one tensor per player");

    std::vector<std::vector<std::string>> actions;
    actions.reserve(std::size_t(players));
    for (std::size_t i = 0; i < doc["actions"].size(); ++i) {
        const auto& arr = doc["actions"][i];
        if (!arr.is_array() || arr.empty())
            throw parse_error("\"actions\"[" + std::to_string(i) + "] must be a non-empty array");
        std::vector<std::string> labels;
        labels.reserve(arr.size());
        for (const auto& lab : arr) {
            if (!lab.is_string())
                throw parse_error("\"actions\"[" + std::to_string(i) + "] entries must be strings");
            labels.push_back(lab.get<std::string>());
        }
        actions.push_back(std::move(labels));
    }

    std::size_t total = 1;
    for (const auto& labels : actions) total *= labels.size();

    std::vector<std::vector<double>> payoffs;
    payoffs.reserve(std::size_t(players));
    for (std::size_t i = 0; i < doc["payoffs"].size(); ++i) {
        const auto& arr = doc["payoffs"][i];
        if (!arr.is_array())
            throw parse_error("\"payoffs\"[" + std::to_string(i) + "] must be an array");
        if (arr.size() != total)
            throw parse_error("\"payoffs\"[" + std::to_string(i) + "] has " +
                              std::to_string(arr.size()) + " entries, expected " +
                              std::to_string(total));
        std::vector<double> tensor;
        tensor.reserve(total);
        for (std::size_t k = 0; k < arr.size(); ++k) {
            if (!arr[k].is_number())
                throw parse_error("\"payoffs\"[" + std::to_string(i) + "][" + std::to_string(k) +
                                  "] is not a number");
            tensor.push_back(arr[k].get<double>());
        }
        payoffs.push_back(std::move(tensor));
    }

    std::string name;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw parse_error("\"name\" must be a string");
        name = doc["name"].get<std::string>();
    }

    try {
        return Game(std::move(actions), std::move(payoffs), std::move(name));
    } catch (const shape_error& e) {
        throw parse_error(std::string("game document is malformed: ") + e.what());
    }
}

inline nlohmann::ordered_json game_to_json(const Game& game) {
    nlohmann::ordered_json doc;
    if (!game.name().empty()) doc["name"] = game.name();
    doc["players"] = game.num_players();
    auto actions = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < game.num_players(); ++i) actions.push_back(game.action_labels(i));
    doc["actions"] = std::move(actions);
    auto payoffs = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < game.num_players(); ++i) payoffs.push_back(game.payoff_tensor(i));
    doc["payoffs"] = std::move(payoffs);
    return doc;
}

inline std::string serialize_game(const Game& game, int indent = 2) {
    return game_to_json(game).dump(indent);
}

} // namespace dbeq
