#pragma once

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "resil/error.hpp"
#include "resil/scenario.hpp"

namespace resil::io {

using nlohmann::json;

namespace detail {

inline void reject_unknown(const json& obj, const std::string& path,
                           std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object())
        throw ConfigError(path.empty() ? "<root>" : path, "must be an object");
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed)
            known |= key == a;
        if (!known)
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown field");
    }
}

inline std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
}

inline double number(const json& obj, const std::string& path, std::string_view key) {
    const auto& v = obj.at(std::string(key));
    if (!v.is_number())
        throw ConfigError(join(path, key), "must be a number");
    return v.get<double>();
}

inline std::uint64_t unsigned_integer(const json& obj, const std::string& path,
                                      std::string_view key) {
    const auto& v = obj.at(std::string(key));
    if (!v.is_number_unsigned())
        throw ConfigError(join(path, key), "must be a non-negative integer");
    return v.get<std::uint64_t>();
}

// Accepts `key` in linear units or `key_db` in decibels, not both.
inline std::optional<double> linear_or_db(const json& obj, const std::string& path,
                                          const std::string& key) {
    const bool lin = obj.contains(key);
    const bool db = obj.contains(key + "_db");
    if (lin && db)
        throw ConfigError(join(path, key), "give either linear or _db form, not both");
    if (lin)
        return number(obj, path, key);
    if (db)
        return db_to_linear(number(obj, path, key + "_db"));
    return std::nullopt;
}

inline std::vector<double> number_array(const json& v, const std::string& path) {
    if (!v.is_array())
        throw ConfigError(path, "must be an array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number())
            throw ConfigError(path, "must be an array of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

} // namespace detail

/// Parses a scenario document. Unknown fields anywhere are rejected.
inline ScenarioConfig parse_scenario(const json& doc) {
    using namespace detail;
    reject_unknown(doc, "",
                   {"seed", "slots", "warmup_slots", "initial_state", "chain", "link",
                    "target_outage", "n_max", "predictor", "output"});
    ScenarioConfig cfg;
    for (auto required : {"slots", "chain", "link", "target_outage"})
        if (!doc.contains(required))
            throw ConfigError(required, "missing required field");

    if (doc.contains("seed"))
        cfg.seed = unsigned_integer(doc, "", "seed");
    cfg.slots = unsigned_integer(doc, "", "slots");
    if (doc.contains("warmup_slots"))
        cfg.warmup_slots = unsigned_integer(doc, "", "warmup_slots");
    if (doc.contains("initial_state"))
        cfg.initial_state = unsigned_integer(doc, "", "initial_state");
    cfg.target_outage = number(doc, "", "target_outage");
    if (doc.contains("n_max")) {
        const auto n = unsigned_integer(doc, "", "n_max");
        if (n > 1'000'000)
            throw ConfigError("n_max", "unreasonably large");
        cfg.n_max = static_cast<int>(n);
    }

    {
        const auto& c = doc.at("chain");
        reject_unknown(c, "chain", {"powers", "powers_db", "transition"});
        std::vector<double> powers;
        if (c.contains("powers") == c.contains("powers_db"))
            throw ConfigError("chain.powers", "give exactly one of powers or powers_db");
        if (c.contains("powers")) {
            powers = number_array(c.at("powers"), "chain.powers");
        } else {
            powers = number_array(c.at("powers_db"), "chain.powers_db");
            for (double& p : powers)
                p = db_to_linear(p);
        }
        if (!c.contains("transition"))
            throw ConfigError("chain.transition", "missing required field");
        const auto& rows = c.at("transition");
        if (!rows.is_array())
            throw ConfigError("chain.transition", "must be an array of rows");
        Matrix p(rows.size(), powers.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const auto row = number_array(rows[i], "chain.transition");
            if (row.size() != powers.size())
                throw ConfigError("chain.transition", "must be K x K");
            for (std::size_t j = 0; j < row.size(); ++j)
                p(i, j) = row[j];
        }
        try {
            cfg.chain = MarkovChain(std::move(powers), std::move(p));
        } catch (const InvalidInput& e) {
            throw ConfigError("chain", e.what());
        }
    }

    {
        const auto& l = doc.at("link");
        reject_unknown(l, "link",
                       {"mean_signal", "mean_signal_db", "noise", "noise_db", "sinr_threshold",
                        "sinr_threshold_db"});
        const auto s = linear_or_db(l, "link", "mean_signal");
        const auto n = linear_or_db(l, "link", "noise");
        const auto t = linear_or_db(l, "link", "sinr_threshold");
        if (!s)
            throw ConfigError("link.mean_signal", "missing required field");
        if (!t)
            throw ConfigError("link.sinr_threshold", "missing required field");
        cfg.link = LinkModel{*s, n.value_or(0.0), *t};
    }

    if (doc.contains("predictor")) {
        const auto& p = doc.at("predictor");
        reject_unknown(p, "predictor",
                       {"kind", "smoothing", "forgetting", "window", "redundancy"});
        if (p.contains("kind")) {
            const auto& k = p.at("kind");
            const auto kind = k.is_string() ? parse_policy(k.get<std::string>()) : std::nullopt;
            if (!kind)
                throw ConfigError("predictor.kind",
                                  "expected oracle, markov, average, worst_state or diversity");
            cfg.predictor.kind = *kind;
        }
        if (p.contains("smoothing"))
            cfg.predictor.smoothing = number(p, "predictor", "smoothing");
        if (p.contains("forgetting"))
            cfg.predictor.forgetting = number(p, "predictor", "forgetting");
        if (p.contains("window")) {
            const auto& w = p.at("window");
            if (w.is_string() && w.get<std::string>() == "unbounded")
                cfg.predictor.window = MovingAveragePredictor::kUnbounded;
            else
                cfg.predictor.window = unsigned_integer(p, "predictor", "window");
        }
        if (p.contains("redundancy"))
            cfg.predictor.redundancy =
                static_cast<int>(unsigned_integer(p, "predictor", "redundancy"));
    }

    if (doc.contains("output")) {
        const auto& o = doc.at("output");
        reject_unknown(o, "output", {"per_slot_csv", "summary_json", "plot_csv"});
        auto text = [&](const char* key, std::string& dst) {
            if (!o.contains(key))
                return;
            if (!o.at(key).is_string())
                throw ConfigError(std::string("output.") + key, "must be a string");
            dst = o.at(key).get<std::string>();
        };
        text("per_slot_csv", cfg.output.per_slot_csv);
        text("summary_json", cfg.output.summary_json);
        text("plot_csv", cfg.output.plot_csv);
    }

    cfg.validate();
    return cfg;
}

inline ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("cannot open scenario file " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
    }
    return parse_scenario(doc);
}

} // namespace resil::io
