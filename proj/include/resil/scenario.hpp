#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "resil/allocation.hpp"
#include "resil/channel.hpp"
#include "resil/error.hpp"
#include "resil/prediction.hpp"

namespace resil {

/// How a simulated link chooses its per-slot resource count.
enum class PolicyKind { oracle, markov, average, worst_state, diversity };

inline std::string_view to_string(PolicyKind kind) {
    switch (kind) {
    case PolicyKind::oracle: return "oracle";
    case PolicyKind::markov: return "markov";
    case PolicyKind::average: return "average";
    case PolicyKind::worst_state: return "worst_state";
    case PolicyKind::diversity: return "diversity";
    }
    return "unknown";
}

inline std::optional<PolicyKind> parse_policy(std::string_view name) {
    for (auto k : {PolicyKind::oracle, PolicyKind::markov, PolicyKind::average,
                   PolicyKind::worst_state, PolicyKind::diversity})
        if (to_string(k) == name)
            return k;
    return std::nullopt;
}

struct PredictorSpec {
    PolicyKind kind = PolicyKind::markov;
    double smoothing = 1.0;
    double forgetting = 1.0;
    std::size_t window = 10;
    /// Copies of the oracle allocation used by the diversity baseline.
    int redundancy = 2;
};

struct OutputSpec {
    std::string per_slot_csv = "slots.csv";
    std::string summary_json = "summary.json";
    std::string plot_csv = "plot.csv";
};

struct ScenarioConfig {
    std::uint64_t seed = 1;
    std::uint64_t slots = 1;
    std::uint64_t warmup_slots = 0;
    std::size_t initial_state = 0;
    MarkovChain chain{{0.0}, Matrix{{1.0}}};
    LinkModel link;
    double target_outage = 0.01;
    int n_max = kDefaultMaxResources;
    PredictorSpec predictor;
    OutputSpec output;

    void validate() const {
        if (slots < 1)
            throw ConfigError("slots", "must be >= 1");
        if (warmup_slots >= slots)
            throw ConfigError("warmup_slots", "must be smaller than slots");
        if (initial_state >= chain.size())
            throw ConfigError("initial_state", "exceeds the number of chain states");
        try {
            link.validate();
        } catch (const InvalidInput& e) {
            throw ConfigError("link", e.what());
        }
        if (!(target_outage > 0.0 && target_outage < 1.0))
            throw ConfigError("target_outage", "must lie in (0,1)");
        if (n_max < 1)
            throw ConfigError("n_max", "must be >= 1");
        if (!(predictor.smoothing >= 0.0))
            throw ConfigError("predictor.smoothing", "must be >= 0");
        if (!(predictor.forgetting > 0.0 && predictor.forgetting <= 1.0))
            throw ConfigError("predictor.forgetting", "must lie in (0,1]");
        if (predictor.window < 1)
            throw ConfigError("predictor.window", "must be >= 1");
        if (predictor.redundancy < 1)
            throw ConfigError("predictor.redundancy", "must be >= 1");
    }
};

/// Three-state interference benchmark: powers {0, 2, 8}, a sticky
/// transition matrix, S = 10, N0 = 1, theta = 1, 1% outage target.
inline ScenarioConfig reference_scenario() {
    ScenarioConfig cfg;
    cfg.seed = 1;
    cfg.slots = 1'000'000;
    cfg.warmup_slots = 10'000;
    cfg.chain = MarkovChain({0.0, 2.0, 8.0}, Matrix{{0.90, 0.08, 0.02},
                                                    {0.10, 0.80, 0.10},
                                                    {0.05, 0.15, 0.80}});
    cfg.link = LinkModel{10.0, 1.0, 1.0};
    cfg.target_outage = 0.01;
    cfg.n_max = kDefaultMaxResources;
    return cfg;
}

} // namespace resil
