#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "resil/channel.hpp"
#include "resil/error.hpp"
#include "resil/prediction.hpp"
#include "resil/service.hpp"

namespace resil {

inline constexpr int kDefaultMaxResources = 64;

struct AllocationDecision {
    int n = 1;
    /// The target was unreachable within n_max; n == n_max.
    bool saturated = false;
    double expected_outage = 1.0;
};

/// Smallest n in [1, n_max] whose belief-weighted outage meets the target.
///
/// Doubling search brackets the answer, then bisection pins it; expected
/// outage is nonincreasing in n so this equals the linear scan.
inline AllocationDecision min_allocation(const LinkModel& link, std::span<const double> belief,
                                         std::span<const double> powers, double target,
                                         int n_max = kDefaultMaxResources) {
    if (!(target > 0.0 && target < 1.0))
        throw InvalidInput("outage target must lie in (0,1)");
    if (n_max < 1)
        throw InvalidInput("n_max must be >= 1");

    auto meets = [&](int n) { return expected_outage(link, belief, powers, n) <= target; };

    if (!meets(n_max))
        return {n_max, true, expected_outage(link, belief, powers, n_max)};

    int lo = 0;  // largest n known to miss (0 = none)
    int hi = 1;
    while (hi < n_max && !meets(hi)) {
        lo = hi;
        hi = std::min(n_max, hi * 2);
    }
    while (hi - lo > 1) {
        const int mid = lo + (hi - lo) / 2;
        if (meets(mid))
            hi = mid;
        else
            lo = mid;
    }
    return {hi, false, expected_outage(link, belief, powers, hi)};
}

inline AllocationDecision min_allocation(const LinkModel& link, const Prediction& prediction,
                                         double target, int n_max = kDefaultMaxResources) {
    return min_allocation(link, prediction.belief, prediction.powers, target, n_max);
}

/// Allocation when the state is known exactly, for every state of the chain.
inline std::vector<int> oracle_allocations(const LinkModel& link, const MarkovChain& chain,
                                           double target, int n_max = kDefaultMaxResources) {
    std::vector<int> out(chain.size());
    const std::vector<double> one{1.0};
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const std::vector<double> power{chain.power(i)};
        out[i] = min_allocation(link, one, power, target, n_max).n;
    }
    return out;
}

namespace baseline {

/// Provision every slot for the highest-interference state.
struct WorstState {};

/// Constant k units regardless of state.
struct FixedN {
    int k = 1;
};

/// `copies` times the oracle allocation: diversity with redundant links.
struct Redundant {
    int copies = 2;
};

using Mode = std::variant<WorstState, FixedN, Redundant>;

} // namespace baseline

/// Per-state resource counts of a prediction-free baseline.
inline std::vector<int> static_baseline(const LinkModel& link, const MarkovChain& chain,
                                        double target, const baseline::Mode& mode,
                                        int n_max = kDefaultMaxResources) {
    const std::size_t k = chain.size();
    return std::visit(
        [&](const auto& m) -> std::vector<int> {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, baseline::WorstState>) {
                const std::vector<double> one{1.0};
                const std::vector<double> power{chain.power(chain.highest_power_state())};
                return std::vector<int>(k, min_allocation(link, one, power, target, n_max).n);
            } else if constexpr (std::is_same_v<M, baseline::FixedN>) {
                if (m.k < 1)
                    throw InvalidInput("fixed allocation must be >= 1");
                return std::vector<int>(k, m.k);
            } else {
                if (m.copies < 1)
                    throw InvalidInput("redundancy copies must be >= 1");
                auto n = oracle_allocations(link, chain, target, n_max);
                for (int& v : n)
                    v *= m.copies;
                return n;
            }
        },
        mode);
}

enum class SystemLabel { normal, degraded, emergency };

inline std::string_view to_string(SystemLabel label) {
    switch (label) {
    case SystemLabel::normal: return "normal";
    case SystemLabel::degraded: return "degraded";
    case SystemLabel::emergency: return "emergency";
    }
    return "unknown";
}

struct SystemState {
    SystemLabel label = SystemLabel::normal;
    double capacity_fraction = 1.0;
};

/// Greedy per-tier grants in ascending priority rank. Outside the normal
/// state each tier asks only for its degraded demand. The marginal tier may be
/// granted partially. Grants are returned in input order.
inline std::vector<double> staggered_degrade(std::span<const SlaTier> tiers,
                                             const SystemState& state,
                                             double nominal_capacity) {
    if (tiers.empty())
        throw InvalidInput("tier set is empty");
    validate_tier_set(tiers);
    if (!(state.capacity_fraction >= 0.0 && state.capacity_fraction <= 1.0))
        throw InvalidInput("capacity fraction must lie in [0,1]");
    if (!(nominal_capacity >= 0.0))
        throw InvalidInput("nominal capacity must be >= 0");

    std::vector<std::size_t> order(tiers.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return tiers[a].priority < tiers[b].priority;
    });

    double available = nominal_capacity * state.capacity_fraction;
    std::vector<double> grants(tiers.size(), 0.0);
    for (std::size_t idx : order) {
        const auto& tier = tiers[idx];
        const double want =
            state.label == SystemLabel::normal ? tier.demand : tier.degraded_demand;
        const double granted = std::min(want, available);
        grants[idx] = granted;
        available -= granted;
        if (available <= 0.0)
            break;
    }
    return grants;
}

} // namespace resil
