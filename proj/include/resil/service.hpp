#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "resil/error.hpp"

namespace resil {

/// Sampled service level s(t): the delivered service divided by the desired
/// service, so 1.0 means the target is met. Values above 1 are allowed.
class ServiceTrace {
public:
    ServiceTrace(std::vector<double> times, std::vector<double> values)
        : times_(std::move(times)), values_(std::move(values)) {
        if (times_.empty())
            throw InvalidInput("service trace is empty");
        if (times_.size() != values_.size())
            throw InvalidInput("service trace times and values differ in length");
        for (std::size_t i = 0; i < times_.size(); ++i) {
            if (!std::isfinite(times_[i]) || !std::isfinite(values_[i]))
                throw InvalidInput("service trace contains a non-finite sample");
            if (values_[i] < 0.0)
                throw InvalidInput("service level must be >= 0");
            if (i > 0 && !(times_[i] > times_[i - 1]))
                throw InvalidInput("service trace times must be strictly increasing");
        }
    }

    /// Samples at t = 0, 1, ..., values.size() - 1.
    static ServiceTrace unit_steps(std::vector<double> values) {
        std::vector<double> times(values.size());
        for (std::size_t i = 0; i < times.size(); ++i)
            times[i] = static_cast<double>(i);
        return ServiceTrace(std::move(times), std::move(values));
    }

    std::span<const double> times() const noexcept { return times_; }
    std::span<const double> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return times_.size(); }
    double front_time() const noexcept { return times_.front(); }
    double back_time() const noexcept { return times_.back(); }

private:
    std::vector<double> times_;
    std::vector<double> values_;
};

/// A service-level agreement class. Lower priority value = more critical.
struct SlaTier {
    std::string name;
    int priority = 0;
    double outage_target = 0.01;
    int survival_time = 1;
    double demand = 0.0;
    double degraded_demand = 0.0;

    void validate() const {
        if (!(outage_target > 0.0 && outage_target < 1.0))
            throw InvalidInput("tier '" + name + "': outage target must lie in (0,1)");
        if (survival_time < 1)
            throw InvalidInput("tier '" + name + "': survival time must be >= 1");
        if (!(demand >= 0.0) || !(degraded_demand >= 0.0) || degraded_demand > demand)
            throw InvalidInput("tier '" + name + "': require 0 <= degraded_demand <= demand");
    }
};

inline void validate_tier_set(std::span<const SlaTier> tiers) {
    std::set<int> seen;
    for (const auto& tier : tiers) {
        tier.validate();
        if (!seen.insert(tier.priority).second)
            throw InvalidInput("duplicate tier priority " + std::to_string(tier.priority));
    }
}

struct FailureKpis {
    /// Slots per failure run; +infinity when the bitmap has no failures.
    double mtbf = std::numeric_limits<double>::infinity();
    std::size_t max_consecutive_failures = 0;
    /// Failure runs strictly longer than the survival time.
    std::size_t survival_violations = 0;
    double failure_rate = 0.0;
    std::size_t failure_runs = 0;
    std::size_t failed_slots = 0;
};

/// Failure-pattern KPIs of a per-slot failure bitmap. A failure run is one
/// maximal stretch of consecutive failed slots.
inline FailureKpis kpis_from_bitmap(std::span<const bool> failures, int survival_time) {
    if (failures.empty())
        throw InvalidInput("failure bitmap is empty");
    if (survival_time < 1)
        throw InvalidInput("survival time must be >= 1");

    FailureKpis kpis;
    std::size_t run = 0;
    auto close_run = [&] {
        if (run == 0)
            return;
        ++kpis.failure_runs;
        kpis.max_consecutive_failures = std::max(kpis.max_consecutive_failures, run);
        if (run > static_cast<std::size_t>(survival_time))
            ++kpis.survival_violations;
        run = 0;
    };
    for (bool failed : failures) {
        if (failed) {
            ++run;
            ++kpis.failed_slots;
        } else {
            close_run();
        }
    }
    close_run();

    const auto total = static_cast<double>(failures.size());
    kpis.failure_rate = static_cast<double>(kpis.failed_slots) / total;
    if (kpis.failure_runs > 0)
        kpis.mtbf = total / static_cast<double>(kpis.failure_runs);
    return kpis;
}

/// Overload for std::vector<bool>, which cannot be viewed as a span.
inline FailureKpis kpis_from_bitmap(const std::vector<bool>& failures, int survival_time) {
    auto flags = std::make_unique<bool[]>(failures.size());
    std::copy(failures.begin(), failures.end(), flags.get());
    return kpis_from_bitmap(std::span<const bool>(flags.get(), failures.size()), survival_time);
}

} // namespace resil
