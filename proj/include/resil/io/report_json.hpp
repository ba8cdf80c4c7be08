#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "resil/metrics.hpp"
#include "resil/service.hpp"
#include "resil/simulator.hpp"

namespace resil::io {

using ordered_json = nlohmann::ordered_json;

inline ordered_json finite_or_null(double v) {
    return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

inline ordered_json to_json(const SummaryReport& r) {
    ordered_json j;
    j["kind"] = std::string(to_string(r.kind));
    j["seed"] = r.seed;
    j["replication"] = r.replication;
    j["target_outage"] = r.target_outage;
    j["measured_slots"] = r.measured_slots;
    j["failures"] = r.failures;
    j["achieved_outage"] = r.achieved_outage;
    j["allocation_sum"] = r.allocation_sum;
    j["mean_allocation"] = r.mean_allocation;
    j["overhead_vs_oracle"] =
        r.overhead_vs_oracle ? ordered_json(*r.overhead_vs_oracle) : ordered_json(nullptr);
    j["saturation_count"] = r.saturation_count;
    j["per_slot_trace"] = r.per_slot_trace;
    return j;
}

inline ordered_json to_json(const FailureKpis& k) {
    ordered_json j;
    j["mtbf"] = finite_or_null(k.mtbf);
    j["max_consecutive_failures"] = k.max_consecutive_failures;
    j["survival_violations"] = k.survival_violations;
    j["failure_rate"] = k.failure_rate;
    j["failure_runs"] = k.failure_runs;
    j["failed_slots"] = k.failed_slots;
    return j;
}

struct MetricsOptions {
    double alpha = kDefaultAdoptionThreshold;
    double tau = kDefaultPhaseDecay;
    std::array<double, 3> weights{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    int survival_time = 1;
};

/// Full resilience report of a trace: failure KPIs over samples with s < 1,
/// and per disruption window the phase split, both scores and the CRF curve.
/// Unterminated windows carry null scores.
inline ordered_json metrics_report(const ServiceTrace& trace, const MetricsOptions& opt) {
    ordered_json j;
    j["samples"] = trace.size();
    j["alpha"] = opt.alpha;
    j["tau"] = opt.tau;
    j["weights"] = opt.weights;

    std::vector<bool> below(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i)
        below[i] = trace.values()[i] < 1.0;
    j["kpis"] = to_json(kpis_from_bitmap(below, opt.survival_time));
    j["kpis"]["survival_time"] = opt.survival_time;

    ordered_json windows = ordered_json::array();
    for (const auto& w : detect_disruptions(trace)) {
        ordered_json wj;
        wj["t_detect"] = w.t_detect;
        wj["t_trough"] = w.t_trough;
        wj["t_recover"] = w.t_recover;
        wj["terminated"] = w.terminated;
        if (w.terminated) {
            const auto phases = segment_phases(trace, w, opt.alpha);
            wj["phases"] = {{"absorption", phases.absorption},
                            {"adoption", phases.adoption},
                            {"recovery", phases.recovery}};
            wj["phase_weighted"] = phase_weighted_resilience(phases, opt.weights, opt.tau).value;
            wj["recovery_area"] = recovery_area_resilience(trace, w).value;
            ordered_json curve = ordered_json::array();
            for (const auto& [t, c] : crf_curve(trace, w))
                curve.push_back({t, c});
            wj["crf"] = std::move(curve);
        } else {
            wj["phases"] = nullptr;
            wj["phase_weighted"] = nullptr;
            wj["recovery_area"] = nullptr;
            wj["crf"] = nullptr;
        }
        windows.push_back(std::move(wj));
    }
    j["windows"] = std::move(windows);
    return j;
}

} // namespace resil::io
