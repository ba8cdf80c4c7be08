#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <future>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "resil/allocation.hpp"
#include "resil/channel.hpp"
#include "resil/error.hpp"
#include "resil/format.hpp"
#include "resil/prediction.hpp"
#include "resil/rng.hpp"
#include "resil/scenario.hpp"

namespace resil {

struct SummaryReport {
    PolicyKind kind = PolicyKind::oracle;
    std::uint64_t seed = 0;
    int replication = 0;
    double target_outage = 0.0;
    std::uint64_t measured_slots = 0;
    std::uint64_t failures = 0;
    std::uint64_t allocation_sum = 0;
    /// Failed transmission slots after warmup, as a fraction.
    double achieved_outage = 0.0;
    double mean_allocation = 0.0;
    /// Set only when an oracle run with the same seed is available.
    std::optional<double> overhead_vs_oracle;
    std::uint64_t saturation_count = 0;
    std::string per_slot_trace;
};

/// Relative extra resources against an oracle run over the same slots.
/// Computed from the integer totals so doubling gives exactly 1.
inline double overhead_ratio(const SummaryReport& run, const SummaryReport& oracle) {
    if (oracle.allocation_sum == 0 || run.measured_slots == 0)
        throw InvalidInput("overhead needs nonempty runs");
    return static_cast<double>(run.allocation_sum) * static_cast<double>(oracle.measured_slots) /
               (static_cast<double>(oracle.allocation_sum) *
                static_cast<double>(run.measured_slots)) -
           1.0;
}

namespace detail {

inline Predictor make_predictor(const ScenarioConfig& cfg) {
    const auto powers = cfg.chain.powers();
    switch (cfg.predictor.kind) {
    case PolicyKind::markov:
        return MarkovPredictor(powers, cfg.predictor.smoothing, cfg.predictor.forgetting);
    case PolicyKind::average:
        return MovingAveragePredictor(powers, cfg.predictor.window);
    default:
        return OraclePredictor(powers);
    }
}

} // namespace detail

inline constexpr std::string_view kSlotCsvHeader = "slot,state,belief_entropy,n,success";

/// Runs one replication of the slot loop.
///
/// Per slot: the policy picks n for the upcoming slot, the chain steps, the
/// transmission succeeds iff any of n independent Rayleigh gains clears the
/// threshold, and the predictor observes the realized state. The chain and the
/// fading draws use separate substreams of the seed, so the state sequence is
/// identical for every policy. Warmup slots are observed but not transmitted.
/// When `slot_csv` is set, one CSV row per measured slot is written to it.
inline SummaryReport run_scenario(const ScenarioConfig& cfg, std::ostream* slot_csv = nullptr) {
    cfg.validate();
    const auto& chain = cfg.chain;
    const PolicyKind kind = cfg.predictor.kind;

    Rng chain_rng = make_substream(cfg.seed, Substream::chain);
    Rng fading_rng = make_substream(cfg.seed, Substream::fading);
    Predictor predictor = detail::make_predictor(cfg);

    std::vector<int> static_n;
    bool static_saturated = false;
    if (kind == PolicyKind::worst_state) {
        static_n = static_baseline(cfg.link, chain, cfg.target_outage, baseline::WorstState{},
                                   cfg.n_max);
        const std::vector<double> one{1.0};
        const std::vector<double> worst{chain.power(chain.highest_power_state())};
        static_saturated =
            min_allocation(cfg.link, one, worst, cfg.target_outage, cfg.n_max).saturated;
    } else if (kind == PolicyKind::diversity) {
        static_n = static_baseline(cfg.link, chain, cfg.target_outage,
                                   baseline::Redundant{cfg.predictor.redundancy}, cfg.n_max);
    }

    std::vector<double> gain_threshold(chain.size());
    for (std::size_t i = 0; i < chain.size(); ++i)
        gain_threshold[i] = cfg.link.gain_threshold(chain.power(i));

    SummaryReport report;
    report.kind = kind;
    report.seed = cfg.seed;
    report.target_outage = cfg.target_outage;

    if (slot_csv)
        *slot_csv << kSlotCsvHeader << '\n';

    std::size_t state = cfg.initial_state;
    predictor.observe(state, chain.power(state));
    for (std::uint64_t slot = 0; slot < cfg.slots; ++slot) {
        const std::size_t next = step(chain, state, chain_rng);
        if (slot >= cfg.warmup_slots) {
            int n = 0;
            double entropy = 0.0;
            switch (kind) {
            case PolicyKind::worst_state:
                n = static_n[next];
                report.saturation_count += static_saturated ? 1 : 0;
                break;
            case PolicyKind::diversity:
                n = static_n[next];
                break;
            default: {
                const Prediction prediction = predictor.predict(state, next);
                const auto decision =
                    min_allocation(cfg.link, prediction, cfg.target_outage, cfg.n_max);
                n = decision.n;
                entropy = prediction.entropy_bits();
                report.saturation_count += decision.saturated ? 1 : 0;
                break;
            }
            }
            bool success = false;
            for (int branch = 0; branch < n; ++branch)
                success |= exponential1(fading_rng) >= gain_threshold[next];

            ++report.measured_slots;
            report.allocation_sum += static_cast<std::uint64_t>(n);
            report.failures += success ? 0 : 1;
            if (slot_csv)
                *slot_csv << slot << ',' << next << ',' << format_number(entropy) << ',' << n
                          << ',' << (success ? 1 : 0) << '\n';
        }
        predictor.observe(next, chain.power(next));
        state = next;
    }

    const auto measured = static_cast<double>(report.measured_slots);
    report.achieved_outage = static_cast<double>(report.failures) / measured;
    report.mean_allocation = static_cast<double>(report.allocation_sum) / measured;
    if (kind == PolicyKind::oracle)
        report.overhead_vs_oracle = 0.0;
    return report;
}

struct SweepOptions {
    /// 0 runs serially; otherwise the number of worker threads.
    unsigned threads = 0;
};

/// Every (kind, replication) pair with replication seed = base seed + index.
/// Rows are ordered by kind (in the given order) then replication. Each row's
/// overhead compares against the oracle run sharing its seed; that run is
/// executed on the side when oracle is not among the requested kinds.
inline std::vector<SummaryReport> run_sweep(const ScenarioConfig& base,
                                            std::span<const PolicyKind> kinds,
                                            int replications, SweepOptions options = {}) {
    if (replications < 1)
        throw InvalidInput("replication count must be >= 1");
    if (kinds.empty())
        return {};
    base.validate();

    std::vector<PolicyKind> jobs_kinds(kinds.begin(), kinds.end());
    const bool has_oracle =
        std::find(kinds.begin(), kinds.end(), PolicyKind::oracle) != kinds.end();
    if (!has_oracle)
        jobs_kinds.push_back(PolicyKind::oracle);

    const std::size_t reps = static_cast<std::size_t>(replications);
    const std::size_t total = jobs_kinds.size() * reps;
    std::vector<SummaryReport> results(total);

    auto run_job = [&](std::size_t job) {
        ScenarioConfig cfg = base;
        cfg.predictor.kind = jobs_kinds[job / reps];
        const std::size_t rep = job % reps;
        cfg.seed = base.seed + rep;
        SummaryReport r = run_scenario(cfg);
        r.replication = static_cast<int>(rep);
        results[job] = std::move(r);
    };

    if (options.threads == 0) {
        for (std::size_t job = 0; job < total; ++job)
            run_job(job);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            for (std::size_t job = next++; job < total; job = next++)
                run_job(job);
        };
        std::vector<std::future<void>> pool;
        const unsigned workers = std::min<std::size_t>(options.threads, total);
        for (unsigned w = 0; w < workers; ++w)
            pool.push_back(std::async(std::launch::async, worker));
        for (auto& f : pool)
            f.get();
    }

    const std::size_t oracle_block =
        static_cast<std::size_t>(std::find(jobs_kinds.begin(), jobs_kinds.end(),
                                           PolicyKind::oracle) -
                                 jobs_kinds.begin());
    std::vector<SummaryReport> table;
    table.reserve(kinds.size() * reps);
    for (std::size_t job = 0; job < kinds.size() * reps; ++job) {
        SummaryReport r = results[job];
        const SummaryReport& oracle = results[oracle_block * reps + job % reps];
        r.overhead_vs_oracle =
            r.kind == PolicyKind::oracle ? 0.0 : overhead_ratio(r, oracle);
        table.push_back(std::move(r));
    }
    return table;
}

inline constexpr std::string_view kPlotCsvHeader =
    "kind,replication,target_outage,achieved_outage,mean_allocation,overhead_vs_oracle";

/// Plot-ready CSV, one row per report. Missing overheads are left empty.
inline std::string emit_plot_data(std::span<const SummaryReport> reports) {
    if (reports.empty())
        throw InvalidInput("no reports to emit");
    std::ostringstream out;
    out << kPlotCsvHeader << '\n';
    for (const auto& r : reports) {
        out << to_string(r.kind) << ',' << r.replication << ',' << format_number(r.target_outage)
            << ',' << format_number(r.achieved_outage) << ','
            << format_number(r.mean_allocation) << ','
            << (r.overhead_vs_oracle ? format_number(*r.overhead_vs_oracle) : "") << '\n';
    }
    return out.str();
}

} // namespace resil
