#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "resil/error.hpp"
#include "resil/service.hpp"

namespace resil {

/// One excursion of s(t) below the desired level. Window times snap to
/// sample instants. An unterminated window runs to the last sample.
struct DisruptionWindow {
    double t_detect = 0.0;
    double t_trough = 0.0;
    double t_recover = 0.0;
    bool terminated = true;

    double length() const { return t_recover - t_detect; }
};

struct PhaseDurations {
    double absorption = 0.0;
    double adoption = 0.0;
    double recovery = 0.0;

    double total() const { return absorption + adoption + recovery; }
    std::array<double, 3> as_array() const { return {absorption, adoption, recovery}; }
};

enum class ResilienceMethod { phase_weighted, recovery_area };

inline std::string_view to_string(ResilienceMethod m) {
    return m == ResilienceMethod::phase_weighted ? "phase_weighted" : "recovery_area";
}

struct ResilienceScore {
    double value = 1.0;
    ResilienceMethod method = ResilienceMethod::phase_weighted;
};

inline constexpr double kDefaultAdoptionThreshold = 0.5;
inline constexpr double kDefaultPhaseDecay = 10.0;

/// Maximal runs of s < 1, each closed by the first following sample with
/// s >= 1. The trough is the first sample attaining the run's minimum.
inline std::vector<DisruptionWindow> detect_disruptions(const ServiceTrace& trace) {
    const auto t = trace.times();
    const auto s = trace.values();
    std::vector<DisruptionWindow> windows;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] >= 1.0) {
            ++i;
            continue;
        }
        std::size_t trough = i;
        std::size_t j = i;
        while (j < s.size() && s[j] < 1.0) {
            if (s[j] < s[trough])
                trough = j;
            ++j;
        }
        const bool terminated = j < s.size();
        windows.push_back({t[i], t[trough], terminated ? t[j] : t.back(), terminated});
        i = j;
    }
    return windows;
}

namespace detail {

inline void require_terminated(const DisruptionWindow& w) {
    if (!w.terminated)
        throw UnterminatedWindow("disruption window has not recovered within the trace");
}

// Trapezoidal integral of the sampled values over [a, b], with each sample
// first clamped to [0, cap]. Partial segments interpolate linearly.
inline double integrate(const ServiceTrace& trace, double a, double b, double cap) {
    const auto t = trace.times();
    const auto s = trace.values();
    if (a < t.front() || b > t.back() || a > b)
        throw InvalidInput("integration bounds fall outside the trace");
    auto clamp = [cap](double v) { return std::clamp(v, 0.0, cap); };
    double area = 0.0;
    for (std::size_t k = 0; k + 1 < t.size(); ++k) {
        const double lo = std::max(a, t[k]);
        const double hi = std::min(b, t[k + 1]);
        if (hi <= lo)
            continue;
        const double v0 = clamp(s[k]);
        const double v1 = clamp(s[k + 1]);
        const double span = t[k + 1] - t[k];
        auto at = [&](double x) {
            if (x == t[k]) return v0;
            if (x == t[k + 1]) return v1;
            return v0 + (v1 - v0) * (x - t[k]) / span;
        };
        area += 0.5 * (at(lo) + at(hi)) * (hi - lo);
    }
    return area;
}

} // namespace detail

/// Splits a recovered window into absorption (detect to trough), adoption
/// (trough to the first sample reaching `alpha`) and recovery (from there to
/// the recovery instant).
inline PhaseDurations segment_phases(const ServiceTrace& trace, const DisruptionWindow& window,
                                     double alpha = kDefaultAdoptionThreshold) {
    detail::require_terminated(window);
    if (!(alpha > 0.0 && alpha < 1.0))
        throw InvalidInput("adoption threshold must lie in (0,1)");
    const auto t = trace.times();
    const auto s = trace.values();
    double t_alpha = window.t_recover;
    const auto first = std::lower_bound(t.begin(), t.end(), window.t_trough);
    for (auto it = first; it != t.end() && *it <= window.t_recover; ++it) {
        if (s[static_cast<std::size_t>(it - t.begin())] >= alpha) {
            t_alpha = *it;
            break;
        }
    }
    return {window.t_trough - window.t_detect, t_alpha - window.t_trough,
            window.t_recover - t_alpha};
}

/// Sum over phases of weight * exp(-duration / tau).
inline ResilienceScore phase_weighted_resilience(const PhaseDurations& durations,
                                                 std::span<const double> weights,
                                                 double tau = kDefaultPhaseDecay) {
    if (weights.size() != 3)
        throw InvalidInput("phase weights need exactly three entries");
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0))
            throw InvalidInput("phase weights must be >= 0");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-9)
        throw InvalidInput("phase weights must sum to 1");
    if (!(tau > 0.0))
        throw InvalidInput("decay constant must be > 0");
    const auto d = durations.as_array();
    double value = 0.0;
    for (std::size_t k = 0; k < 3; ++k)
        value += weights[k] * std::exp(-d[k] / tau);
    return {value, ResilienceMethod::phase_weighted};
}

/// Area under min(s, 1) across the window, divided by the window length.
inline ResilienceScore recovery_area_resilience(const ServiceTrace& trace,
                                                const DisruptionWindow& window) {
    detail::require_terminated(window);
    if (!(window.t_recover > window.t_detect))
        throw InvalidInput("disruption window has zero length");
    const double area = detail::integrate(trace, window.t_detect, window.t_recover, 1.0);
    if (!(area > 0.0))
        throw DegenerateRecovery("no service delivered inside the window");
    return {area / window.length(), ResilienceMethod::recovery_area};
}

/// Cumulative resilience function: the share of the window's total service
/// integral accumulated by time t. Rises from 0 at detection to 1 at recovery.
inline double crf(const ServiceTrace& trace, const DisruptionWindow& window, double t) {
    detail::require_terminated(window);
    if (t < window.t_detect || t > window.t_recover)
        throw InvalidInput("CRF evaluated outside its window");
    constexpr double kNoCap = std::numeric_limits<double>::infinity();
    const double total = detail::integrate(trace, window.t_detect, window.t_recover, kNoCap);
    if (!(total > 0.0))
        throw DegenerateRecovery("window has zero service area");
    if (t == window.t_recover)
        return 1.0;
    return detail::integrate(trace, window.t_detect, t, kNoCap) / total;
}

/// CRF at every sample instant inside the window, accumulated in one pass.
inline std::vector<std::pair<double, double>> crf_curve(const ServiceTrace& trace,
                                                        const DisruptionWindow& window) {
    detail::require_terminated(window);
    constexpr double kNoCap = std::numeric_limits<double>::infinity();
    const double total = detail::integrate(trace, window.t_detect, window.t_recover, kNoCap);
    if (!(total > 0.0))
        throw DegenerateRecovery("window has zero service area");
    const auto t = trace.times();
    const auto s = trace.values();
    std::vector<std::pair<double, double>> curve;
    double area = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < window.t_detect || t[k] > window.t_recover)
            continue;
        if (curve.empty()) {
            area = detail::integrate(trace, window.t_detect, t[k], kNoCap);
        } else {
            const double v0 = std::max(s[k - 1], 0.0);
            const double v1 = std::max(s[k], 0.0);
            area += 0.5 * (v0 + v1) * (t[k] - t[k - 1]);
        }
        curve.emplace_back(t[k], t[k] == window.t_recover ? 1.0 : area / total);
    }
    return curve;
}

} // namespace resil
