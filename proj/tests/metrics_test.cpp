#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "resil/metrics.hpp"

using namespace resil;

namespace {

const ServiceTrace kDip = ServiceTrace::unit_steps({1, 1, 0.4, 0.2, 0.2, 0.6, 1.0});
const std::array<double, 3> kEqual{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};

ServiceTrace linear_recovery() {
    std::vector<double> s;
    for (int t = 0; t <= 10; ++t)
        s.push_back(t / 10.0);
    return ServiceTrace::unit_steps(s);
}

} // namespace

TEST(Detect, NoDisruption) {
    EXPECT_TRUE(detect_disruptions(ServiceTrace::unit_steps({1, 1, 1.2, 1})).empty());
}

TEST(Detect, SingleDip) {
    const auto w = detect_disruptions(kDip);
    ASSERT_EQ(w.size(), 1u);
    EXPECT_EQ(w[0].t_detect, 2.0);
    EXPECT_EQ(w[0].t_trough, 3.0);
    EXPECT_EQ(w[0].t_recover, 6.0);
    EXPECT_TRUE(w[0].terminated);
}

TEST(Detect, Unterminated) {
    const auto w = detect_disruptions(ServiceTrace::unit_steps({1, 0.5}));
    ASSERT_EQ(w.size(), 1u);
    EXPECT_FALSE(w[0].terminated);
    EXPECT_THROW(segment_phases(ServiceTrace::unit_steps({1, 0.5}), w[0]), UnterminatedWindow);
}

TEST(Detect, MultipleOrderedDisjointWindows) {
    const auto w = detect_disruptions(ServiceTrace::unit_steps({0.5, 1, 1, 0.2, 0.1, 1, 0.9}));
    ASSERT_EQ(w.size(), 3u);
    EXPECT_EQ(w[0].t_detect, 0.0);
    EXPECT_EQ(w[0].t_recover, 1.0);
    EXPECT_EQ(w[1].t_detect, 3.0);
    EXPECT_EQ(w[1].t_trough, 4.0);
    EXPECT_EQ(w[1].t_recover, 5.0);
    EXPECT_FALSE(w[2].terminated);
}

TEST(Phases, Examples) {
    const auto w = detect_disruptions(kDip)[0];
    const auto a = segment_phases(kDip, w, 0.5);
    EXPECT_EQ(a.absorption, 1.0);
    EXPECT_EQ(a.adoption, 2.0);
    EXPECT_EQ(a.recovery, 1.0);
    const auto b = segment_phases(kDip, w, 0.8);
    EXPECT_EQ(b.absorption, 1.0);
    EXPECT_EQ(b.adoption, 3.0);
    EXPECT_EQ(b.recovery, 0.0);
    EXPECT_THROW(segment_phases(kDip, w, 1.0), InvalidInput);
}

TEST(Phases, SquareDip) {
    const auto trace = ServiceTrace::unit_steps({1, 0, 1});
    const auto w = detect_disruptions(trace)[0];
    EXPECT_EQ(w.t_detect, 1.0);
    EXPECT_EQ(w.t_trough, 1.0);
    EXPECT_EQ(w.t_recover, 2.0);
    const auto d = segment_phases(trace, w, 0.5);
    // Trough coincides with detection, so absorption is empty.
    EXPECT_EQ(d.absorption, 0.0);
    EXPECT_EQ(d.adoption, 1.0);
    EXPECT_EQ(d.recovery, 0.0);
    EXPECT_EQ(d.total(), w.length());
}

TEST(Phases, TroughAlreadyAboveThreshold) {
    const auto trace = ServiceTrace::unit_steps({1, 0.7, 0.6, 0.9, 1});
    const auto w = detect_disruptions(trace)[0];
    const auto d = segment_phases(trace, w, 0.5);
    EXPECT_EQ(d.adoption, 0.0);
    EXPECT_EQ(d.absorption, 1.0);
    EXPECT_EQ(d.recovery, 2.0);
}

TEST(Phases, PartitionExactOnSlotGrid) {
    std::mt19937 gen(12);
    std::uniform_real_distribution<double> level(0.0, 1.2);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> s{1.0};
        for (int i = 0; i < 40; ++i)
            s.push_back(level(gen));
        s.push_back(1.0);
        const auto trace = ServiceTrace::unit_steps(s);
        for (const auto& w : detect_disruptions(trace)) {
            const auto d = segment_phases(trace, w, 0.3 + 0.1 * (trial % 6));
            EXPECT_EQ(d.absorption + d.adoption + d.recovery, w.t_recover - w.t_detect);
        }
    }
}

TEST(PhaseWeighted, Examples) {
    EXPECT_DOUBLE_EQ(phase_weighted_resilience({0, 0, 0}, kEqual, 10).value, 1.0);
    EXPECT_NEAR(phase_weighted_resilience({1, 2, 1}, kEqual, 10).value, 0.8761, 1e-4);
    EXPECT_NEAR(phase_weighted_resilience({1, 2, 1}, kEqual, 10).value, 0.8761351963833004,
                1e-15);
    const std::array<double, 3> first{1, 0, 0};
    EXPECT_NEAR(phase_weighted_resilience({7, 3, 2}, first, 7).value, std::exp(-1.0), 1e-15);
    EXPECT_EQ(phase_weighted_resilience({1, 1, 1}, kEqual).method,
              ResilienceMethod::phase_weighted);
}

TEST(PhaseWeighted, Errors) {
    const std::array<double, 3> bad{0.5, 0.5, 0.5};
    EXPECT_THROW(phase_weighted_resilience({1, 1, 1}, bad, 10), InvalidInput);
    const std::array<double, 3> neg{1.5, -0.5, 0.0};
    EXPECT_THROW(phase_weighted_resilience({1, 1, 1}, neg, 10), InvalidInput);
    EXPECT_THROW(phase_weighted_resilience({1, 1, 1}, kEqual, 0), InvalidInput);
    const std::vector<double> two{0.5, 0.5};
    EXPECT_THROW(phase_weighted_resilience({1, 1, 1}, two, 10), InvalidInput);
}

TEST(PhaseWeighted, StrictlyDecreasingInEachDuration) {
    std::mt19937 gen(1);
    std::uniform_real_distribution<double> u(0.0, 20.0);
    for (int trial = 0; trial < 200; ++trial) {
        PhaseDurations d{u(gen), u(gen), u(gen)};
        const double base = phase_weighted_resilience(d, kEqual, 10).value;
        for (int k = 0; k < 3; ++k) {
            auto longer = d;
            (k == 0 ? longer.absorption : k == 1 ? longer.adoption : longer.recovery) += 0.5;
            EXPECT_LT(phase_weighted_resilience(longer, kEqual, 10).value, base);
        }
    }
}

TEST(RecoveryArea, Examples) {
    const auto lin = linear_recovery();
    const auto w = detect_disruptions(lin)[0];
    EXPECT_DOUBLE_EQ(recovery_area_resilience(lin, w).value, 0.5);
    EXPECT_DOUBLE_EQ(recovery_area_resilience(kDip, detect_disruptions(kDip)[0]).value, 0.425);

    const auto flat = ServiceTrace::unit_steps({1, 1, 1, 1});
    EXPECT_DOUBLE_EQ(recovery_area_resilience(flat, DisruptionWindow{1.0, 1.0, 2.0, true}).value,
                     1.0);
    EXPECT_THROW(recovery_area_resilience(flat, DisruptionWindow{1.0, 1.0, 1.0, true}),
                 InvalidInput);
}

TEST(RecoveryArea, ClipsAboveOne) {
    const auto trace = ServiceTrace::unit_steps({1, 0.5, 3.0, 1});
    const auto w = DisruptionWindow{0.0, 1.0, 3.0, true};
    // Samples clipped to 1: trapezoids 0.75 + 0.75 + 1 over length 3.
    EXPECT_DOUBLE_EQ(recovery_area_resilience(trace, w).value, 2.5 / 3.0);
}

TEST(RecoveryArea, InvariantUnderTimeRescaling) {
    std::mt19937 gen(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> s{1.0};
        const int len = 2 + static_cast<int>(gen() % 20);
        for (int i = 0; i < len; ++i)
            s.push_back(u(gen) * 0.99);
        s.push_back(1.0);
        const auto base = ServiceTrace::unit_steps(s);
        std::vector<double> scaled_t;
        for (double t : base.times())
            scaled_t.push_back(t * 2.5);
        const ServiceTrace scaled(scaled_t, s);
        const auto wb = detect_disruptions(base)[0];
        const auto ws = detect_disruptions(scaled)[0];
        EXPECT_NEAR(recovery_area_resilience(base, wb).value,
                    recovery_area_resilience(scaled, ws).value, 1e-12);
    }
}

TEST(Crf, Examples) {
    const auto lin = linear_recovery();
    const auto wl = detect_disruptions(lin)[0];
    EXPECT_DOUBLE_EQ(crf(lin, wl, 5.0), 0.25);
    EXPECT_EQ(crf(lin, wl, 0.0), 0.0);
    EXPECT_EQ(crf(lin, wl, 10.0), 1.0);

    const auto w = detect_disruptions(kDip)[0];
    EXPECT_NEAR(crf(kDip, w, 4.0), 0.5 / 1.7, 1e-9);
    EXPECT_NEAR(crf(kDip, w, 4.0), 0.294, 1e-3);
    EXPECT_THROW(crf(kDip, w, 1.0), InvalidInput);
    EXPECT_THROW(crf(kDip, w, 6.5), InvalidInput);
}

TEST(Crf, InterpolatesBetweenSamples) {
    const auto lin = linear_recovery();
    const auto w = detect_disruptions(lin)[0];
    // Integral of t/10 from 0 to 2.5 is 0.3125; total area 5.
    EXPECT_NEAR(crf(lin, w, 2.5), 0.3125 / 5.0, 1e-15);
}

TEST(Crf, DegenerateArea) {
    const auto zero = ServiceTrace::unit_steps({0, 0, 0});
    EXPECT_THROW(crf(zero, DisruptionWindow{0, 0, 2, true}, 1.0), DegenerateRecovery);
    EXPECT_THROW(recovery_area_resilience(zero, DisruptionWindow{0, 0, 2, true}),
                 DegenerateRecovery);
}

TEST(Crf, EqualAreaDifferentTrajectories) {
    // Fast-then-slow and slow-then-fast recoveries with identical area.
    const auto fast = ServiceTrace::unit_steps({1, 0.0, 0.8, 0.2, 1});
    const auto slow = ServiceTrace::unit_steps({1, 0.0, 0.2, 0.8, 1});
    const auto wf = detect_disruptions(fast)[0];
    const auto ws = detect_disruptions(slow)[0];
    EXPECT_DOUBLE_EQ(recovery_area_resilience(fast, wf).value,
                     recovery_area_resilience(slow, ws).value);
    EXPECT_GT(crf(fast, wf, 2.0), crf(slow, ws, 2.0) + 0.1);
}

TEST(Crf, CurveMatchesPointwise) {
    const auto w = detect_disruptions(kDip)[0];
    const auto curve = crf_curve(kDip, w);
    ASSERT_EQ(curve.size(), 5u);
    for (const auto& [t, c] : curve)
        EXPECT_EQ(c, crf(kDip, w, t));
    EXPECT_EQ(curve.front().second, 0.0);
    EXPECT_EQ(curve.back().second, 1.0);
}

TEST(Crf, MonotoneWithExactEndpointsOnRandomTraces) {
    std::mt19937 gen(2718);
    std::uniform_real_distribution<double> level(0.0, 1.3);
    std::uniform_real_distribution<double> gap(0.1, 2.0);
    int windows_checked = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int len = 3 + static_cast<int>(gen() % 30);
        std::vector<double> t{0.0}, s{1.0};
        for (int i = 0; i < len; ++i) {
            t.push_back(t.back() + gap(gen));
            s.push_back(level(gen));
        }
        t.push_back(t.back() + gap(gen));
        s.push_back(1.0);
        const ServiceTrace trace(t, s);
        for (const auto& w : detect_disruptions(trace)) {
            ASSERT_TRUE(w.terminated);
            const auto phases = segment_phases(trace, w, 0.5);
            // Exact on integer grids; here times are arbitrary reals.
            EXPECT_NEAR(phases.total(), w.length(), 1e-12);
            EXPECT_GE(phases.absorption, 0.0);
            EXPECT_GE(phases.adoption, 0.0);
            EXPECT_GE(phases.recovery, 0.0);

            const double area = recovery_area_resilience(trace, w).value;
            EXPECT_GT(area, 0.0);
            EXPECT_LE(area, 1.0);

            EXPECT_EQ(crf(trace, w, w.t_detect), 0.0);
            EXPECT_EQ(crf(trace, w, w.t_recover), 1.0);
            double prev = 0.0;
            const double step = w.length() / 37.0;
            for (double x = w.t_detect; x <= w.t_recover; x += step) {
                const double c = crf(trace, w, x);
                EXPECT_GE(c, prev - 1e-15);
                EXPECT_LE(c, 1.0 + 1e-15);
                prev = c;
            }
            ++windows_checked;
        }
    }
    EXPECT_GT(windows_checked, 1000);
}
