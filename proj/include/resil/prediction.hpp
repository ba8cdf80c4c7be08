#pragma once

#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <optional>
#include <type_traits>
#include <span>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "resil/channel.hpp"
#include "resil/error.hpp"
#include "resil/matrix.hpp"

namespace resil {

enum class PredictorKind { oracle, markov, average };

inline std::string_view to_string(PredictorKind kind) {
    switch (kind) {
    case PredictorKind::oracle: return "oracle";
    case PredictorKind::markov: return "markov";
    case PredictorKind::average: return "average";
    }
    return "unknown";
}

/// One-step-ahead belief over interference powers. State predictors use the
/// chain's powers; the moving average puts all mass on one synthetic power.
struct Prediction {
    std::vector<double> belief;
    std::vector<double> powers;
    PredictorKind kind = PredictorKind::oracle;

    double entropy_bits() const {
        double h = 0.0;
        for (double p : belief)
            if (p > 0.0)
                h -= p * std::log2(p);
        return h == 0.0 ? 0.0 : h;
    }
};

/// Laplace-smoothed row normalization of a transition count matrix. Rows with
/// zero total mass (possible only when smoothing is 0) become uniform.
inline Matrix normalize_counts(const Matrix& counts, double smoothing) {
    const std::size_t k = counts.rows();
    Matrix p(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        double total = 0.0;
        for (double c : counts.row(i))
            total += c;
        const double denom = total + static_cast<double>(k) * smoothing;
        for (std::size_t j = 0; j < k; ++j)
            p(i, j) = denom > 0.0 ? (counts(i, j) + smoothing) / denom
                                  : 1.0 / static_cast<double>(k);
    }
    return p;
}

inline Matrix transition_counts(std::span<const std::size_t> sequence, std::size_t k) {
    Matrix counts(k, k);
    for (std::size_t t = 0; t < sequence.size(); ++t) {
        if (sequence[t] >= k)
            throw InvalidInput("state index out of range");
        if (t > 0)
            counts(sequence[t - 1], sequence[t]) += 1.0;
    }
    return counts;
}

/// Maximum-likelihood transition matrix from an observed state sequence.
inline Matrix mle_estimate(std::span<const std::size_t> sequence, std::size_t k,
                           double smoothing) {
    if (sequence.size() < 2)
        throw InsufficientData("need at least two observations to estimate transitions");
    if (k == 0)
        throw InvalidInput("state count must be >= 1");
    if (!(smoothing >= 0.0))
        throw InvalidInput("smoothing must be >= 0");
    return normalize_counts(transition_counts(sequence, k), smoothing);
}

/// Knows the true next state; the idealized upper bound.
class OraclePredictor {
public:
    explicit OraclePredictor(std::span<const double> powers)
        : powers_(powers.begin(), powers.end()) {}

    void observe(std::size_t, double) {}

    Prediction predict(std::size_t, std::optional<std::size_t> true_next) const {
        if (!true_next)
            throw MissingOracleInput("oracle predictor requires the true next state");
        if (*true_next >= powers_.size())
            throw InvalidInput("state index out of range");
        Prediction out{std::vector<double>(powers_.size(), 0.0), powers_, PredictorKind::oracle};
        out.belief[*true_next] = 1.0;
        return out;
    }

private:
    std::vector<double> powers_;
};

/// Online transition-count estimator with Laplace smoothing and exponential
/// forgetting. Predicts the smoothed estimated row of the current state.
class MarkovPredictor {
public:
    MarkovPredictor(std::span<const double> powers, double smoothing = 1.0,
                    double forgetting = 1.0)
        : powers_(powers.begin(), powers.end()),
          counts_(powers.size(), powers.size()),
          smoothing_(smoothing),
          forgetting_(forgetting) {
        if (powers_.empty())
            throw InvalidInput("markov predictor needs at least one state");
        if (!(smoothing_ >= 0.0))
            throw InvalidInput("smoothing must be >= 0");
        if (!(forgetting_ > 0.0 && forgetting_ <= 1.0))
            throw InvalidInput("forgetting factor must lie in (0,1]");
    }

    /// Decays every count by the forgetting factor, then counts from -> to.
    void update(std::size_t from, std::size_t to) {
        if (from >= size() || to >= size())
            throw InvalidInput("state index out of range");
        if (forgetting_ != 1.0)
            for (double& c : counts_.values())
                c *= forgetting_;
        counts_(from, to) += 1.0;
    }

    void observe(std::size_t state, double) {
        if (previous_)
            update(*previous_, state);
        else if (state >= size())
            throw InvalidInput("state index out of range");
        previous_ = state;
    }

    Prediction predict(std::size_t current, std::optional<std::size_t> = std::nullopt) const {
        if (current >= size())
            throw InvalidInput("state index out of range");
        const std::size_t k = size();
        double total = 0.0;
        for (double c : counts_.row(current))
            total += c;
        const double denom = total + static_cast<double>(k) * smoothing_;
        Prediction out{std::vector<double>(k), powers_, PredictorKind::markov};
        for (std::size_t j = 0; j < k; ++j)
            out.belief[j] = denom > 0.0 ? (counts_(current, j) + smoothing_) / denom
                                        : 1.0 / static_cast<double>(k);
        return out;
    }

    Matrix estimate() const { return normalize_counts(counts_, smoothing_); }
    const Matrix& counts() const noexcept { return counts_; }
    Matrix& counts() noexcept { return counts_; }
    std::size_t size() const noexcept { return powers_.size(); }

private:
    std::vector<double> powers_;
    Matrix counts_;
    double smoothing_;
    double forgetting_;
    std::optional<std::size_t> previous_;
};

/// Mean of the last W observed interference powers.
class MovingAveragePredictor {
public:
    static constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

    MovingAveragePredictor(std::span<const double> powers, std::size_t window)
        : powers_(powers.begin(), powers.end()), window_(window) {
        if (window_ < 1)
            throw InvalidInput("averaging window must be >= 1");
    }

    void observe(std::size_t, double power) {
        if (window_ == kUnbounded) {
            running_sum_ += power;
            ++running_count_;
            return;
        }
        history_.push_back(power);
        if (history_.size() > window_)
            history_.pop_front();
    }

    std::optional<double> mean() const {
        if (window_ == kUnbounded) {
            if (running_count_ == 0)
                return std::nullopt;
            return running_sum_ / static_cast<double>(running_count_);
        }
        if (history_.empty())
            return std::nullopt;
        double sum = 0.0;
        for (double p : history_)
            sum += p;
        return sum / static_cast<double>(history_.size());
    }

    /// Point mass on the window mean; falls back to the current state's power
    /// before anything has been observed.
    Prediction predict(std::size_t current, std::optional<std::size_t> = std::nullopt) const {
        const auto m = mean();
        if (!m && current >= powers_.size())
            throw InvalidInput("state index out of range");
        return Prediction{{1.0}, {m ? *m : powers_[current]}, PredictorKind::average};
    }

    std::vector<double> history() const { return {history_.begin(), history_.end()}; }

private:
    std::vector<double> powers_;
    std::size_t window_;
    std::deque<double> history_;
    double running_sum_ = 0.0;
    std::size_t running_count_ = 0;
};

class Predictor {
public:
    template <class P>
    Predictor(P p) : impl_(std::move(p)) {}

    PredictorKind kind() const {
        return std::visit(
            [](const auto& p) {
                using T = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<T, OraclePredictor>)
                    return PredictorKind::oracle;
                else if constexpr (std::is_same_v<T, MarkovPredictor>)
                    return PredictorKind::markov;
                else
                    return PredictorKind::average;
            },
            impl_);
    }

    void observe(std::size_t state, double power) {
        std::visit([&](auto& p) { p.observe(state, power); }, impl_);
    }

    Prediction predict(std::size_t current, std::optional<std::size_t> true_next) const {
        return std::visit([&](const auto& p) { return p.predict(current, true_next); }, impl_);
    }

    template <class P>
    const P* get() const {
        return std::get_if<P>(&impl_);
    }

private:
    std::variant<OraclePredictor, MarkovPredictor, MovingAveragePredictor> impl_;
};

} // namespace resil
