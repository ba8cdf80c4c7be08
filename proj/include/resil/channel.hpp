#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "resil/error.hpp"
#include "resil/matrix.hpp"
#include "resil/rng.hpp"

namespace resil {

inline constexpr double kStochasticTolerance = 1e-9;

inline void check_distribution(std::span<const double> p, const char* what) {
    double sum = 0.0;
    for (double v : p) {
        if (!(v >= 0.0 && v <= 1.0))
            throw InvalidInput(std::string(what) + ": entries must lie in [0,1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kStochasticTolerance)
        throw InvalidInput(std::string(what) + ": entries must sum to 1");
}

/// Markov-modulated interference: K states, each with a linear interference
/// power, and a row-stochastic transition matrix.
class MarkovChain {
public:
    MarkovChain(std::vector<double> powers, Matrix transition)
        : powers_(std::move(powers)), transition_(std::move(transition)) {
        if (powers_.empty())
            throw InvalidInput("markov chain needs at least one state");
        if (transition_.rows() != powers_.size() || transition_.cols() != powers_.size())
            throw InvalidInput("transition matrix must be K x K");
        for (double p : powers_)
            if (!std::isfinite(p) || p < 0.0)
                throw InvalidInput("interference powers must be finite and >= 0");
        for (std::size_t i = 0; i < size(); ++i)
            check_distribution(transition_.row(i), "transition row");
    }

    std::size_t size() const noexcept { return powers_.size(); }
    std::span<const double> powers() const noexcept { return powers_; }
    double power(std::size_t state) const { return powers_.at(state); }
    const Matrix& transition() const noexcept { return transition_; }

    std::size_t highest_power_state() const {
        return static_cast<std::size_t>(
            std::max_element(powers_.begin(), powers_.end()) - powers_.begin());
    }

private:
    std::vector<double> powers_;
    Matrix transition_;
};

/// Samples the successor of `state`. Consumes exactly one uniform draw.
inline std::size_t step(const MarkovChain& chain, std::size_t state, Rng& rng) {
    if (state >= chain.size())
        throw InvalidInput("state index out of range");
    const double u = uniform01(rng);
    const auto row = chain.transition().row(state);
    double cumulative = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t j = 0; j < row.size(); ++j) {
        if (row[j] <= 0.0)
            continue;
        cumulative += row[j];
        last_positive = j;
        if (u < cumulative)
            return j;
    }
    // Rounding left the cumulative sum just below 1.
    return last_positive;
}

namespace detail {

inline std::vector<int> bfs_levels(const Matrix& p, bool reverse) {
    const std::size_t k = p.rows();
    std::vector<int> level(k, -1);
    std::queue<std::size_t> frontier;
    level[0] = 0;
    frontier.push(0);
    while (!frontier.empty()) {
        const std::size_t u = frontier.front();
        frontier.pop();
        for (std::size_t v = 0; v < k; ++v) {
            const double w = reverse ? p(v, u) : p(u, v);
            if (w > 0.0 && level[v] < 0) {
                level[v] = level[u] + 1;
                frontier.push(v);
            }
        }
    }
    return level;
}

// Irreducible and aperiodic. The period of an irreducible chain is the gcd of
// level[u] + 1 - level[v] over every positive-probability edge u -> v.
inline bool is_ergodic(const Matrix& p) {
    const auto forward = bfs_levels(p, false);
    const auto backward = bfs_levels(p, true);
    for (std::size_t i = 0; i < p.rows(); ++i)
        if (forward[i] < 0 || backward[i] < 0)
            return false;
    int period = 0;
    for (std::size_t u = 0; u < p.rows(); ++u)
        for (std::size_t v = 0; v < p.cols(); ++v)
            if (p(u, v) > 0.0)
                period = std::gcd(period, std::abs(forward[u] + 1 - forward[v]));
    return period == 1;
}

inline double stationary_residual(const Matrix& p, std::span<const double> pi) {
    double worst = 0.0;
    for (std::size_t j = 0; j < p.cols(); ++j) {
        double next = 0.0;
        for (std::size_t i = 0; i < p.rows(); ++i)
            next += pi[i] * p(i, j);
        worst = std::max(worst, std::abs(next - pi[j]));
    }
    return worst;
}

} // namespace detail

/// Unique stationary distribution pi = pi P of an ergodic chain.
///
/// Solves (P^T - I) pi = 0 with one equation replaced by sum(pi) = 1 using
/// partially pivoted Gaussian elimination, then polishes with power
/// iterations until the residual max |pi P - pi| is at most 1e-10.
inline std::vector<double> stationary(const MarkovChain& chain) {
    const Matrix& p = chain.transition();
    const std::size_t k = chain.size();
    if (!detail::is_ergodic(p))
        throw NonErgodic("chain is reducible or periodic; no unique limiting distribution");

    Matrix a(k, k + 1);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            a(i, j) = p(j, i) - (i == j ? 1.0 : 0.0);
    for (std::size_t j = 0; j < k; ++j)
        a(k - 1, j) = 1.0;
    a(k - 1, k) = 1.0;

    for (std::size_t col = 0; col < k; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(a(r, col)) > std::abs(a(pivot, col)))
                pivot = r;
        if (std::abs(a(pivot, col)) < 1e-300)
            throw NonErgodic("singular stationary system");
        if (pivot != col)
            for (std::size_t c = 0; c <= k; ++c)
                std::swap(a(col, c), a(pivot, c));
        for (std::size_t r = 0; r < k; ++r) {
            if (r == col || a(r, col) == 0.0)
                continue;
            const double factor = a(r, col) / a(col, col);
            for (std::size_t c = col; c <= k; ++c)
                a(r, c) -= factor * a(col, c);
        }
    }
    std::vector<double> pi(k);
    for (std::size_t i = 0; i < k; ++i)
        pi[i] = std::max(0.0, a(i, k) / a(i, i));

    std::vector<double> next(k);
    for (int iter = 0; iter < 10000; ++iter) {
        const double total = std::accumulate(pi.begin(), pi.end(), 0.0);
        for (double& v : pi)
            v /= total;
        if (detail::stationary_residual(p, pi) <= 1e-10)
            return pi;
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                next[j] += pi[i] * p(i, j);
        pi.swap(next);
    }
    throw NonErgodic("stationary distribution did not converge");
}

/// Point-to-point link under Rayleigh fading. All powers are linear.
struct LinkModel {
    double mean_signal = 1.0;
    double noise = 0.0;
    double sinr_threshold = 1.0;

    void validate() const {
        if (!(mean_signal > 0.0) || !std::isfinite(mean_signal))
            throw InvalidInput("mean signal power must be > 0");
        if (!(noise >= 0.0) || !std::isfinite(noise))
            throw InvalidInput("noise power must be >= 0");
        if (!(sinr_threshold > 0.0) || !std::isfinite(sinr_threshold))
            throw InvalidInput("SINR threshold must be > 0");
    }

    /// Fading gain a branch must reach to succeed at interference I.
    double gain_threshold(double interference) const {
        return sinr_threshold * (noise + interference) / mean_signal;
    }
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

/// Per-branch success probability exp(-theta (N0 + I) / S).
inline double success_prob(const LinkModel& link, double interference) {
    if (!(interference >= 0.0))
        throw InvalidInput("interference power must be >= 0");
    return std::exp(-link.gain_threshold(interference));
}

/// Probability that all n independent branches fail.
inline double outage(const LinkModel& link, double interference, int n) {
    if (n < 1)
        throw InvalidInput("resource count must be >= 1");
    return std::pow(1.0 - success_prob(link, interference), n);
}

inline double expected_outage(const LinkModel& link, std::span<const double> belief,
                              std::span<const double> powers, int n) {
    if (belief.size() != powers.size())
        throw InvalidInput("belief and power vectors differ in length");
    if (n < 1)
        throw InvalidInput("resource count must be >= 1");
    check_distribution(belief, "belief");
    double total = 0.0;
    for (std::size_t i = 0; i < belief.size(); ++i)
        if (belief[i] > 0.0)
            total += belief[i] * outage(link, powers[i], n);
    return total;
}

} // namespace resil
