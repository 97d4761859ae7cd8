#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "graphlab/errors.hpp"
#include "graphlab/lattice.hpp"
#include "graphlab/rng.hpp"

namespace graphlab {

// Inverse-CDF sampler for a small lattice distribution.
class DiscreteSampler {
public:
    explicit DiscreteSampler(const LatticeDistribution& x) {
        values_.reserve(x.size());
        cdf_.reserve(x.size());
        double acc = 0.0;
        for (const Atom& a : x.atoms()) {
            acc += a.prob;
            values_.push_back(a.value);
            cdf_.push_back(acc);
        }
        cdf_.back() = 1.0;
    }

    long long sample(Rng& rng) const {
        const double u = rng.real01();
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
        return values_[static_cast<std::size_t>(it - cdf_.begin())];
    }

private:
    std::vector<long long> values_;
    std::vector<double> cdf_;
};

// Random walk W_t = s + sum of iid lattice increments. The step law must have
// an atom at -1 and no atom below it, so the walk reaches 0 without jumping
// over it.
struct WalkSpec {
    LatticeDistribution step;
    long long start = 1;

    WalkSpec(LatticeDistribution step_, long long start_)
        : step(std::move(step_)), start(start_) {
        if (start < 0) throw precondition_error("WalkSpec: start must be nonnegative");
        if (step.min_value() < -1)
            throw precondition_error("WalkSpec: step atoms must be >= -1");
        if (step.prob_at(-1) <= 0.0)
            throw precondition_error("WalkSpec: step needs an atom at -1");
    }
};

struct StopResult {
    bool censored = false;
    long long time = 0; // first t with W_t = 0, or the cap when censored
};

inline StopResult simulate_stop(const WalkSpec& spec, long long cap, Rng& rng) {
    if (cap < 1) throw precondition_error("simulate_stop: cap must be >= 1");
    if (spec.start == 0) return {false, 0};
    const DiscreteSampler sampler(spec.step);
    long long w = spec.start;
    for (long long t = 1; t <= cap; ++t) {
        w += sampler.sample(rng);
        if (w == 0) return {false, t};
    }
    return {true, cap};
}

namespace detail {

// Unconstrained level pmf of W_t over levels [s - t, s + t*vmax].
inline std::vector<double> walk_level_pmf(const WalkSpec& spec, long long t,
                                          std::size_t max_states) {
    const long long vmax = spec.step.max_value();
    const long long lo = spec.start - t;
    const long long hi = spec.start + t * std::max<long long>(vmax, 0);
    const std::size_t width = static_cast<std::size_t>(hi - lo + 1);
    if (width > max_states) throw support_too_large_error("walk DP exceeds state guard");
    std::vector<double> dp(width, 0.0), next(width, 0.0);
    dp[static_cast<std::size_t>(spec.start - lo)] = 1.0;
    for (long long step = 0; step < t; ++step) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t i = 0; i < width; ++i) {
            const double p = dp[i];
            if (p == 0.0) continue;
            for (const Atom& a : spec.step.atoms()) {
                const long long level = lo + static_cast<long long>(i) + a.value;
                if (level < lo || level > hi) continue;
                next[static_cast<std::size_t>(level - lo)] += p * a.prob;
            }
        }
        dp.swap(next);
    }
    return dp;
}

} // namespace detail

// Exact P(W_t = 0) by convolution DP.
inline double exact_hit_prob(const WalkSpec& spec, long long t,
                             std::size_t max_states = kDefaultSupportGuard) {
    if (t < 1) throw precondition_error("exact_hit_prob: t must be positive");
    const auto dp = detail::walk_level_pmf(spec, t, max_states);
    const long long lo = spec.start - t;
    if (0 < lo || 0 > lo + static_cast<long long>(dp.size()) - 1) return 0.0;
    return dp[static_cast<std::size_t>(-lo)];
}

// Exact P(tau = t) for all t <= t_max in one pass: DP over strictly positive
// levels, collecting the mass that steps from level 1 to 0.
inline std::vector<double> exact_stop_prob_upto(const WalkSpec& spec, long long t_max,
                                                std::size_t max_states = kDefaultSupportGuard) {
    if (t_max < 1) throw precondition_error("exact_stop_prob_upto: t_max must be positive");
    std::vector<double> out(static_cast<std::size_t>(t_max) + 1, 0.0);
    if (spec.start == 0) return out; // tau = 0; no positive-time mass
    const long long vmax = std::max<long long>(spec.step.max_value(), 0);
    const long long hi = spec.start + t_max * vmax;
    const std::size_t width = static_cast<std::size_t>(hi); // levels 1..hi
    if (width > max_states) throw support_too_large_error("walk DP exceeds state guard");
    const double p_down = spec.step.prob_at(-1);
    std::vector<double> dp(width + 1, 0.0), next(width + 1, 0.0);
    dp[static_cast<std::size_t>(spec.start)] = 1.0;
    for (long long t = 1; t <= t_max; ++t) {
        out[static_cast<std::size_t>(t)] = dp[1] * p_down;
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t level = 1; level <= width; ++level) {
            const double p = dp[level];
            if (p == 0.0) continue;
            for (const Atom& a : spec.step.atoms()) {
                const long long to = static_cast<long long>(level) + a.value;
                if (to < 1 || to > static_cast<long long>(width)) continue;
                next[static_cast<std::size_t>(to)] += p * a.prob;
            }
        }
        dp.swap(next);
    }
    return out;
}

inline double exact_stop_prob(const WalkSpec& spec, long long t,
                              std::size_t max_states = kDefaultSupportGuard) {
    if (t < 1) throw precondition_error("exact_stop_prob: t must be positive");
    return exact_stop_prob_upto(spec, t, max_states)[static_cast<std::size_t>(t)];
}

// Spitzer-type inequality: P(tau = t) <= (s/t) P(W_t = 0).
inline bool spitzer_check(const WalkSpec& spec, long long t,
                          std::size_t max_states = kDefaultSupportGuard) {
    const double stop = exact_stop_prob(spec, t, max_states);
    const double hit = exact_hit_prob(spec, t, max_states);
    return stop <= static_cast<double>(spec.start) / static_cast<double>(t) * hit + 1e-12;
}

// Identity P(W_t = 0) = phi(theta)^t e^(theta s) P(W_{theta,t} = 0), both
// sides via the exact DP.
inline bool tilting_identity_check(const WalkSpec& spec, double theta, long long t,
                                   double rel_tol = 1e-12,
                                   std::size_t max_states = kDefaultSupportGuard) {
    const double lhs = exact_hit_prob(spec, t, max_states);
    const WalkSpec tilted(tilt(spec.step, theta), spec.start);
    const double phi = mgf_derivative(spec.step, 0, theta);
    const double rhs = std::pow(phi, static_cast<double>(t)) *
                       std::exp(theta * static_cast<double>(spec.start)) *
                       exact_hit_prob(tilted, t, max_states);
    return std::fabs(lhs - rhs) <= rel_tol * std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
}

// Closed-form upper bound on P(tau = t):
// 2h s e^(theta0 s) phi''(theta0)^(-1/2) phi(theta0)^t / t^(3/2).
inline double ub_up_bound(const WalkSpec& spec, double t) {
    if (t <= 0.0) throw precondition_error("ub_up_bound: t must be positive");
    const ThetaSolution sol = theta0_solve(spec.step);
    const double h = static_cast<double>(spec.step.step());
    const double s = static_cast<double>(spec.start);
    return 2.0 * h * s * std::exp(sol.theta0 * s) / std::sqrt(sol.phi2_at) *
           std::pow(sol.phi_at, t) / std::pow(t, 1.5);
}

// Geometric-sum bound on the stopping-time tail started at (1+eps) T_beta:
// 2 s e^(theta0 s) phi''^(-1/2) phi^((1+eps)T_beta) / (T_beta^(3/2) (1-phi)).
inline double stop_tail_bound(const WalkSpec& spec, double t_beta, double eps) {
    if (t_beta <= 0.0) throw precondition_error("stop_tail_bound: T_beta must be positive");
    const ThetaSolution sol = theta0_solve(spec.step);
    const double s = static_cast<double>(spec.start);
    return 2.0 * s * std::exp(sol.theta0 * s) / std::sqrt(sol.phi2_at) *
           std::pow(sol.phi_at, (1.0 + eps) * t_beta) /
           (std::pow(t_beta, 1.5) * (1.0 - sol.phi_at));
}

} // namespace graphlab
