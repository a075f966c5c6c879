#pragma once

// Random-phase model of the derivative main sum: sampling of the phase
// vectors, the randomized sum phi1, its exact and asymptotic moments, the
// Lyapunov-condition diagnostic, and Monte Carlo estimation of the random
// arc-length functional phi2. All Monte Carlo reductions run over fixed-size
// batches merged in batch order with compensated summation, so results are
// bit-identical for a given master seed regardless of thread count.

#include <cstdint>
#include <functional>
#include <vector>

#include "zarc/window.hpp"

namespace zarc::stoch {

struct SeedPath {
    std::uint64_t master_seed;
    std::uint64_t sample_index;
};

// One realization of the phase vector (phi_1, ..., phi_{n_max}), each entry
// uniform on [-pi, pi], derived from (master seed, sample index, term index)
// by a counter-based generator.
struct PhaseSample {
    std::vector<double> phases;
    SeedPath seed_path;
};

struct McConfig {
    std::int64_t sample_count = 10000;
    std::uint64_t master_seed = 1;
    std::int64_t batch_size = 4096; // reduction granularity; fixes the merge order
    int threads = 0;                // 0 = hardware concurrency; never affects values
};

struct McEstimate {
    double mean = 0.0;
    double variance = 0.0;  // unbiased sample variance
    double std_error = 0.0; // sqrt(variance / count)
    std::int64_t count = 0;
};

PhaseSample sample_phases(const EvalWindow& window, const McConfig& config, std::int64_t index);

// The randomized derivative sum at t for one phase realization. With the
// all-zero phase vector this is exactly z1(t).
double phi1(double t, const PhaseSample& sample, const EvalWindow& window);

// Exact variance of phi1 at fixed t: 2 sum_{n<P} ln^2(P/n) / n.
double variance_exact(const EvalWindow& window);

// Leading asymptotic of the same sum: (2/3) ln^3 P.
double variance_asymptotic(const EvalWindow& window);

// Exact sum of third absolute central moments of the independent terms,
// sum_{n<P} (32/(3 pi)) n^{-3/2} ln^3(P/n); the constant uses
// E|cos^3| = 4/(3 pi) exactly.
double third_moment_sum(const EvalWindow& window);

// The cruder bound 8 sum_{n<P} n^{-3/2} ln^3(P/n), kept for comparison.
double third_moment_bound(const EvalWindow& window);

// Lyapunov diagnostic: third_moment_sum / variance_exact^{3/2}. The central
// limit theorem for phi1 needs this to vanish as P grows.
double lyapunov_ratio(const EvalWindow& window);

// Monte Carlo mean/variance of phi1 at fixed t over config.sample_count
// independent phase realizations.
McEstimate mc_moments(double t, const EvalWindow& window, const McConfig& config);

// Kolmogorov-Smirnov distance between the empirical CDF of phi1 samples at
// fixed t and the zero-mean normal CDF with variance variance_exact(window).
// Requires sample_count >= 1000.
double distribution_check(double t, const EvalWindow& window, const McConfig& config);

struct Phi2Options {
    double quad_tol_factor = 1e-8; // absolute tolerance = factor * U per realization
    double panel_factor = 0.5;     // initial panel width = factor / theta'(T)
    bool zero_series = false;      // test hook: every realization integrates 1
};

struct Phi2Estimate {
    McEstimate estimate;
    std::int64_t quadrature_failures = 0; // realizations dropped (non-convergence)
};

// Integrates sqrt(1 + phi1(t)^2) over the window for each phase realization
// and reduces the per-sample integrals. A realization whose quadrature fails
// is dropped and counted; more than 1% failures aborts the run.
Phi2Estimate phi2_mc(const EvalWindow& window, const McConfig& config, const Phi2Options& options = {});

namespace detail {

// Raw power sums with compensated accumulation; merged in fixed batch order.
struct Moments {
    double s1 = 0, c1 = 0;
    double s2 = 0, c2 = 0;
    double s3 = 0, c3 = 0;
    double s4 = 0, c4 = 0;
    std::int64_t n = 0;

    void add(double x);
    void merge(const Moments& other);

    double mean() const;
    double variance_unbiased() const;
    // Standard error of the sample variance, sqrt((m4 - m2^2)/n) with central
    // moments; used for the 3-sigma variance gates.
    double variance_std_error() const;
};

// Runs body(batch) for batch = 0..batch_count-1 on the requested number of
// threads. Bodies must write only to per-batch slots.
void run_batches(std::int64_t batch_count, int threads, const std::function<void(std::int64_t)>& body);

// Full moment sums of phi1 at fixed t (mc_moments inside; the variance gates
// also need the fourth moment for the variance standard error).
Moments phi1_moments(double t, const EvalWindow& window, const McConfig& config);

} // namespace detail

} // namespace zarc::stoch
