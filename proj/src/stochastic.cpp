#include "zarc/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <thread>

#include "zarc/errors.hpp"
#include "zarc/quadrature.hpp"
#include "zarc/riemann.hpp"
#include "zarc/rng.hpp"

namespace zarc::stoch {

namespace detail {

namespace {
inline void kahan_add(double& sum, double& comp, double x) {
    const double y = x - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
}
} // namespace

void Moments::add(double x) {
    const double x2 = x * x;
    kahan_add(s1, c1, x);
    kahan_add(s2, c2, x2);
    kahan_add(s3, c3, x2 * x);
    kahan_add(s4, c4, x2 * x2);
    ++n;
}

void Moments::merge(const Moments& other) {
    kahan_add(s1, c1, other.s1);
    kahan_add(s1, c1, other.c1);
    kahan_add(s2, c2, other.s2);
    kahan_add(s2, c2, other.c2);
    kahan_add(s3, c3, other.s3);
    kahan_add(s3, c3, other.c3);
    kahan_add(s4, c4, other.s4);
    kahan_add(s4, c4, other.c4);
    n += other.n;
}

double Moments::mean() const { return n > 0 ? s1 / static_cast<double>(n) : 0.0; }

double Moments::variance_unbiased() const {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double v = (s2 - s1 * s1 / nn) / (nn - 1.0);
    return v > 0.0 ? v : 0.0;
}

double Moments::variance_std_error() const {
    if (n < 2) return 0.0;
    const double nn = static_cast<double>(n);
    const double m = s1 / nn;
    const double m2 = s2 / nn - m * m;
    const double m4 = s4 / nn - 4.0 * m * s3 / nn + 6.0 * m * m * s2 / nn - 3.0 * m * m * m * m;
    const double var_of_var = (m4 - m2 * m2) / nn;
    return var_of_var > 0.0 ? std::sqrt(var_of_var) : 0.0;
}

void run_batches(std::int64_t batch_count, int threads, const std::function<void(std::int64_t)>& body) {
    if (threads <= 0) {
        const unsigned hc = std::thread::hardware_concurrency();
        threads = hc == 0 ? 1 : static_cast<int>(hc);
    }
    if (threads == 1 || batch_count <= 1) {
        for (std::int64_t b = 0; b < batch_count; ++b) body(b);
        return;
    }
    std::atomic<std::int64_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::int64_t b = next.fetch_add(1);
            if (b >= batch_count) return;
            body(b);
        }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(std::min<std::int64_t>(threads, batch_count));
    pool.reserve(static_cast<std::size_t>(spawn));
    for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
}

} // namespace detail

namespace {

constexpr double kPi = std::numbers::pi;

void require_mc_config(const McConfig& config) {
    if (config.sample_count < 2)
        throw ValidationError("mc config: sample_count >= 2 required (variance undefined)");
    if (config.batch_size < 1)
        throw ValidationError("mc config: batch_size >= 1 required");
}

std::int64_t batch_count_for(const McConfig& config) {
    return (config.sample_count + config.batch_size - 1) / config.batch_size;
}

McEstimate finalize(const detail::Moments& m) {
    McEstimate est;
    est.count = m.n;
    est.mean = m.mean();
    est.variance = m.variance_unbiased();
    est.std_error = m.n > 0 ? std::sqrt(est.variance / static_cast<double>(m.n)) : 0.0;
    return est;
}

} // namespace

PhaseSample sample_phases(const EvalWindow& window, const McConfig& config, std::int64_t index) {
    if (index < 0 || index >= config.sample_count)
        throw ValidationError("sample_phases: index must satisfy 0 <= index < sample_count");
    const std::size_t count = window.term_count();
    PhaseSample sample;
    sample.seed_path = {config.master_seed, static_cast<std::uint64_t>(index)};
    sample.phases.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        // term index n = i+1 keys the counter, so any (sample, term) pair can
        // be regenerated independently of evaluation order
        sample.phases[i] = rng::uniform_symmetric(config.master_seed,
                                                  static_cast<std::uint64_t>(index),
                                                  static_cast<std::uint64_t>(i + 1), kPi);
    }
    return sample;
}

double phi1(double t, const PhaseSample& sample, const EvalWindow& window) {
    const riemann::WindowEvaluator eval(window);
    return eval.phi1(t, sample.phases);
}

double variance_exact(const EvalWindow& window) {
    const double P = window.P();
    const std::size_t count = window.term_count();
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 1; i <= count; ++i) {
        const double n = static_cast<double>(i);
        const double l = std::log(P / n);
        detail::kahan_add(sum, comp, l * l / n);
    }
    return 2.0 * sum;
}

double variance_asymptotic(const EvalWindow& window) {
    const double lp = std::log(window.P());
    return (2.0 / 3.0) * lp * lp * lp;
}

double third_moment_sum(const EvalWindow& window) {
    const double P = window.P();
    const std::size_t count = window.term_count();
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 1; i <= count; ++i) {
        const double n = static_cast<double>(i);
        const double l = std::log(P / n);
        detail::kahan_add(sum, comp, l * l * l / (n * std::sqrt(n)));
    }
    return (32.0 / (3.0 * kPi)) * sum;
}

double third_moment_bound(const EvalWindow& window) {
    const double P = window.P();
    const std::size_t count = window.term_count();
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 1; i <= count; ++i) {
        const double n = static_cast<double>(i);
        const double l = std::log(P / n);
        detail::kahan_add(sum, comp, l * l * l / (n * std::sqrt(n)));
    }
    return 8.0 * sum;
}

double lyapunov_ratio(const EvalWindow& window) {
    const double var = variance_exact(window);
    return third_moment_sum(window) / (var * std::sqrt(var));
}

namespace {

// Batched deterministic reduction of a per-sample scalar functional.
template <typename SampleFn>
detail::Moments reduce_samples(const EvalWindow& window, const McConfig& config, SampleFn&& fn) {
    const std::int64_t batches = batch_count_for(config);
    std::vector<detail::Moments> slots(static_cast<std::size_t>(batches));
    detail::run_batches(batches, config.threads, [&](std::int64_t b) {
        const std::int64_t lo = b * config.batch_size;
        const std::int64_t hi = std::min(config.sample_count, lo + config.batch_size);
        detail::Moments& m = slots[static_cast<std::size_t>(b)];
        std::vector<double> phases(window.term_count());
        for (std::int64_t s = lo; s < hi; ++s) {
            for (std::size_t i = 0; i < phases.size(); ++i)
                phases[i] = rng::uniform_symmetric(config.master_seed,
                                                   static_cast<std::uint64_t>(s),
                                                   static_cast<std::uint64_t>(i + 1), kPi);
            m.add(fn(s, phases));
        }
    });
    detail::Moments total;
    for (const detail::Moments& m : slots) total.merge(m);
    return total;
}

} // namespace

namespace detail {

Moments phi1_moments(double t, const EvalWindow& window, const McConfig& config) {
    require_mc_config(config);
    window.require_contains(t, "mc_moments");
    const riemann::WindowEvaluator eval(window);
    return reduce_samples(window, config,
                          [&](std::int64_t, const std::vector<double>& phases) {
                              return eval.phi1(t, phases);
                          });
}

} // namespace detail

McEstimate mc_moments(double t, const EvalWindow& window, const McConfig& config) {
    return finalize(detail::phi1_moments(t, window, config));
}

double distribution_check(double t, const EvalWindow& window, const McConfig& config) {
    require_mc_config(config);
    if (config.sample_count < 1000)
        throw ValidationError("distribution_check: sample_count >= 1000 required");
    window.require_contains(t, "distribution_check");

    const riemann::WindowEvaluator eval(window);
    const std::int64_t n = config.sample_count;
    std::vector<double> values(static_cast<std::size_t>(n));
    const std::int64_t batches = batch_count_for(config);
    detail::run_batches(batches, config.threads, [&](std::int64_t b) {
        const std::int64_t lo = b * config.batch_size;
        const std::int64_t hi = std::min(n, lo + config.batch_size);
        std::vector<double> phases(window.term_count());
        for (std::int64_t s = lo; s < hi; ++s) {
            for (std::size_t i = 0; i < phases.size(); ++i)
                phases[i] = rng::uniform_symmetric(config.master_seed,
                                                   static_cast<std::uint64_t>(s),
                                                   static_cast<std::uint64_t>(i + 1), kPi);
            values[static_cast<std::size_t>(s)] = eval.phi1(t, phases);
        }
    });
    std::sort(values.begin(), values.end());

    const double sigma = std::sqrt(variance_exact(window));
    const double inv = 1.0 / (sigma * std::numbers::sqrt2);
    double d = 0.0;
    const double nn = static_cast<double>(n);
    for (std::int64_t i = 0; i < n; ++i) {
        const double cdf = 0.5 * std::erfc(-values[static_cast<std::size_t>(i)] * inv);
        const double lo = static_cast<double>(i) / nn;
        const double hi = static_cast<double>(i + 1) / nn;
        d = std::max(d, std::max(std::fabs(cdf - lo), std::fabs(cdf - hi)));
    }
    return d;
}

Phi2Estimate phi2_mc(const EvalWindow& window, const McConfig& config, const Phi2Options& options) {
    require_mc_config(config);
    const riemann::WindowEvaluator eval(window);

    quad::Options qopt;
    qopt.abs_tol = options.quad_tol_factor * window.U();
    qopt.initial_panel = options.panel_factor / riemann::theta_derivative(window.T());

    const std::int64_t batches = batch_count_for(config);
    std::vector<detail::Moments> slots(static_cast<std::size_t>(batches));
    std::vector<std::int64_t> failures(static_cast<std::size_t>(batches), 0);
    detail::run_batches(batches, config.threads, [&](std::int64_t b) {
        const std::int64_t lo = b * config.batch_size;
        const std::int64_t hi = std::min(config.sample_count, lo + config.batch_size);
        std::vector<double> phases(window.term_count());
        for (std::int64_t s = lo; s < hi; ++s) {
            for (std::size_t i = 0; i < phases.size(); ++i)
                phases[i] = rng::uniform_symmetric(config.master_seed,
                                                   static_cast<std::uint64_t>(s),
                                                   static_cast<std::uint64_t>(i + 1), kPi);
            quad::Result qr;
            if (options.zero_series) {
                qr = quad::integrate([](double) { return 1.0; }, window.T(), window.t_end(), qopt);
            } else {
                qr = quad::integrate(
                    [&](double t) {
                        const double v = eval.phi1(t, phases);
                        return std::sqrt(1.0 + v * v);
                    },
                    window.T(), window.t_end(), qopt);
            }
            if (qr.converged) {
                slots[static_cast<std::size_t>(b)].add(qr.value);
            } else {
                ++failures[static_cast<std::size_t>(b)];
            }
        }
    });

    detail::Moments total;
    std::int64_t failed = 0;
    for (std::size_t i = 0; i < slots.size(); ++i) {
        total.merge(slots[i]);
        failed += failures[i];
    }
    if (static_cast<double>(failed) > 0.01 * static_cast<double>(config.sample_count)) {
        std::ostringstream os;
        os << "phi2_mc: " << failed << " of " << config.sample_count
           << " realizations failed quadrature (> 1%)";
        throw NumericError(os.str());
    }

    Phi2Estimate out;
    out.estimate = finalize(total);
    out.quadrature_failures = failed;
    return out;
}

} // namespace zarc::stoch
