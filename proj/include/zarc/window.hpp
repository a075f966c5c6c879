#pragma once

#include <cstddef>

namespace zarc {

// Configurable lower bound for the window start. The default keeps every
// evaluation inside the regime where the asymptotic theta expansion and the
// main-sum truncation are comfortably accurate. Tests may lower it (never
// below the hard floor accepted by theta()).
struct WindowLimits {
    double t_min = 100.0;
};

// Evaluation window [T, T+U] with its frozen series truncation point
// P = sqrt(T / 2pi). P is derived once from the window start and reused for
// every evaluation inside the window, so all sums over n < P share one term
// set. Immutable after construction; construction validates
//   T >= t_min,  0 < U <= sqrt(T),  P > 1.
class EvalWindow {
public:
    static EvalWindow make(double T, double U, const WindowLimits& limits = {});

    // Convenience for experiments parameterized by the truncation point
    // itself: builds the window with T = 2*pi*P^2.
    static EvalWindow for_truncation(double P, double U, const WindowLimits& limits = {});

    double T() const { return t_; }
    double U() const { return u_; }
    double P() const { return p_; }
    double t_end() const { return t_ + u_; }

    // Number of integers n with 1 <= n < P (the series length).
    std::size_t term_count() const;

    // True when t may be evaluated against this window's frozen P. A small
    // boundary slack (1e-6 * T, at least 1e-9) admits finite-difference
    // probes straddling the window edges; P drift over that slack is
    // negligible.
    bool contains(double t) const;

    // Throws ValidationError naming the violated precondition.
    void require_contains(double t, const char* op_name) const;

private:
    EvalWindow(double T, double U, double P) : t_(T), u_(U), p_(P) {}

    double t_;
    double u_;
    double p_;
};

} // namespace zarc
