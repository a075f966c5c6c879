#include "zarc/window.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "zarc/errors.hpp"

namespace zarc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

[[noreturn]] void fail(const std::string& what) { throw ValidationError(what); }

} // namespace

EvalWindow EvalWindow::make(double T, double U, const WindowLimits& limits) {
    if (!std::isfinite(T) || !std::isfinite(U)) fail("window parameters must be finite");
    if (T < 10.0) fail("window start T below the theta expansion floor (T >= 10)");
    if (T < limits.t_min) {
        std::ostringstream os;
        os << "window start T = " << T << " violates T >= t_min = " << limits.t_min
           << " (asymptotic regime guard)";
        fail(os.str());
    }
    if (!(U > 0.0) || U > std::sqrt(T)) {
        std::ostringstream os;
        os << "window length U = " << U << " violates 0 < U <= sqrt(T) = " << std::sqrt(T);
        fail(os.str());
    }
    const double P = std::sqrt(T / kTwoPi);
    if (!(P > 1.0)) {
        std::ostringstream os;
        os << "truncation point P = sqrt(T/2pi) = " << P << " violates P > 1 (need T > 2pi)";
        fail(os.str());
    }
    return EvalWindow(T, U, P);
}

EvalWindow EvalWindow::for_truncation(double P, double U, const WindowLimits& limits) {
    if (!std::isfinite(P) || !(P > 1.0))
        fail("truncation point P must be finite and > 1");
    return make(kTwoPi * P * P, U, limits);
}

std::size_t EvalWindow::term_count() const {
    // largest integer strictly below P (covers both integer and fractional P)
    const double upper = std::ceil(p_) - 1.0;
    return upper < 1.0 ? 0 : static_cast<std::size_t>(upper);
}

bool EvalWindow::contains(double t) const {
    const double slack = 1e-6 * t_ + 1e-9;
    return t >= t_ - slack && t <= t_ + u_ + slack;
}

void EvalWindow::require_contains(double t, const char* op_name) const {
    if (!contains(t)) {
        std::ostringstream os;
        os << op_name << ": t = " << t << " outside window [" << t_ << ", " << t_ + u_
           << "] (frozen P would be stale)";
        throw ValidationError(os.str());
    }
}

} // namespace zarc
