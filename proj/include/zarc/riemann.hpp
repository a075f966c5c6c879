#pragma once

// Deterministic evaluators on the critical line: the Riemann-Siegel theta
// function, the Hardy Z main sum, the weighted derivative sum Z1, critical
// point location by scan + bisection, and the numeric arc length of the
// Z(t)-curve together with its extrema-sum decomposition.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "zarc/quadrature.hpp"
#include "zarc/window.hpp"

namespace zarc::riemann {

// Hard floor of the theta asymptotic expansion. Below this the truncated
// Stirling-series form is no longer good to ~1e-10.
inline constexpr double kThetaDomainFloor = 10.0;

// Riemann-Siegel theta via the asymptotic expansion
//   theta(t) = (t/2) ln(t/2pi) - t/2 - pi/8
//            + 1/(48 t) + 7/(5760 t^3) + 31/(80640 t^5) + 127/(430080 t^7).
// Truncation error is below 5e-13 for t >= 10 (checked against a 40-digit
// evaluation of Im ln Gamma(1/4 + it/2) - (t/2) ln pi).
double theta(double t);

// d theta / dt = (1/2) ln(t/2pi) - 1/(48 t^2) - ...; sets the oscillation
// scale of the main sums (mean zero spacing is ~ pi / theta_derivative).
double theta_derivative(double t);

// One term of a truncated main sum: frequency ln n with amplitude
//   2/sqrt(n)            for the Z-type sum,
//   (2/sqrt(n)) ln(P/n)  for the Z1-type (derivative-weighted) sum.
struct RiemannSeriesTerm {
    std::uint32_t n;
    double amplitude;
    double log_n;
};

enum class SeriesKind { hardy, derivative };

std::vector<RiemannSeriesTerm> make_series_terms(const EvalWindow& window, SeriesKind kind);

// Per-window evaluator with the term tables built once. All methods are
// const and safe to call concurrently.
class WindowEvaluator {
public:
    explicit WindowEvaluator(const EvalWindow& window);

    const EvalWindow& window() const { return window_; }

    // 2 sum_{n<P} n^{-1/2} cos(theta(t) - t ln n); approximates Z(t) with a
    // remainder O(t^{-1/4}).
    double z_main(double t) const;

    // 2 sum_{n<P} n^{-1/2} ln(P/n) cos(theta(t) - t ln n + pi/2), evaluated
    // as -2 sum n^{-1/2} ln(P/n) sin(theta(t) - t ln n); approximates Z'(t).
    double z1(double t) const;

    // Z1 with independent phase offsets injected into each term. An empty
    // span means all-zero phases, which reproduces z1 exactly (bit for bit).
    double phi1(double t, std::span<const double> phases) const;

    // Both sums at one t, sharing the theta evaluation (scan helper).
    void z_pair(double t, double& z, double& z1v) const;

private:
    EvalWindow window_;
    std::vector<double> amp_z_;  // 2/sqrt(n)
    std::vector<double> amp_z1_; // (2/sqrt(n)) ln(P/n)
    std::vector<double> log_n_;
};

double z_main(double t, const EvalWindow& window);
double z1(double t, const EvalWindow& window);

enum class CriticalKind { zero_of_z, extremum_of_z };

struct CriticalPoint {
    double location;
    CriticalKind kind;
    double value; // z_main at the location
};

struct ScanOptions {
    double step_factor = 0.5;    // scan step = step_factor * pi / theta'(T)
    double bisect_width = 1e-10; // bracket width after refinement (floor: one
                                 // ulp of t, ~1.2e-10 near t = 1e6)
    int max_rescans = 3;         // step halvings when degeneracy is suspected
    double zero_tol = 1e-6;      // |z_main| bound at a reported zero
    double deriv_tol = 1e-6;     // |z1| bound at a reported extremum
};

struct CriticalPointScan {
    std::vector<CriticalPoint> points; // sorted by location, kinds interleaved
    bool degeneracy_warning = false;   // same-kind neighbors closer than the
                                       // final scan step survived all rescans
    int rescans = 0;
    double scan_step = 0.0; // the step actually used (after halvings)
};

// All sign changes of z_main (zeros) and of z1 (extrema) in [T, T+U], each
// refined by bisection. If two detected points of the same kind sit closer
// than the scan step, or three neighbors share a kind, the window is
// rescanned at half step (possible missed point), up to max_rescans times.
CriticalPointScan locate_critical_points(const EvalWindow& window, const ScanOptions& options = {});
CriticalPointScan locate_critical_points(const WindowEvaluator& eval, const ScanOptions& options = {});

struct QuadStats {
    double error_estimate = 0.0;
    std::size_t evaluations = 0;
    std::size_t panels = 0;
    bool converged = true;
};

struct ArcLengthOptions {
    double quad_tol_factor = 1e-6; // absolute tolerance = factor * U
    double panel_factor = 0.5;     // initial panel width = factor / theta'(T)
    ScanOptions scan{};
    bool zero_series = false; // test hook: integrand collapses to sqrt(1+0)
};

struct ArcLengthReport {
    EvalWindow window;
    double l_numeric;     // integral of sqrt(1 + z1^2) over the window
    double extrema_sum;   // 2 sum |z_main| over detected extrema
    double residual;      // l_numeric - extrema_sum
    double quad_error_estimate;
    CriticalPointScan critical_points;
    QuadStats quad;
};

// Computes the arc length by oscillation-aware adaptive quadrature and fills
// the full report. Throws NumericError (with partial value and achieved
// tolerance) if the quadrature cannot reach the requested tolerance.
ArcLengthReport arc_length_numeric(const EvalWindow& window, const ArcLengthOptions& options = {});

// Same, but reuses an already computed (possibly cached) critical-point scan
// instead of rescanning.
ArcLengthReport arc_length_with_scan(const EvalWindow& window, CriticalPointScan scan,
                                     const ArcLengthOptions& options = {});

// 2 sum |z_main(t0)| over the extrema detected in the window.
double extrema_sum(const EvalWindow& window, const ScanOptions& options = {});

} // namespace zarc::riemann
