#include "zarc/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "zarc/errors.hpp"

namespace zarc::riemann {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kHalfPi = 0.5 * std::numbers::pi;

} // namespace

double theta(double t) {
    if (!(t >= kThetaDomainFloor)) {
        std::ostringstream os;
        os << "theta: t = " << t << " violates t >= " << kThetaDomainFloor
           << " (asymptotic expansion unreliable)";
        throw ValidationError(os.str());
    }
    const double t2 = t * t;
    double v = 0.5 * t * std::log(t / kTwoPi) - 0.5 * t - std::numbers::pi / 8.0;
    v += 1.0 / (48.0 * t);
    v += 7.0 / (5760.0 * t * t2);
    v += 31.0 / (80640.0 * t * t2 * t2);
    v += 127.0 / (430080.0 * t * t2 * t2 * t2);
    return v;
}

double theta_derivative(double t) {
    if (!(t >= kThetaDomainFloor))
        throw ValidationError("theta_derivative: t below expansion floor");
    const double t2 = t * t;
    return 0.5 * std::log(t / kTwoPi) - 1.0 / (48.0 * t2) - 21.0 / (5760.0 * t2 * t2) -
           155.0 / (80640.0 * t2 * t2 * t2);
}

std::vector<RiemannSeriesTerm> make_series_terms(const EvalWindow& window, SeriesKind kind) {
    const double P = window.P();
    const std::size_t count = window.term_count();
    std::vector<RiemannSeriesTerm> terms;
    terms.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        const double n = static_cast<double>(i);
        const double base = 2.0 / std::sqrt(n);
        const double amp = (kind == SeriesKind::hardy) ? base : base * std::log(P / n);
        terms.push_back({static_cast<std::uint32_t>(i), amp, std::log(n)});
    }
    return terms;
}

WindowEvaluator::WindowEvaluator(const EvalWindow& window) : window_(window) {
    const double P = window.P();
    const std::size_t count = window.term_count();
    amp_z_.reserve(count);
    amp_z1_.reserve(count);
    log_n_.reserve(count);
    for (std::size_t i = 1; i <= count; ++i) {
        const double n = static_cast<double>(i);
        const double base = 2.0 / std::sqrt(n);
        amp_z_.push_back(base);
        amp_z1_.push_back(base * std::log(P / n));
        log_n_.push_back(std::log(n));
    }
}

double WindowEvaluator::z_main(double t) const {
    window_.require_contains(t, "z_main");
    const double th = theta(t);
    double acc = 0.0;
    for (std::size_t i = 0; i < amp_z_.size(); ++i)
        acc += amp_z_[i] * std::cos(th - t * log_n_[i]);
    return acc;
}

double WindowEvaluator::z1(double t) const {
    window_.require_contains(t, "z1");
    const double th = theta(t);
    double acc = 0.0;
    for (std::size_t i = 0; i < amp_z1_.size(); ++i)
        acc -= amp_z1_[i] * std::sin(th - t * log_n_[i]);
    return acc;
}

double WindowEvaluator::phi1(double t, std::span<const double> phases) const {
    window_.require_contains(t, "phi1");
    if (!phases.empty() && phases.size() != amp_z1_.size()) {
        std::ostringstream os;
        os << "phi1: phase vector length " << phases.size() << " does not match term count "
           << amp_z1_.size();
        throw ValidationError(os.str());
    }
    const double th = theta(t);
    double acc = 0.0;
    if (phases.empty()) {
        for (std::size_t i = 0; i < amp_z1_.size(); ++i)
            acc -= amp_z1_[i] * std::sin(th - t * log_n_[i]);
    } else {
        for (std::size_t i = 0; i < amp_z1_.size(); ++i)
            acc -= amp_z1_[i] * std::sin(th - t * log_n_[i] + phases[i]);
    }
    return acc;
}

void WindowEvaluator::z_pair(double t, double& z, double& z1v) const {
    window_.require_contains(t, "z_pair");
    const double th = theta(t);
    double az = 0.0;
    double a1 = 0.0;
    for (std::size_t i = 0; i < amp_z_.size(); ++i) {
        const double arg = th - t * log_n_[i];
        az += amp_z_[i] * std::cos(arg);
        a1 -= amp_z1_[i] * std::sin(arg);
    }
    z = az;
    z1v = a1;
}

double z_main(double t, const EvalWindow& window) { return WindowEvaluator(window).z_main(t); }

double z1(double t, const EvalWindow& window) { return WindowEvaluator(window).z1(t); }

namespace {

// Bisection on f down to |b - a| <= width; the bracket must satisfy
// f(a) * f(b) < 0. Returns the midpoint of the final bracket.
template <typename F>
double bisect(F&& f, double a, double b, double fa, double width) {
    while (b - a > width) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break; // bracket at floating-point resolution
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

struct ScanPass {
    std::vector<CriticalPoint> points;
    bool suspicious = false;
};

ScanPass scan_once(const WindowEvaluator& eval, double step, const ScanOptions& opt) {
    const EvalWindow& w = eval.window();
    const double a = w.T();
    const double b = w.t_end();
    const std::size_t cells = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) / step)));

    ScanPass pass;
    auto fz = [&](double t) { return eval.z_main(t); };
    auto f1 = [&](double t) { return eval.z1(t); };

    double t_prev = a;
    double z_prev, z1_prev;
    eval.z_pair(t_prev, z_prev, z1_prev);
    for (std::size_t i = 1; i <= cells; ++i) {
        const double t_cur = (i == cells) ? b : a + (b - a) * static_cast<double>(i) / static_cast<double>(cells);
        double z_cur, z1_cur;
        eval.z_pair(t_cur, z_cur, z1_cur);

        if (z_prev == 0.0) {
            pass.points.push_back({t_prev, CriticalKind::zero_of_z, 0.0});
        } else if (z_cur != 0.0 && (z_prev < 0.0) != (z_cur < 0.0)) {
            const double loc = bisect(fz, t_prev, t_cur, z_prev, opt.bisect_width);
            pass.points.push_back({loc, CriticalKind::zero_of_z, eval.z_main(loc)});
        }
        if (z1_prev == 0.0) {
            pass.points.push_back({t_prev, CriticalKind::extremum_of_z, eval.z_main(t_prev)});
        } else if (z1_cur != 0.0 && (z1_prev < 0.0) != (z1_cur < 0.0)) {
            const double loc = bisect(f1, t_prev, t_cur, z1_prev, opt.bisect_width);
            pass.points.push_back({loc, CriticalKind::extremum_of_z, eval.z_main(loc)});
        }
        t_prev = t_cur;
        z_prev = z_cur;
        z1_prev = z1_cur;
    }

    std::sort(pass.points.begin(), pass.points.end(),
              [](const CriticalPoint& x, const CriticalPoint& y) { return x.location < y.location; });

    // Two same-kind neighbors closer than the scan step hint at a missed
    // point of the other kind between them (sign changes come in pairs
    // inside one cell and the cell scan cannot see them).
    for (std::size_t i = 1; i < pass.points.size(); ++i) {
        if (pass.points[i].kind == pass.points[i - 1].kind &&
            pass.points[i].location - pass.points[i - 1].location < step) {
            pass.suspicious = true;
            break;
        }
    }
    return pass;
}

} // namespace

CriticalPointScan locate_critical_points(const WindowEvaluator& eval, const ScanOptions& options) {
    const EvalWindow& w = eval.window();
    double step = options.step_factor * std::numbers::pi / theta_derivative(w.T());

    CriticalPointScan out;
    ScanPass pass = scan_once(eval, step, options);
    while (pass.suspicious && out.rescans < options.max_rescans) {
        step *= 0.5;
        ++out.rescans;
        pass = scan_once(eval, step, options);
    }
    out.points = std::move(pass.points);
    out.degeneracy_warning = pass.suspicious;
    out.scan_step = step;
    return out;
}

CriticalPointScan locate_critical_points(const EvalWindow& window, const ScanOptions& options) {
    return locate_critical_points(WindowEvaluator(window), options);
}

namespace {

ArcLengthReport arc_length_impl(const EvalWindow& window, const ArcLengthOptions& options,
                                const CriticalPointScan* precomputed) {
    const WindowEvaluator eval(window);

    quad::Options qopt;
    qopt.abs_tol = options.quad_tol_factor * window.U();
    qopt.initial_panel = options.panel_factor / theta_derivative(window.T());

    quad::Result qr;
    if (options.zero_series) {
        qr = quad::integrate([](double) { return 1.0; }, window.T(), window.t_end(), qopt);
    } else {
        qr = quad::integrate(
            [&](double t) {
                const double d = eval.z1(t);
                return std::sqrt(1.0 + d * d);
            },
            window.T(), window.t_end(), qopt);
    }
    if (!qr.converged) {
        std::ostringstream os;
        os << "arc_length_numeric: quadrature did not reach tolerance " << qopt.abs_tol
           << " (achieved " << qr.error_estimate << ")";
        throw NumericError(os.str(), qr.value, qr.error_estimate);
    }

    ArcLengthReport report{window, qr.value, 0.0, 0.0, qr.error_estimate, {}, {}};
    report.quad.error_estimate = qr.error_estimate;
    report.quad.evaluations = qr.evaluations;
    report.quad.panels = static_cast<std::size_t>(std::ceil(window.U() / qopt.initial_panel));
    report.quad.converged = qr.converged;

    if (!options.zero_series) {
        if (precomputed)
            report.critical_points = *precomputed;
        else
            report.critical_points = locate_critical_points(eval, options.scan);
    }

    double esum = 0.0;
    for (const CriticalPoint& p : report.critical_points.points)
        if (p.kind == CriticalKind::extremum_of_z) esum += std::fabs(p.value);
    report.extrema_sum = 2.0 * esum;
    report.residual = report.l_numeric - report.extrema_sum;
    return report;
}

} // namespace

ArcLengthReport arc_length_numeric(const EvalWindow& window, const ArcLengthOptions& options) {
    return arc_length_impl(window, options, nullptr);
}

ArcLengthReport arc_length_with_scan(const EvalWindow& window, CriticalPointScan scan,
                                     const ArcLengthOptions& options) {
    return arc_length_impl(window, options, &scan);
}

double extrema_sum(const EvalWindow& window, const ScanOptions& options) {
    const CriticalPointScan scan = locate_critical_points(window, options);
    double esum = 0.0;
    for (const CriticalPoint& p : scan.points)
        if (p.kind == CriticalKind::extremum_of_z) esum += std::fabs(p.value);
    return 2.0 * esum;
}

} // namespace zarc::riemann
