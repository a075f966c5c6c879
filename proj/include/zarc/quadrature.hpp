#pragma once

// Adaptive Gauss-Kronrod (G7,K15) quadrature.
//
// The integrand is evaluated on fixed-width initial panels (callers pick the
// panel width from the known oscillation scale of the integrand), each panel
// refined by recursive bisection until its |K15 - G7| estimate falls under
// its share of the absolute tolerance. Panel results and error estimates are
// accumulated in panel order with compensated summation, so the result is
// independent of everything except the inputs.

#include <cmath>
#include <cstddef>
#include <utility>

namespace zarc::quad {

struct Options {
    double abs_tol = 1e-10;     // absolute tolerance for the whole integral
    double initial_panel = 0.0; // 0 => one panel spanning [a, b]
    int max_depth = 30;         // bisection depth limit per panel
};

struct Result {
    double value = 0.0;
    double error_estimate = 0.0; // sum of |K15 - G7| over accepted intervals
    std::size_t evaluations = 0;
    bool converged = true;       // false if any interval hit max_depth
};

namespace detail {

// Kronrod-15 abscissae on [0,1] and weights; Gauss-7 weights for the
// embedded rule (QUADPACK dqk15 constants).
inline constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

inline constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

inline constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelEstimate {
    double k15;
    double err; // |k15 - g7|
};

template <typename F>
PanelEstimate gk15(F&& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double fc = f(center);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * kXgk[i];
        const double fsum = f(center - dx) + f(center + dx);
        k15 += kWgk[i] * fsum;
        if (i % 2 == 1) g7 += kWg[i / 2] * fsum;
    }
    k15 *= half;
    g7 *= half;
    return {k15, std::fabs(k15 - g7)};
}

struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        const double y = x - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

template <typename F>
void refine(F&& f, double a, double b, const PanelEstimate& est, double tol,
            int depth, const Options& opt, Result& out, KahanSum& val, KahanSum& err) {
    if (est.err <= tol || depth >= opt.max_depth) {
        if (est.err > tol) out.converged = false;
        val.add(est.k15);
        err.add(est.err);
        return;
    }
    const double mid = 0.5 * (a + b);
    const PanelEstimate left = gk15(f, a, mid);
    const PanelEstimate right = gk15(f, mid, b);
    out.evaluations += 30;
    refine(f, a, mid, left, 0.5 * tol, depth + 1, opt, out, val, err);
    refine(f, mid, b, right, 0.5 * tol, depth + 1, opt, out, val, err);
}

} // namespace detail

template <typename F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    Result out;
    if (!(b > a)) {
        out.value = 0.0;
        return out;
    }
    const double width = b - a;
    std::size_t panels = 1;
    if (opt.initial_panel > 0.0 && opt.initial_panel < width)
        panels = static_cast<std::size_t>(std::ceil(width / opt.initial_panel));

    detail::KahanSum val;
    detail::KahanSum err;
    const double panel_width = width / static_cast<double>(panels);
    for (std::size_t i = 0; i < panels; ++i) {
        const double pa = a + panel_width * static_cast<double>(i);
        const double pb = (i + 1 == panels) ? b : a + panel_width * static_cast<double>(i + 1);
        const detail::PanelEstimate est = detail::gk15(f, pa, pb);
        out.evaluations += 15;
        const double tol_share = opt.abs_tol * (pb - pa) / width;
        detail::refine(f, pa, pb, est, tol_share, 0, opt, out, val, err);
    }
    out.value = val.sum;
    out.error_estimate = err.sum;
    return out;
}

} // namespace zarc::quad
