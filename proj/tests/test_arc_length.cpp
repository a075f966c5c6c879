#include <doctest.h>

#include <cmath>
#include <vector>

#include "zarc/riemann.hpp"
#include "zarc/window.hpp"

using zarc::EvalWindow;
using zarc::riemann::arc_length_numeric;
using zarc::riemann::ArcLengthOptions;
using zarc::riemann::ArcLengthReport;
using zarc::riemann::CriticalKind;
using zarc::riemann::WindowEvaluator;

TEST_CASE("zero-series hook collapses the arc length to the window length") {
    const EvalWindow w = EvalWindow::make(1e6, 7.0);
    ArcLengthOptions opt;
    opt.zero_series = true;
    const ArcLengthReport rep = arc_length_numeric(w, opt);
    CHECK(std::fabs(rep.l_numeric - 7.0) <= 1e-10);
    CHECK(rep.extrema_sum == 0.0);
    CHECK(rep.critical_points.points.empty());
    CHECK(rep.residual == doctest::Approx(7.0));
}

TEST_CASE("arc length dominates the window length (integrand >= 1)") {
    for (double u : {0.5, 3.0, 20.0}) {
        const EvalWindow w = EvalWindow::make(1e6, u);
        const ArcLengthReport rep = arc_length_numeric(w);
        CHECK(rep.l_numeric >= u);
        CHECK(rep.quad.converged);
    }
    const EvalWindow small = EvalWindow::make(1000.0, 2.0);
    CHECK(arc_length_numeric(small).l_numeric >= 2.0);
}

TEST_CASE("identity window: residual sits inside the budgeted band") {
    const EvalWindow w = EvalWindow::make(1e6, 50.0);
    const ArcLengthReport rep = arc_length_numeric(w);
    CHECK(rep.extrema_sum > 0.0);
    CHECK(rep.extrema_sum <= rep.l_numeric);
    CHECK(rep.residual > 0.0);
    CHECK(rep.residual < 50.0 + 2.0);
    CHECK(rep.quad.converged);
    CHECK(rep.residual == rep.l_numeric - rep.extrema_sum);
}

TEST_CASE("halving the tolerance moves the value less than the reported error") {
    const EvalWindow w = EvalWindow::make(1e6, 10.0);
    ArcLengthOptions coarse;
    coarse.quad_tol_factor = 1e-5;
    ArcLengthOptions fine;
    fine.quad_tol_factor = 0.5e-5;
    const double a = arc_length_numeric(w, coarse).l_numeric;
    const ArcLengthReport rc = arc_length_numeric(w, coarse);
    const double b = arc_length_numeric(w, fine).l_numeric;
    CHECK(std::fabs(a - b) < rc.quad_error_estimate + 1e-15);
}

TEST_CASE("extrema sum against an independent fine-grid search") {
    const EvalWindow w = EvalWindow::make(1e6, 50.0);
    const WindowEvaluator eval(w);

    // oracle: bracket sign changes of z1 on a 1e-3 grid, then bisect each
    // bracket on its own; sum |z_main| at the refined extrema
    const double step = 1e-3;
    const std::size_t cells = static_cast<std::size_t>(std::ceil(w.U() / step));
    double oracle = 0.0;
    double prev_t = w.T();
    double prev = eval.z1(prev_t);
    for (std::size_t i = 1; i <= cells; ++i) {
        const double t = (i == cells) ? w.t_end() : w.T() + step * double(i);
        const double cur = eval.z1(t);
        if ((prev < 0.0) != (cur < 0.0)) {
            double a = prev_t, b = t, fa = prev;
            while (b - a > 1e-10) {
                const double mid = 0.5 * (a + b);
                if (mid <= a || mid >= b) break; // bracket at ulp resolution
                const double fm = eval.z1(mid);
                if ((fa < 0.0) == (fm < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            oracle += std::fabs(eval.z_main(0.5 * (a + b)));
        }
        prev_t = t;
        prev = cur;
    }
    oracle *= 2.0;

    const double production = zarc::riemann::extrema_sum(w);
    CHECK(production == doctest::Approx(oracle).epsilon(1e-6));
}

TEST_CASE("arc length report reuses a supplied scan") {
    const EvalWindow w = EvalWindow::make(1e6, 5.0);
    const auto scan = zarc::riemann::locate_critical_points(w);
    const ArcLengthReport a = arc_length_numeric(w);
    const ArcLengthReport b = zarc::riemann::arc_length_with_scan(w, scan);
    CHECK(a.l_numeric == b.l_numeric);
    CHECK(a.extrema_sum == b.extrema_sum);
}
