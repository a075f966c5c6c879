// Command-line driver: deterministic experiments on the Hardy Z-curve arc
// length and its random-phase statistical model.
//
//   eval       tabulate theta, Z, Z1 on a grid (CSV or JSON)
//   arclength  numeric arc length, extrema sum, residual for one window
//   simulate   Monte Carlo moments, KS normality check, Lyapunov diagnostic
//   predict    closed-form expectation chain for one window
//   compare    numeric, Monte Carlo, closed-form and asymptotic side by side
//   verify     run the full verification suite (exit 0 iff everything passed)
//
// Exit codes: 0 success, 2 parameter validation, 3 numeric consistency,
// 4 I/O failure.

#include <cstdlib>
#include <iostream>
#include <numbers>
#include <string>

#include <CLI11.hpp>

#include "zarc/cache.hpp"
#include "zarc/errors.hpp"
#include "zarc/record.hpp"
#include "zarc/riemann.hpp"
#include "zarc/special.hpp"
#include "zarc/stochastic.hpp"
#include "zarc/verify.hpp"
#include "zarc/window.hpp"

namespace {

using zarc::EvalWindow;
using zarc::cli::Json;
using zarc::cli::OutputFormat;
using zarc::cli::RunConfig;

struct CommonFlags {
    RunConfig cfg;
    std::string format_str; // empty = per-command default
    bool zero_series = false;
    bool corrupt_bessel = false;
    bool with_phi2 = false;
};

void add_window_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--T", cfg.T, "window start (t units)")->required();
    cmd->add_option("--U", cfg.U, "window length")->required();
}

void add_output_flags(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--format", f.format_str, "output format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--out", f.cfg.out_path, "output path (default stdout)");
    cmd->add_option("--cache", f.cfg.cache_dir,
                    "cache directory (default $ZETA_ARCLEN_CACHE when set)");
}

void add_mc_flags(CLI::App* cmd, RunConfig& cfg) {
    cmd->add_option("--samples", cfg.samples, "Monte Carlo sample count");
    cmd->add_option("--seed", cfg.seed, "master seed (all substreams derive from it)");
    cmd->add_option("--threads", cfg.threads, "worker threads (0 = hardware)");
}

std::string default_cache_dir() {
    const char* env = std::getenv("ZETA_ARCLEN_CACHE");
    return env ? env : "";
}

Json quad_diag(const zarc::riemann::QuadStats& q) {
    Json j;
    j["error_estimate"] = q.error_estimate;
    j["evaluations"] = q.evaluations;
    j["panels"] = q.panels;
    j["converged"] = q.converged;
    return j;
}

int run_eval(CommonFlags& f) {
    const EvalWindow w = EvalWindow::make(f.cfg.T, f.cfg.U);
    if (f.cfg.grid < 1) throw zarc::ValidationError("eval: --grid must be >= 1");
    const zarc::riemann::WindowEvaluator eval(w);

    std::string csv = "t,theta,z,z1\n";
    Json rows = Json::array();
    for (std::int64_t i = 0; i < f.cfg.grid; ++i) {
        const double t = (f.cfg.grid == 1)
                             ? w.T()
                             : w.T() + w.U() * static_cast<double>(i) /
                                           static_cast<double>(f.cfg.grid - 1);
        const double th = zarc::riemann::theta(t);
        const double z = eval.z_main(t);
        const double z1 = eval.z1(t);
        csv += zarc::cli::format_double(t) + "," + zarc::cli::format_double(th) + "," +
               zarc::cli::format_double(z) + "," + zarc::cli::format_double(z1) + "\n";
        Json row;
        row["t"] = t;
        row["theta"] = th;
        row["z"] = z;
        row["z1"] = z1;
        rows.push_back(std::move(row));
    }
    Json results;
    results["table"] = std::move(rows);
    emit(make_record(f.cfg, std::move(results)), f.cfg, csv);
    return 0;
}

int run_arclength(CommonFlags& f) {
    const EvalWindow w = EvalWindow::make(f.cfg.T, f.cfg.U);
    zarc::riemann::ArcLengthOptions opt;
    opt.quad_tol_factor = f.cfg.quad_tol;
    opt.zero_series = f.zero_series;

    zarc::riemann::ArcLengthReport rep{w, 0, 0, 0, 0, {}, {}};
    if (!f.cfg.cache_dir.empty() && !f.zero_series) {
        const zarc::cli::CriticalPointCache cache(f.cfg.cache_dir);
        rep = zarc::riemann::arc_length_with_scan(w, cache.get(w, opt.scan), opt);
    } else {
        rep = zarc::riemann::arc_length_numeric(w, opt);
    }

    std::size_t zeros = 0, extrema = 0;
    for (const auto& p : rep.critical_points.points)
        (p.kind == zarc::riemann::CriticalKind::zero_of_z ? zeros : extrema)++;

    Json results;
    results["l_numeric"] = rep.l_numeric;
    results["extrema_sum"] = rep.extrema_sum;
    results["residual"] = rep.residual;
    results["theta_proxy"] = rep.residual / w.U();
    results["zero_count"] = zeros;
    results["extrema_count"] = extrema;
    Json diag;
    diag["warnings"] = Json::array();
    if (rep.critical_points.degeneracy_warning)
        diag["warnings"].push_back("near-degenerate critical points after rescans");
    diag["rescans"] = rep.critical_points.rescans;
    diag["quadrature"] = quad_diag(rep.quad);
    emit(make_record(f.cfg, std::move(results), std::move(diag)), f.cfg);
    return 0;
}

int run_simulate(CommonFlags& f) {
    const EvalWindow w = EvalWindow::make(f.cfg.T, f.cfg.U);
    zarc::stoch::McConfig mc;
    mc.sample_count = f.cfg.samples;
    mc.master_seed = f.cfg.seed;
    mc.threads = f.cfg.threads;

    Json results;
    // the model law is t-independent; both window points are reported anyway
    for (const auto& [label, t] : {std::pair<const char*, double>{"t_start", w.T()},
                                   {"t_mid", w.T() + 0.5 * w.U()}}) {
        const zarc::stoch::McEstimate est = zarc::stoch::mc_moments(t, w, mc);
        Json je;
        je["mean"] = est.mean;
        je["variance"] = est.variance;
        je["std_error"] = est.std_error;
        je["count"] = est.count;
        if (mc.sample_count >= 1000) je["ks"] = zarc::stoch::distribution_check(t, w, mc);
        results[label] = std::move(je);
    }
    results["variance_exact"] = zarc::stoch::variance_exact(w);
    results["variance_asymptotic"] = zarc::stoch::variance_asymptotic(w);
    results["third_moment_sum"] = zarc::stoch::third_moment_sum(w);
    results["third_moment_bound"] = zarc::stoch::third_moment_bound(w);
    results["lyapunov_ratio"] = zarc::stoch::lyapunov_ratio(w);
    if (f.with_phi2) {
        zarc::stoch::Phi2Options popt;
        popt.zero_series = f.zero_series;
        const zarc::stoch::Phi2Estimate p2 = zarc::stoch::phi2_mc(w, mc, popt);
        Json jp;
        jp["mean"] = p2.estimate.mean;
        jp["variance"] = p2.estimate.variance;
        jp["std_error"] = p2.estimate.std_error;
        jp["count"] = p2.estimate.count;
        jp["quadrature_failures"] = p2.quadrature_failures;
        results["phi2"] = std::move(jp);
    }
    emit(make_record(f.cfg, std::move(results)), f.cfg);
    return 0;
}

int run_predict(CommonFlags& f) {
    const EvalWindow w = EvalWindow::make(f.cfg.T, f.cfg.U);
    const zarc::special::PredictionReport rep = zarc::special::make_prediction(w);
    Json results;
    results["P"] = w.P();
    results["beta"] = rep.beta;
    results["f_closed"] = rep.f_closed;
    results["f_quad"] = rep.f_quad;
    results["e_inf_point"] = rep.e_inf_point;
    results["e_inf_arc"] = rep.e_inf_arc;
    results["theorem_asymptotic"] = rep.theorem_asymptotic;
    emit(make_record(f.cfg, std::move(results)), f.cfg);
    return 0;
}

int run_compare(CommonFlags& f) {
    const EvalWindow w = EvalWindow::make(f.cfg.T, f.cfg.U);
    zarc::riemann::ArcLengthOptions aopt;
    aopt.quad_tol_factor = f.cfg.quad_tol;
    aopt.zero_series = f.zero_series;
    const zarc::riemann::ArcLengthReport rep = zarc::riemann::arc_length_numeric(w, aopt);

    zarc::stoch::McConfig mc;
    mc.sample_count = f.cfg.samples;
    mc.master_seed = f.cfg.seed;
    mc.threads = f.cfg.threads;
    zarc::stoch::Phi2Options popt;
    popt.zero_series = f.zero_series;
    const zarc::stoch::Phi2Estimate p2 = zarc::stoch::phi2_mc(w, mc, popt);

    const double e_arc = zarc::special::e_inf_phi2(w);
    const double asym = zarc::special::theorem_asymptotic(w.T(), w.U());
    const double theta_proxy = rep.residual / w.U();

    Json results;
    results["l_numeric"] = rep.l_numeric;
    results["extrema_sum"] = rep.extrema_sum;
    results["residual"] = rep.residual;
    results["theta_proxy"] = theta_proxy;
    results["theta_proxy_in_unit_interval"] = theta_proxy > 0.0 && theta_proxy < 1.0;
    results["phi2_mc_mean"] = p2.estimate.mean;
    results["phi2_mc_std_error"] = p2.estimate.std_error;
    results["e_inf_phi2"] = e_arc;
    results["theorem_asymptotic"] = asym;
    results["mc_z_score"] =
        p2.estimate.std_error > 0.0 ? (p2.estimate.mean - e_arc) / p2.estimate.std_error : 0.0;
    Json diag;
    diag["warnings"] = Json::array();
    if (rep.critical_points.degeneracy_warning)
        diag["warnings"].push_back("near-degenerate critical points after rescans");
    diag["quadrature"] = quad_diag(rep.quad);
    diag["phi2_quadrature_failures"] = p2.quadrature_failures;
    emit(make_record(f.cfg, std::move(results), std::move(diag)), f.cfg);
    return 0;
}

int run_verify(CommonFlags& f) {
    zarc::cli::VerifyOptions vopt;
    vopt.seed = f.cfg.seed;
    vopt.threads = f.cfg.threads > 0 ? f.cfg.threads : 4;
    vopt.corrupt_bessel = f.corrupt_bessel;
    const zarc::cli::VerifyReport report = zarc::cli::verify_all(vopt);
    std::cout << zarc::cli::format_table(report);
    if (!f.cfg.out_path.empty()) {
        Json results;
        results["payload"] = Json::parse(report.numeric_payload);
        Json crits = Json::array();
        for (const auto& c : report.criteria) {
            Json jc;
            jc["id"] = c.id;
            jc["name"] = c.name;
            jc["passed"] = c.passed;
            jc["detail"] = c.detail;
            crits.push_back(std::move(jc));
        }
        results["criteria"] = std::move(crits);
        emit(make_record(f.cfg, std::move(results)), f.cfg);
    }
    return report.all_passed ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zeta-arclen: arc length of the Hardy Z-curve and its random-phase model"};
    app.require_subcommand(1);

    CommonFlags f;
    f.cfg.cache_dir = default_cache_dir();

    CLI::App* eval = app.add_subcommand("eval", "tabulate theta, Z, Z1 on a grid");
    add_window_flags(eval, f.cfg);
    eval->add_option("--grid", f.cfg.grid, "number of grid points");
    add_output_flags(eval, f);
    eval->callback([&] { f.cfg.command = "eval"; });

    CLI::App* arc = app.add_subcommand("arclength", "arc length and extrema sum");
    add_window_flags(arc, f.cfg);
    arc->add_option("--quad-tol", f.cfg.quad_tol, "quadrature tolerance factor (abs tol = factor*U)");
    arc->add_flag("--test-zero-series", f.zero_series,
                  "test hook: force the series to zero (integrand becomes 1)")
        ->group(""); // hidden
    add_output_flags(arc, f);
    arc->callback([&] { f.cfg.command = "arclength"; });

    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo moments and diagnostics");
    add_window_flags(sim, f.cfg);
    add_mc_flags(sim, f.cfg);
    sim->add_flag("--with-phi2", f.with_phi2, "also run the arc-length Monte Carlo");
    sim->add_flag("--test-zero-series", f.zero_series, "test hook")->group("");
    add_output_flags(sim, f);
    sim->callback([&] { f.cfg.command = "simulate"; });

    CLI::App* pred = app.add_subcommand("predict", "closed-form expectation chain");
    add_window_flags(pred, f.cfg);
    add_output_flags(pred, f);
    pred->callback([&] { f.cfg.command = "predict"; });

    CLI::App* cmp = app.add_subcommand("compare", "numeric / MC / closed form side by side");
    add_window_flags(cmp, f.cfg);
    add_mc_flags(cmp, f.cfg);
    cmp->add_option("--quad-tol", f.cfg.quad_tol, "quadrature tolerance factor");
    cmp->add_flag("--test-zero-series", f.zero_series, "test hook")->group("");
    add_output_flags(cmp, f);
    cmp->callback([&] { f.cfg.command = "compare"; });

    CLI::App* ver = app.add_subcommand("verify", "run the verification suite");
    ver->add_option("--seed", f.cfg.seed, "master seed");
    ver->add_option("--threads", f.cfg.threads, "thread count for the determinism check");
    ver->add_flag("--test-corrupt-bessel", f.corrupt_bessel,
                  "test hook: perturb a Bessel constant; the suite must fail")
        ->group("");
    ver->add_option("--out", f.cfg.out_path, "also write the full JSON report here");
    ver->callback([&] { f.cfg.command = "verify"; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2; // any parse/validation problem is exit 2
    }

    // tables default to CSV, structured records to JSON
    if (f.format_str.empty()) f.format_str = (*eval) ? "csv" : "json";
    f.cfg.format = f.format_str == "csv" ? OutputFormat::csv : OutputFormat::json;

    try {
        if (f.cfg.format == OutputFormat::csv && !*eval)
            throw zarc::ValidationError(
                "--format csv supports tabular output (eval) only; records are JSON");
        if (*eval) return run_eval(f);
        if (*arc) return run_arclength(f);
        if (*sim) return run_simulate(f);
        if (*pred) return run_predict(f);
        if (*cmp) return run_compare(f);
        if (*ver) return run_verify(f);
    } catch (const zarc::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const zarc::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const zarc::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
