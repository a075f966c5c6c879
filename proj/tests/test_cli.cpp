#include <doctest.h>

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "zarc/riemann.hpp"
#include "zarc/window.hpp"

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

// popen-based driver; stderr folded into stdout
RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(ZARC_CLI_PATH) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult r{-1, {}};
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), buf.size(), pipe)) r.out += buf.data();
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

} // namespace

TEST_CASE("eval: one-point grid produces one data row") {
    const RunResult r = run_cli("eval --T 1000 --U 1 --grid 1");
    CHECK(r.exit_code == 0);
    std::istringstream in(r.out);
    std::string header, row, extra;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "t,theta,z,z1");
    CHECK_FALSE(row.empty());
    CHECK_FALSE(std::getline(in, extra));

    // re-read bit-exactly against in-process values
    double t, th, z, z1;
    REQUIRE(std::sscanf(row.c_str(), "%lf,%lf,%lf,%lf", &t, &th, &z, &z1) == 4);
    const zarc::EvalWindow w = zarc::EvalWindow::make(1000.0, 1.0);
    const zarc::riemann::WindowEvaluator eval(w);
    CHECK(t == 1000.0);
    CHECK(th == zarc::riemann::theta(1000.0));
    CHECK(z == eval.z_main(1000.0));
    CHECK(z1 == eval.z1(1000.0));
}

TEST_CASE("eval: json output re-reads bit-exactly") {
    const RunResult r = run_cli("eval --T 1000 --U 2 --grid 3 --format json");
    CHECK(r.exit_code == 0);
    const auto body = nlohmann::json::parse(r.out);
    CHECK(body.at("schema_version").get<int>() == 1);
    const auto& rows = body.at("results").at("table");
    REQUIRE(rows.size() == 3);
    const zarc::EvalWindow w = zarc::EvalWindow::make(1000.0, 2.0);
    const zarc::riemann::WindowEvaluator eval(w);
    for (const auto& row : rows) {
        const double t = row.at("t").get<double>();
        CHECK(row.at("z").get<double>() == eval.z_main(t));
        CHECK(row.at("z1").get<double>() == eval.z1(t));
        CHECK(row.at("theta").get<double>() == zarc::riemann::theta(t));
    }
}

TEST_CASE("eval: a 1e4-point grid at T = 1e6 finishes inside the budget") {
    const auto start = std::chrono::steady_clock::now();
    const RunResult r = run_cli("eval --T 1000000 --U 50 --grid 10000 --out /dev/null");
    const double sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(r.exit_code == 0);
    CHECK(sec < 5.0);
}

TEST_CASE("validation failures name the violated precondition and exit 2") {
    CHECK(run_cli("eval --T 1000 --U 0 --grid 1").exit_code == 2);
    CHECK(run_cli("arclength --T 50 --U 1").exit_code == 2);
    CHECK(run_cli("eval --T 1000 --U 1 --no-such-flag 3").exit_code == 2);
    CHECK(run_cli("predict --T 1000 --U 1 --format csv").exit_code == 2);
    CHECK(run_cli("simulate --T 1000 --U 1 --samples 1").exit_code == 2);

    const RunResult r = run_cli("eval --T 1000 --U 2000 --grid 1");
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("sqrt(T)") != std::string::npos); // names the precondition
}

TEST_CASE("arclength: zero-series hook degenerates to the window length") {
    const RunResult r = run_cli("arclength --T 1000000 --U 5 --test-zero-series");
    CHECK(r.exit_code == 0);
    const auto body = nlohmann::json::parse(r.out);
    CHECK(body.at("results").at("l_numeric").get<double>() == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(body.at("results").at("extrema_sum").get<double>() == 0.0);
}

TEST_CASE("reruns with one seed differ only in the timestamp") {
    const std::string args = "simulate --T 251327.412287183449 --U 1 --samples 2000 --seed 9";
    auto strip = [](const std::string& s) {
        auto j = nlohmann::ordered_json::parse(s);
        j.at("provenance").erase("timestamp");
        return j.dump(2);
    };
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(strip(a.out) == strip(b.out));

    // thread count must not leak into the numbers either
    const RunResult c = run_cli(args + " --threads 4");
    auto numbers_only = [](const std::string& s) {
        auto j = nlohmann::ordered_json::parse(s);
        return j.at("results").dump(2);
    };
    CHECK(numbers_only(a.out) == numbers_only(c.out));
}

TEST_CASE("compare emits the full side-by-side record") {
    const RunResult r =
        run_cli("compare --T 1000000 --U 1 --samples 50 --seed 2 --quad-tol 1e-6");
    CHECK(r.exit_code == 0);
    const auto body = nlohmann::json::parse(r.out);
    const auto& res = body.at("results");
    for (const char* key : {"l_numeric", "extrema_sum", "residual", "phi2_mc_mean",
                            "e_inf_phi2", "theorem_asymptotic", "theta_proxy"}) {
        REQUIRE(res.contains(key));
        CHECK(std::isfinite(res.at(key).get<double>()));
    }
}

TEST_CASE("cache directory reuse is transparent") {
    const auto dir = std::filesystem::temp_directory_path() / "zarc_cli_cache_test";
    std::filesystem::remove_all(dir);
    const std::string args = "arclength --T 1000000 --U 2 --cache " + dir.string();
    const RunResult a = run_cli(args);
    const RunResult b = run_cli(args); // second run hits the cache
    CHECK(a.exit_code == 0);
    CHECK(b.exit_code == 0);
    auto strip = [](const std::string& s) {
        auto j = nlohmann::ordered_json::parse(s);
        j.at("provenance").erase("timestamp");
        return j.dump(2);
    };
    CHECK(strip(a.out) == strip(b.out));
    CHECK(std::filesystem::exists(dir / "critical_points.jsonl"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("verify is sensitive to a corrupted bessel constant") {
    // criterion 1 must flip from PASS to FAIL under the hook
    const RunResult good = run_cli("verify --seed 1 --threads 2");
    CHECK(good.out.find("criterion 1 [bessel closed form vs quadrature]: PASS") !=
          std::string::npos);
    const RunResult bad = run_cli("verify --seed 1 --threads 2 --test-corrupt-bessel");
    CHECK(bad.exit_code != 0);
    CHECK(bad.out.find("criterion 1 [bessel closed form vs quadrature]: FAIL") !=
          std::string::npos);
}
