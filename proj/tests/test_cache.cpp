#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>

#include "zarc/cache.hpp"
#include "zarc/record.hpp"
#include "zarc/riemann.hpp"
#include "zarc/window.hpp"

using zarc::EvalWindow;
using zarc::cli::CacheKey;
using zarc::cli::CriticalPointCache;

namespace {

std::string serialize(const zarc::riemann::CriticalPointScan& s) {
    std::string out;
    for (const auto& p : s.points) {
        out += zarc::cli::format_double(p.location);
        out += p.kind == zarc::riemann::CriticalKind::zero_of_z ? "z" : "x";
        out += zarc::cli::format_double(p.value);
        out += ";";
    }
    return out;
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("zarc_cache_test_" + std::to_string(::getpid()));
        std::filesystem::remove_all(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("cache round trip is byte-identical to a fresh computation") {
    TempDir tmp;
    const CriticalPointCache cache(tmp.path.string());
    const EvalWindow w = EvalWindow::make(1e6, 3.0);
    const zarc::riemann::ScanOptions opts;

    const auto fresh = zarc::riemann::locate_critical_points(w, opts);
    const auto first = cache.get(w, opts);  // miss: computes and appends
    const auto second = cache.get(w, opts); // hit: parsed back from disk

    CHECK(serialize(first) == serialize(fresh));
    CHECK(serialize(second) == serialize(fresh));

    // exactly one line was appended
    std::ifstream in(cache.path());
    std::string line;
    int lines = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 1);
}

TEST_CASE("cache entries are invalidated by the code-version stamp") {
    TempDir tmp;
    const CriticalPointCache cache(tmp.path.string());
    const EvalWindow w = EvalWindow::make(1e6, 1.0);
    const zarc::riemann::ScanOptions opts;
    (void)cache.get(w, opts);

    CacheKey stale{w.T(), w.U(), opts.step_factor, opts.bisect_width, "older-version"};
    CHECK_FALSE(cache.lookup(stale).has_value());
    CacheKey current{w.T(), w.U(), opts.step_factor, opts.bisect_width, zarc::cli::kCodeVersion};
    CHECK(cache.lookup(current).has_value());
}

TEST_CASE("distinct scan parameters get distinct entries") {
    TempDir tmp;
    const CriticalPointCache cache(tmp.path.string());
    const EvalWindow w = EvalWindow::make(1e6, 1.0);
    zarc::riemann::ScanOptions coarse;
    zarc::riemann::ScanOptions fine;
    fine.step_factor = 0.25;
    (void)cache.get(w, coarse);
    (void)cache.get(w, fine);

    std::ifstream in(cache.path());
    std::string line;
    int lines = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++lines;
    CHECK(lines == 2);
}
