#include "zarc/cache.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "zarc/errors.hpp"
#include "zarc/record.hpp"

namespace zarc::cli {

namespace {

Json key_json(const CacheKey& key) {
    Json j;
    j["T"] = key.T;
    j["U"] = key.U;
    j["step_factor"] = key.step_factor;
    j["bisect_width"] = key.bisect_width;
    j["code_version"] = key.code_version;
    return j;
}

Json scan_json(const riemann::CriticalPointScan& scan) {
    Json pts = Json::array();
    for (const riemann::CriticalPoint& p : scan.points) {
        Json jp;
        jp["t"] = p.location;
        jp["kind"] = p.kind == riemann::CriticalKind::zero_of_z ? "zero" : "extremum";
        jp["z"] = p.value;
        pts.push_back(std::move(jp));
    }
    Json j;
    j["points"] = std::move(pts);
    j["degeneracy_warning"] = scan.degeneracy_warning;
    j["rescans"] = scan.rescans;
    j["scan_step"] = scan.scan_step;
    return j;
}

riemann::CriticalPointScan scan_from_json(const Json& j) {
    riemann::CriticalPointScan scan;
    for (const Json& jp : j.at("points")) {
        riemann::CriticalPoint p;
        p.location = jp.at("t").get<double>();
        p.kind = jp.at("kind").get<std::string>() == "zero" ? riemann::CriticalKind::zero_of_z
                                                            : riemann::CriticalKind::extremum_of_z;
        p.value = jp.at("z").get<double>();
        scan.points.push_back(p);
    }
    scan.degeneracy_warning = j.at("degeneracy_warning").get<bool>();
    scan.rescans = j.at("rescans").get<int>();
    scan.scan_step = j.at("scan_step").get<double>();
    return scan;
}

} // namespace

CriticalPointCache::CriticalPointCache(std::string directory) {
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw IoError("cannot create cache directory: " + directory + " (" + ec.message() + ")");
    file_ = (std::filesystem::path(directory) / "critical_points.jsonl").string();
}

std::optional<riemann::CriticalPointScan> CriticalPointCache::lookup(const CacheKey& key) const {
    std::ifstream in(file_);
    if (!in) return std::nullopt; // no cache yet
    const Json want = key_json(key);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Json j = Json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("key")) continue;
        if (j["key"] == want) return scan_from_json(j.at("scan"));
    }
    return std::nullopt;
}

void CriticalPointCache::append(const CacheKey& key, const riemann::CriticalPointScan& scan) const {
    std::ofstream out(file_, std::ios::app | std::ios::binary);
    if (!out) throw IoError("cannot open cache file for append: " + file_);
    Json j;
    j["key"] = key_json(key);
    j["scan"] = scan_json(scan);
    out << j.dump() << "\n";
    if (!out) throw IoError("cache append failed: " + file_);
}

riemann::CriticalPointScan CriticalPointCache::get(const EvalWindow& window,
                                                   const riemann::ScanOptions& options) const {
    const CacheKey key{window.T(), window.U(), options.step_factor, options.bisect_width,
                       kCodeVersion};
    if (auto hit = lookup(key)) return *hit;
    riemann::CriticalPointScan scan = riemann::locate_critical_points(window, options);
    append(key, scan);
    return scan;
}

} // namespace zarc::cli
