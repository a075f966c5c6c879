#pragma once

// Append-only JSON-lines cache of critical-point scans. Entries are keyed by
// the exact window and scan parameters plus the code version, so any change
// to the scanner invalidates old lines. Lookups return byte-identical data
// to a fresh computation (locations and values round-trip exactly).

#include <optional>
#include <string>

#include "zarc/riemann.hpp"
#include "zarc/window.hpp"

namespace zarc::cli {

struct CacheKey {
    double T;
    double U;
    double step_factor;
    double bisect_width;
    std::string code_version;
};

class CriticalPointCache {
public:
    explicit CriticalPointCache(std::string directory);

    std::optional<riemann::CriticalPointScan> lookup(const CacheKey& key) const;
    void append(const CacheKey& key, const riemann::CriticalPointScan& scan) const;

    // Fetch-or-compute against this cache.
    riemann::CriticalPointScan get(const EvalWindow& window, const riemann::ScanOptions& options) const;

    const std::string& path() const { return file_; }

private:
    std::string file_;
};

} // namespace zarc::cli
