#pragma once

// Result records and their serialization. Records are JSON objects with a
// schema_version field, a config echo, provenance (seed, code version,
// timestamp) and named numeric results; tables go to CSV with RFC-4180
// quoting. All numbers render at full precision so a written record parses
// back bit-exactly.

#include <string>
#include <vector>

#include <json.hpp>

namespace zarc::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kCodeVersion = "0.1.0";

using Json = nlohmann::ordered_json;

enum class OutputFormat { csv, json };

struct RunConfig {
    std::string command;
    double T = 0.0;
    double U = 0.0;
    std::int64_t samples = 10000;
    std::uint64_t seed = 1;
    double quad_tol = 1e-6;
    std::int64_t grid = 100;
    int threads = 0;
    OutputFormat format = OutputFormat::json;
    std::string out_path;  // empty = stdout
    std::string cache_dir; // empty = no cache
};

// Full-precision decimal rendering (17 significant digits round-trips any
// double through text exactly).
std::string format_double(double v);

// RFC-4180 field quoting: quotes only when the field contains a comma,
// quote, or newline.
std::string csv_field(const std::string& raw);

struct ResultRecord {
    Json body; // includes schema_version, command, config, provenance, results, diagnostics

    std::string to_json_string() const;
    // Serialization with provenance.timestamp removed; reruns with the same
    // seed must produce identical bytes.
    std::string to_json_string_no_timestamp() const;
};

ResultRecord make_record(const RunConfig& config, Json results, Json diagnostics = Json::object());

// Writes to config.out_path or stdout; throws IoError with path context.
void emit(const ResultRecord& record, const RunConfig& config, const std::string& csv_payload = "");

} // namespace zarc::cli
