#include "zarc/record.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "zarc/errors.hpp"

namespace zarc::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string csv_field(const std::string& raw) {
    if (raw.find_first_of(",\"\n\r") == std::string::npos) return raw;
    std::string out = "\"";
    for (char c : raw) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

namespace {

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace

std::string ResultRecord::to_json_string() const { return body.dump(2); }

std::string ResultRecord::to_json_string_no_timestamp() const {
    Json copy = body;
    if (copy.contains("provenance")) copy["provenance"].erase("timestamp");
    return copy.dump(2);
}

ResultRecord make_record(const RunConfig& config, Json results, Json diagnostics) {
    ResultRecord rec;
    rec.body["schema_version"] = kSchemaVersion;
    rec.body["command"] = config.command;
    Json cfg;
    cfg["T"] = config.T;
    cfg["U"] = config.U;
    cfg["samples"] = config.samples;
    cfg["seed"] = config.seed;
    cfg["quad_tol"] = config.quad_tol;
    cfg["grid"] = config.grid;
    cfg["threads"] = config.threads;
    cfg["format"] = config.format == OutputFormat::csv ? "csv" : "json";
    rec.body["config"] = std::move(cfg);
    Json prov;
    prov["seed"] = config.seed;
    prov["code_version"] = kCodeVersion;
    prov["timestamp"] = iso_timestamp();
    rec.body["provenance"] = std::move(prov);
    rec.body["results"] = std::move(results);
    rec.body["diagnostics"] = std::move(diagnostics);
    return rec;
}

void emit(const ResultRecord& record, const RunConfig& config, const std::string& csv_payload) {
    const std::string payload =
        (config.format == OutputFormat::csv && !csv_payload.empty()) ? csv_payload
                                                                     : record.to_json_string() + "\n";
    if (config.out_path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + config.out_path);
    out << payload;
    if (!out) throw IoError("write failed: " + config.out_path);
}

} // namespace zarc::cli
