#pragma once
#include <string>
#include <vector>

#include <json.hpp>

namespace orbital {

using Json = nlohmann::ordered_json;

// Self-describing experiment output: line-delimited records plus a flat
// table.  Every record carries the resolved config and seed that produced
// it, and reruns with the same config are byte-identical.
struct ResultRecord {
    static constexpr int schema_version = 1;

    Json meta;                  // schema version + config echo
    std::vector<Json> points;   // one record per data point
    Json summary;

    std::vector<std::string> csv_header;
    std::vector<std::vector<std::string>> csv_rows;
};

// Deterministic decimal formatting for the csv table.
std::string format_number(double v);

// Writes <prefix>.jsonl (meta, points, summary; one object per line) and
// <prefix>.csv (fixed header).  IO failures are reported with the path.
void write_results(const ResultRecord& record, const std::string& prefix);

std::string render_summary(const ResultRecord& record);

}  // namespace orbital
