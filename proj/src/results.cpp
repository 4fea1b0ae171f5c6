#include "orbital/results.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace orbital {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_results(const ResultRecord& record, const std::string& prefix) {
    {
        std::ofstream out(prefix + ".jsonl", std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + prefix + ".jsonl");
        out << record.meta.dump() << "\n";
        for (const auto& p : record.points) out << p.dump() << "\n";
        out << record.summary.dump() << "\n";
        if (!out) throw std::runtime_error("write failed: " + prefix + ".jsonl");
    }
    {
        std::ofstream out(prefix + ".csv", std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open for writing: " + prefix + ".csv");
        for (std::size_t i = 0; i < record.csv_header.size(); ++i)
            out << (i ? "," : "") << record.csv_header[i];
        out << "\n";
        for (const auto& row : record.csv_rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
            out << "\n";
        }
        if (!out) throw std::runtime_error("write failed: " + prefix + ".csv");
    }
}

std::string render_summary(const ResultRecord& record) {
    return record.summary.dump(2);
}

}  // namespace orbital
