#include "sgfs_cli/report.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <ratio>

#ifndef SGFS_VERSION
#define SGFS_VERSION "unknown"
#endif

namespace sgfs::cli {

void TextTable::print(std::ostream& out) const {
    std::vector<std::size_t> width(headers.size(), 0);
    for (std::size_t c = 0; c < headers.size(); ++c) width[c] = headers[c].size();
    for (const auto& row : rows)
        for (std::size_t c = 0; c < row.size() && c < width.size(); ++c) width[c] = std::max(width[c], row[c].size());

    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t c = 0; c < width.size(); ++c) {
            const std::string cell = c < cells.size() ? cells[c] : "";
            if (c) out << "  ";
            // First column left aligned, numbers right aligned.
            if (c == 0)
                out << cell << std::string(width[c] - cell.size(), ' ');
            else
                out << std::string(width[c] - cell.size(), ' ') << cell;
        }
        out << '\n';
    };

    if (!title.empty()) out << title << '\n';
    line(headers);
    std::size_t total = 0;
    for (auto w : width) total += w;
    out << std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') << '\n';
    for (const auto& row : rows) line(row);
    out << '\n';
}

void Report::add_row(Json row) {
    if (row.contains("converged") && !row["converged"].get<bool>()) {
        std::string label = row.value("method", std::string("run"));
        if (row.contains("p")) label += " p=" + row["p"].dump();
        if (row.contains("rep")) label += " rep=" + row["rep"].dump();
        failures.push_back(label);
    }
    rows.push_back(std::move(row));
}

void Report::write(std::ostream& out, OutputFormat format) const {
    if (format != OutputFormat::jsonl) {
        for (const auto& t : tables) t.print(out);
        if (!failures.empty()) {
            out << "not converged (" << failures.size() << "):\n";
            for (const auto& f : failures) out << "  " << f << '\n';
            out << '\n';
        }
    }
    if (format != OutputFormat::table) {
        out << header.dump() << '\n';
        for (const auto& r : rows) out << r.dump() << '\n';
        for (const auto& s : summaries) out << s.dump() << '\n';
    }
}

Json make_header(const std::string& command, std::uint64_t seed, Json config) {
    using Clock = std::chrono::steady_clock;
    Json h;
    h["type"] = "header";
    h["command"] = command;
    h["version"] = SGFS_VERSION;
    h["seed"] = seed;
    h["clock"] = "steady_clock";
    h["clock_resolution_seconds"] = static_cast<double>(Clock::period::num) / static_cast<double>(Clock::period::den);
    h["config"] = std::move(config);
    return h;
}

std::string format_number(double value, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
    return buf;
}

}  // namespace sgfs::cli
