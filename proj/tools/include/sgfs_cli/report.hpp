#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace sgfs::cli {

using Json = nlohmann::ordered_json;

/// A plain text table for the human-readable part of a report.
struct TextTable {
    std::string title;
    std::vector<std::string> headers;
    std::vector<std::vector<std::string>> rows;

    void print(std::ostream& out) const;
};

enum class OutputFormat { table, jsonl, both };

/// Result of one CLI command: a header record (command, configuration,
/// seed, version, clock resolution), one record per run, summary records,
/// and the text tables shown to the user. `failures` lists the runs that did
/// not converge; the exit code is 0 iff it is empty.
struct Report {
    Json header;
    std::vector<Json> rows;
    std::vector<Json> summaries;
    std::vector<TextTable> tables;
    std::vector<std::string> failures;

    void add_row(Json row);
    void write(std::ostream& out, OutputFormat format) const;
    int exit_code() const { return failures.empty() ? 0 : 1; }
};

/// Header record shared by every command.
Json make_header(const std::string& command, std::uint64_t seed, Json config);

std::string format_number(double value, int precision = 6);

}  // namespace sgfs::cli
