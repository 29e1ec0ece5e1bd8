#pragma once

#include "confrec/interval.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace confrec {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kNormalization = "measures normalized nu = mu/mu(X)";

// %.17g, round-trips every double.
std::string fmt(double x);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row);
    std::size_t rows() const { return rows_.size(); }
    const std::vector<std::string>& header() const { return header_; }

    // "# <normalization>" line, header row, data rows.
    void write(std::ostream& out) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

nlohmann::json to_json(Interval x);

// Starts a JSON report with schema_version, command and normalization fields.
nlohmann::json report_header(const std::string& command);

void write_text_file(const std::string& path, const std::string& text);

} // namespace confrec
