#include "confrec/report.hpp"

#include "confrec/errors.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

namespace confrec {

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void CsvTable::add(std::vector<std::string> row)
{
    if (row.size() != header_.size()) throw std::logic_error("CSV row width does not match the header");
    rows_.push_back(std::move(row));
}

void CsvTable::write(std::ostream& out) const
{
    auto line = [&out](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << '\n';
    };
    out << "# " << kNormalization << '\n';
    line(header_);
    for (const auto& r : rows_) line(r);
}

nlohmann::json to_json(Interval x) { return nlohmann::json::array({x.lo, x.hi}); }

nlohmann::json report_header(const std::string& command)
{
    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = command;
    j["normalization"] = kNormalization;
    return j;
}

void write_text_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot write " + path);
    out << text;
    if (!out) throw ValidationError("failed writing " + path);
}

} // namespace confrec
