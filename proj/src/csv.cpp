#include "cfmm/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "cfmm/error.hpp"

namespace cfmm {

namespace {

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) {
        const auto b = cur.find_first_not_of(" \t\r");
        const auto e = cur.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? std::string{} : cur.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') {
        out.emplace_back();
    }
    return out;
}

bool blank(const std::string& line)
{
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

double CsvRow::number(std::size_t i) const
{
    const std::string& s = fields.at(i);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ParseError(path, line, "expected a number, got '" + s + "'");
    }
    return v;
}

CsvTable read_csv(const std::filesystem::path& path, const std::vector<std::string>& header)
{
    std::ifstream in(path);
    if (!in) {
        throw ParseError(path.string(), 0, "cannot open file");
    }
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    CsvTable table;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) {
            continue;
        }
        auto fields = split(line);
        if (!have_header) {
            if (fields != header) {
                std::string expected;
                for (const auto& h : header) {
                    expected += (expected.empty() ? "" : ",") + h;
                }
                throw ParseError(path.string(), lineno, "expected header '" + expected + "'");
            }
            have_header = true;
            continue;
        }
        if (fields.size() != header.size()) {
            throw ParseError(path.string(), lineno,
                             "expected " + std::to_string(header.size()) + " fields, got " +
                                 std::to_string(fields.size()));
        }
        table.rows.push_back({path.string(), lineno, std::move(fields)});
    }
    if (!have_header) {
        throw ParseError(path.string(), lineno, "missing header");
    }
    return table;
}

std::string format_double(double v)
{
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

}  // namespace cfmm
