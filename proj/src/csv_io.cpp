#include "thermofit/csv_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <string_view>

#include "thermofit/error.hpp"

namespace thermofit {

namespace {

constexpr double kSpacingTolerance = 1e-6;

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return out;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

double parse_number(std::string_view field, std::size_t line) {
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || end != field.data() + field.size() || !std::isfinite(value)) {
        throw CsvError(line, "'" + std::string(field) + "' is not a finite decimal number");
    }
    return value;
}

// Shortest representation that reads back to the same double.
std::string format_number(double v) {
    char buf[32];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, end};
}

// Reads header + numeric rows of exactly `columns` fields; returns rows column-major
// together with each row's source line number.
struct Table {
    std::vector<std::vector<double>> columns;
    std::vector<std::size_t> lines;
};

Table read_table(std::istream& in, const std::vector<std::string_view>& header) {
    Table table;
    table.columns.resize(header.size());
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = trim(raw);
        if (line.empty()) continue;
        const auto fields = split_fields(line);

        if (!have_header) {
            bool ok = fields.size() == header.size();
            for (std::size_t i = 0; ok && i < fields.size(); ++i) {
                ok = lowercase(fields[i]) == header[i];
            }
            if (!ok) {
                std::string expected;
                for (auto h : header) expected += (expected.empty() ? "" : ",") + std::string(h);
                throw CsvError(line_no, "expected header '" + expected + "', got '" +
                                            std::string(line) + "'");
            }
            have_header = true;
            continue;
        }

        if (fields.size() != header.size()) {
            throw CsvError(line_no, "expected " + std::to_string(header.size()) +
                                        " fields, got " + std::to_string(fields.size()));
        }
        for (std::size_t i = 0; i < fields.size(); ++i) {
            table.columns[i].push_back(parse_number(fields[i], line_no));
        }
        table.lines.push_back(line_no);
    }
    if (!have_header) throw CsvError(0, "file is empty (no header)");
    return table;
}

// Strict monotonicity and uniform spacing, reported against source lines.
void check_time_column(const std::vector<double>& t, const std::vector<std::size_t>& lines) {
    if (t.size() < 2) {
        throw CsvError(0, "need at least 2 data rows, got " + std::to_string(t.size()));
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) {
            throw CsvError(lines[i], "time " + format_number(t[i]) +
                                         " does not increase past the previous row (" +
                                         format_number(t[i - 1]) + ")");
        }
    }
    const double spacing = median_spacing(t);
    for (std::size_t i = 1; i < t.size(); ++i) {
        const double dt = t[i] - t[i - 1];
        if (std::abs(dt - spacing) > kSpacingTolerance * spacing) {
            throw CsvError(lines[i], "non-uniform sample spacing " + format_number(dt) +
                                         " (expected " + format_number(spacing) + ")");
        }
    }
}

std::ifstream open_for_read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw FileError("cannot open '" + path.string() + "' for writing");
    return out;
}

}  // namespace

TimeSeries parse_csv(std::istream& in) {
    Table table = read_table(in, {"time_s", "temp_c"});
    check_time_column(table.columns[0], table.lines);
    return TimeSeries::from_samples(std::move(table.columns[0]), std::move(table.columns[1]));
}

TimeSeries parse_csv(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    return parse_csv(in);
}

void write_csv(std::ostream& out, const TimeSeries& ts) {
    out << "time_s,temp_c\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
        out << format_number(ts.t()[i]) << ',' << format_number(ts.y()[i]) << '\n';
    }
}

void write_csv(const std::filesystem::path& path, const TimeSeries& ts) {
    auto out = open_for_write(path);
    write_csv(out, ts);
    if (!out) throw FileError("failed writing '" + path.string() + "'");
}

void write_overlay_csv(const std::filesystem::path& path, const OverlaySeries& overlay) {
    const std::size_t n = overlay.t.size();
    if (overlay.raw.size() != n || overlay.smoothed.size() != n || overlay.fitted.size() != n) {
        throw InvalidArgument("overlay columns differ in length");
    }
    auto out = open_for_write(path);
    out << "time_s,raw_c,smoothed_c,fitted_c\n";
    for (std::size_t i = 0; i < n; ++i) {
        out << format_number(overlay.t[i]) << ',' << format_number(overlay.raw[i]) << ','
            << format_number(overlay.smoothed[i]) << ',' << format_number(overlay.fitted[i])
            << '\n';
    }
    if (!out) throw FileError("failed writing '" + path.string() + "'");
}

OverlaySeries parse_overlay_csv(const std::filesystem::path& path) {
    auto in = open_for_read(path);
    Table table = read_table(in, {"time_s", "raw_c", "smoothed_c", "fitted_c"});
    check_time_column(table.columns[0], table.lines);
    return {std::move(table.columns[0]), std::move(table.columns[1]), std::move(table.columns[2]),
            std::move(table.columns[3])};
}

}  // namespace thermofit
