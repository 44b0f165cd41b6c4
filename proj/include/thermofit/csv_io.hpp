#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "thermofit/time_series.hpp"

namespace thermofit {

// Series files: header `time_s,temp_c`, then one `t,y` row per sample.
// Overlay files: header `time_s,raw_c,smoothed_c,fitted_c`.
// Values are written in shortest round-trip form so they read back bit-exact.

/// Throws FileError when the file cannot be opened, CsvError (with line number) otherwise.
TimeSeries parse_csv(const std::filesystem::path& path);
TimeSeries parse_csv(std::istream& in);

void write_csv(const std::filesystem::path& path, const TimeSeries& ts);
void write_csv(std::ostream& out, const TimeSeries& ts);

struct OverlaySeries {
    std::vector<double> t;
    std::vector<double> raw;
    std::vector<double> smoothed;
    std::vector<double> fitted;
};

void write_overlay_csv(const std::filesystem::path& path, const OverlaySeries& overlay);
OverlaySeries parse_overlay_csv(const std::filesystem::path& path);

}  // namespace thermofit
