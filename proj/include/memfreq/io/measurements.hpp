#ifndef MEMFREQ_IO_MEASUREMENTS_HPP
#define MEMFREQ_IO_MEASUREMENTS_HPP

// Measurement CSV:
//
//   f_mem_ghz,f_com_ghz,latency_s      (or power_w)
//   1.6,0.9984,0.1589
//
// The value column name decides the kind. Blank lines are skipped.

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "../errors.hpp"
#include "../fitting.hpp"
#include "table.hpp"

namespace memfreq::io {

enum class MeasurementKind { Latency, Power };

struct MeasurementFile {
    MeasurementKind kind = MeasurementKind::Latency;
    std::vector<LatencySample> latency; ///< filled when kind == Latency
    std::vector<PowerSample> power;     ///< filled when kind == Power

    std::size_t size() const noexcept { return kind == MeasurementKind::Latency ? latency.size() : power.size(); }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline double parse_double(std::string_view tok, std::size_t line, const std::string& field) {
    double v = 0.0;
    const auto* first = tok.data();
    const auto* last = tok.data() + tok.size();
    if (!tok.empty() && *first == '+') ++first;
    const auto res = std::from_chars(first, last, v);
    if (tok.empty() || res.ec != std::errc() || res.ptr != last)
        throw ParseError(line, field + ": not a number: '" + std::string(tok) + "'");
    return v;
}

} // namespace detail

inline MeasurementFile parse_measurements(std::istream& in) {
    MeasurementFile file;
    std::string raw;
    std::size_t line_no = 0;
    bool have_header = false;
    std::string value_field;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto line = detail::trim(raw);
        if (line.empty()) continue;
        const auto cells = detail::split_csv(line);
        if (!have_header) {
            if (cells.size() != 3 || cells[0] != "f_mem_ghz" || cells[1] != "f_com_ghz" ||
                (cells[2] != "latency_s" && cells[2] != "power_w"))
                throw ParseError(line_no, "expected header 'f_mem_ghz,f_com_ghz,latency_s' or "
                                          "'f_mem_ghz,f_com_ghz,power_w'");
            value_field = std::string(cells[2]);
            file.kind = value_field == "latency_s" ? MeasurementKind::Latency : MeasurementKind::Power;
            have_header = true;
            continue;
        }
        if (cells.size() != 3)
            throw ParseError(line_no, "expected 3 fields, got " + std::to_string(cells.size()));
        const std::string names[3] = {"f_mem_ghz", "f_com_ghz", value_field};
        double v[3];
        for (int c = 0; c < 3; ++c) {
            v[c] = detail::parse_double(cells[c], line_no, names[c]);
            if (!std::isfinite(v[c]) || !(v[c] > 0.0))
                throw ValidationError(names[c], "must be finite and > 0", line_no);
        }
        if (file.kind == MeasurementKind::Latency)
            file.latency.push_back({{v[0], v[1]}, v[2]});
        else
            file.power.push_back({{v[0], v[1]}, v[2]});
    }
    if (!have_header) throw ParseError(line_no, "missing header row");
    return file;
}

inline MeasurementFile load_measurements(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open measurement file '" + path + "'");
    return parse_measurements(in);
}

inline void write_latency_csv(std::ostream& os, const std::vector<LatencySample>& samples) {
    os << "f_mem_ghz,f_com_ghz,latency_s\n";
    for (const auto& s : samples) os << format_full(s.f.mem) << ',' << format_full(s.f.com) << ',' << format_full(s.latency) << '\n';
}

} // namespace memfreq::io

#endif // MEMFREQ_IO_MEASUREMENTS_HPP
