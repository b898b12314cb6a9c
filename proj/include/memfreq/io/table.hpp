#ifndef MEMFREQ_IO_TABLE_HPP
#define MEMFREQ_IO_TABLE_HPP

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace memfreq::io {

enum class Format { Text, Csv };

/// Shortest representation that round-trips to the same double.
inline std::string format_full(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

/// Six significant digits, for human-readable reports.
inline std::string format_short(double v) {
    std::array<char, 32> buf{};
    const int n = std::snprintf(buf.data(), buf.size(), "%.6g", v);
    return std::string(buf.data(), static_cast<std::size_t>(n));
}

inline std::string format_number(double v, Format fmt) {
    return fmt == Format::Csv ? format_full(v) : format_short(v);
}

/// Rows of already-formatted cells, written either as CSV or as a
/// space-aligned text table.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
    std::size_t size() const noexcept { return rows_.size(); }

    void write(std::ostream& os, Format fmt) const {
        if (fmt == Format::Csv) {
            write_csv_row(os, header_);
            for (const auto& r : rows_) write_csv_row(os, r);
            return;
        }
        std::vector<std::size_t> width(header_.size());
        for (std::size_t c = 0; c < header_.size(); ++c) width[c] = header_[c].size();
        for (const auto& r : rows_)
            for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t c = 0; c < r.size(); ++c) {
                os << r[c];
                if (c + 1 < r.size()) os << std::string(width[c] - r[c].size() + 2, ' ');
            }
            os << '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
    }

private:
    static void write_csv_row(std::ostream& os, const std::vector<std::string>& r) {
        for (std::size_t c = 0; c < r.size(); ++c) os << (c ? "," : "") << r[c];
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

} // namespace memfreq::io

#endif // MEMFREQ_IO_TABLE_HPP
