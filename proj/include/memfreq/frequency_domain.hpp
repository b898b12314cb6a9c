#ifndef MEMFREQ_FREQUENCY_DOMAIN_HPP
#define MEMFREQ_FREQUENCY_DOMAIN_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace memfreq {

struct FrequencyRange {
    double min = 0.0;
    double max = 0.0;

    bool contains(double f) const noexcept { return f >= min && f <= max; }
    double width() const noexcept { return max - min; }

    friend bool operator==(const FrequencyRange&, const FrequencyRange&) = default;
};

/// One frequency axis: a closed range, optionally restricted to a strictly
/// ascending list of DVFS levels inside it.
class FrequencyAxis {
public:
    FrequencyAxis() = default;

    explicit FrequencyAxis(FrequencyRange range, std::vector<double> levels = {})
        : range_(range), levels_(std::move(levels)) {
        validate("axis");
    }

    const FrequencyRange& range() const noexcept { return range_; }
    const std::vector<double>& levels() const noexcept { return levels_; }
    bool discrete() const noexcept { return !levels_.empty(); }

    double lowest() const noexcept { return discrete() ? levels_.front() : range_.min; }
    double highest() const noexcept { return discrete() ? levels_.back() : range_.max; }

    bool admits(double f) const {
        if (!discrete()) return range_.contains(f);
        return std::binary_search(levels_.begin(), levels_.end(), f);
    }

    /// Uniform grid of `n` points over the range (endpoints included), or the
    /// level list itself on a discrete axis.
    std::vector<double> grid(std::size_t n) const {
        if (discrete()) return levels_;
        std::vector<double> pts(n);
        for (std::size_t i = 0; i < n; ++i)
            pts[i] = n == 1 ? range_.min
                            : range_.min + range_.width() * (static_cast<double>(i) / static_cast<double>(n - 1));
        if (n > 1) pts.back() = range_.max;
        return pts;
    }

    void validate(const std::string& name) const {
        if (!std::isfinite(range_.min) || !std::isfinite(range_.max) || !(range_.min > 0.0))
            throw ValidationError(name, "range bounds must be finite and > 0");
        if (range_.min > range_.max) throw ValidationError(name, "range min exceeds max");
        for (std::size_t i = 0; i < levels_.size(); ++i) {
            if (!range_.contains(levels_[i]))
                throw ValidationError(name, "level " + std::to_string(levels_[i]) + " lies outside the range");
            if (i > 0 && !(levels_[i] > levels_[i - 1]))
                throw ValidationError(name, "levels must be strictly ascending");
        }
    }

    friend bool operator==(const FrequencyAxis&, const FrequencyAxis&) = default;

private:
    FrequencyRange range_{};
    std::vector<double> levels_;
};

/// Admissible (memory, computing) frequency settings of a device.
struct FrequencyDomain {
    FrequencyAxis mem;
    FrequencyAxis com;

    FrequencyDomain() = default;
    FrequencyDomain(FrequencyAxis mem_axis, FrequencyAxis com_axis)
        : mem(std::move(mem_axis)), com(std::move(com_axis)) {}
    FrequencyDomain(FrequencyRange mem_range, FrequencyRange com_range)
        : mem(mem_range), com(com_range) {}

    bool discrete() const noexcept { return mem.discrete() && com.discrete(); }

    friend bool operator==(const FrequencyDomain&, const FrequencyDomain&) = default;
};

} // namespace memfreq

#endif // MEMFREQ_FREQUENCY_DOMAIN_HPP
