#ifndef MEMFREQ_IO_SURFACE_HPP
#define MEMFREQ_IO_SURFACE_HPP

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "../core_models.hpp"
#include "../errors.hpp"
#include "../frequency_domain.hpp"
#include "table.hpp"

namespace memfreq::io {

enum class SurfaceQuantity { Latency, Energy };

/// values[i][j] is the quantity at (mem_axis[i], com_axis[j]).
struct SurfaceGrid {
    SurfaceQuantity quantity = SurfaceQuantity::Latency;
    std::vector<double> mem_axis;
    std::vector<double> com_axis;
    std::vector<std::vector<double>> values;
};

/// Samples latency or energy on a uniform resolution x resolution grid over
/// the domain's ranges. Energy needs a power model.
inline SurfaceGrid emit_surface(SurfaceQuantity quantity, const LatencyModel& lat,
                                const std::optional<PowerModel>& pow, const FrequencyDomain& dom,
                                std::size_t resolution) {
    if (resolution < 2) throw ValidationError("resolution", "must be >= 2");
    if (quantity == SurfaceQuantity::Energy && !pow)
        throw MissingPowerModel("(surface)");
    SurfaceGrid g;
    g.quantity = quantity;
    g.mem_axis = FrequencyAxis(dom.mem.range()).grid(resolution);
    g.com_axis = FrequencyAxis(dom.com.range()).grid(resolution);
    g.values.assign(resolution, std::vector<double>(resolution));
    for (std::size_t i = 0; i < resolution; ++i)
        for (std::size_t j = 0; j < resolution; ++j) {
            const FrequencyPair f{g.mem_axis[i], g.com_axis[j]};
            g.values[i][j] = quantity == SurfaceQuantity::Latency ? eval_latency(lat, f) : eval_energy(lat, *pow, f);
        }
    return g;
}

/// Row 0 holds the computing-frequency axis, column 0 the memory-frequency
/// axis. Numbers are written in shortest round-trip form, so output is
/// byte-identical for identical inputs.
inline void write_surface_csv(const SurfaceGrid& g, std::ostream& os) {
    os << (g.quantity == SurfaceQuantity::Latency ? "latency_s" : "energy_j") << " f_mem_ghz\\f_com_ghz";
    for (double c : g.com_axis) os << ',' << format_full(c);
    os << '\n';
    for (std::size_t i = 0; i < g.mem_axis.size(); ++i) {
        os << format_full(g.mem_axis[i]);
        for (double v : g.values[i]) os << ',' << format_full(v);
        os << '\n';
    }
}

} // namespace memfreq::io

#endif // MEMFREQ_IO_SURFACE_HPP
