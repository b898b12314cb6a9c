#ifndef MEMFREQ_OFFLOAD_HPP
#define MEMFREQ_OFFLOAD_HPP

// Binary offloading: a device either runs inference locally under joint
// frequency scaling (x = 0) or ships its input to an edge server (x = 1).
// Units: Mbit for data, Mbit/s for rates; 1 MB = 8 Mbit.

#include <cmath>
#include <string>
#include <vector>

#include "device_profile.hpp"
#include "errors.hpp"
#include "policy.hpp"

namespace memfreq {

inline constexpr double kMbitPerMegabyte = 8.0;

struct Scenario {
    double deadline = 0.0;     ///< s
    double rate = 0.0;         ///< Mbit/s
    double tx_power = 0.0;     ///< W
    double input_size = 0.0;   ///< Mbit
    double edge_latency = 0.0; ///< s, edge server inference time

    void validate() const {
        auto check = [](double v, const char* field) {
            if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(field, "must be finite and > 0");
        };
        check(deadline, "deadline");
        check(rate, "rate");
        check(tx_power, "tx_power");
        check(input_size, "input_size");
        check(edge_latency, "edge_latency");
    }
};

struct OffloadCost {
    double latency = 0.0; ///< transmission + edge inference, s
    double energy = 0.0;  ///< device transmit energy, J
};

/// Result feedback is not charged; the device pays only for transmission.
inline OffloadCost offload_cost(const Scenario& s) {
    s.validate();
    const double t_tx = s.input_size / s.rate;
    return {t_tx + s.edge_latency, s.tx_power * t_tx};
}

struct OffloadDecision {
    int x = 0;              ///< 1 = offload, 0 = local inference
    FrequencyPair chosen_f; ///< meaningful when x == 0
    PolicyResult local;
    double offload_latency = 0.0;
    double offload_energy = 0.0;
    double total_latency = 0.0;
    double total_energy = 0.0;
    bool feasible = false;
};

inline OffloadDecision plan_device(const LatencyModel& lat, const PowerModel& pow, const FrequencyDomain& dom,
                                   const Scenario& s, const JointOptions& opt = {}) {
    const auto remote = offload_cost(s);
    OffloadDecision d;
    d.local = solve_joint(lat, pow, dom, s.deadline, opt);
    d.offload_latency = remote.latency;
    d.offload_energy = remote.energy;

    const bool offload_ok = meets_deadline(remote.latency, s.deadline);
    bool offload;
    if (offload_ok && d.local.feasible)
        offload = remote.energy < d.local.energy;
    else if (offload_ok || d.local.feasible)
        offload = offload_ok;
    else
        offload = remote.latency < d.local.latency; // neither meets D: report the faster option

    d.x = offload ? 1 : 0;
    d.feasible = offload_ok || d.local.feasible;
    d.chosen_f = d.local.f;
    d.total_latency = offload ? remote.latency : d.local.latency;
    d.total_energy = offload ? remote.energy : d.local.energy;
    return d;
}

/// One decision per deadline, each with the scenario's deadline overridden.
inline std::vector<OffloadDecision> sweep_deadline(const LatencyModel& lat, const PowerModel& pow,
                                                   const FrequencyDomain& dom, const Scenario& s,
                                                   const std::vector<double>& deadlines,
                                                   const JointOptions& opt = {}) {
    for (std::size_t i = 0; i < deadlines.size(); ++i) {
        if (!(deadlines[i] > 0.0) || !std::isfinite(deadlines[i]))
            throw ValidationError("deadlines", "deadline " + std::to_string(i) + " must be finite and > 0");
        if (i > 0 && deadlines[i] < deadlines[i - 1])
            throw ValidationError("deadlines", "deadlines must be ascending");
    }
    std::vector<OffloadDecision> table;
    table.reserve(deadlines.size());
    for (double d : deadlines) {
        Scenario at = s;
        at.deadline = d;
        table.push_back(plan_device(lat, pow, dom, at, opt));
    }
    return table;
}

struct FleetMember {
    DeviceProfile device;
    std::string dnn;
    Scenario scenario;
};

using Fleet = std::vector<FleetMember>;

struct FleetReport {
    std::vector<OffloadDecision> decisions; ///< in fleet order
    double total_energy = 0.0;
    std::size_t feasible_count = 0;
};

/// Plans every device independently (no shared-channel contention).
inline FleetReport simulate_fleet(const Fleet& fleet, const JointOptions& opt = {}) {
    if (fleet.empty()) throw ValidationError("fleet", "must contain at least one device");
    FleetReport report;
    for (const auto& m : fleet) {
        const auto& lat = m.device.model(m.dnn);
        const auto& pow = m.device.require_power();
        report.decisions.push_back(plan_device(lat, pow, m.device.domain, m.scenario, opt));
    }
    for (const auto& d : report.decisions) {
        report.total_energy += d.total_energy;
        report.feasible_count += d.feasible ? 1 : 0;
    }
    return report;
}

} // namespace memfreq

#endif // MEMFREQ_OFFLOAD_HPP
