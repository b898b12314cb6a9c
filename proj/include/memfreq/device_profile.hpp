#ifndef MEMFREQ_DEVICE_PROFILE_HPP
#define MEMFREQ_DEVICE_PROFILE_HPP

#include <map>
#include <optional>
#include <string>

#include "core_models.hpp"
#include "frequency_domain.hpp"

namespace memfreq {

/// Everything known about one device: its frequency domain, its power model
/// (optional in configuration files) and the fitted latency model of each DNN.
struct DeviceProfile {
    std::string name;
    std::optional<PowerModel> power;
    FrequencyDomain domain;
    std::map<std::string, LatencyModel> models;

    const PowerModel& require_power() const {
        if (!power) throw MissingPowerModel(name);
        return *power;
    }

    const LatencyModel& model(const std::string& dnn) const {
        auto it = models.find(dnn);
        if (it == models.end())
            throw ValidationError("model", "no latency model for dnn '" + dnn + "' on device '" + name + "'");
        return it->second;
    }
};

} // namespace memfreq

#endif // MEMFREQ_DEVICE_PROFILE_HPP
