#ifndef MEMFREQ_IO_CONFIG_HPP
#define MEMFREQ_IO_CONFIG_HPP

// Device / model / scenario configuration, stored as JSON (comments allowed).
//
//   {
//     "device":   [{"name", "mem_range_ghz": [lo, hi], "com_range_ghz": [lo, hi],
//                   "mem_levels_ghz"?, "com_levels_ghz"?,
//                   "power"?: {"kappa_mem", "kappa_com", "sigma", "synthetic"?}}],
//     "model":    [{"device", "dnn", "lambda", "beta", "mu", "gamma", "r_squared"?, "mse"?}],
//     "scenario": [{"name", "deadline_s", "rate_mbps", "tx_power_w", "input_mbit", "edge_latency_s"}],
//     "fleet"?:   [{"device", "dnn", "scenario"}]
//   }

#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "../device_profile.hpp"
#include "../errors.hpp"
#include "../offload.hpp"

namespace memfreq::io {

struct ModelEntry {
    std::string device;
    std::string dnn;
    LatencyModel model;
    std::optional<double> r_squared; ///< fit quality reported alongside the parameters
    std::optional<double> mse;
};

struct FleetEntry {
    std::string device;
    std::string dnn;
    std::string scenario;
};

struct ConfigFile {
    std::vector<DeviceProfile> devices;
    std::vector<ModelEntry> models;
    std::map<std::string, Scenario> scenarios;
    std::vector<FleetEntry> fleet;
    /// Device names whose power coefficients are marked synthetic.
    std::vector<std::string> synthetic_power;

    const DeviceProfile& device(const std::string& name) const {
        for (const auto& d : devices)
            if (d.name == name) return d;
        throw ValidationError("device", "unknown device '" + name + "'");
    }

    const Scenario& scenario(const std::string& name) const {
        auto it = scenarios.find(name);
        if (it == scenarios.end()) throw ValidationError("scenario", "unknown scenario '" + name + "'");
        return it->second;
    }

    FleetMember member(const FleetEntry& e) const {
        const auto& dev = device(e.device);
        dev.model(e.dnn);
        return {dev, e.dnn, scenario(e.scenario)};
    }

    Fleet build_fleet(const std::vector<FleetEntry>& entries) const {
        Fleet f;
        for (const auto& e : entries) f.push_back(member(e));
        return f;
    }
};

namespace detail {

using nlohmann::json;

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object() || !obj.contains(key)) throw ValidationError(path + "." + key, "missing");
    return obj.at(key);
}

inline double number(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = require(obj, key, path);
    if (!v.is_number()) throw ValidationError(path + "." + key, "must be a number");
    return v.get<double>();
}

inline std::optional<double> optional_number(const json& obj, const std::string& key, const std::string& path) {
    if (!obj.contains(key)) return std::nullopt;
    return number(obj, key, path);
}

inline std::string text(const json& obj, const std::string& key, const std::string& path) {
    const auto& v = require(obj, key, path);
    if (!v.is_string()) throw ValidationError(path + "." + key, "must be a string");
    return v.get<std::string>();
}

inline std::vector<double> numbers(const json& v, const std::string& path) {
    if (!v.is_array()) throw ValidationError(path, "must be an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) throw ValidationError(path + "[" + std::to_string(i) + "]", "must be a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

inline FrequencyAxis axis(const json& dev, const std::string& which, const std::string& path) {
    const std::string range_key = which + "_range_ghz";
    const std::string levels_key = which + "_levels_ghz";
    const auto r = numbers(require(dev, range_key, path), path + "." + range_key);
    if (r.size() != 2) throw ValidationError(path + "." + range_key, "must be [min, max]");
    std::vector<double> levels;
    if (dev.contains(levels_key)) levels = numbers(dev.at(levels_key), path + "." + levels_key);
    try {
        return FrequencyAxis({r[0], r[1]}, levels);
    } catch (const ValidationError& e) {
        throw ValidationError(path + "." + range_key, e.what());
    }
}

template <class F>
auto rethrow_at(const std::string& path, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const InvalidModel& e) {
        throw ValidationError(path, e.what());
    }
}

inline const json& section(const json& root, const std::string& key) {
    static const json empty = json::array();
    if (!root.contains(key)) return empty;
    const auto& s = root.at(key);
    if (!s.is_array()) throw ValidationError(key, "must be an array");
    return s;
}

} // namespace detail

/// Parses and validates a configuration. Everything is checked before the
/// result is returned; no partially-built config escapes on error.
inline ConfigFile parse_config(std::istream& in) {
    using detail::json;
    json root;
    try {
        root = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        std::string msg = e.what();
        throw ParseError(0, "invalid JSON: " + msg);
    }
    if (!root.is_object()) throw ValidationError("config", "top level must be an object");

    ConfigFile cfg;
    const auto& devices = detail::section(root, "device");
    for (std::size_t i = 0; i < devices.size(); ++i) {
        const std::string path = "device[" + std::to_string(i) + "]";
        const auto& d = devices[i];
        DeviceProfile dev;
        dev.name = detail::text(d, "name", path);
        for (const auto& other : cfg.devices)
            if (other.name == dev.name) throw ValidationError(path + ".name", "duplicate device '" + dev.name + "'");
        dev.domain = FrequencyDomain(detail::axis(d, "mem", path), detail::axis(d, "com", path));
        if (d.contains("power")) {
            const auto& p = d.at("power");
            const std::string pp = path + ".power";
            dev.power = detail::rethrow_at(pp, [&] {
                return PowerModel(detail::number(p, "kappa_mem", pp), detail::number(p, "kappa_com", pp),
                                  detail::number(p, "sigma", pp));
            });
            if (p.contains("synthetic") && p.at("synthetic").is_boolean() && p.at("synthetic").get<bool>())
                cfg.synthetic_power.push_back(dev.name);
        }
        cfg.devices.push_back(std::move(dev));
    }

    const auto& models = detail::section(root, "model");
    for (std::size_t i = 0; i < models.size(); ++i) {
        const std::string path = "model[" + std::to_string(i) + "]";
        const auto& m = models[i];
        const auto device = detail::text(m, "device", path);
        const auto dnn = detail::text(m, "dnn", path);
        auto model = detail::rethrow_at(path, [&] {
            return LatencyModel(detail::number(m, "lambda", path), detail::number(m, "beta", path),
                                detail::number(m, "mu", path), detail::number(m, "gamma", path));
        });
        DeviceProfile* owner = nullptr;
        for (auto& d : cfg.devices)
            if (d.name == device) owner = &d;
        if (!owner) throw ValidationError(path + ".device", "unknown device '" + device + "'");
        if (!owner->models.emplace(dnn, model).second)
            throw ValidationError(path + ".dnn", "duplicate model '" + dnn + "' on device '" + device + "'");
        cfg.models.push_back({device, dnn, model, detail::optional_number(m, "r_squared", path),
                              detail::optional_number(m, "mse", path)});
    }

    const auto& scenarios = detail::section(root, "scenario");
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
        const std::string path = "scenario[" + std::to_string(i) + "]";
        const auto& s = scenarios[i];
        auto positive = [&](const char* key) {
            const double v = detail::number(s, key, path);
            if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(path + "." + key, "must be finite and > 0");
            return v;
        };
        const Scenario sc{positive("deadline_s"), positive("rate_mbps"), positive("tx_power_w"),
                          positive("input_mbit"), positive("edge_latency_s")};
        const auto name = detail::text(s, "name", path);
        if (!cfg.scenarios.emplace(name, sc).second)
            throw ValidationError(path + ".name", "duplicate scenario '" + name + "'");
    }

    const auto& fleet = detail::section(root, "fleet");
    for (std::size_t i = 0; i < fleet.size(); ++i) {
        const std::string path = "fleet[" + std::to_string(i) + "]";
        const auto& f = fleet[i];
        FleetEntry e{detail::text(f, "device", path), detail::text(f, "dnn", path), detail::text(f, "scenario", path)};
        try {
            cfg.member(e);
        } catch (const ValidationError& err) {
            throw ValidationError(path, err.what());
        }
        cfg.fleet.push_back(std::move(e));
    }
    return cfg;
}

inline ConfigFile load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path + "'");
    return parse_config(in);
}

} // namespace memfreq::io

#endif // MEMFREQ_IO_CONFIG_HPP
