#ifndef MEMFREQ_CORE_MODELS_HPP
#define MEMFREQ_CORE_MODELS_HPP

// Latency, power and energy of DNN inference as functions of the memory and
// computing clock frequencies. Frequencies are in GHz, time in seconds, power
// in watts and energy in joules throughout.

#include <cmath>
#include <optional>
#include <string>

#include "errors.hpp"

namespace memfreq {

struct FrequencyPair {
    double mem = 0.0; ///< memory frequency, GHz
    double com = 0.0; ///< computing frequency, GHz

    friend bool operator==(const FrequencyPair&, const FrequencyPair&) = default;
};

namespace detail {

inline void require_positive_frequency(double f, const char* axis) {
    if (!(f > 0.0) || !std::isfinite(f))
        throw DomainError(std::string(axis) + " frequency must be finite and > 0, got " +
                          std::to_string(f));
}

inline void require_valid(const FrequencyPair& f) {
    require_positive_frequency(f.mem, "memory");
    require_positive_frequency(f.com, "computing");
}

inline void require_nonnegative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw InvalidModel(std::string(name) + " must be finite and >= 0, got " + std::to_string(v));
}

} // namespace detail

/// Two-term power law  t = lambda * f_mem^-beta + mu * f_com^-gamma.
///
/// Fitted values are strictly positive; zero is accepted on every parameter so
/// that a fit may sit on the boundary (an exponent of 0 turns its term into a
/// constant, a coefficient of 0 removes it).
class LatencyModel {
public:
    LatencyModel(double lambda, double beta, double mu, double gamma)
        : lambda_(lambda), beta_(beta), mu_(mu), gamma_(gamma) {
        detail::require_nonnegative(lambda, "lambda");
        detail::require_nonnegative(beta, "beta");
        detail::require_nonnegative(mu, "mu");
        detail::require_nonnegative(gamma, "gamma");
    }

    double lambda() const noexcept { return lambda_; }
    double beta() const noexcept { return beta_; }
    double mu() const noexcept { return mu_; }
    double gamma() const noexcept { return gamma_; }

    /// Memory-bound term lambda * f_mem^-beta.
    double mem_term(double f_mem) const { return lambda_ * std::pow(f_mem, -beta_); }
    /// Compute-bound term mu * f_com^-gamma.
    double com_term(double f_com) const { return mu_ * std::pow(f_com, -gamma_); }

    friend bool operator==(const LatencyModel&, const LatencyModel&) = default;

private:
    double lambda_, beta_, mu_, gamma_;
};

/// p = kappa_mem * f_mem^3 + kappa_com * f_com^3 + sigma.
class PowerModel {
public:
    PowerModel(double kappa_mem, double kappa_com, double sigma)
        : kappa_mem_(kappa_mem), kappa_com_(kappa_com), sigma_(sigma) {
        detail::require_nonnegative(kappa_mem, "kappa_mem");
        detail::require_nonnegative(kappa_com, "kappa_com");
        detail::require_nonnegative(sigma, "sigma");
    }

    double kappa_mem() const noexcept { return kappa_mem_; }
    double kappa_com() const noexcept { return kappa_com_; }
    double sigma() const noexcept { return sigma_; }

    friend bool operator==(const PowerModel&, const PowerModel&) = default;

private:
    double kappa_mem_, kappa_com_, sigma_;
};

/// FLOP-count baseline t = c / (g * f). Only used for comparison reports.
class WorkloadModel {
public:
    WorkloadModel(double flops, double flops_per_cycle) : flops_(flops), flops_per_cycle_(flops_per_cycle) {
        if (!(flops > 0.0) || !std::isfinite(flops)) throw InvalidModel("flops must be > 0");
        if (!(flops_per_cycle > 0.0) || !std::isfinite(flops_per_cycle))
            throw InvalidModel("flops_per_cycle must be > 0");
    }

    double flops() const noexcept { return flops_; }
    double flops_per_cycle() const noexcept { return flops_per_cycle_; }

private:
    double flops_, flops_per_cycle_;
};

inline double eval_latency(const LatencyModel& model, const FrequencyPair& f) {
    detail::require_valid(f);
    return model.mem_term(f.mem) + model.com_term(f.com);
}

inline double eval_baseline_latency(const WorkloadModel& w, double f_com_ghz) {
    detail::require_positive_frequency(f_com_ghz, "computing");
    return w.flops() / (w.flops_per_cycle() * f_com_ghz * 1e9);
}

inline double eval_power(const PowerModel& model, const FrequencyPair& f) {
    detail::require_valid(f);
    return model.kappa_mem() * f.mem * f.mem * f.mem + model.kappa_com() * f.com * f.com * f.com +
           model.sigma();
}

inline double eval_energy(const LatencyModel& lat, const PowerModel& pow, const FrequencyPair& f) {
    return eval_power(pow, f) * eval_latency(lat, f);
}

struct LatencyGradient {
    double d_mem = 0.0; ///< s/GHz
    double d_com = 0.0; ///< s/GHz
};

inline LatencyGradient latency_gradient(const LatencyModel& model, const FrequencyPair& f) {
    detail::require_valid(f);
    return {-model.lambda() * model.beta() * std::pow(f.mem, -model.beta() - 1.0),
            -model.mu() * model.gamma() * std::pow(f.com, -model.gamma() - 1.0)};
}

namespace detail {

// Smallest x > 0 with coeff * x^-exponent <= budget; 0 when the term does not
// depend on x and already fits.
inline std::optional<double> invert_power_term(double coeff, double exponent, double budget) {
    if (!(budget > 0.0)) return std::nullopt;
    if (coeff == 0.0) return 0.0;
    if (exponent == 0.0) return coeff <= budget ? std::optional<double>(0.0) : std::nullopt;
    return std::pow(coeff / budget, 1.0 / exponent);
}

} // namespace detail

/// Minimum memory frequency meeting `deadline` at the given computing
/// frequency, or nullopt when the computing term alone already uses it up.
inline std::optional<double> invert_latency_for_mem(const LatencyModel& model, double f_com,
                                                    double deadline) {
    detail::require_positive_frequency(f_com, "computing");
    if (!(deadline > 0.0)) throw DomainError("deadline must be > 0");
    return detail::invert_power_term(model.lambda(), model.beta(), deadline - model.com_term(f_com));
}

inline std::optional<double> invert_latency_for_com(const LatencyModel& model, double f_mem,
                                                    double deadline) {
    detail::require_positive_frequency(f_mem, "memory");
    if (!(deadline > 0.0)) throw DomainError("deadline must be > 0");
    return detail::invert_power_term(model.mu(), model.gamma(), deadline - model.mem_term(f_mem));
}

} // namespace memfreq

#endif // MEMFREQ_CORE_MODELS_HPP
