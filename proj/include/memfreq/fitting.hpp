#ifndef MEMFREQ_FITTING_HPP
#define MEMFREQ_FITTING_HPP

// Least-squares recovery of latency and power models from measurements.
//
// The latency model is fitted by variable projection: for fixed exponents
// (beta, gamma) the coefficients (lambda, mu) enter linearly, so a coarse
// exponent grid with a two-variable nonnegative least-squares solve at each
// node gives a deterministic starting point. A bounded Levenberg-Marquardt
// pass over all four parameters then polishes it.

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "core_models.hpp"
#include "errors.hpp"

namespace memfreq {

struct LatencySample {
    FrequencyPair f;
    double latency = 0.0; ///< seconds
};

struct PowerSample {
    FrequencyPair f;
    double power = 0.0; ///< watts
};

struct FitQuality {
    double r_squared = 1.0;
    double mse = 0.0;
    std::size_t n_samples = 0;
    /// Observations had zero variance; r_squared is reported as 1 by convention.
    bool zero_variance = false;
};

struct LatencyFit {
    LatencyModel model;
    FitQuality quality;
    /// lambda or mu ended clamped at zero, or the data had zero variance.
    bool degenerate = false;
    double grid_sse = 0.0;   ///< SSE of the best exponent-grid node
    double sse = 0.0;        ///< SSE after refinement
    int iterations = 0;      ///< refinement iterations used
};

struct PowerFit {
    PowerModel model;
    FitQuality quality;
    bool degenerate = false; ///< at least one coefficient clamped at zero
};

struct LatencyFitOptions {
    double exponent_max = 4.0;
    double exponent_step = 0.05;
    int max_iterations = 200;
    double step_tolerance = 1e-9;
};

inline FitQuality fit_quality(std::span<const double> predicted, std::span<const double> observed) {
    if (predicted.size() != observed.size())
        throw SizeMismatch("fit_quality: " + std::to_string(predicted.size()) + " predictions vs " +
                           std::to_string(observed.size()) + " observations");
    if (observed.empty()) throw SizeMismatch("fit_quality: no observations");

    const auto n = static_cast<double>(observed.size());
    double mean = 0.0;
    for (double y : observed) mean += y;
    mean /= n;

    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double r = observed[i] - predicted[i];
        const double d = observed[i] - mean;
        ss_res += r * r;
        ss_tot += d * d;
    }

    FitQuality q;
    q.n_samples = observed.size();
    q.mse = ss_res / n;
    const auto [lo, hi] = std::minmax_element(observed.begin(), observed.end());
    if (*lo == *hi) {
        q.zero_variance = true;
        q.r_squared = 1.0;
    } else {
        q.r_squared = 1.0 - ss_res / ss_tot;
    }
    return q;
}

namespace detail {

inline void validate_latency_samples(std::span<const LatencySample> samples) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!(s.f.mem > 0.0) || !(s.f.com > 0.0) || !std::isfinite(s.f.mem) || !std::isfinite(s.f.com))
            throw DomainError("sample " + std::to_string(i) + ": frequencies must be finite and > 0");
        if (!(s.latency > 0.0) || !std::isfinite(s.latency))
            throw DomainError("sample " + std::to_string(i) + ": latency must be finite and > 0");
    }
}

struct LinearCoefficients {
    double lambda = 0.0;
    double mu = 0.0;
    double sse = std::numeric_limits<double>::infinity();
};

// min over lambda, mu >= 0 of |lambda*a + mu*b - t|^2, from the Gram entries.
inline LinearCoefficients nnls2(double saa, double sab, double sbb, double sat, double sbt, double stt) {
    auto sse = [&](double l, double m) {
        return stt - 2.0 * (l * sat + m * sbt) + l * l * saa + 2.0 * l * m * sab + m * m * sbb;
    };
    LinearCoefficients best;
    auto consider = [&](double l, double m) {
        const double e = sse(l, m);
        if (e < best.sse) best = {l, m, e};
    };
    const double det = saa * sbb - sab * sab;
    if (det > 1e-12 * saa * sbb) {
        const double l = (sat * sbb - sbt * sab) / det;
        const double m = (sbt * saa - sat * sab) / det;
        if (l >= 0.0 && m >= 0.0) consider(l, m);
    }
    consider(std::max(0.0, sat / saa), 0.0);
    consider(0.0, std::max(0.0, sbt / sbb));
    consider(0.0, 0.0);
    return best;
}

struct LatencyProblem {
    std::vector<double> log_mem, log_com, t;

    double sse(const std::array<double, 4>& p) const {
        double s = 0.0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double r = p[0] * std::exp(-p[1] * log_mem[i]) + p[2] * std::exp(-p[3] * log_com[i]) - t[i];
            s += r * r;
        }
        return s;
    }
};

inline std::size_t count_distinct(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return static_cast<std::size_t>(std::unique(v.begin(), v.end()) - v.begin());
}

} // namespace detail

/// Fit t = lambda f_mem^-beta + mu f_com^-gamma to `samples` (unweighted SSE on
/// absolute latency). Needs at least 8 samples spanning 3 distinct values on
/// each axis. The result does not depend on sample order.
inline LatencyFit fit_latency_model(std::span<const LatencySample> samples,
                                    const LatencyFitOptions& opt = {}) {
    detail::validate_latency_samples(samples);
    if (samples.size() < 8)
        throw InsufficientData("latency fit needs >= 8 samples, got " + std::to_string(samples.size()));
    {
        std::vector<double> mem, com;
        for (const auto& s : samples) {
            mem.push_back(s.f.mem);
            com.push_back(s.f.com);
        }
        if (detail::count_distinct(mem) < 3 || detail::count_distinct(com) < 3)
            throw InsufficientData("latency fit needs >= 3 distinct frequencies on each axis");
    }

    // Canonical order makes every floating-point reduction order-independent.
    std::vector<LatencySample> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end(), [](const LatencySample& a, const LatencySample& b) {
        if (a.f.mem != b.f.mem) return a.f.mem < b.f.mem;
        if (a.f.com != b.f.com) return a.f.com < b.f.com;
        return a.latency < b.latency;
    });

    const std::size_t n = sorted.size();
    detail::LatencyProblem prob;
    prob.log_mem.resize(n);
    prob.log_com.resize(n);
    prob.t.resize(n);
    double stt = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        prob.log_mem[i] = std::log(sorted[i].f.mem);
        prob.log_com[i] = std::log(sorted[i].f.com);
        prob.t[i] = sorted[i].latency;
        stt += prob.t[i] * prob.t[i];
    }

    // Grid stage. Ties keep the first (smallest beta, then gamma) node.
    const int steps = static_cast<int>(std::lround(opt.exponent_max / opt.exponent_step));
    std::vector<std::vector<double>> a(steps + 1, std::vector<double>(n)), b = a;
    std::vector<double> saa(steps + 1), sat(steps + 1), sbb(steps + 1), sbt(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        const double e = k * opt.exponent_step;
        for (std::size_t i = 0; i < n; ++i) {
            a[k][i] = std::exp(-e * prob.log_mem[i]);
            b[k][i] = std::exp(-e * prob.log_com[i]);
            saa[k] += a[k][i] * a[k][i];
            sat[k] += a[k][i] * prob.t[i];
            sbb[k] += b[k][i] * b[k][i];
            sbt[k] += b[k][i] * prob.t[i];
        }
    }

    std::array<double, 4> p{0.0, 0.0, 0.0, 0.0};
    double best = std::numeric_limits<double>::infinity();
    for (int kb = 0; kb <= steps; ++kb) {
        for (int kg = 0; kg <= steps; ++kg) {
            double sab = 0.0;
            for (std::size_t i = 0; i < n; ++i) sab += a[kb][i] * b[kg][i];
            const auto c = detail::nnls2(saa[kb], sab, sbb[kg], sat[kb], sbt[kg], stt);
            if (c.sse < best) {
                best = c.sse;
                p = {c.lambda, kb * opt.exponent_step, c.mu, kg * opt.exponent_step};
            }
        }
    }

    LatencyFit fit{LatencyModel(p[0], p[1], p[2], p[3]), {}, false, 0.0, 0.0, 0};
    double sse = prob.sse(p);
    fit.grid_sse = sse;

    // Refinement: Levenberg-Marquardt with every parameter projected onto >= 0.
    // Only SSE-decreasing steps are accepted, so sse <= grid_sse always.
    double damping = 1e-3;
    for (int it = 0; it < opt.max_iterations && sse > 0.0; ++it) {
        fit.iterations = it + 1;
        Eigen::Matrix4d jtj = Eigen::Matrix4d::Zero();
        Eigen::Vector4d jtr = Eigen::Vector4d::Zero();
        for (std::size_t i = 0; i < n; ++i) {
            const double em = std::exp(-p[1] * prob.log_mem[i]);
            const double ec = std::exp(-p[3] * prob.log_com[i]);
            const Eigen::Vector4d j(em, -p[0] * prob.log_mem[i] * em, ec, -p[2] * prob.log_com[i] * ec);
            const double r = p[0] * em + p[2] * ec - prob.t[i];
            jtj.noalias() += j * j.transpose();
            jtr += j * r;
        }
        const double floor = 1e-15 * std::max(jtj.diagonal().maxCoeff(), 1e-300);

        bool accepted = false;
        while (damping < 1e16) {
            Eigen::Matrix4d lhs = jtj;
            for (int d = 0; d < 4; ++d) lhs(d, d) += damping * (jtj(d, d) + floor);
            const Eigen::Vector4d delta = lhs.ldlt().solve(-jtr);
            if (!delta.allFinite()) {
                damping *= 10.0;
                continue;
            }
            std::array<double, 4> trial{};
            double step2 = 0.0, norm2 = 0.0;
            for (int d = 0; d < 4; ++d) {
                trial[d] = std::max(0.0, p[d] + delta[d]);
                step2 += (trial[d] - p[d]) * (trial[d] - p[d]);
                norm2 += p[d] * p[d];
            }
            const double trial_sse = prob.sse(trial);
            if (trial_sse < sse) {
                p = trial;
                sse = trial_sse;
                damping = std::max(damping / 3.0, 1e-12);
                accepted = true;
                if (std::sqrt(step2) <= opt.step_tolerance * (std::sqrt(norm2) + opt.step_tolerance))
                    it = opt.max_iterations; // converged
                break;
            }
            damping *= 4.0;
            if (std::sqrt(step2) <= opt.step_tolerance * (std::sqrt(norm2) + opt.step_tolerance)) break;
        }
        if (!accepted) break;
    }

    fit.model = LatencyModel(p[0], p[1], p[2], p[3]);
    fit.sse = sse;

    std::vector<double> predicted(n);
    for (std::size_t i = 0; i < n; ++i) predicted[i] = eval_latency(fit.model, sorted[i].f);
    fit.quality = fit_quality(predicted, prob.t);
    fit.degenerate = p[0] == 0.0 || p[2] == 0.0 || fit.quality.zero_variance;
    return fit;
}

/// Nonnegative least squares of power on (f_mem^3, f_com^3, 1). Needs >= 4
/// samples taken at more than one frequency pair.
inline PowerFit fit_power_model(std::span<const PowerSample> samples) {
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        if (!(s.f.mem > 0.0) || !(s.f.com > 0.0) || !std::isfinite(s.f.mem) || !std::isfinite(s.f.com))
            throw DomainError("sample " + std::to_string(i) + ": frequencies must be finite and > 0");
        if (!(s.power > 0.0) || !std::isfinite(s.power))
            throw DomainError("sample " + std::to_string(i) + ": power must be finite and > 0");
    }
    if (samples.size() < 4)
        throw InsufficientData("power fit needs >= 4 samples, got " + std::to_string(samples.size()));
    const bool single_point = std::all_of(samples.begin(), samples.end(), [&](const PowerSample& s) {
        return s.f == samples.front().f;
    });
    if (single_point) throw InsufficientData("power fit needs samples at more than one frequency pair");

    const auto n = static_cast<Eigen::Index>(samples.size());
    Eigen::MatrixXd x(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& s = samples[static_cast<std::size_t>(i)];
        x(i, 0) = s.f.mem * s.f.mem * s.f.mem;
        x(i, 1) = s.f.com * s.f.com * s.f.com;
        x(i, 2) = 1.0;
        y(i) = s.power;
    }

    // Exact NNLS for three unknowns: the optimum is the unconstrained least
    // squares solution on its own support, so try every support and keep the
    // best one with nonnegative coefficients. Smaller supports are tried first
    // and only displaced by a strictly better SSE.
    const double tie = 1e-12 * y.squaredNorm();
    std::array<double, 3> coef{0.0, 0.0, 0.0};
    double best = std::numeric_limits<double>::infinity();
    int best_mask = 0;
    for (int size = 1; size <= 3; ++size) {
        for (int mask = 1; mask < 8; ++mask) {
            if (__builtin_popcount(static_cast<unsigned>(mask)) != size) continue;
            std::vector<int> cols;
            for (int c = 0; c < 3; ++c)
                if (mask & (1 << c)) cols.push_back(c);
            Eigen::MatrixXd sub(n, static_cast<Eigen::Index>(cols.size()));
            for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = x.col(cols[c]);
            const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(sub);
            if (qr.rank() < static_cast<Eigen::Index>(cols.size())) continue;
            const Eigen::VectorXd beta = qr.solve(y);
            if ((beta.array() < 0.0).any()) continue;
            const double sse = (sub * beta - y).squaredNorm();
            if (sse < best - tie) {
                best = sse;
                best_mask = mask;
                coef = {0.0, 0.0, 0.0};
                for (std::size_t c = 0; c < cols.size(); ++c) coef[cols[c]] = beta(static_cast<Eigen::Index>(c));
            }
        }
    }

    PowerFit fit{PowerModel(coef[0], coef[1], coef[2]), {}, best_mask != 7};
    std::vector<double> predicted, observed;
    for (const auto& s : samples) {
        predicted.push_back(eval_power(fit.model, s.f));
        observed.push_back(s.power);
    }
    fit.quality = fit_quality(predicted, observed);
    return fit;
}

} // namespace memfreq

#endif // MEMFREQ_FITTING_HPP
