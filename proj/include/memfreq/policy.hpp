#ifndef MEMFREQ_POLICY_HPP
#define MEMFREQ_POLICY_HPP

// Deadline-constrained energy minimization over (f_mem, f_com).
//
// Three policies are offered: scale only the memory clock with the computing
// clock pinned at its maximum (computing-prior), the mirror image
// (memory-prior), and joint scaling of both clocks. Energy is not assumed to
// be convex, so the joint solver combines grid-seeded projected-gradient
// descent with one-dimensional searches along the deadline curve and the box
// edges; grid_oracle() is the exhaustive reference it is checked against.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "core_models.hpp"
#include "errors.hpp"
#include "frequency_domain.hpp"

namespace memfreq {

enum class Policy { ComputingPrior, MemoryPrior, Joint };

inline std::string_view to_string(Policy p) {
    switch (p) {
    case Policy::ComputingPrior: return "computing-prior";
    case Policy::MemoryPrior: return "memory-prior";
    case Policy::Joint: return "joint";
    }
    return "?";
}

struct PolicyResult {
    Policy policy = Policy::Joint;
    FrequencyPair f;
    double latency = 0.0; ///< s
    double power = 0.0;   ///< W
    double energy = 0.0;  ///< J, always power * latency
    bool feasible = false;
    /// Latency with both clocks at their highest setting; the best any policy
    /// can do. Filled in for feasible results too.
    double min_achievable_latency = 0.0;
};

/// Relative slack allowed on the deadline to absorb rounding in the closed-form
/// inversions.
inline constexpr double kDeadlineRelTol = 1e-9;

inline bool meets_deadline(double latency, double deadline) noexcept {
    return latency <= deadline * (1.0 + kDeadlineRelTol);
}

struct JointOptions {
    std::size_t seed_grid = 32;         ///< per-axis resolution of the seeding grid
    std::size_t starts = 8;             ///< descents launched from the best seeds
    double min_step = 1e-6;             ///< GHz; descent stops below this step
    std::size_t max_descent_steps = 20000;
    std::size_t line_samples = 256;     ///< dense samples per 1-D search
    std::size_t max_enumeration = 1000000;
    std::size_t neighborhood = 2;       ///< initial +/- level window for large discrete domains
};

namespace detail {

struct Objective {
    const LatencyModel& lat;
    const PowerModel& pow;
    double deadline;

    double latency(const FrequencyPair& f) const { return eval_latency(lat, f); }
    double energy(const FrequencyPair& f) const { return eval_energy(lat, pow, f); }
    bool feasible(const FrequencyPair& f) const { return meets_deadline(latency(f), deadline); }
};

struct Candidate {
    FrequencyPair f;
    double energy = std::numeric_limits<double>::infinity();

    bool valid() const noexcept { return std::isfinite(energy); }
};

// Strict order: lower energy, then lower f_com, then lower f_mem. Independent
// of the order in which candidates are visited.
inline bool better(const Candidate& a, const Candidate& b) noexcept {
    if (a.energy != b.energy) return a.energy < b.energy;
    if (a.f.com != b.f.com) return a.f.com < b.f.com;
    return a.f.mem < b.f.mem;
}

inline void offer(Candidate& best, const Objective& obj, const FrequencyPair& f) {
    if (!obj.feasible(f)) return;
    const Candidate c{f, obj.energy(f)};
    if (better(c, best)) best = c;
}

inline void validate_inputs(const FrequencyDomain& dom, double deadline) {
    dom.mem.validate("mem");
    dom.com.validate("com");
    if (!(deadline > 0.0) || !std::isfinite(deadline)) throw DomainError("deadline must be finite and > 0");
}

inline FrequencyPair top_corner(const FrequencyDomain& dom) { return {dom.mem.highest(), dom.com.highest()}; }

inline PolicyResult make_result(Policy policy, const Objective& obj, const FrequencyDomain& dom,
                                const FrequencyPair& f, bool feasible) {
    PolicyResult r;
    r.policy = policy;
    r.f = f;
    r.latency = eval_latency(obj.lat, f);
    r.power = eval_power(obj.pow, f);
    r.energy = r.power * r.latency;
    r.feasible = feasible;
    r.min_achievable_latency = eval_latency(obj.lat, top_corner(dom));
    return r;
}

inline PolicyResult infeasible_result(Policy policy, const Objective& obj, const FrequencyDomain& dom) {
    return make_result(policy, obj, dom, top_corner(dom), false);
}

// Golden-section refinement of a dense scan. `g` returns +inf where infeasible.
template <class F>
std::pair<double, double> minimize_1d(F&& g, double lo, double hi, std::size_t samples) {
    if (!(hi > lo)) return {lo, g(lo)};
    samples = std::max<std::size_t>(samples, 3);
    double best_x = lo, best_v = std::numeric_limits<double>::infinity();
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = i + 1 == samples ? hi : lo + (hi - lo) * (static_cast<double>(i) / static_cast<double>(samples - 1));
        const double v = g(x);
        if (v < best_v) {
            best_v = v;
            best_x = x;
            best_i = i;
        }
    }
    if (!std::isfinite(best_v)) return {best_x, best_v};

    const double h = (hi - lo) / static_cast<double>(samples - 1);
    double a = best_i == 0 ? lo : best_x - h;
    double b = best_i + 1 == samples ? hi : best_x + h;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
    double v1 = g(x1), v2 = g(x2);
    const double tol = 1e-13 * std::max(1.0, std::abs(hi));
    while (b - a > tol) {
        if (v1 <= v2) {
            b = x2;
            x2 = x1;
            v2 = v1;
            x1 = b - ratio * (b - a);
            v1 = g(x1);
        } else {
            a = x1;
            x1 = x2;
            v1 = v2;
            x2 = a + ratio * (b - a);
            v2 = g(x2);
        }
    }
    for (const auto& [x, v] : {std::pair{x1, v1}, std::pair{x2, v2}})
        if (v < best_v) {
            best_v = v;
            best_x = x;
        }
    return {best_x, best_v};
}

// Smallest admissible value on `axis` at or above `required` that meets the
// deadline, scanning levels upward on a discrete axis.
template <class Make>
std::optional<double> lowest_feasible(const FrequencyAxis& axis, std::optional<double> required,
                                      const Objective& obj, Make&& make_pair) {
    if (!required) return std::nullopt;
    if (axis.discrete()) {
        for (double level : axis.levels())
            if (obj.feasible(make_pair(level))) return level;
        return std::nullopt;
    }
    const double x = std::clamp(*required, axis.range().min, axis.range().max);
    if (!obj.feasible(make_pair(x))) return std::nullopt;
    return x;
}

// Best point on the segment where one clock is held at `fixed` and the other
// ranges over the continuous `axis`.
inline void search_segment(Candidate& best, const Objective& obj, const FrequencyAxis& axis, bool vary_mem,
                           double fixed, std::size_t samples) {
    const auto required = vary_mem ? invert_latency_for_mem(obj.lat, fixed, obj.deadline)
                                   : invert_latency_for_com(obj.lat, fixed, obj.deadline);
    if (!required) return;
    const double lo = std::max(axis.range().min, *required);
    const double hi = axis.range().max;
    if (lo > hi) {
        const FrequencyPair edge = vary_mem ? FrequencyPair{hi, fixed} : FrequencyPair{fixed, hi};
        offer(best, obj, edge);
        return;
    }
    auto pair_at = [&](double x) { return vary_mem ? FrequencyPair{x, fixed} : FrequencyPair{fixed, x}; };
    auto g = [&](double x) {
        const auto f = pair_at(x);
        return obj.feasible(f) ? obj.energy(f) : std::numeric_limits<double>::infinity();
    };
    const auto [x, v] = minimize_1d(g, lo, hi, samples);
    if (std::isfinite(v)) offer(best, obj, pair_at(x));
    offer(best, obj, pair_at(lo));
}

// Walk the deadline curve latency == deadline (clamped into the box), using
// the computing (or memory) clock as the parameter.
inline void search_deadline_curve(Candidate& best, const Objective& obj, const FrequencyDomain& dom,
                                  bool param_com, std::size_t samples) {
    const auto& param_axis = param_com ? dom.com.range() : dom.mem.range();
    const auto& dep_axis = param_com ? dom.mem.range() : dom.com.range();
    auto point_at = [&](double p) -> std::optional<FrequencyPair> {
        const auto req = param_com ? invert_latency_for_mem(obj.lat, p, obj.deadline)
                                   : invert_latency_for_com(obj.lat, p, obj.deadline);
        if (!req) return std::nullopt;
        const double d = std::clamp(*req, dep_axis.min, dep_axis.max);
        const FrequencyPair f = param_com ? FrequencyPair{d, p} : FrequencyPair{p, d};
        if (!obj.feasible(f)) return std::nullopt;
        return f;
    };
    auto g = [&](double p) {
        const auto f = point_at(p);
        return f ? obj.energy(*f) : std::numeric_limits<double>::infinity();
    };

    // Feasible parameter values form an upper interval; find its start.
    double lo = param_axis.min;
    if (!point_at(lo)) {
        const auto start = param_com ? invert_latency_for_com(obj.lat, dep_axis.max, obj.deadline)
                                     : invert_latency_for_mem(obj.lat, dep_axis.max, obj.deadline);
        if (!start || *start > param_axis.max) return;
        lo = std::max(lo, *start);
    }
    const auto [p, v] = minimize_1d(g, lo, param_axis.max, samples);
    if (std::isfinite(v)) offer(best, obj, *point_at(p));
    if (auto f = point_at(lo)) offer(best, obj, *f);
}

// Pull an infeasible point back onto the feasible set by raising one clock to
// its closed-form minimum; keeps whichever option costs less energy.
inline std::optional<FrequencyPair> project_feasible(const Objective& obj, const FrequencyDomain& dom,
                                                     FrequencyPair f) {
    f.mem = std::clamp(f.mem, dom.mem.range().min, dom.mem.range().max);
    f.com = std::clamp(f.com, dom.com.range().min, dom.com.range().max);
    if (obj.feasible(f)) return f;
    Candidate best;
    if (auto m = invert_latency_for_mem(obj.lat, f.com, obj.deadline); m && *m <= dom.mem.range().max)
        offer(best, obj, {std::max(*m, f.mem), f.com});
    if (auto c = invert_latency_for_com(obj.lat, f.mem, obj.deadline); c && *c <= dom.com.range().max)
        offer(best, obj, {f.mem, std::max(*c, f.com)});
    if (!best.valid()) return std::nullopt;
    return best.f;
}

inline Candidate projected_descent(const Objective& obj, const FrequencyDomain& dom, FrequencyPair x,
                                   const JointOptions& opt) {
    Candidate cur{x, obj.energy(x)};
    double step = 0.05 * std::max(dom.mem.range().width(), dom.com.range().width());
    const double max_step = 4.0 * step;
    for (std::size_t it = 0; it < opt.max_descent_steps && step >= opt.min_step; ++it) {
        const double t = obj.latency(cur.f);
        const double p = eval_power(obj.pow, cur.f);
        const auto dt = latency_gradient(obj.lat, cur.f);
        const double gm = 3.0 * obj.pow.kappa_mem() * cur.f.mem * cur.f.mem * t + p * dt.d_mem;
        const double gc = 3.0 * obj.pow.kappa_com() * cur.f.com * cur.f.com * t + p * dt.d_com;
        const double norm = std::hypot(gm, gc);
        if (!(norm > 0.0)) break;
        const auto trial = project_feasible(obj, dom, {cur.f.mem - step * gm / norm, cur.f.com - step * gc / norm});
        if (trial) {
            const double e = obj.energy(*trial);
            if (e < cur.energy) {
                cur = {*trial, e};
                step = std::min(step * 1.5, max_step);
                continue;
            }
        }
        step *= 0.5;
    }
    return cur;
}

inline PolicyResult solve_single_axis(const LatencyModel& lat, const PowerModel& pow, const FrequencyDomain& dom,
                                      double deadline, bool scale_mem) {
    validate_inputs(dom, deadline);
    const Objective obj{lat, pow, deadline};
    const Policy policy = scale_mem ? Policy::ComputingPrior : Policy::MemoryPrior;
    std::optional<double> chosen;
    FrequencyPair f;
    if (scale_mem) {
        const double fixed = dom.com.highest();
        chosen = lowest_feasible(dom.mem, invert_latency_for_mem(lat, fixed, deadline), obj,
                                 [&](double x) { return FrequencyPair{x, fixed}; });
        f = {chosen.value_or(0.0), fixed};
    } else {
        const double fixed = dom.mem.highest();
        chosen = lowest_feasible(dom.com, invert_latency_for_com(lat, fixed, deadline), obj,
                                 [&](double x) { return FrequencyPair{fixed, x}; });
        f = {fixed, chosen.value_or(0.0)};
    }
    if (!chosen) return infeasible_result(policy, obj, dom);
    return make_result(policy, obj, dom, f, true);
}

inline Candidate enumerate(const Objective& obj, const std::vector<double>& mem, const std::vector<double>& com) {
    Candidate best;
    for (double fm : mem)
        for (double fc : com) offer(best, obj, {fm, fc});
    return best;
}

} // namespace detail

/// Computing-prior: f_com pinned at its highest setting, f_mem lowered to the
/// smallest value (or level) that still meets the deadline.
inline PolicyResult solve_computing_prior(const LatencyModel& lat, const PowerModel& pow, const FrequencyDomain& dom,
                                          double deadline) {
    return detail::solve_single_axis(lat, pow, dom, deadline, true);
}

/// Memory-prior: f_mem pinned at its highest setting, f_com scaled.
inline PolicyResult solve_memory_prior(const LatencyModel& lat, const PowerModel& pow, const FrequencyDomain& dom,
                                       double deadline) {
    return detail::solve_single_axis(lat, pow, dom, deadline, false);
}

/// Exhaustive minimum over a resolution x resolution uniform grid (discrete
/// axes contribute their level lists instead).
inline PolicyResult grid_oracle(const LatencyModel& lat, const PowerModel& pow, const FrequencyDomain& dom,
                                double deadline, std::size_t resolution) {
    if (resolution < 2) throw ValidationError("resolution", "must be >= 2");
    detail::validate_inputs(dom, deadline);
    const detail::Objective obj{lat, pow, deadline};
    const auto best = detail::enumerate(obj, dom.mem.grid(resolution), dom.com.grid(resolution));
    if (!best.valid()) return detail::infeasible_result(Policy::Joint, obj, dom);
    return detail::make_result(Policy::Joint, obj, dom, best.f, true);
}

/// Joint scaling: minimum energy over the whole domain subject to the deadline.
inline PolicyResult solve_joint(const LatencyModel& lat, const PowerModel& pow, const FrequencyDomain& dom,
                                double deadline, const JointOptions& opt = {}) {
    using namespace detail;
    validate_inputs(dom, deadline);
    const Objective obj{lat, pow, deadline};
    if (!obj.feasible(top_corner(dom))) return infeasible_result(Policy::Joint, obj, dom);

    Candidate best;
    // The single-axis policies live inside the joint search space.
    for (const auto& prior : {solve_computing_prior(lat, pow, dom, deadline), solve_memory_prior(lat, pow, dom, deadline)})
        if (prior.feasible) offer(best, obj, prior.f);
    offer(best, obj, top_corner(dom));

    if (dom.mem.discrete() && dom.com.discrete()) {
        const auto& ml = dom.mem.levels();
        const auto& cl = dom.com.levels();
        if (ml.size() * cl.size() <= opt.max_enumeration) {
            const auto e = enumerate(obj, ml, cl);
            if (better(e, best)) best = e;
        } else {
            // Snap the continuous optimum upward, then widen a level window
            // around it until it contains a feasible point.
            const FrequencyDomain relaxed(dom.mem.range(), dom.com.range());
            const auto cont = solve_joint(lat, pow, relaxed, deadline, opt);
            const auto idx = [](const std::vector<double>& lv, double x) {
                return static_cast<std::ptrdiff_t>(std::lower_bound(lv.begin(), lv.end(), x) - lv.begin());
            };
            const auto i0 = idx(ml, cont.f.mem), j0 = idx(cl, cont.f.com);
            const auto span = static_cast<std::ptrdiff_t>(std::max(ml.size(), cl.size()));
            for (auto r = static_cast<std::ptrdiff_t>(opt.neighborhood); ; r *= 2) {
                Candidate local;
                for (auto i = std::max<std::ptrdiff_t>(0, i0 - r); i <= std::min<std::ptrdiff_t>(ml.size() - 1, i0 + r); ++i)
                    for (auto j = std::max<std::ptrdiff_t>(0, j0 - r); j <= std::min<std::ptrdiff_t>(cl.size() - 1, j0 + r); ++j)
                        offer(local, obj, {ml[i], cl[j]});
                if (better(local, best)) best = local;
                if (local.valid() || r > span) break;
            }
        }
    } else if (dom.mem.discrete() || dom.com.discrete()) {
        // One discrete axis: a 1-D continuous search per level.
        const bool mem_discrete = dom.mem.discrete();
        const auto& levels = mem_discrete ? dom.mem.levels() : dom.com.levels();
        const auto& cont_axis = mem_discrete ? dom.com : dom.mem;
        for (double level : levels) search_segment(best, obj, cont_axis, !mem_discrete, level, opt.line_samples);
    } else {
        const auto& mr = dom.mem.range();
        const auto& cr = dom.com.range();
        search_segment(best, obj, dom.mem, true, cr.min, opt.line_samples);
        search_segment(best, obj, dom.mem, true, cr.max, opt.line_samples);
        search_segment(best, obj, dom.com, false, mr.min, opt.line_samples);
        search_segment(best, obj, dom.com, false, mr.max, opt.line_samples);
        search_deadline_curve(best, obj, dom, true, opt.line_samples);
        search_deadline_curve(best, obj, dom, false, opt.line_samples);

        std::vector<Candidate> seeds;
        for (double fm : dom.mem.grid(opt.seed_grid))
            for (double fc : dom.com.grid(opt.seed_grid)) {
                const FrequencyPair f{fm, fc};
                if (obj.feasible(f)) seeds.push_back({f, obj.energy(f)});
            }
        std::sort(seeds.begin(), seeds.end(), better);
        if (seeds.size() > opt.starts) seeds.resize(opt.starts);
        seeds.push_back(best);
        for (const auto& s : seeds) {
            const auto c = projected_descent(obj, dom, s.f, opt);
            if (better(c, best) && obj.feasible(c.f)) best = c;
        }
    }

    if (!best.valid()) return infeasible_result(Policy::Joint, obj, dom);
    return make_result(Policy::Joint, obj, dom, best.f, true);
}

/// All three policies, ordered computing-prior, memory-prior, joint.
inline std::vector<PolicyResult> compare_policies(const LatencyModel& lat, const PowerModel& pow,
                                                  const FrequencyDomain& dom, double deadline,
                                                  const JointOptions& opt = {}) {
    return {solve_computing_prior(lat, pow, dom, deadline), solve_memory_prior(lat, pow, dom, deadline),
            solve_joint(lat, pow, dom, deadline, opt)};
}

} // namespace memfreq

#endif // MEMFREQ_POLICY_HPP
