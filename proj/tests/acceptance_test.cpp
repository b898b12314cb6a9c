// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails. Tolerances are fixed here and must not be relaxed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "memfreq/io/config.hpp"
#include "memfreq/io/surface.hpp"
#include "memfreq/memfreq.hpp"
#include "test_support.hpp"

namespace {

using namespace memfreq;
using memfreq::testing::InstanceGenerator;

struct Outcome {
    bool ok = true;
    std::string detail;
};

// Collects the first few violations and counts the rest.
class Checker {
public:
    void expect(bool cond, const std::string& what) {
        ++checks_;
        if (cond) return;
        if (++failures_ <= 3) first_ += (first_.empty() ? "" : "; ") + what;
    }
    Outcome outcome(const std::string& summary) const {
        if (failures_ == 0) return {true, summary + ", " + std::to_string(checks_) + " checks"};
        return {false, std::to_string(failures_) + "/" + std::to_string(checks_) + " violations: " + first_};
    }

private:
    std::size_t checks_ = 0, failures_ = 0;
    std::string first_;
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

bool rel_close(double got, double want, double rel) { return std::abs(got - want) <= rel * std::abs(want); }

Outcome latency_evaluation() {
    constexpr double reference = 0.158920697367768706;
    const double t = eval_latency(memfreq::testing::vgg19_tx1(), {1.6, 0.9984});
    Checker c;
    c.expect(std::abs(t - 0.1589) <= 0.001, "latency " + fmt(t) + " not within 0.001 of 0.1589");
    c.expect(std::abs(t - reference) <= 1e-14, "latency " + fmt(t) + " differs from high-precision value");
    return c.outcome("t = " + fmt(t) + " s");
}

Outcome fit_round_trip() {
    InstanceGenerator gen(123);
    Checker c;
    double worst = 0.0, min_r2 = 1.0;
    for (int i = 0; i < 100; ++i) {
        const auto truth = gen.latency_model();
        const auto dom = i % 2 ? memfreq::testing::orin_domain() : memfreq::testing::tx1_domain();
        const auto fit = fit_latency_model(memfreq::testing::grid_samples(truth, dom, 6));
        const double got[4] = {fit.model.lambda(), fit.model.beta(), fit.model.mu(), fit.model.gamma()};
        const double want[4] = {truth.lambda(), truth.beta(), truth.mu(), truth.gamma()};
        for (int k = 0; k < 4; ++k) {
            worst = std::max(worst, std::abs(got[k] - want[k]) / want[k]);
            c.expect(rel_close(got[k], want[k], 0.01), "model " + std::to_string(i) + " param " + std::to_string(k));
        }
        min_r2 = std::min(min_r2, fit.quality.r_squared);
        c.expect(fit.quality.r_squared >= 0.9999, "model " + std::to_string(i) + " R2 " + fmt(fit.quality.r_squared));
    }
    return c.outcome("100 models, worst rel error " + fmt(worst) + ", min R2 " + fmt(min_r2));
}

Outcome published_fit_quality() {
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, 0.01);
    Checker c;
    double min_r2 = 1.0, max_mse = 0.0;
    for (const auto& row : memfreq::testing::published_models()) {
        auto s = memfreq::testing::grid_samples(memfreq::testing::model_of(row),
                                                memfreq::testing::domain_for(row.device), 6);
        for (auto& x : s) x.latency *= 1.0 + noise(rng);
        const auto q = fit_latency_model(s).quality;
        min_r2 = std::min(min_r2, q.r_squared);
        max_mse = std::max(max_mse, q.mse);
        const std::string name = std::string(row.dnn) + "/" + row.device;
        c.expect(q.r_squared > 0.99, name + " R2 " + fmt(q.r_squared));
        c.expect(q.mse < 0.002, name + " MSE " + fmt(q.mse));
    }
    return c.outcome("7 models, min R2 " + fmt(min_r2) + ", max MSE " + fmt(max_mse));
}

Outcome policy_dominance() {
    InstanceGenerator gen(555);
    Checker c;
    int counted = 0, draws = 0;
    while (counted < 1000) {
        ++draws;
        const auto in = draws % 4 == 0 ? gen.discrete(15) : gen.continuous();
        const auto rs = compare_policies(in.lat, in.pow, in.dom, in.deadline);
        if (!(rs[0].feasible && rs[1].feasible && rs[2].feasible)) continue;
        ++counted;
        const double best_prior = std::min(rs[0].energy, rs[1].energy);
        c.expect(rs[2].energy <= best_prior + 1e-9,
                 "draw " + std::to_string(draws) + ": joint " + fmt(rs[2].energy) + " > prior " + fmt(best_prior));
    }
    return c.outcome("1000 feasible instances from " + std::to_string(draws) + " draws");
}

/// Plain enumeration of every level pair; the lowest energy wins, ties go to
/// lower f_com, then lower f_mem.
PolicyResult enumerate_levels(const memfreq::testing::Instance& in) {
    PolicyResult best;
    best.energy = INFINITY;
    for (double fm : in.dom.mem.levels())
        for (double fc : in.dom.com.levels()) {
            const FrequencyPair f{fm, fc};
            const double t = eval_latency(in.lat, f);
            if (t > in.deadline * (1 + 1e-9)) continue;
            const double e = eval_power(in.pow, f) * t;
            const bool better = e < best.energy ||
                                (e == best.energy && (fc < best.f.com || (fc == best.f.com && fm < best.f.mem)));
            if (better) {
                best.f = f;
                best.energy = e;
                best.feasible = true;
            }
        }
    return best;
}

Outcome oracle_agreement() {
    Checker c;
    InstanceGenerator gen(2025);
    double worst = 0.0;
    int continuous_feasible = 0;
    for (int i = 0; i < 50; ++i) {
        const auto in = gen.continuous();
        const auto r = solve_joint(in.lat, in.pow, in.dom, in.deadline);
        const auto o = grid_oracle(in.lat, in.pow, in.dom, in.deadline, 400);
        c.expect(r.feasible == o.feasible, "continuous " + std::to_string(i) + " feasibility differs");
        if (!r.feasible || !o.feasible) continue;
        ++continuous_feasible;
        worst = std::max(worst, std::abs(r.energy - o.energy) / o.energy);
        c.expect(rel_close(r.energy, o.energy, 0.005),
                 "continuous " + std::to_string(i) + ": " + fmt(r.energy) + " vs oracle " + fmt(o.energy));
    }
    InstanceGenerator dgen(99);
    int discrete_feasible = 0;
    for (int i = 0; i < 50; ++i) {
        const auto in = dgen.discrete(20);
        const auto r = solve_joint(in.lat, in.pow, in.dom, in.deadline);
        const auto e = enumerate_levels(in);
        c.expect(r.feasible == e.feasible, "discrete " + std::to_string(i) + " feasibility differs");
        if (!r.feasible || !e.feasible) continue;
        ++discrete_feasible;
        c.expect(r.f == e.f && r.energy == e.energy, "discrete " + std::to_string(i) + " differs from enumeration");
    }
    return c.outcome(std::to_string(continuous_feasible) + " continuous (worst rel gap " + fmt(worst) + "), " +
                     std::to_string(discrete_feasible) + " discrete feasible");
}

Outcome offload_regimes() {
    Checker c;
    const auto cfg = io::load_config(MEMFREQ_FIXTURE_PATH);
    const auto& tx1 = cfg.device("tx1");
    const Scenario s = cfg.scenario("coop");
    const double t_tx = s.input_size / s.rate;
    const auto cost = offload_cost(s);
    c.expect(std::abs(t_tx - 0.228) <= 1e-12, "t_tx " + fmt(t_tx));
    c.expect(std::abs(cost.energy - 0.0456) <= 1e-12, "e_tx " + fmt(cost.energy));
    c.expect(std::abs(s.input_size - 0.57 * kMbitPerMegabyte) <= 1e-12, "input size " + fmt(s.input_size));
    const auto t = sweep_deadline(tx1.model("vgg19"), tx1.require_power(), tx1.domain, s, {0.16, 0.2, 0.24});
    c.expect(t.size() == 3, "sweep size");
    if (t.size() == 3) {
        c.expect(t[0].x == 0 && t[1].x == 0 && t[2].x == 1, "decisions " + std::to_string(t[0].x) +
                                                                 std::to_string(t[1].x) + std::to_string(t[2].x));
        for (const auto& d : t) c.expect(d.feasible, "infeasible sweep entry");
        c.expect(t[1].total_energy <= t[0].total_energy && t[2].total_energy <= t[1].total_energy,
                 "energy not non-increasing in deadline");
    }
    std::string energies;
    for (const auto& d : t) energies += (energies.empty() ? "" : "/") + fmt(d.total_energy);
    return c.outcome("t_tx " + fmt(t_tx) + " s, e_tx " + fmt(cost.energy) + " J, energies " + energies + " J");
}

Outcome property_suites() {
    Checker c;
    InstanceGenerator gen(31337);
    constexpr int kDraws = 1000;
    int safety = 0, monotone = 0;
    for (int i = 0; i < kDraws; ++i) {
        const auto m = gen.latency_model();
        const FrequencyPair a{gen.uniform(0.1, 2.5), gen.uniform(0.1, 2.5)};
        const FrequencyPair b{gen.uniform(0.1, 2.5), gen.uniform(0.1, 2.5)};
        const double up = gen.uniform(1e-3, 1.0);
        const double ta = eval_latency(m, a);
        c.expect(eval_latency(m, {a.mem + up, a.com}) < ta && eval_latency(m, {a.mem, a.com + up}) < ta,
                 "monotonicity draw " + std::to_string(i));
        const FrequencyPair mid{0.5 * (a.mem + b.mem), 0.5 * (a.com + b.com)};
        c.expect(eval_latency(m, mid) <= 0.5 * (ta + eval_latency(m, b)) + 1e-12, "convexity draw " + std::to_string(i));

        const auto g = latency_gradient(m, a);
        const double fd_m = memfreq::testing::fd_latency(m, a, true), fd_c = memfreq::testing::fd_latency(m, a, false);
        c.expect(std::abs(g.d_mem - fd_m) <= 1e-5 * std::abs(g.d_mem) + 1e-12 &&
                     std::abs(g.d_com - fd_c) <= 1e-5 * std::abs(g.d_com) + 1e-12,
                 "gradient draw " + std::to_string(i));

        const auto fm = invert_latency_for_mem(m, a.com, ta);
        const auto fc = invert_latency_for_com(m, a.mem, ta);
        c.expect(fm && fc && rel_close(eval_latency(m, {*fm, a.com}), ta, 1e-9) &&
                     rel_close(eval_latency(m, {a.mem, *fc}), ta, 1e-9),
                 "inversion draw " + std::to_string(i));

        const auto in = i % 4 == 3 ? gen.discrete(15) : gen.continuous();
        for (const auto& r : compare_policies(in.lat, in.pow, in.dom, in.deadline)) {
            if (!r.feasible) continue;
            ++safety;
            c.expect(eval_latency(in.lat, r.f) <= in.deadline * (1 + 1e-9) && in.dom.mem.admits(r.f.mem) &&
                         in.dom.com.admits(r.f.com),
                     "deadline safety draw " + std::to_string(i));
        }

        double d1 = gen.deadline_for(in.lat, in.dom, gen.uniform(0.0, 0.8));
        double d2 = gen.deadline_for(in.lat, in.dom, gen.uniform(0.0, 0.8));
        if (d2 < d1) std::swap(d1, d2);
        const auto r1 = solve_joint(in.lat, in.pow, in.dom, d1);
        const auto r2 = solve_joint(in.lat, in.pow, in.dom, d2);
        if (r1.feasible && r2.feasible) {
            ++monotone;
            c.expect(r2.energy <= r1.energy * (1 + 1e-9), "deadline monotonicity draw " + std::to_string(i));
        }
    }
    return c.outcome(std::to_string(kDraws) + " draws per property, " + std::to_string(safety) +
                     " feasible policy results, " + std::to_string(monotone) + " deadline pairs");
}

Outcome fixture_golden() {
    Checker c;
    const auto cfg = io::load_config(MEMFREQ_FIXTURE_PATH);
    for (const auto& row : memfreq::testing::published_models()) {
        const std::string name = std::string(row.dnn) + "/" + row.device;
        bool found = false;
        for (const auto& m : cfg.models) {
            if (m.device != row.device || m.dnn != row.dnn) continue;
            found = true;
            c.expect(m.model == memfreq::testing::model_of(row), name + " parameters");
            c.expect(m.r_squared && *m.r_squared == row.r_squared, name + " R2");
            c.expect(m.mse && *m.mse == row.mse, name + " MSE");
        }
        c.expect(found, name + " missing");
    }
    c.expect(cfg.models.size() == memfreq::testing::published_models().size(), "extra models in fixture");
    c.expect(cfg.device("tx1").domain == memfreq::testing::tx1_domain(), "tx1 ranges");
    c.expect(cfg.device("orin").domain == memfreq::testing::orin_domain(), "orin ranges");

    auto render = [&](const std::string& device, const std::string& dnn) {
        const auto& d = cfg.device(device);
        std::ostringstream os;
        io::write_surface_csv(io::emit_surface(io::SurfaceQuantity::Energy, d.model(dnn), d.power, d.domain, 64), os);
        return os.str();
    };
    for (const auto& row : memfreq::testing::published_models())
        c.expect(render(row.device, row.dnn) == render(row.device, row.dnn), "surface bytes differ");
    return c.outcome("7 models, 2 devices, 7 surfaces");
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"latency evaluation (VGG19/TX1 at maxima)", latency_evaluation},
        {"latency fit round trip", fit_round_trip},
        {"fit quality on noisy published models", published_fit_quality},
        {"policy dominance", policy_dominance},
        {"joint solver vs oracle", oracle_agreement},
        {"offload arithmetic and regime flips", offload_regimes},
        {"property suites", property_suites},
        {"fixture golden and surface determinism", fixture_golden},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("%s [%zu] %s: %s (%.2f s)\n", o.ok ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        failed += o.ok ? 0 : 1;
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
