#include <doctest.h>

#include <cmath>

#include "pso.hpp"
#include "util.hpp"

using namespace ctp;
using namespace ctp::pso;

namespace {

Bounds box6(double lo, double hi) {
    Bounds b;
    b.lo.assign(6, lo);
    b.hi.assign(6, hi);
    return b;
}

const Feasibility kAlwaysFeasible = [](const std::vector<double>&) { return true; };

double norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

TEST_CASE("initialize is deterministic and respects the particle count") {
    Bounds b = box6(-5.0, 5.0);
    PsoConfig cfg;
    cfg.seed = 99;
    auto objective = [](const std::vector<double>& x) { return -norm(x); };

    auto s1 = initialize(objective, kAlwaysFeasible, box_repair(b), b, cfg);
    auto s2 = initialize(objective, kAlwaysFeasible, box_repair(b), b, cfg);
    REQUIRE(s1.particles.size() == 100);
    CHECK(s1.global_best_score == s2.global_best_score);
    for (std::size_t i = 0; i < s1.particles.size(); ++i)
        CHECK(s1.particles[i].position == s2.particles[i].position);
}

TEST_CASE("degenerate box puts every particle on the single point") {
    Bounds b;
    b.lo.assign(3, 2.5);
    b.hi.assign(3, 2.5);
    PsoConfig cfg;
    cfg.n_particles = 10;
    auto swarm = initialize([](const std::vector<double>&) { return 1.0; }, kAlwaysFeasible,
                            box_repair(b), b, cfg);
    for (const auto& p : swarm.particles)
        for (double x : p.position) CHECK(x == 2.5);
}

TEST_CASE("an infeasible region is detected after repeated repair failures") {
    Bounds b = box6(0.0, 1.0);
    PsoConfig cfg;
    auto never = [](const std::vector<double>&) { return false; };
    CHECK_THROWS_AS(initialize([](const std::vector<double>&) { return 0.0; }, never,
                               box_repair(b), b, cfg),
                    util::NumericError);
}

TEST_CASE("a swarm converged at the optimum with zero velocity is a fixed point") {
    Bounds b = box6(-1.0, 1.0);
    PsoConfig cfg;
    cfg.n_particles = 5;
    auto objective = [](const std::vector<double>& x) { return -norm(x); };
    auto swarm = initialize(objective, kAlwaysFeasible, box_repair(b), b, cfg);
    for (auto& p : swarm.particles) {
        p.position.assign(6, 0.0);
        p.best_position.assign(6, 0.0);
        p.best_score = 0.0;
        p.velocity.assign(6, 0.0);
    }
    swarm.global_best_position.assign(6, 0.0);
    swarm.global_best_score = 0.0;

    step(swarm, objective, kAlwaysFeasible, box_repair(b), b, cfg);
    for (const auto& p : swarm.particles)
        for (double x : p.position) CHECK(x == 0.0);
    CHECK(swarm.global_best_score == 0.0);
}

TEST_CASE("optimize: sphere benchmark, monotone trace, bit-identical reruns") {
    Bounds b = box6(-5.0, 5.0);
    PsoConfig cfg;
    cfg.seed = 7;
    auto objective = [](const std::vector<double>& x) { return -norm(x) * norm(x); };

    auto r1 = optimize(objective, kAlwaysFeasible, box_repair(b), b, cfg);
    auto r2 = optimize(objective, kAlwaysFeasible, box_repair(b), b, cfg);

    CHECK(norm(r1.best_position) < 1e-2);
    REQUIRE(r1.trace.size() == static_cast<std::size_t>(cfg.max_iters) + 1);
    for (std::size_t i = 1; i < r1.trace.size(); ++i) CHECK(r1.trace[i] >= r1.trace[i - 1]);
    CHECK(r1.trace == r2.trace);  // bit-identical
    CHECK(r1.best_position == r2.best_position);
}

TEST_CASE("optimize finds the corner of a box under a linear objective") {
    Bounds b = box6(-2.0, 3.0);
    PsoConfig cfg;
    cfg.seed = 4;
    auto objective = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    };
    auto r = optimize(objective, kAlwaysFeasible, box_repair(b), b, cfg);
    for (double v : r.best_position) CHECK(v == doctest::Approx(3.0).epsilon(1e-3));
}

TEST_CASE("optimize on a constant objective returns a feasible point") {
    Bounds b = box6(-1.0, 1.0);
    PsoConfig cfg;
    cfg.n_particles = 10;
    cfg.max_iters = 20;
    auto r = optimize([](const std::vector<double>&) { return 42.0; }, kAlwaysFeasible,
                      box_repair(b), b, cfg);
    CHECK(r.best_score == 42.0);
    for (double v : r.best_position) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("repair keeps every reported best inside the feasible set") {
    // Feasibility: unit simplex-ish cap on the positive part.
    Bounds b = box6(-1.0, 1.0);
    PsoConfig cfg;
    cfg.seed = 12;
    cfg.n_particles = 40;
    cfg.max_iters = 60;
    auto feasible = [](const std::vector<double>& x) {
        double pos = 0.0;
        for (double v : x) pos += std::max(v, 0.0);
        return pos <= 1.0 + 1e-12;
    };
    auto repair = [&](const std::vector<double>& x) {
        std::vector<double> out = x;
        for (double& v : out) v = std::clamp(v, -1.0, 1.0);
        double pos = 0.0;
        for (double v : out) pos += std::max(v, 0.0);
        if (pos > 1.0)
            for (double& v : out)
                if (v > 0.0) v /= pos;
        return out;
    };
    auto objective = [](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x) s += v;
        return s;
    };
    auto r = optimize(objective, feasible, repair, b, cfg);
    CHECK(feasible(r.best_position));
    CHECK(r.best_score <= 1.0 + 1e-9);
    CHECK(r.best_score > 0.9);  // the cap is reachable and optimal
}

TEST_CASE("warm start seeds the first particle") {
    Bounds b = box6(-5.0, 5.0);
    PsoConfig cfg;
    cfg.n_particles = 3;
    std::vector<double> warm(6, 1.25);
    auto swarm = initialize([](const std::vector<double>&) { return 0.0; }, kAlwaysFeasible,
                            box_repair(b), b, cfg, &warm);
    CHECK(swarm.particles[0].position == warm);
}
