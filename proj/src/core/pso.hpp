#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace ctp::pso {

/// Swarm parameters. Defaults: 100 particles, inertia decaying linearly
/// from 0.9 to 0.4, cognitive and social weights both 2.
struct PsoConfig {
    int n_particles = 100;
    double omega_start = 0.9;
    double omega_end = 0.4;
    double c1 = 2.0;
    double c2 = 2.0;
    int max_iters = 200;
    std::uint64_t seed = 0;
    std::vector<double> v_max;  // per-dimension speed cap; empty = 0.5*(hi-lo)
};

struct Bounds {
    std::vector<double> lo;
    std::vector<double> hi;

    std::size_t dims() const { return lo.size(); }
};

/// Maximized objective.
using Objective = std::function<double(const std::vector<double>&)>;
using Feasibility = std::function<bool(const std::vector<double>&)>;
/// Deterministic projection of a point onto the feasible set.
using Repair = std::function<std::vector<double>(const std::vector<double>&)>;

struct Particle {
    std::vector<double> position;
    std::vector<double> velocity;
    std::vector<double> best_position;
    double best_score = 0.0;
    std::mt19937_64 rng;  // per-particle substream; keeps runs order-independent
};

struct Swarm {
    std::vector<Particle> particles;
    std::vector<double> global_best_position;
    double global_best_score = 0.0;
    int iteration = 0;
};

/// Clamp-to-box repair used when the caller has no tighter projection.
Repair box_repair(const Bounds& bounds);

/// Uniform positions repaired to feasibility, small uniform velocities,
/// bests at the starting points. Throws util::NumericError after 1000
/// consecutive repair failures (empty feasible region).
Swarm initialize(const Objective& objective, const Feasibility& feasibility,
                 const Repair& repair, const Bounds& bounds, const PsoConfig& config,
                 const std::vector<double>* warm_start = nullptr);

/// One velocity/position update for every particle:
///   v' = w(t) v + c1 r1 (pbest - x) + c2 r2 (gbest - x),  x' = x + v'
/// with per-dimension velocity clamping and repair of infeasible moves.
void step(Swarm& swarm, const Objective& objective, const Feasibility& feasibility,
          const Repair& repair, const Bounds& bounds, const PsoConfig& config);

struct Result {
    std::vector<double> best_position;
    double best_score = 0.0;
    std::vector<double> trace;  // best score after init and after each iteration
};

Result optimize(const Objective& objective, const Feasibility& feasibility,
                const Repair& repair, const Bounds& bounds, const PsoConfig& config,
                const std::vector<double>* warm_start = nullptr);

void export_trace_csv(const std::string& path, const std::vector<double>& trace);

}  // namespace ctp::pso
