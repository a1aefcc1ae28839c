#include "pso.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "util.hpp"

namespace ctp::pso {

using util::NumericError;

namespace {

void validate(const Bounds& bounds, const PsoConfig& config) {
    if (bounds.lo.size() != bounds.hi.size() || bounds.lo.empty())
        throw std::invalid_argument("bad bounds");
    for (std::size_t k = 0; k < bounds.dims(); ++k)
        if (bounds.lo[k] > bounds.hi[k]) throw std::invalid_argument("lo > hi in bounds");
    if (config.n_particles < 2) throw std::invalid_argument("need at least 2 particles");
    if (config.max_iters < 1) throw std::invalid_argument("need at least 1 iteration");
    if (!(config.omega_start >= config.omega_end && config.omega_end > 0.0))
        throw std::invalid_argument("inertia schedule must decay to a positive value");
}

std::vector<double> speed_caps(const Bounds& bounds, const PsoConfig& config) {
    if (!config.v_max.empty()) {
        if (config.v_max.size() != bounds.dims())
            throw std::invalid_argument("v_max dimension mismatch");
        return config.v_max;
    }
    std::vector<double> caps(bounds.dims());
    for (std::size_t k = 0; k < caps.size(); ++k) caps[k] = 0.5 * (bounds.hi[k] - bounds.lo[k]);
    return caps;
}

}  // namespace

Repair box_repair(const Bounds& bounds) {
    return [bounds](const std::vector<double>& x) {
        std::vector<double> out = x;
        for (std::size_t k = 0; k < out.size(); ++k)
            out[k] = std::clamp(out[k], bounds.lo[k], bounds.hi[k]);
        return out;
    };
}

Swarm initialize(const Objective& objective, const Feasibility& feasibility,
                 const Repair& repair, const Bounds& bounds, const PsoConfig& config,
                 const std::vector<double>* warm_start) {
    validate(bounds, config);
    const std::size_t dims = bounds.dims();

    Swarm swarm;
    swarm.particles.resize(config.n_particles);
    swarm.global_best_score = -std::numeric_limits<double>::infinity();

    for (int i = 0; i < config.n_particles; ++i) {
        Particle& p = swarm.particles[i];
        p.rng.seed(util::substream(config.seed, static_cast<std::uint64_t>(i)));
        std::uniform_real_distribution<double> unit(0.0, 1.0);

        bool placed = false;
        if (i == 0 && warm_start != nullptr) {
            p.position = repair(*warm_start);
            placed = feasibility(p.position);
        }
        int failures = 0;
        while (!placed) {
            p.position.resize(dims);
            for (std::size_t k = 0; k < dims; ++k)
                p.position[k] = bounds.lo[k] + unit(p.rng) * (bounds.hi[k] - bounds.lo[k]);
            p.position = repair(p.position);
            placed = feasibility(p.position);
            if (!placed && ++failures >= 1000)
                throw NumericError("could not place a feasible particle after 1000 repairs");
        }

        p.velocity.resize(dims);
        for (std::size_t k = 0; k < dims; ++k) {
            double span = 0.1 * (bounds.hi[k] - bounds.lo[k]);
            p.velocity[k] = (2.0 * unit(p.rng) - 1.0) * span;
        }

        p.best_position = p.position;
        p.best_score = objective(p.position);
        if (p.best_score > swarm.global_best_score) {
            swarm.global_best_score = p.best_score;
            swarm.global_best_position = p.best_position;
        }
    }
    return swarm;
}

void step(Swarm& swarm, const Objective& objective, const Feasibility& feasibility,
          const Repair& repair, const Bounds& bounds, const PsoConfig& config) {
    const std::size_t dims = bounds.dims();
    const std::vector<double> caps = speed_caps(bounds, config);

    const double t = static_cast<double>(swarm.iteration);
    const double frac = (config.max_iters > 1) ? t / (config.max_iters - 1) : 0.0;
    const double omega =
        config.omega_start + (config.omega_end - config.omega_start) * std::min(frac, 1.0);

    for (Particle& p : swarm.particles) {
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (std::size_t k = 0; k < dims; ++k) {
            const double r1 = unit(p.rng);
            const double r2 = unit(p.rng);
            double v = omega * p.velocity[k] + config.c1 * r1 * (p.best_position[k] - p.position[k]) +
                       config.c2 * r2 * (swarm.global_best_position[k] - p.position[k]);
            p.velocity[k] = std::clamp(v, -caps[k], caps[k]);
        }
        for (std::size_t k = 0; k < dims; ++k) p.position[k] += p.velocity[k];
        p.position = repair(p.position);

        if (feasibility(p.position)) {
            const double score = objective(p.position);
            if (score > p.best_score) {
                p.best_score = score;
                p.best_position = p.position;
            }
        }
    }

    for (const Particle& p : swarm.particles) {
        if (p.best_score > swarm.global_best_score) {
            swarm.global_best_score = p.best_score;
            swarm.global_best_position = p.best_position;
        }
    }
    ++swarm.iteration;
}

Result optimize(const Objective& objective, const Feasibility& feasibility,
                const Repair& repair, const Bounds& bounds, const PsoConfig& config,
                const std::vector<double>* warm_start) {
    Swarm swarm = initialize(objective, feasibility, repair, bounds, config, warm_start);
    Result result;
    result.trace.reserve(config.max_iters + 1);
    result.trace.push_back(swarm.global_best_score);
    for (int t = 0; t < config.max_iters; ++t) {
        step(swarm, objective, feasibility, repair, bounds, config);
        result.trace.push_back(swarm.global_best_score);
    }
    result.best_position = swarm.global_best_position;
    result.best_score = swarm.global_best_score;
    return result;
}

void export_trace_csv(const std::string& path, const std::vector<double>& trace) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw util::DataError("cannot write " + path);
    out << "iteration,best_score\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out << i << ',' << util::format_double(trace[i]) << '\n';
}

}  // namespace ctp::pso
