#pragma once

#include <vector>

#include "surfreg/fields.hpp"
#include "surfreg/inner_metric.hpp"

namespace surfreg {

/// Discrete geodesic: surfaces q_0..q_N and velocities u_0..u_N, dt = 1/N.
/// `kinetic[i]` is 1/2 <u_i,u_i>_{q_i}; u_N is kept for diagnostics only.
struct GeodesicPath {
    std::vector<Immersion> q;
    std::vector<TangentField> u;
    std::vector<double> kinetic;
    double dt = 0.0;
    double alpha = 0.0;

    int steps() const { return static_cast<int>(q.size()) - 1; }
    const Immersion& endpoint() const { return q.back(); }
};

struct ShootOptions {
    SolverOptions solver;
    /// Also advance the velocity to u_N and record its energy. The objective
    /// never needs it; it costs one extra assembly and solve.
    bool final_velocity = true;
};

/// Integrates
///   q_{i+1} = q_i + dt u_i
///   K(q_{i+1}) u_{i+1} = K(q_i) u_i + dt * dl_dq(q_i, alpha, u_i, u_i)
/// for i = 0..N-1. Throws StepFailure carrying the step index when a surface
/// degenerates or a solve fails.
GeodesicPath shoot(const Immersion& q0, const TangentField& u0, int steps, double alpha,
                   const ShootOptions& options = {});

/// dt * sum_{i<N} 1/2 <u_i,u_i>_{q_i}
double path_energy(const GeodesicPath& path);

/// dt * sum_{i<N} sqrt(<u_i,u_i>_{q_i})
double path_length(const GeodesicPath& path);

/// Builds a path from prescribed velocities (not shot): q_{i+1} = q_i + dt u_i,
/// energies evaluated at each q_i. Useful for diagnostics and tests.
GeodesicPath prescribed_path(const Immersion& q0, const std::vector<TangentField>& velocities,
                             double alpha, const SolverOptions& solver = {});

}  // namespace surfreg
