#include "surfreg/geodesic_shooting.hpp"

#include <cmath>

#include "surfreg/errors.hpp"

namespace surfreg {

GeodesicPath shoot(const Immersion& q0, const TangentField& u0, int steps, double alpha,
                   const ShootOptions& options) {
    if (steps < 1) throw InvalidArgument("number of time steps must be at least 1");
    require_nodes(q0.domain(), u0.values.rows(), "initial velocity");

    GeodesicPath path;
    path.dt = 1.0 / steps;
    path.alpha = alpha;
    path.q.reserve(std::size_t(steps) + 1);
    path.u.reserve(std::size_t(steps) + 1);
    path.q.push_back(q0);
    path.u.push_back(u0);

    const double dt = path.dt;
    const int last = options.final_velocity ? steps : steps - 1;
    MetricOperator op = [&] {
        try {
            return MetricOperator(q0, alpha, options.solver);
        } catch (const Error& e) {
            throw StepFailure(0, e.what());
        }
    }();

    for (int i = 0; i < steps; ++i) {
        const TangentField& ui = path.u[std::size_t(i)];
        path.kinetic.push_back(0.5 * inner_product(op, ui, ui));
        path.q.emplace_back(q0.mesh, path.q[std::size_t(i)].coords + dt * ui.values);
        if (i >= last) break;
        try {
            NodalArray rhs = op.apply(ui.values);
            rhs += dt * dl_dq(op, ui, ui).values;
            MetricOperator next(path.q.back(), alpha, options.solver);
            path.u.emplace_back(next.solve(rhs));
            op = std::move(next);
        } catch (const Error& e) {
            throw StepFailure(i + 1, e.what());
        }
    }
    if (options.final_velocity) path.kinetic.push_back(0.5 * inner_product(op, path.u.back(), path.u.back()));
    return path;
}

double path_energy(const GeodesicPath& path) {
    double sum = 0.0;
    for (int i = 0; i < path.steps(); ++i) sum += path.kinetic[std::size_t(i)];
    return path.dt * sum;
}

double path_length(const GeodesicPath& path) {
    double sum = 0.0;
    for (int i = 0; i < path.steps(); ++i) sum += std::sqrt(2.0 * path.kinetic[std::size_t(i)]);
    return path.dt * sum;
}

GeodesicPath prescribed_path(const Immersion& q0, const std::vector<TangentField>& velocities,
                             double alpha, const SolverOptions& solver) {
    if (velocities.empty()) throw InvalidArgument("prescribed path needs at least one velocity");
    GeodesicPath path;
    const auto steps = velocities.size();
    path.dt = 1.0 / double(steps);
    path.alpha = alpha;
    path.q.push_back(q0);
    for (std::size_t i = 0; i < steps; ++i) {
        const MetricOperator op(path.q[i], alpha, solver);
        path.u.push_back(velocities[i]);
        path.kinetic.push_back(0.5 * inner_product(op, velocities[i], velocities[i]));
        path.q.emplace_back(q0.mesh, path.q[i].coords + path.dt * velocities[i].values);
    }
    return path;
}

}  // namespace surfreg
