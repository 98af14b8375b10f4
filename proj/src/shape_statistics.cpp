#include "surfreg/shape_statistics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <optional>

#include "surfreg/errors.hpp"

namespace surfreg {

double geodesic_angle(const MetricOperator& op, const TangentField& u, const TangentField& v) {
    const double uu = inner_product(op, u, u);
    const double vv = inner_product(op, v, v);
    if (!(uu > 0.0) || !(vv > 0.0)) throw InvalidArgument("angle undefined for a zero velocity");
    const double c = std::clamp(inner_product(op, u, v) / std::sqrt(uu * vv), -1.0, 1.0);
    return std::acos(c) * 180.0 / std::numbers::pi;
}

double geodesic_angle(const TangentField& u, const TangentField& v, const Immersion& q, double alpha) {
    return geodesic_angle(MetricOperator(q, alpha), u, v);
}

bool TriangleReport::all_converged() const {
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (a != b && registrations[a][b].status != RegistrationStatus::Converged) return false;
    return true;
}

TriangleReport triangle_experiment(const Immersion& qa, const Immersion& qb, const Immersion& qc,
                                   const RegistrationConfig& cfg, AngleMetric angle) {
    if (cfg.steps % 2 != 0) throw InvalidArgument("triangle experiment needs an even number of time steps");
    require_compatible(qa, qb);
    require_compatible(qa, qc);
    const std::array<const Immersion*, 3> v{&qa, &qb, &qc};

    TriangleReport report;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            if (a != b) report.registrations[a][b] = register_surfaces(*v[a], *v[b], cfg);

    for (int a = 0; a < 3; ++a) {
        const int b = (a + 1) % 3;
        const int c = (a + 2) % 3;
        const MetricOperator op(*v[a], angle == AngleMetric::Metric ? cfg.alpha : 0.0, cfg.solver);
        report.angles[a] = geodesic_angle(op, report.registrations[a][b].u0, report.registrations[a][c].u0);
        report.side_lengths[a] = path_length(report.registrations[a][b].path);
        report.reverse_side_lengths[a] = path_length(report.registrations[b][a].path);
        report.midpoints[a] = report.registrations[a][b].path.q[std::size_t(cfg.steps / 2)];
    }
    report.angle_sum = report.angles[0] + report.angles[1] + report.angles[2];
    return report;
}

std::string_view to_string(MeanStatus s) { return s == MeanStatus::Converged ? "Converged" : "MaxOuter"; }

MeanResult karcher_mean(const std::vector<Immersion>& shapes, const Immersion& init,
                        const RegistrationConfig& cfg, double mean_tol, int max_outer, int jobs) {
    if (shapes.empty()) throw InvalidArgument("karcher mean needs at least one shape");
    if (!(mean_tol >= 0.0) || max_outer < 1) throw InvalidArgument("invalid karcher mean tolerances");
    for (const auto& s : shapes) require_compatible(init, s);
    cfg.validate();

    MeanResult result;
    result.mean = init;
    const std::size_t count = shapes.size();
    // Velocities of the previous round minus the step taken: a first-order
    // guess for the registrations from the moved mean.
    std::vector<std::optional<TangentField>> starts(count);
    for (int outer = 0; outer < max_outer; ++outer) {
        std::vector<RegistrationResult> regs(count);
        if (jobs > 1) {
            for (std::size_t start = 0; start < count; start += std::size_t(jobs)) {
                std::vector<std::future<RegistrationResult>> pending;
                const std::size_t stop = std::min(count, start + std::size_t(jobs));
                for (std::size_t j = start; j < stop; ++j)
                    pending.push_back(std::async(std::launch::async, [&, j] {
                        return register_surfaces(result.mean, shapes[j], cfg, starts[j]);
                    }));
                for (std::size_t j = start; j < stop; ++j) regs[j] = pending[j - start].get();
            }
        } else {
            for (std::size_t j = 0; j < count; ++j) regs[j] = register_surfaces(result.mean, shapes[j], cfg, starts[j]);
        }

        NodalArray sum = NodalArray::Zero(Eigen::Index(init.node_count()), 3);
        result.per_shape_velocities.clear();
        result.per_shape_status.clear();
        for (auto& r : regs) {
            sum += r.u0.values;
            result.per_shape_status.push_back(r.status);
            result.per_shape_velocities.push_back(std::move(r.u0));
        }
        const TangentField average(sum / double(count));
        const MetricOperator op(result.mean, cfg.alpha, cfg.solver);
        const double n = norm(op, average);
        result.velocity_norms.push_back(n);
        result.iterations = outer + 1;
        if (n <= mean_tol) {
            result.status = MeanStatus::Converged;
            break;
        }
        for (std::size_t j = 0; j < count; ++j)
            starts[j] = TangentField(result.per_shape_velocities[j].values - average.values);
        ShootOptions opts;
        opts.solver = cfg.solver;
        opts.final_velocity = false;
        result.mean = Immersion(init.mesh, shoot(result.mean, average, cfg.steps, cfg.alpha, opts).endpoint().coords);
    }
    return result;
}

}  // namespace surfreg
