#include "surfreg/gradient_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "surfreg/errors.hpp"

namespace surfreg {

double GradientCheckReport::worst_best_error() const {
    double worst = 0.0;
    for (const auto& d : directions) worst = std::max(worst, d.best_rel_error);
    return worst;
}

std::vector<double> default_fd_steps() { return {1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7}; }

NodalArray random_nodal(std::size_t nodes, double scale, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    NodalArray out(Eigen::Index(nodes), 3);
    for (Eigen::Index a = 0; a < out.rows(); ++a)
        for (int k = 0; k < 3; ++k) out(a, k) = scale * normal(engine);
    return out;
}

GradientCheckReport gradient_check(const Immersion& q0, const TangentField& u0, const Immersion& q_targ,
                                   const RegistrationConfig& cfg, int directions, std::uint64_t seed,
                                   const std::vector<double>& step_sizes) {
    if (directions < 1 || step_sizes.empty()) throw InvalidArgument("gradient check needs directions and step sizes");
    cfg.validate();
    const ObjectiveGradient og = objective_and_gradient(q0, u0, q_targ, cfg);
    const MetricOperator op0(q0, cfg.alpha, cfg.solver);

    GradientCheckReport report;
    report.step_sizes = step_sizes;
    report.gradient_norm = norm(op0, og.gradient);

    std::mt19937_64 seeds(seed);
    for (int d = 0; d < directions; ++d) {
        const TangentField du(random_nodal(q0.node_count(), 1.0, seeds()));
        DirectionCheck check;
        check.analytic = inner_product(op0, og.gradient, du);
        check.best_rel_error = std::numeric_limits<double>::infinity();
        for (double h : step_sizes) {
            const double plus = energy(q0, TangentField(u0.values + h * du.values), q_targ, cfg).total;
            const double minus = energy(q0, TangentField(u0.values - h * du.values), q_targ, cfg).total;
            const double fd = (plus - minus) / (2.0 * h);
            const double scale = std::max(std::abs(check.analytic), std::abs(fd));
            const double err = scale > 0.0 ? std::abs(fd - check.analytic) / scale : 0.0;
            check.finite_difference.push_back(fd);
            check.rel_error.push_back(err);
            if (err < check.best_rel_error) {
                check.best_rel_error = err;
                check.best_h = h;
            }
        }
        report.directions.push_back(std::move(check));
    }
    return report;
}

}  // namespace surfreg
