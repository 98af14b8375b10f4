#include "surfreg/registration.hpp"

#include <cmath>
#include <limits>

#include "surfreg/errors.hpp"

namespace surfreg {

void RegistrationConfig::validate() const {
    if (!(alpha >= 0.0)) throw InvalidArgument("alpha must be non-negative");
    if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
    if (steps < 1) throw InvalidArgument("steps must be at least 1");
    if (max_iters < 0) throw InvalidArgument("max_iters must be non-negative");
    if (!(step_eps > 0.0) || !(eps_min > 0.0)) throw InvalidArgument("step sizes must be positive");
    if (!(armijo_c > 0.0 && armijo_c < 1.0)) throw InvalidArgument("armijo_c must lie in (0,1)");
    if (!(armijo_shrink > 0.0 && armijo_shrink < 1.0)) throw InvalidArgument("armijo_shrink must lie in (0,1)");
    if (tol_grad < 0.0 || tol_grad_rel < 0.0 || tol_match < 0.0 || tol_energy_rel < 0.0)
        throw InvalidArgument("tolerances must be non-negative");
    if (!(solver.rel_tol > 0.0)) throw InvalidArgument("solver tolerance must be positive");
}

std::string_view to_string(RegistrationStatus s) {
    switch (s) {
        case RegistrationStatus::Converged: return "Converged";
        case RegistrationStatus::MaxIters: return "MaxIters";
        case RegistrationStatus::StepFailure: return "StepFailure";
    }
    return "?";
}

double l2_matching(const Immersion& q, const Immersion& q_targ) {
    require_compatible(q, q_targ);
    const NodalArray diff = q.coords - q_targ.coords;
    const SparseMatrix mass = parameter_mass_matrix(q.domain());
    return diff.cwiseProduct(mass * diff).sum();
}

namespace {

ShootOptions objective_shoot_options(const RegistrationConfig& cfg) {
    ShootOptions opts;
    opts.solver = cfg.solver;
    opts.final_velocity = false;
    return opts;
}

}  // namespace

EnergyTerms energy_of_path(const GeodesicPath& path, const Immersion& q_targ, const RegistrationConfig& cfg) {
    EnergyTerms e;
    e.kinetic = cfg.kinetic == KineticModel::PathSum ? path_energy(path) : path.kinetic.front();
    e.l2 = l2_matching(path.endpoint(), q_targ);
    e.match = e.l2 / (2.0 * cfg.sigma * cfg.sigma);
    e.total = e.kinetic + e.match;
    return e;
}

EnergyTerms energy(const Immersion& q0, const TangentField& u0, const Immersion& q_targ,
                   const RegistrationConfig& cfg) {
    require_compatible(q0, q_targ);
    const GeodesicPath path = shoot(q0, u0, cfg.steps, cfg.alpha, objective_shoot_options(cfg));
    return energy_of_path(path, q_targ, cfg);
}

ObjectiveGradient objective_and_gradient(const Immersion& q0, const TangentField& u0,
                                         const Immersion& q_targ, const RegistrationConfig& cfg) {
    require_compatible(q0, q_targ);
    ObjectiveGradient out;
    out.path = shoot(q0, u0, cfg.steps, cfg.alpha, objective_shoot_options(cfg));
    out.energy = energy_of_path(out.path, q_targ, cfg);
    AdjointOptions adj_opts;
    adj_opts.solver = cfg.solver;
    adj_opts.kinetic = cfg.kinetic;
    out.gradient = gradient(out.path, backward_sweep(out.path, q_targ, cfg.sigma, adj_opts));
    return out;
}

TangentField initial_velocity(const Immersion& q0, const Immersion& q_targ, const RegistrationConfig& cfg) {
    require_compatible(q0, q_targ);
    if (cfg.init == InitPolicy::Zero) return TangentField::zero(q0.node_count());
    const MetricOperator op(q0, cfg.alpha, cfg.solver);
    const SparseMatrix mass = parameter_mass_matrix(q0.domain());
    return sharp(op, Covector(mass * (q_targ.coords - q0.coords)));
}

RegistrationResult register_surfaces(const Immersion& q0, const Immersion& q_targ,
                                     const RegistrationConfig& cfg, std::optional<TangentField> start) {
    cfg.validate();
    require_compatible(q0, q_targ);
    const MetricOperator op0(q0, cfg.alpha, cfg.solver);

    RegistrationResult result;
    TangentField u = start ? std::move(*start) : initial_velocity(q0, q_targ, cfg);
    require_nodes(q0.domain(), u.values.rows(), "start velocity");

    ObjectiveGradient cur = objective_and_gradient(q0, u, q_targ, cfg);
    double gnorm = norm(op0, cur.gradient);
    const double gnorm0 = gnorm;
    auto record = [&](int iter, double step) {
        result.history.push_back({iter, cur.energy.total, cur.energy.kinetic, cur.energy.match, cur.energy.l2,
                                  gnorm, step});
    };
    record(0, 0.0);

    // Accepted iterates only decrease E under the line search; the fixed-step
    // mode may overshoot, so the best iterate is tracked separately.
    TangentField best_u = u;
    double best_e = cur.energy.total;

    double eps = cfg.step_eps;
    result.status = RegistrationStatus::MaxIters;
    for (int iter = 1;; ++iter) {
        if (gnorm <= cfg.tol_grad || (cfg.tol_grad_rel > 0.0 && gnorm <= cfg.tol_grad_rel * gnorm0)) {
            result.status = RegistrationStatus::Converged;
            result.message = "gradient norm below tolerance";
            break;
        }
        if (cfg.tol_match > 0.0 && cur.energy.l2 <= cfg.tol_match) {
            result.status = RegistrationStatus::Converged;
            result.message = "matching error below tolerance";
            break;
        }
        if (iter > cfg.max_iters) {
            result.message = "maximum number of iterations reached";
            break;
        }

        const double slope = gnorm * gnorm;
        std::optional<ObjectiveGradient> next;
        double accepted = 0.0;
        while (eps >= cfg.eps_min) {
            TangentField trial(u.values - eps * cur.gradient.values);
            try {
                if (cfg.fixed_step) {
                    next = objective_and_gradient(q0, trial, q_targ, cfg);
                } else {
                    const EnergyTerms e = energy(q0, trial, q_targ, cfg);
                    if (e.total <= cur.energy.total - cfg.armijo_c * eps * slope)
                        next = objective_and_gradient(q0, trial, q_targ, cfg);
                }
            } catch (const StepFailure&) {
                if (cfg.fixed_step) throw;
            }
            if (next) {
                u = std::move(trial);
                accepted = eps;
                break;
            }
            eps *= cfg.armijo_shrink;
        }
        if (!next) {
            result.status = RegistrationStatus::StepFailure;
            result.message = "line search found no decreasing step above eps_min";
            break;
        }
        const double previous = cur.energy.total;
        cur = std::move(*next);
        gnorm = norm(op0, cur.gradient);
        ++result.iterations;
        record(iter, accepted);
        if (cur.energy.total < best_e) {
            best_e = cur.energy.total;
            best_u = u;
        }
        if (!cfg.fixed_step) eps *= 2.0;

        if (cfg.tol_energy_rel > 0.0 && previous - cur.energy.total <= cfg.tol_energy_rel * previous) {
            result.status = RegistrationStatus::Converged;
            result.message = "relative energy decrease below tolerance";
            break;
        }
    }

    result.u0 = std::move(best_u);
    ShootOptions opts;
    opts.solver = cfg.solver;
    try {
        result.path = shoot(q0, result.u0, cfg.steps, cfg.alpha, opts);
    } catch (const StepFailure&) {
        result.path = std::move(cur.path);
    }
    return result;
}

}  // namespace surfreg
