#pragma once

#include <optional>
#include <string>
#include <vector>

#include "surfreg/adjoint_gradient.hpp"
#include "surfreg/geodesic_shooting.hpp"

namespace surfreg {

enum class InitPolicy {
    Zero,    ///< u_0 = 0
    L2Diff,  ///< u_0 = sharp_{q_0}(M0 (q_targ - q_0))
};

struct RegistrationConfig {
    double alpha = 0.6;
    double sigma = 1.0;
    int steps = 10;
    int max_iters = 200;
    double step_eps = 1.0;        ///< initial step length
    double armijo_c = 1e-4;
    double armijo_shrink = 0.5;
    double eps_min = 1e-12;       ///< smallest step tried before giving up
    double tol_grad = 1e-8;       ///< absolute metric norm of the gradient
    double tol_grad_rel = 0.0;    ///< relative to the initial gradient norm; 0 disables
    double tol_match = 0.0;       ///< stop once l2_matching <= tol_match; 0 disables
    double tol_energy_rel = 0.0;  ///< stop when an accepted step lowers E by less than this fraction; 0 disables
    InitPolicy init = InitPolicy::Zero;
    bool fixed_step = false;      ///< plain u <- u - eps grad without line search
    KineticModel kinetic = KineticModel::PathSum;
    SolverOptions solver;

    /// Throws InvalidArgument on non-positive parameters.
    void validate() const;
};

struct EnergyTerms {
    double total = 0.0;
    double kinetic = 0.0;
    double match = 0.0;  ///< (1/2 sigma^2) * l2_matching
    double l2 = 0.0;     ///< raw l2_matching(q_N, q_targ)
};

struct IterationRecord {
    int iter = 0;
    double e_total = 0.0;
    double e_kinetic = 0.0;
    double e_match = 0.0;
    double l2 = 0.0;
    double grad_norm = 0.0;
    double step = 0.0;  ///< step accepted to reach this iterate (0 for the start)
};

enum class RegistrationStatus { Converged, MaxIters, StepFailure };

std::string_view to_string(RegistrationStatus s);

struct RegistrationResult {
    TangentField u0;
    GeodesicPath path;  ///< shot from u0, including the diagnostic final velocity
    std::vector<IterationRecord> history;
    RegistrationStatus status = RegistrationStatus::MaxIters;
    int iterations = 0;  ///< accepted descent steps
    std::string message;

    const IterationRecord& final_record() const { return history.back(); }
};

/// int_M |q - q_targ|^2 dx with the flat parameter measure.
double l2_matching(const Immersion& q, const Immersion& q_targ);

/// Objective of the registration problem for a given initial velocity.
EnergyTerms energy(const Immersion& q0, const TangentField& u0, const Immersion& q_targ,
                   const RegistrationConfig& cfg);

/// Energy terms of an already shot path.
EnergyTerms energy_of_path(const GeodesicPath& path, const Immersion& q_targ, const RegistrationConfig& cfg);

/// Objective value and metric gradient (at q_0) in one forward/backward pass.
struct ObjectiveGradient {
    EnergyTerms energy;
    TangentField gradient;
    GeodesicPath path;
};
ObjectiveGradient objective_and_gradient(const Immersion& q0, const TangentField& u0,
                                         const Immersion& q_targ, const RegistrationConfig& cfg);

TangentField initial_velocity(const Immersion& q0, const Immersion& q_targ, const RegistrationConfig& cfg);

/// Gradient descent on the initial velocity with Armijo backtracking.
/// Shooting failures raised while evaluating the start point propagate as StepFailure.
RegistrationResult register_surfaces(const Immersion& q0, const Immersion& q_targ,
                                     const RegistrationConfig& cfg,
                                     std::optional<TangentField> start = std::nullopt);

}  // namespace surfreg
