#pragma once

#include <cstdint>
#include <vector>

#include "surfreg/registration.hpp"

namespace surfreg {

/// Compares the adjoint gradient with central differences of the full
/// discrete objective, (E(u0 + h du) - E(u0 - h du)) / 2h, against the
/// metric pairing <grad, du>_{q0}.
struct DirectionCheck {
    double analytic = 0.0;
    std::vector<double> finite_difference;  ///< one per step size
    std::vector<double> rel_error;          ///< one per step size
    double best_rel_error = 0.0;
    double best_h = 0.0;
};

struct GradientCheckReport {
    std::vector<double> step_sizes;
    std::vector<DirectionCheck> directions;
    double gradient_norm = 0.0;  ///< metric norm of the adjoint gradient

    double worst_best_error() const;
    bool passed(double tolerance) const { return worst_best_error() <= tolerance; }
};

std::vector<double> default_fd_steps();

/// Directions are drawn as i.i.d. standard normal nodal fields from `seed`.
GradientCheckReport gradient_check(const Immersion& q0, const TangentField& u0, const Immersion& q_targ,
                                   const RegistrationConfig& cfg, int directions, std::uint64_t seed,
                                   const std::vector<double>& step_sizes = default_fd_steps());

/// Standard normal nodal field from a seeded engine (deterministic per platform).
NodalArray random_nodal(std::size_t nodes, double scale, std::uint64_t seed);

}  // namespace surfreg
