#pragma once

#include <array>
#include <vector>

#include "surfreg/registration.hpp"

namespace surfreg {

/// Riemannian angle in degrees between two tangent fields at q:
/// arccos(<u,v>_q / (|u|_q |v|_q)), argument clamped to [-1,1].
/// Throws InvalidArgument if either field has zero norm.
double geodesic_angle(const MetricOperator& op, const TangentField& u, const TangentField& v);
double geodesic_angle(const TangentField& u, const TangentField& v, const Immersion& q, double alpha);

/// Geodesic triangle with vertices A, B, C (index 0, 1, 2).
struct TriangleReport {
    std::array<double, 3> angles{};        ///< degrees at A, B, C
    double angle_sum = 0.0;
    /// Edge lengths AB, BC, CA measured on the forward registrations, and the
    /// same edges measured backwards (BA, CB, AC).
    std::array<double, 3> side_lengths{};
    std::array<double, 3> reverse_side_lengths{};
    std::array<Immersion, 3> midpoints;  ///< geodesic midpoints of AB, BC, CA
    /// Registrations indexed [from][to]; diagonal entries unused.
    std::array<std::array<RegistrationResult, 3>, 3> registrations;

    bool all_converged() const;
};

/// Inner product used for the vertex angles: the metric at the vertex, or
/// its alpha = 0 part (surface L^2).
enum class AngleMetric { Metric, L2 };

/// Registers every ordered pair of vertices and measures the triangle.
/// Requires an even number of time steps (midpoint at N/2).
TriangleReport triangle_experiment(const Immersion& qa, const Immersion& qb, const Immersion& qc,
                                   const RegistrationConfig& cfg, AngleMetric angle = AngleMetric::Metric);

enum class MeanStatus { Converged, MaxOuter };

std::string_view to_string(MeanStatus s);

struct MeanResult {
    Immersion mean;
    int iterations = 0;  ///< registration rounds performed
    std::vector<double> velocity_norms;
    std::vector<TangentField> per_shape_velocities;
    std::vector<RegistrationStatus> per_shape_status;
    MeanStatus status = MeanStatus::MaxOuter;
};

/// Karcher mean by iterated register/average/shoot. Each round registers the
/// current mean to every shape, averages the initial velocities with weight
/// 1/n and stops once the metric norm of the average is at most mean_tol;
/// otherwise the mean moves to the endpoint of the geodesic shot with the
/// average. `jobs > 1` runs the registrations of a round concurrently.
MeanResult karcher_mean(const std::vector<Immersion>& shapes, const Immersion& init,
                        const RegistrationConfig& cfg, double mean_tol, int max_outer, int jobs = 1);

}  // namespace surfreg
