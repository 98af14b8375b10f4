#pragma once

#include <vector>

#include "surfreg/geodesic_shooting.hpp"

namespace surfreg {

/// Which discretization of the kinetic term 1/2 int <u_t,u_t> dt the objective uses.
enum class KineticModel {
    /// dt * sum_{i<N} 1/2 <u_i,u_i>_{q_i}; the energy actually carried by the discrete path.
    PathSum,
    /// 1/2 <u_0,u_0>_{q_0}; equal to PathSum for exact geodesics, and the model for
    /// which the backward recursion is homogeneous.
    InitialMetric,
};

/// Adjoint variables indexed by time step 0..N.
/// `u_hat[N]` is zero; `v_hat_flat[i]` is the covector K(q_i) v_hat[i].
struct AdjointState {
    std::vector<TangentField> u_hat;
    std::vector<TangentField> v_hat;
    std::vector<Covector> v_hat_flat;
};

struct AdjointOptions {
    SolverOptions solver;
    KineticModel kinetic = KineticModel::PathSum;
};

/// Integrates the adjoint equations backwards from
///   u_hat_N = 0,   K(q_N) v_hat_N = -(1/sigma^2) M0 (q_N - q_targ)
/// where M0 is the parameter-domain mass matrix. For i = N-1..0, with
/// D(q;a,b) = dl_dq, H(q;a,w) = d2l_dq2 and K'(q;w) the derivative of the
/// metric along w (metric_derivative):
///   K_i u_hat_i = K_i u_hat_{i+1} + dt K_{i+1} v_hat_{i+1} + dt K'(q_i; u_hat_{i+1}) u_i + s_i
///   K_i v_hat_i = K_{i+1} v_hat_{i+1} + 2 D(q_i; u_hat_{i+1} - u_hat_i, u_i)
///                 + dt H(q_i; u_i, u_hat_{i+1}) + r_i
/// The source terms s_i, r_i vanish for KineticModel::InitialMetric. For
/// PathSum they carry the derivative of the discrete energy drift
/// dt*sum 1/2<u_i,u_i>_{q_i} - 1/2<u_0,u_0>_{q_0}:
///   s_i = -dt K_i u_i + [i = 0] K_0 u_0,   r_i = -dt D(q_i; u_i, u_i).
/// The term dt K'(q_i; u_hat_{i+1}) u_i is the covector in du of
/// 2 dt < D(q_i; u_i, du), u_hat_{i+1} >.
/// Either way the metric gradient at q_0 of the discrete objective is u_0 - u_hat_0.
AdjointState backward_sweep(const GeodesicPath& path, const Immersion& q_targ, double sigma,
                            const AdjointOptions& options = {});

/// u_0 - u_hat_0
TangentField gradient(const GeodesicPath& path, const AdjointState& adjoint);

}  // namespace surfreg
