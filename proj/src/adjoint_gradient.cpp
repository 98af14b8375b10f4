#include "surfreg/adjoint_gradient.hpp"

#include "surfreg/errors.hpp"

namespace surfreg {

AdjointState backward_sweep(const GeodesicPath& path, const Immersion& q_targ, double sigma,
                            const AdjointOptions& options) {
    if (!(sigma > 0.0)) throw InvalidArgument("sigma must be positive");
    const int steps = path.steps();
    if (steps < 1 || path.u.size() < std::size_t(steps)) throw InvalidArgument("incomplete geodesic path");
    require_compatible(path.q.front(), q_targ);

    const std::size_t n = path.q.front().node_count();
    const double dt = path.dt;
    const double alpha = path.alpha;
    const bool drift = options.kinetic == KineticModel::PathSum;

    AdjointState adj;
    adj.u_hat.assign(std::size_t(steps) + 1, TangentField::zero(n));
    adj.v_hat.assign(std::size_t(steps) + 1, TangentField::zero(n));
    adj.v_hat_flat.assign(std::size_t(steps) + 1, Covector::zero(n));

    const auto qN = std::size_t(steps);
    {
        const MetricOperator opN(path.q[qN], alpha, options.solver);
        const SparseMatrix mass = parameter_mass_matrix(q_targ.domain());
        NodalArray a = -(1.0 / (sigma * sigma)) * (mass * (path.q[qN].coords - q_targ.coords));
        adj.v_hat[qN] = TangentField(opN.solve(a));
        adj.v_hat_flat[qN] = Covector(std::move(a));
    }

    for (int i = steps - 1; i >= 0; --i) {
        const auto s = std::size_t(i);
        const MetricOperator op(path.q[s], alpha, options.solver);
        const TangentField& ui = path.u[s];
        const TangentField& uh_next = adj.u_hat[s + 1];
        const NodalArray& a_next = adj.v_hat_flat[s + 1].values;

        NodalArray rhs_u = op.apply(uh_next.values) + dt * a_next;
        rhs_u += dt * metric_derivative(op, uh_next, ui).values;
        if (drift) {
            const double w = (i == 0 ? 1.0 : 0.0) - dt;
            rhs_u += w * op.apply(ui.values);
        }
        adj.u_hat[s] = TangentField(op.solve(rhs_u));

        const TangentField diff(uh_next.values - adj.u_hat[s].values);
        NodalArray a = a_next + 2.0 * dl_dq(op, diff, ui).values;
        a += dt * d2l_dq2(op, ui, uh_next).values;
        if (drift) a -= dt * dl_dq(op, ui, ui).values;
        adj.v_hat[s] = TangentField(op.solve(a));
        adj.v_hat_flat[s] = Covector(std::move(a));
    }
    return adj;
}

TangentField gradient(const GeodesicPath& path, const AdjointState& adjoint) {
    if (path.u.empty() || adjoint.u_hat.empty()) throw InvalidArgument("empty path or adjoint state");
    return TangentField(path.u.front().values - adjoint.u_hat.front().values);
}

}  // namespace surfreg
