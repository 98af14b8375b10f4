#pragma once

#include <Eigen/Core>

#include "surfreg/domain_mesh.hpp"

namespace surfreg {

/// n x 3 nodal array, one row per unique mesh node.
using NodalArray = Eigen::Matrix<double, Eigen::Dynamic, 3>;

/// Surface q: M -> R^3 given by nodal positions on a shared domain mesh.
struct Immersion {
    MeshPtr mesh;
    NodalArray coords;

    Immersion() = default;
    Immersion(MeshPtr m, NodalArray c) : mesh(std::move(m)), coords(std::move(c)) {}

    std::size_t node_count() const { return static_cast<std::size_t>(coords.rows()); }
    const DomainMesh& domain() const { return *mesh; }
};

/// Nodal R^3-valued velocity (or adjoint) field.
struct TangentField {
    NodalArray values;

    TangentField() = default;
    explicit TangentField(NodalArray v) : values(std::move(v)) {}
    static TangentField zero(std::size_t n) { return TangentField(NodalArray::Zero(Eigen::Index(n), 3)); }

    std::size_t node_count() const { return static_cast<std::size_t>(values.rows()); }
};

/// Nodal representation of a linear functional on tangent fields; pairs with
/// a TangentField by the nodal (Frobenius) sum.
struct Covector {
    NodalArray values;

    Covector() = default;
    explicit Covector(NodalArray v) : values(std::move(v)) {}
    static Covector zero(std::size_t n) { return Covector(NodalArray::Zero(Eigen::Index(n), 3)); }

    std::size_t node_count() const { return static_cast<std::size_t>(values.rows()); }
};

inline double pair(const Covector& p, const TangentField& u) {
    return p.values.cwiseProduct(u.values).sum();
}

/// Throws MismatchError unless the array has one row per mesh node.
void require_nodes(const DomainMesh& mesh, Eigen::Index rows, const char* what);

/// Throws MismatchError unless both immersions share a discretization.
void require_compatible(const Immersion& a, const Immersion& b);

/// Flat immersion q(x) = (x^1, x^2, 0); only meaningful on the plane sheet.
Immersion identity_immersion(const MeshPtr& mesh);

}  // namespace surfreg
