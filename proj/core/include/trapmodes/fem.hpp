#pragma once

#include "trapmodes/mesh.hpp"
#include "trapmodes/sparse.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>

namespace trapmodes::fem {

template <class Real>
struct AssembledSystem {
    SparseSym<Real> K;
    SparseSym<Real> M;
    std::vector<int> free_index;  // mesh node -> free DOF, -1 for eliminated Dirichlet nodes
    std::vector<int> dof_node;    // free DOF -> mesh node
    int n_free = 0;
    std::uint64_t id = 0;         // identity carried by FieldVectors built for this system
};

template <class Real>
struct FieldVector {
    Vec<Real> values;
    std::uint64_t system_id = 0;
};

// P1 stiffness/mass with exact element integrals; nodes touching a
// Dirichlet-tagged edge are eliminated.
template <class Real>
AssembledSystem<Real> assemble_system(const mesh::Mesh& mesh, const mesh::BoundaryConditions& bc);

template <class Real>
Real rayleigh_quotient(const AssembledSystem<Real>& system, const FieldVector<Real>& v);

template <class Real>
FieldVector<Real> interpolate_function(const mesh::Mesh& mesh, const AssembledSystem<Real>& system,
                                       const std::function<double(double, double)>& f);

template <class Real>
FieldVector<Real> make_field(const AssembledSystem<Real>& system, Vec<Real> values);

// Free-DOF vector scattered to all mesh nodes (zero on Dirichlet nodes).
template <class Real>
std::vector<double> to_nodal(const AssembledSystem<Real>& system, const Vec<Real>& free_values);

// Matrix Market coordinate format ("real symmetric", lower triangle, 1-based).
template <class Real>
void write_matrix_market(std::ostream& out, const SparseSym<Real>& A);

extern template struct AssembledSystem<double>;
extern template struct AssembledSystem<Wide>;

}  // namespace trapmodes::fem
