// Global degree-of-freedom numbering, assembly of the saddle-point system,
// strong imposition of boundary values and the direct sparse solve.

#pragma once

#include "wg/forms.hpp"

#include <Eigen/Sparse>

#include <stdexcept>
#include <vector>

namespace wg {

/// Thrown when a (reduced) global matrix cannot be factorized.
struct SingularSystemError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Global numbering: all vector interiors, then all vector faces, then all
/// scalar interiors, then all scalar faces.  Within each group the blocks are
/// contiguous per cell / face and ordered like the local layouts, which makes
/// the interior/interface split of the elimination step a contiguous one.
struct DofMap {
  int ncells = 0, nfaces = 0;
  int vec_cell_dim = 0, vec_face_dim = 0;
  int sca_cell_dim = 0, sca_face_dim = 0;
  int ub_begin = 0, p0_begin = 0, pb_begin = 0, total = 0;

  int u0(int cell) const { return cell * vec_cell_dim; }
  int ub(int face) const { return ub_begin + face * vec_face_dim; }
  int p0(int cell) const { return p0_begin + cell * sca_cell_dim; }
  int pb(int face) const { return pb_begin + face * sca_face_dim; }
  int vector_total() const { return p0_begin; }
};

DofMap make_dof_map(const Mesh& mesh, const Discretization& disc);

/// Global indices of one cell's local vector layout entries, in layout order.
std::vector<int> vector_layout_dofs(const Mesh& mesh, const DofMap& dm, int cell);
/// Same for the scalar layout (indices land in the scalar block).
std::vector<int> scalar_layout_dofs(const Mesh& mesh, const DofMap& dm, int cell);

/// Assembled saddle-point system
///   [ A   -B^T ] [u]   [ F ]
///   [ B    S2  ] [p] = [ G ],
/// nonsymmetric but with nonnegative quadratic form.
struct SaddleSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  DofMap dofs;
};

SaddleSystem assemble(const Mesh& mesh, const ProblemData& data,
                      const Discretization& disc);

/// Prescribed values of all boundary-face unknowns: componentwise face
/// projections of the tangential trace datum and of the scalar datum.
struct BoundaryValues {
  std::vector<int> index;
  std::vector<double> value;
};

BoundaryValues boundary_values(const Mesh& mesh, const DofMap& dm,
                               const Discretization& disc, const ProblemData& data);

/// System after symmetric elimination of prescribed unknowns; the right-hand
/// side carries the lifted contributions of the prescribed values.
struct ConstrainedSystem {
  Eigen::SparseMatrix<double> matrix;  // free x free
  Eigen::VectorXd rhs;
  std::vector<int> free_index;         // reduced index -> full index
  Eigen::VectorXd full_values;         // prescribed entries filled, rest zero
  int num_constrained = 0;
  DofMap dofs;
};

/// Eliminates the rows and columns listed in `index` (prescribed at `value`)
/// from a square system, lifting the column contributions to the RHS.
ConstrainedSystem eliminate_dofs(const Eigen::SparseMatrix<double>& matrix,
                                 const Eigen::VectorXd& rhs,
                                 const std::vector<int>& index,
                                 const std::vector<double>& value);

ConstrainedSystem apply_boundary(const SaddleSystem& system, const Mesh& mesh,
                                 const Discretization& disc,
                                 const ProblemData& data);

/// Sparse LU solve of an eliminated system; returns the full-length vector
/// (prescribed values merged back in).  Throws SingularSystemError on
/// factorization or solve failure.
Eigen::VectorXd solve_eliminated(const ConstrainedSystem& constrained,
                                 double* residual = nullptr);

/// Discrete solution pair: stacked coefficients in the global numbering plus
/// block accessors.
struct WeakFieldPair {
  Eigen::VectorXd coeffs;
  DofMap dofs;
  double solver_residual = 0.;  // relative residual of the reduced solve

  Eigen::VectorXd u0(int cell) const {
    return coeffs.segment(dofs.u0(cell), dofs.vec_cell_dim);
  }
  Eigen::VectorXd ub(int face) const {
    return coeffs.segment(dofs.ub(face), dofs.vec_face_dim);
  }
  Eigen::VectorXd p0(int cell) const {
    return coeffs.segment(dofs.p0(cell), dofs.sca_cell_dim);
  }
  Eigen::VectorXd pb(int face) const {
    return coeffs.segment(dofs.pb(face), dofs.sca_face_dim);
  }
};

/// Sparse LU solve of the constrained system.  Throws SingularSystemError if
/// the factorization or the solve fails.
WeakFieldPair solve_full(const ConstrainedSystem& constrained);

}  // namespace wg
