// Element-local elimination of the interior unknowns: per-cell Schur
// complements on the face unknowns, assembly of the reduced interface system
// and recovery of the interior fields after the interface solve.

#pragma once

#include "wg/system.hpp"

#include <Eigen/Dense>

#include <vector>

namespace wg {

/// Numbering of the interface (face-only) system: all tangential face blocks,
/// then all scalar face blocks, ordered by face id.
int condensed_total(const DofMap& dm);
int condensed_face_vector(const DofMap& dm, int face);
int condensed_face_scalar(const DofMap& dm, int face);
/// Maps a face unknown of the full numbering into the interface numbering;
/// throws std::invalid_argument for interior unknowns.
int full_to_condensed(const DofMap& dm, int full_dof);

/// Per-cell elimination data.  The interior block of the local saddle matrix
/// is invertible cell by cell, so the interior pair is a local function of
/// the face unknowns and the cell loads.
struct LocalSolver {
  int cell = -1;
  Eigen::MatrixXd schur;                // interface x interface contribution
  Eigen::VectorXd rhs_interface;        // load after interior elimination
  Eigen::MatrixXd backsolve;            // K_int^-1 * K_coupling
  Eigen::VectorXd interior_particular;  // K_int^-1 * interior load
  std::vector<int> interface_condensed;  // interface-system indices
  std::vector<int> interface_full;       // full-system indices of the same
  std::vector<int> interior_full;        // full-system indices of interiors

  /// Interior coefficients implied by the face values of this cell.
  Eigen::VectorXd recover(const Eigen::VectorXd& interface_values) const {
    return interior_particular - backsolve * interface_values;
  }
};

/// Builds the elimination data of every cell.  Throws SingularSystemError if
/// some interior block cannot be inverted.
std::vector<LocalSolver> build_local_solvers(const Mesh& mesh,
                                             const ProblemData& data,
                                             const Discretization& disc);

/// Interface system accumulated from the per-cell Schur complements.
struct CondensedSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  DofMap dofs;  // of the underlying full system
};

CondensedSystem assemble_condensed(const Mesh& mesh, const Discretization& disc,
                                   const std::vector<LocalSolver>& solvers);

/// Applies the boundary values to the interface system, solves it, recovers
/// the interiors and returns the solution in the full-system layout.
WeakFieldPair solve_condensed_and_recover(const CondensedSystem& condensed,
                                          const std::vector<LocalSolver>& solvers,
                                          const Mesh& mesh,
                                          const Discretization& disc,
                                          const ProblemData& data);

}  // namespace wg
