#include "wg/condense.hpp"

#include "parallel.hpp"

#include <stdexcept>

namespace wg {

int condensed_total(const DofMap& dm) {
  return dm.nfaces * (dm.vec_face_dim + dm.sca_face_dim);
}

int condensed_face_vector(const DofMap& dm, int face) {
  return face * dm.vec_face_dim;
}

int condensed_face_scalar(const DofMap& dm, int face) {
  return dm.nfaces * dm.vec_face_dim + face * dm.sca_face_dim;
}

int full_to_condensed(const DofMap& dm, int full_dof) {
  if (full_dof >= dm.pb_begin && full_dof < dm.total) {
    const int off = full_dof - dm.pb_begin;
    return condensed_face_scalar(dm, off / dm.sca_face_dim) + off % dm.sca_face_dim;
  }
  if (full_dof >= dm.ub_begin && full_dof < dm.p0_begin) {
    const int off = full_dof - dm.ub_begin;
    return condensed_face_vector(dm, off / dm.vec_face_dim) + off % dm.vec_face_dim;
  }
  throw std::invalid_argument("full_to_condensed: not an interface unknown");
}

std::vector<LocalSolver> build_local_solvers(const Mesh& mesh,
                                             const ProblemData& data,
                                             const Discretization& disc) {
  const DofMap dm = make_dof_map(mesh, disc);
  const int nv = dm.vec_cell_dim + 6 * dm.vec_face_dim;
  const int ns = dm.sca_cell_dim + 6 * dm.sca_face_dim;
  const int ni = dm.vec_cell_dim + dm.sca_cell_dim;
  const int nb = 6 * (dm.vec_face_dim + dm.sca_face_dim);

  // Local index split of the stacked [vector layout; scalar layout] matrix.
  std::vector<int> interior_loc, interface_loc;
  interior_loc.reserve(ni);
  interface_loc.reserve(nb);
  for (int i = 0; i < dm.vec_cell_dim; ++i) interior_loc.push_back(i);
  for (int i = 0; i < dm.sca_cell_dim; ++i) interior_loc.push_back(nv + i);
  for (int i = dm.vec_cell_dim; i < nv; ++i) interface_loc.push_back(i);
  for (int i = dm.sca_cell_dim; i < ns; ++i) interface_loc.push_back(nv + i);

  std::vector<LocalSolver> solvers(mesh.num_cells());
  std::vector<std::string> failure(mesh.num_cells());
  detail::parallel_for(mesh.num_cells(), [&](int c) {
    const LocalBlocks lb = build_local_blocks(mesh, c, data, disc);

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(nv + ns, nv + ns);
    K.topLeftCorner(nv, nv) = lb.A;
    K.topRightCorner(nv, ns) = -lb.B.transpose();
    K.bottomLeftCorner(ns, nv) = lb.B;
    K.bottomRightCorner(ns, ns) = lb.S2;

    Eigen::MatrixXd Kii(ni, ni), Kib(ni, nb), Kbi(nb, ni), Kbb(nb, nb);
    for (int i = 0; i < ni; ++i) {
      for (int j = 0; j < ni; ++j) Kii(i, j) = K(interior_loc[i], interior_loc[j]);
      for (int j = 0; j < nb; ++j) Kib(i, j) = K(interior_loc[i], interface_loc[j]);
    }
    for (int i = 0; i < nb; ++i) {
      for (int j = 0; j < ni; ++j) Kbi(i, j) = K(interface_loc[i], interior_loc[j]);
      for (int j = 0; j < nb; ++j) Kbb(i, j) = K(interface_loc[i], interface_loc[j]);
    }

    Eigen::VectorXd Fi(ni);
    Fi.head(dm.vec_cell_dim) = lb.Fv.head(dm.vec_cell_dim);
    Fi.tail(dm.sca_cell_dim) = lb.Gq.head(dm.sca_cell_dim);

    const Eigen::FullPivLU<Eigen::MatrixXd> lu(Kii);
    if (!lu.isInvertible()) {
      failure[c] = "build_local_solvers: singular interior block on cell " +
                   std::to_string(c);
      return;
    }

    LocalSolver& ls = solvers[c];
    ls.cell = c;
    ls.backsolve = lu.solve(Kib);
    ls.interior_particular = lu.solve(Fi);
    ls.schur = Kbb - Kbi * ls.backsolve;
    ls.rhs_interface = -Kbi * ls.interior_particular;

    ls.interior_full.reserve(ni);
    for (int i = 0; i < dm.vec_cell_dim; ++i) ls.interior_full.push_back(dm.u0(c) + i);
    for (int i = 0; i < dm.sca_cell_dim; ++i) ls.interior_full.push_back(dm.p0(c) + i);

    ls.interface_full.reserve(nb);
    ls.interface_condensed.reserve(nb);
    for (const FaceUse& use : mesh.cell_faces(c)) {
      for (int i = 0; i < dm.vec_face_dim; ++i) {
        ls.interface_full.push_back(dm.ub(use.face) + i);
        ls.interface_condensed.push_back(condensed_face_vector(dm, use.face) + i);
      }
    }
    for (const FaceUse& use : mesh.cell_faces(c)) {
      for (int i = 0; i < dm.sca_face_dim; ++i) {
        ls.interface_full.push_back(dm.pb(use.face) + i);
        ls.interface_condensed.push_back(condensed_face_scalar(dm, use.face) + i);
      }
    }
  });

  for (const std::string& msg : failure) {
    if (!msg.empty()) throw SingularSystemError(msg);
  }
  return solvers;
}

CondensedSystem assemble_condensed(const Mesh& mesh, const Discretization& disc,
                                   const std::vector<LocalSolver>& solvers) {
  CondensedSystem sys;
  sys.dofs = make_dof_map(mesh, disc);
  const int total = condensed_total(sys.dofs);
  sys.rhs = Eigen::VectorXd::Zero(total);

  std::vector<Eigen::Triplet<double>> triplets;
  std::size_t nnz = 0;
  for (const LocalSolver& ls : solvers) nnz += ls.schur.size();
  triplets.reserve(nnz);

  for (const LocalSolver& ls : solvers) {
    const int nb = static_cast<int>(ls.interface_condensed.size());
    for (int i = 0; i < nb; ++i) {
      const int gi = ls.interface_condensed[i];
      for (int j = 0; j < nb; ++j) {
        if (ls.schur(i, j) != 0.) {
          triplets.emplace_back(gi, ls.interface_condensed[j], ls.schur(i, j));
        }
      }
      sys.rhs[gi] += ls.rhs_interface[i];
    }
  }

  sys.matrix.resize(total, total);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

WeakFieldPair solve_condensed_and_recover(const CondensedSystem& condensed,
                                          const std::vector<LocalSolver>& solvers,
                                          const Mesh& mesh,
                                          const Discretization& disc,
                                          const ProblemData& data) {
  const DofMap& dm = condensed.dofs;
  BoundaryValues bv = boundary_values(mesh, dm, disc, data);
  for (int& idx : bv.index) idx = full_to_condensed(dm, idx);

  const ConstrainedSystem reduced =
      eliminate_dofs(condensed.matrix, condensed.rhs, bv.index, bv.value);

  WeakFieldPair solution;
  solution.dofs = dm;
  const Eigen::VectorXd interface =
      solve_eliminated(reduced, &solution.solver_residual);

  solution.coeffs = Eigen::VectorXd::Zero(dm.total);
  for (int f = 0; f < dm.nfaces; ++f) {
    solution.coeffs.segment(dm.ub(f), dm.vec_face_dim) =
        interface.segment(condensed_face_vector(dm, f), dm.vec_face_dim);
    solution.coeffs.segment(dm.pb(f), dm.sca_face_dim) =
        interface.segment(condensed_face_scalar(dm, f), dm.sca_face_dim);
  }
  for (const LocalSolver& ls : solvers) {
    const int nb = static_cast<int>(ls.interface_condensed.size());
    Eigen::VectorXd face_values(nb);
    for (int i = 0; i < nb; ++i) face_values[i] = interface[ls.interface_condensed[i]];
    const Eigen::VectorXd interior = ls.recover(face_values);
    for (std::size_t i = 0; i < ls.interior_full.size(); ++i) {
      solution.coeffs[ls.interior_full[i]] = interior[static_cast<Eigen::Index>(i)];
    }
  }
  return solution;
}

}  // namespace wg
