#include "wg/system.hpp"

#include "parallel.hpp"

#include <Eigen/SparseLU>
#ifdef WG_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include <stdexcept>

namespace wg {

DofMap make_dof_map(const Mesh& mesh, const Discretization& disc) {
  const WeakVectorLayout vlay = vector_layout(disc);
  const WeakScalarLayout slay = scalar_layout(disc);
  DofMap dm;
  dm.ncells = mesh.num_cells();
  dm.nfaces = mesh.num_faces();
  dm.vec_cell_dim = vlay.interior_dim();
  dm.vec_face_dim = vlay.face_dim();
  dm.sca_cell_dim = slay.interior_dim();
  dm.sca_face_dim = slay.face_dim();
  dm.ub_begin = dm.ncells * dm.vec_cell_dim;
  dm.p0_begin = dm.ub_begin + dm.nfaces * dm.vec_face_dim;
  dm.pb_begin = dm.p0_begin + dm.ncells * dm.sca_cell_dim;
  dm.total = dm.pb_begin + dm.nfaces * dm.sca_face_dim;
  return dm;
}

std::vector<int> vector_layout_dofs(const Mesh& mesh, const DofMap& dm, int cell) {
  std::vector<int> dofs;
  dofs.reserve(dm.vec_cell_dim + 6 * dm.vec_face_dim);
  for (int i = 0; i < dm.vec_cell_dim; ++i) dofs.push_back(dm.u0(cell) + i);
  for (const FaceUse& use : mesh.cell_faces(cell)) {
    for (int i = 0; i < dm.vec_face_dim; ++i) dofs.push_back(dm.ub(use.face) + i);
  }
  return dofs;
}

std::vector<int> scalar_layout_dofs(const Mesh& mesh, const DofMap& dm, int cell) {
  std::vector<int> dofs;
  dofs.reserve(dm.sca_cell_dim + 6 * dm.sca_face_dim);
  for (int i = 0; i < dm.sca_cell_dim; ++i) dofs.push_back(dm.p0(cell) + i);
  for (const FaceUse& use : mesh.cell_faces(cell)) {
    for (int i = 0; i < dm.sca_face_dim; ++i) dofs.push_back(dm.pb(use.face) + i);
  }
  return dofs;
}

SaddleSystem assemble(const Mesh& mesh, const ProblemData& data,
                      const Discretization& disc) {
  SaddleSystem sys;
  sys.dofs = make_dof_map(mesh, disc);
  const int ncells = mesh.num_cells();

  // Local blocks are computed into per-cell slots (parallelizable), the
  // scatter below runs in cell order so the triplet list is reproducible.
  std::vector<LocalBlocks> blocks(ncells);
  detail::parallel_for(ncells, [&](int c) {
    blocks[c] = build_local_blocks(mesh, c, data, disc);
  });

  const int nv = sys.dofs.vec_cell_dim + 6 * sys.dofs.vec_face_dim;
  const int ns = sys.dofs.sca_cell_dim + 6 * sys.dofs.sca_face_dim;
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(ncells) *
                   (nv * nv + 2 * ns * nv + ns * ns) / 2);
  sys.rhs = Eigen::VectorXd::Zero(sys.dofs.total);

  for (int c = 0; c < ncells; ++c) {
    const LocalBlocks& lb = blocks[c];
    const std::vector<int> vdofs = vector_layout_dofs(mesh, sys.dofs, c);
    const std::vector<int> sdofs = scalar_layout_dofs(mesh, sys.dofs, c);
    for (int i = 0; i < nv; ++i) {
      for (int j = 0; j < nv; ++j) {
        if (lb.A(i, j) != 0.) triplets.emplace_back(vdofs[i], vdofs[j], lb.A(i, j));
      }
    }
    for (int q = 0; q < ns; ++q) {
      for (int j = 0; j < nv; ++j) {
        const double bqj = lb.B(q, j);
        if (bqj == 0.) continue;
        triplets.emplace_back(sdofs[q], vdofs[j], bqj);   // +B
        triplets.emplace_back(vdofs[j], sdofs[q], -bqj);  // -B^T
      }
    }
    for (int q = 0; q < ns; ++q) {
      for (int r = 0; r < ns; ++r) {
        if (lb.S2(q, r) != 0.) triplets.emplace_back(sdofs[q], sdofs[r], lb.S2(q, r));
      }
    }
    for (int i = 0; i < nv; ++i) sys.rhs[vdofs[i]] += lb.Fv[i];
    for (int q = 0; q < ns; ++q) sys.rhs[sdofs[q]] += lb.Gq[q];
  }

  sys.matrix.resize(sys.dofs.total, sys.dofs.total);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

BoundaryValues boundary_values(const Mesh& mesh, const DofMap& dm,
                               const Discretization& disc,
                               const ProblemData& data) {
  if (!data.u_boundary || !data.p_boundary) {
    throw std::invalid_argument("boundary_values: problem data lacks trace data");
  }
  BoundaryValues bv;
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    if (!face.boundary) continue;
    const FaceQuadRule fq = face_quadrature(face, disc.quad());

    // Tangential trace, componentwise in the face frame.
    const FaceBasis vec_basis(disc.k, face);
    const Vec3 tangents[2] = {face.t1, face.t2};
    for (int c = 0; c < 2; ++c) {
      const Vec3 t = tangents[c];
      const Eigen::VectorXd coeffs = project_face(
          [&](const Vec3& x) { return data.u_boundary(x).dot(t); }, face,
          vec_basis, fq);
      for (int i = 0; i < coeffs.size(); ++i) {
        bv.index.push_back(dm.ub(f) + c * vec_basis.dim() + static_cast<int>(i));
        bv.value.push_back(coeffs[i]);
      }
    }

    // Scalar trace.
    const FaceBasis sca_basis(disc.scalar_face_degree(), face);
    const Eigen::VectorXd coeffs = project_face(data.p_boundary, face, sca_basis, fq);
    for (int i = 0; i < coeffs.size(); ++i) {
      bv.index.push_back(dm.pb(f) + static_cast<int>(i));
      bv.value.push_back(coeffs[i]);
    }
  }
  return bv;
}

ConstrainedSystem eliminate_dofs(const Eigen::SparseMatrix<double>& matrix,
                                 const Eigen::VectorXd& rhs,
                                 const std::vector<int>& index,
                                 const std::vector<double>& value) {
  const int n = static_cast<int>(matrix.rows());
  ConstrainedSystem cs;
  cs.full_values = Eigen::VectorXd::Zero(n);
  std::vector<char> constrained(n, 0);
  for (std::size_t i = 0; i < index.size(); ++i) {
    constrained[index[i]] = 1;
    cs.full_values[index[i]] = value[i];
  }
  cs.num_constrained = static_cast<int>(index.size());

  std::vector<int> reduced(n, -1);
  cs.free_index.reserve(n - cs.num_constrained);
  for (int i = 0; i < n; ++i) {
    if (!constrained[i]) {
      reduced[i] = static_cast<int>(cs.free_index.size());
      cs.free_index.push_back(i);
    }
  }
  const int nfree = static_cast<int>(cs.free_index.size());

  // Symmetric elimination: keep free rows/columns, move prescribed-column
  // contributions to the right-hand side.
  cs.rhs.resize(nfree);
  for (int i = 0; i < nfree; ++i) cs.rhs[i] = rhs[cs.free_index[i]];

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(matrix.nonZeros());
  for (int col = 0; col < matrix.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(matrix, col); it; ++it) {
      const int i = static_cast<int>(it.row());
      if (constrained[i]) continue;
      if (constrained[col]) {
        cs.rhs[reduced[i]] -= it.value() * cs.full_values[col];
      } else {
        triplets.emplace_back(reduced[i], reduced[col], it.value());
      }
    }
  }
  cs.matrix.resize(nfree, nfree);
  cs.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return cs;
}

ConstrainedSystem apply_boundary(const SaddleSystem& system, const Mesh& mesh,
                                 const Discretization& disc,
                                 const ProblemData& data) {
  const BoundaryValues bv = boundary_values(mesh, system.dofs, disc, data);
  ConstrainedSystem cs = eliminate_dofs(system.matrix, system.rhs, bv.index, bv.value);
  cs.dofs = system.dofs;
  return cs;
}

Eigen::VectorXd solve_eliminated(const ConstrainedSystem& constrained,
                                 double* residual) {
  Eigen::VectorXd full = constrained.full_values;
  if (residual) *residual = 0.;
  if (constrained.free_index.empty()) return full;  // fully prescribed

#ifdef WG_HAVE_UMFPACK
  Eigen::UmfPackLU<Eigen::SparseMatrix<double>> lu;
#else
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
#endif
  lu.compute(constrained.matrix);
  if (lu.info() != Eigen::Success) {
    throw SingularSystemError("solve_eliminated: sparse LU factorization failed");
  }
  const Eigen::VectorXd x = lu.solve(constrained.rhs);
  if (lu.info() != Eigen::Success) {
    throw SingularSystemError("solve_eliminated: sparse LU solve failed");
  }
  if (residual) {
    *residual = (constrained.matrix * x - constrained.rhs).norm() /
                std::max(1., constrained.rhs.norm());
  }
  for (std::size_t i = 0; i < constrained.free_index.size(); ++i) {
    full[constrained.free_index[i]] = x[static_cast<Eigen::Index>(i)];
  }
  return full;
}

WeakFieldPair solve_full(const ConstrainedSystem& constrained) {
  WeakFieldPair solution;
  solution.dofs = constrained.dofs;
  solution.coeffs = solve_eliminated(constrained, &solution.solver_residual);
  return solution;
}

}  // namespace wg
