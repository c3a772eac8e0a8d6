#include "wg/forms.hpp"

#include <stdexcept>

namespace wg {

namespace {

// Coefficients, in `container`, of the traces on `face` of the functions of a
// cell basis, plus the container mass matrix.  Traces of polynomials on a
// planar face stay polynomial of the same degree, so as long as the container
// degree is at least the source degree this representation is exact.
struct FaceTrace {
  Eigen::MatrixXd mass;        // container Gram matrix
  Eigen::MatrixXd trace;      // container coeffs of each source basis function
};

FaceTrace face_trace(const Face& face, const FaceBasis& container,
                     const CellBasis& source, int points_per_axis) {
  const FaceQuadRule fq = face_quadrature(face, points_per_axis);
  FaceTrace result;
  result.mass = mass_matrix(container, fq);
  Eigen::MatrixXd cross = Eigen::MatrixXd::Zero(container.dim(), source.dim());
  for (std::size_t q = 0; q < fq.points.size(); ++q) {
    const Vec3 x = face.point(fq.points[q][0], fq.points[q][1]);
    cross.noalias() +=
        fq.weights[q] * container.eval(fq.points[q]) * source.eval(x).transpose();
  }
  result.trace = Eigen::LLT<Eigen::MatrixXd>(result.mass).solve(cross);
  return result;
}

// Symmetrizes a matrix that is symmetric up to roundoff.
Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
  return 0.5 * (m + m.transpose());
}

}  // namespace

ProblemData ProblemData::homogeneous() {
  ProblemData data;
  data.f = [](const Vec3&) { return Vec3::Zero().eval(); };
  data.g = [](const Vec3&) { return 0.; };
  data.u_boundary = [](const Vec3&) { return Vec3::Zero().eval(); };
  data.p_boundary = [](const Vec3&) { return 0.; };
  return data;
}

Eigen::MatrixXd local_curl_energy(const Mesh& mesh, int cell,
                                  const Discretization& disc) {
  const WeakDerivMatrix curl = weak_curl_matrix(mesh, cell, disc);
  // moments^T * op = moments^T * blockdiag(mass)^-1 * moments is the Gram
  // matrix of the realized weak curls.
  return symmetrize(curl.moments.transpose() * curl.op);
}

Eigen::MatrixXd local_s1(const Mesh& mesh, int cell, const Discretization& disc) {
  const WeakVectorLayout lay = vector_layout(disc);
  const Cell& T = mesh.cell(cell);
  const CellBasis bv(disc.k, T);
  const int nv = lay.total();
  Eigen::MatrixXd s1 = Eigen::MatrixXd::Zero(nv, nv);
  const double scale = 1. / T.h;

  for (int lf = 0; lf < 6; ++lf) {
    const Face& face = mesh.face(mesh.cell_faces(cell)[lf].face);
    const FaceBasis container(disc.k, face);
    const FaceTrace ft = face_trace(face, container, bv, disc.quad());
    const int fd = container.dim();

    // The two frame components of (v_interior - v_face) x n have the same
    // lengths as the tangential mismatches (v_int . t_c - v_face,c), and the
    // stabilizer is exactly the sum of their squares -- independent of the
    // orientation sign of the face.
    const Vec3 tangents[2] = {face.t1, face.t2};
    for (int c = 0; c < 2; ++c) {
      Eigen::MatrixXd mismatch = Eigen::MatrixXd::Zero(fd, nv);
      for (int d = 0; d < 3; ++d) {
        if (tangents[c][d] == 0.) continue;
        for (int j = 0; j < lay.cell_poly_dim; ++j) {
          mismatch.col(lay.interior(d, j)) += tangents[c][d] * ft.trace.col(j);
        }
      }
      mismatch.block(0, lay.face(lf, c, 0), fd, lay.face_poly_dim) -=
          Eigen::MatrixXd::Identity(fd, lay.face_poly_dim);
      s1.noalias() += scale * mismatch.transpose() * ft.mass * mismatch;
    }
  }
  return symmetrize(s1);
}

Eigen::MatrixXd local_a(const Mesh& mesh, int cell, const Discretization& disc,
                        double nu) {
  return nu * local_curl_energy(mesh, cell, disc) + local_s1(mesh, cell, disc);
}

Eigen::MatrixXd local_b(const Mesh& mesh, int cell, const Discretization& disc) {
  const WeakDerivMatrix grad = weak_gradient_matrix(mesh, cell, disc);
  const WeakVectorLayout vlay = vector_layout(disc);
  const WeakScalarLayout slay = scalar_layout(disc);
  // (v_interior, grad_w q) pairs the interior vector coefficients directly
  // with the weak-gradient moments (the target mass cancels); face columns of
  // the vector argument never enter.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(slay.total(), vlay.total());
  b.block(0, 0, slay.total(), vlay.interior_dim()) =
      grad.moments.topRows(vlay.interior_dim()).transpose();
  return b;
}

Eigen::MatrixXd local_s2(const Mesh& mesh, int cell, const Discretization& disc) {
  const WeakScalarLayout lay = scalar_layout(disc);
  const Cell& T = mesh.cell(cell);
  const CellBasis bs(disc.scalar_interior_degree(), T);
  const int ns = lay.total();
  Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(ns, ns);
  const int container_degree =
      std::max(disc.scalar_face_degree(), disc.scalar_interior_degree());

  for (int lf = 0; lf < 6; ++lf) {
    const Face& face = mesh.face(mesh.cell_faces(cell)[lf].face);
    const FaceBasis container(container_degree, face);
    const FaceBasis face_basis(disc.scalar_face_degree(), face);
    const FaceTrace ft = face_trace(face, container, bs, disc.quad());
    const int fd = container.dim();

    Eigen::MatrixXd mismatch = Eigen::MatrixXd::Zero(fd, ns);
    for (int j = 0; j < lay.cell_poly_dim; ++j) {
      mismatch.col(lay.interior(j)) = ft.trace.col(j);
    }
    // The face space is spanned by the leading container monomials (same
    // scaling, graded order), so its embedding is the identity padded by
    // zero rows.
    mismatch.block(0, lay.face(lf, 0), fd, lay.face_poly_dim) -=
        Eigen::MatrixXd::Identity(fd, lay.face_poly_dim);
    s2.noalias() += T.h * mismatch.transpose() * ft.mass * mismatch;
  }
  return symmetrize(s2);
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> local_loads(const Mesh& mesh, int cell,
                                                        const ProblemData& data,
                                                        const Discretization& disc) {
  if (!data.f || !data.g) {
    throw std::invalid_argument("local_loads: problem data lacks source functions");
  }
  const WeakVectorLayout vlay = vector_layout(disc);
  const WeakScalarLayout slay = scalar_layout(disc);
  const Cell& T = mesh.cell(cell);
  const CellBasis bv(disc.k, T);
  const CellBasis bs(disc.scalar_interior_degree(), T);
  const QuadRule quad = cell_quadrature(T, disc.quad());

  Eigen::VectorXd fv = Eigen::VectorXd::Zero(vlay.total());
  Eigen::VectorXd gq = Eigen::VectorXd::Zero(slay.total());
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const Vec3& x = quad.points[q];
    const double w = quad.weights[q];
    const Vec3 fx = data.f(x);
    const Eigen::VectorXd vv = bv.eval(x);
    const Eigen::VectorXd sv = bs.eval(x);
    for (int d = 0; d < 3; ++d) {
      fv.segment(vlay.interior(d, 0), vlay.cell_poly_dim).noalias() += w * fx[d] * vv;
    }
    // The scalar equation carries the source with a minus sign.
    gq.head(slay.cell_poly_dim).noalias() -= w * data.g(x) * sv;
  }
  return {std::move(fv), std::move(gq)};
}

LocalBlocks build_local_blocks(const Mesh& mesh, int cell, const ProblemData& data,
                               const Discretization& disc) {
  LocalBlocks blocks;
  blocks.A = local_a(mesh, cell, disc, data.nu(cell));
  blocks.B = local_b(mesh, cell, disc);
  blocks.S2 = local_s2(mesh, cell, disc);
  std::tie(blocks.Fv, blocks.Gq) = local_loads(mesh, cell, data, disc);
  return blocks;
}

}  // namespace wg
