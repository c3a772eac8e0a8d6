#include "wg/weakcalc.hpp"

#include <stdexcept>

namespace wg {

namespace {

// Index of the (single) axis a unit axis-aligned vector points along.
int dominant_axis(const Vec3& v) {
  for (int d = 0; d < 3; ++d) {
    if (v[d] != 0.) return d;
  }
  throw std::runtime_error("dominant_axis: zero vector");
}

// Solves blockdiag(mass)^-1 * moments component by component.
Eigen::MatrixXd realize_operator(const Eigen::MatrixXd& mass,
                                 const Eigen::MatrixXd& moments, int target_dim) {
  Eigen::LLT<Eigen::MatrixXd> llt(mass);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("weak derivative: singular target mass matrix");
  }
  Eigen::MatrixXd op(moments.rows(), moments.cols());
  for (int c = 0; c < 3; ++c) {
    op.middleRows(c * target_dim, target_dim) =
        llt.solve(moments.middleRows(c * target_dim, target_dim));
  }
  return op;
}

}  // namespace

WeakVectorLayout vector_layout(const Discretization& disc) {
  WeakVectorLayout lay;
  lay.cell_poly_dim = CellBasis::dimension(disc.k);
  lay.face_poly_dim = FaceBasis::dimension(disc.k);
  return lay;
}

WeakScalarLayout scalar_layout(const Discretization& disc) {
  WeakScalarLayout lay;
  lay.cell_poly_dim = CellBasis::dimension(disc.scalar_interior_degree());
  lay.face_poly_dim = FaceBasis::dimension(disc.scalar_face_degree());
  return lay;
}

WeakDerivMatrix weak_gradient_matrix(const Mesh& mesh, int cell,
                                     const Discretization& disc) {
  const Cell& T = mesh.cell(cell);
  const WeakScalarLayout lay = scalar_layout(disc);
  const CellBasis target(disc.k, T);
  const CellBasis interior(disc.scalar_interior_degree(), T);
  const QuadRule quad = cell_quadrature(T, disc.quad());

  WeakDerivMatrix deriv;
  deriv.target_dim = target.dim();
  const int td = deriv.target_dim;
  deriv.moments = Eigen::MatrixXd::Zero(3 * td, lay.total());

  // Volume part: testing against e_c * w picks up -(interior, d_c w).
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const Vec3& x = quad.points[q];
    const double w = quad.weights[q];
    const Eigen::VectorXd iv = interior.eval(x);
    const Eigen::MatrixXd tg = target.grad(x);
    for (int c = 0; c < 3; ++c) {
      deriv.moments.block(c * td, 0, td, lay.interior_dim()).noalias() -=
          w * tg.col(c) * iv.transpose();
    }
  }

  // Face part: <face value, (e_c w) . n_out> only loads the normal component.
  for (int lf = 0; lf < 6; ++lf) {
    const FaceUse use = mesh.cell_faces(cell)[lf];
    const Face& face = mesh.face(use.face);
    const FaceBasis fb(disc.scalar_face_degree(), face);
    const FaceQuadRule fq = face_quadrature(face, disc.quad());
    const int axis = dominant_axis(face.normal);
    for (std::size_t q = 0; q < fq.points.size(); ++q) {
      const Vec3 x = face.point(fq.points[q][0], fq.points[q][1]);
      const double w = fq.weights[q] * use.sign;
      const Eigen::VectorXd tv = target.eval(x);
      const Eigen::VectorXd fv = fb.eval(fq.points[q]);
      deriv.moments.block(axis * td, lay.face(lf, 0), td, lay.face_dim())
          .noalias() += w * tv * fv.transpose();
    }
  }

  deriv.target_mass = mass_matrix(target, quad);
  deriv.op = realize_operator(deriv.target_mass, deriv.moments, td);
  return deriv;
}

WeakDerivMatrix weak_curl_matrix(const Mesh& mesh, int cell,
                                 const Discretization& disc) {
  if (disc.k < 1) throw std::invalid_argument("weak_curl_matrix: k must be >= 1");
  const Cell& T = mesh.cell(cell);
  const WeakVectorLayout lay = vector_layout(disc);
  const CellBasis target(disc.k - 1, T);
  const CellBasis vec(disc.k, T);
  const QuadRule quad = cell_quadrature(T, disc.quad());

  WeakDerivMatrix deriv;
  deriv.target_dim = target.dim();
  const int td = deriv.target_dim;
  const int nk = lay.cell_poly_dim;
  deriv.moments = Eigen::MatrixXd::Zero(3 * td, lay.total());

  // Volume part: (v_interior, curl(e_c w)) with curl(e_c w) = grad(w) x e_c.
  // Expanding grad(w) x e_c gives, per test component c, the trial component d
  // and the derivative of w that couple:
  //   c=0: (0,  +dw/dz, -dw/dy),  c=1: (-dw/dz, 0, +dw/dx),
  //   c=2: (+dw/dy, -dw/dx, 0).
  struct Coupling {
    int c, d, deriv_axis;
    double sign;
  };
  static constexpr Coupling kCouplings[] = {
      {0, 1, 2, +1.}, {0, 2, 1, -1.}, {1, 0, 2, -1.},
      {1, 2, 0, +1.}, {2, 0, 1, +1.}, {2, 1, 0, -1.},
  };
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const Vec3& x = quad.points[q];
    const double w = quad.weights[q];
    const Eigen::VectorXd vv = vec.eval(x);
    const Eigen::MatrixXd tg = target.grad(x);
    for (const Coupling& cp : kCouplings) {
      deriv.moments.block(cp.c * td, cp.d * nk, td, nk).noalias() +=
          (cp.sign * w) * tg.col(cp.deriv_axis) * vv.transpose();
    }
  }

  // Face part: <n_out x v_face, e_c w>, the sign that makes the operator agree
  // with the classical curl on trace-compatible inputs (integration by parts:
  // (curl u, w) = (u, curl w) + <n x u, w>).  In the face frame the outward
  // normal crosses the (t1 component) and (t2 component) of the face value
  // into +t2 and -t1 respectively, up to the cell's orientation sign.
  for (int lf = 0; lf < 6; ++lf) {
    const FaceUse use = mesh.cell_faces(cell)[lf];
    const Face& face = mesh.face(use.face);
    const FaceBasis fb(disc.k, face);
    const FaceQuadRule fq = face_quadrature(face, disc.quad());
    const Vec3 dir[2] = {use.sign * face.t2, -use.sign * face.t1};
    for (std::size_t q = 0; q < fq.points.size(); ++q) {
      const Vec3 x = face.point(fq.points[q][0], fq.points[q][1]);
      const double w = fq.weights[q];
      const Eigen::VectorXd tv = target.eval(x);
      const Eigen::VectorXd fv = fb.eval(fq.points[q]);
      for (int comp = 0; comp < 2; ++comp) {
        for (int c = 0; c < 3; ++c) {
          if (dir[comp][c] == 0.) continue;
          deriv.moments
              .block(c * td, lay.face(lf, comp, 0), td, lay.face_poly_dim)
              .noalias() += (w * dir[comp][c]) * tv * fv.transpose();
        }
      }
    }
  }

  deriv.target_mass = mass_matrix(target, quad);
  deriv.op = realize_operator(deriv.target_mass, deriv.moments, td);
  return deriv;
}

Eigen::VectorXd project_cell(const std::function<double(const Vec3&)>& fn,
                             const CellBasis& basis, const QuadRule& quad) {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.dim());
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    rhs.noalias() += quad.weights[q] * fn(quad.points[q]) * basis.eval(quad.points[q]);
  }
  const Eigen::MatrixXd mass = mass_matrix(basis, quad);
  return Eigen::LLT<Eigen::MatrixXd>(mass).solve(rhs);
}

Eigen::VectorXd project_face(const std::function<double(const Vec3&)>& fn,
                             const Face& face, const FaceBasis& basis,
                             const FaceQuadRule& quad) {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(basis.dim());
  for (std::size_t q = 0; q < quad.points.size(); ++q) {
    const Vec3 x = face.point(quad.points[q][0], quad.points[q][1]);
    rhs.noalias() += quad.weights[q] * fn(x) * basis.eval(quad.points[q]);
  }
  const Eigen::MatrixXd mass = mass_matrix(basis, quad);
  return Eigen::LLT<Eigen::MatrixXd>(mass).solve(rhs);
}

}  // namespace wg
