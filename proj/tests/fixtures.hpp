// Small helpers shared by the test binaries.

#pragma once

#include "wg/weakcalc.hpp"

#include <functional>

namespace fixtures {

using namespace wg;

inline Discretization disc_k(int k, ScalarVariant variant = ScalarVariant::Full,
                             int quad = 0) {
  Discretization d;
  d.k = k;
  d.variant = variant;
  d.quad_points = quad;
  return d;
}

/// Local weak-vector coefficients of the componentwise projection of a smooth
/// vector field (interior in [P_k]^3, faces tangential-componentwise).
inline Eigen::VectorXd project_weak_vector(
    const Mesh& mesh, int cell, const Discretization& disc,
    const std::function<Vec3(const Vec3&)>& u) {
  const WeakVectorLayout lay = vector_layout(disc);
  const Cell& T = mesh.cell(cell);
  const CellBasis bv(disc.k, T);
  const QuadRule quad = cell_quadrature(T, disc.quad());
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(lay.total());
  for (int d = 0; d < 3; ++d) {
    coeffs.segment(lay.interior(d, 0), lay.cell_poly_dim) =
        project_cell([&](const Vec3& x) { return u(x)[d]; }, bv, quad);
  }
  for (int lf = 0; lf < 6; ++lf) {
    const Face& face = mesh.face(mesh.cell_faces(cell)[lf].face);
    const FaceBasis fb(disc.k, face);
    const FaceQuadRule fq = face_quadrature(face, disc.quad());
    const Vec3 tangents[2] = {face.t1, face.t2};
    for (int c = 0; c < 2; ++c) {
      const Vec3 t = tangents[c];
      coeffs.segment(lay.face(lf, c, 0), lay.face_poly_dim) = project_face(
          [&](const Vec3& x) { return u(x).dot(t); }, face, fb, fq);
    }
  }
  return coeffs;
}

/// Local weak-scalar coefficients of the projection of a smooth scalar field.
inline Eigen::VectorXd project_weak_scalar(
    const Mesh& mesh, int cell, const Discretization& disc,
    const std::function<double(const Vec3&)>& q) {
  const WeakScalarLayout lay = scalar_layout(disc);
  const Cell& T = mesh.cell(cell);
  const CellBasis bs(disc.scalar_interior_degree(), T);
  const QuadRule quad = cell_quadrature(T, disc.quad());
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(lay.total());
  coeffs.head(lay.cell_poly_dim) = project_cell(q, bs, quad);
  for (int lf = 0; lf < 6; ++lf) {
    const Face& face = mesh.face(mesh.cell_faces(cell)[lf].face);
    const FaceBasis fb(disc.scalar_face_degree(), face);
    const FaceQuadRule fq = face_quadrature(face, disc.quad());
    coeffs.segment(lay.face(lf, 0), lay.face_poly_dim) =
        project_face(q, face, fb, fq);
  }
  return coeffs;
}

/// Evaluates a component-major coefficient vector over a cell basis at x.
inline Vec3 eval_vector_coeffs(const CellBasis& basis,
                               const Eigen::VectorXd& coeffs, const Vec3& x) {
  const Eigen::VectorXd vals = basis.eval(x);
  Vec3 out;
  for (int d = 0; d < 3; ++d) {
    out[d] = vals.dot(coeffs.segment(d * basis.dim(), basis.dim()));
  }
  return out;
}

}  // namespace fixtures
