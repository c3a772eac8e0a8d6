// Discrete weak-function layouts, the per-cell weak gradient / weak curl
// operators, and L2 projections onto the local polynomial spaces.

#pragma once

#include "wg/polybasis.hpp"

#include <Eigen/Dense>

#include <functional>

namespace wg {

/// Choice of the auxiliary scalar space: `Full` pairs interior degree k-1
/// with face degree k, `Lowest` uses piecewise constants for both.
enum class ScalarVariant { Full, Lowest };

/// Degree and rule selection for the discretization.
struct Discretization {
  int k = 1;  // polynomial degree of the vector field (interior and faces)
  ScalarVariant variant = ScalarVariant::Full;
  int quad_points = 0;  // Gauss points per axis; 0 selects the default k + 3

  int scalar_interior_degree() const {
    return variant == ScalarVariant::Full ? k - 1 : 0;
  }
  int scalar_face_degree() const { return variant == ScalarVariant::Full ? k : 0; }
  int quad() const { return quad_points > 0 ? quad_points : k + 3; }
};

/// Index bookkeeping for a weak vector function on one cell:
/// [ interior components | face 0 tangential pair | ... | face 5 ].
/// Interior coefficients are component-major over a P_k cell basis; each face
/// stores the two tangential components in the face frame, each expanded in a
/// P_k face basis.
struct WeakVectorLayout {
  int cell_poly_dim = 0;  // dim P_k(cell)
  int face_poly_dim = 0;  // dim P_k(face)

  int interior_dim() const { return 3 * cell_poly_dim; }
  int face_dim() const { return 2 * face_poly_dim; }
  int total() const { return interior_dim() + 6 * face_dim(); }

  int interior(int comp, int i) const { return comp * cell_poly_dim + i; }
  int face(int local_face, int comp, int i) const {
    return interior_dim() + local_face * face_dim() + comp * face_poly_dim + i;
  }
};

/// Same bookkeeping for a weak scalar function:
/// [ interior | face 0 | ... | face 5 ].
struct WeakScalarLayout {
  int cell_poly_dim = 0;  // dim P_{k-1}(cell) or P_0
  int face_poly_dim = 0;  // dim P_k(face) or P_0

  int interior_dim() const { return cell_poly_dim; }
  int face_dim() const { return face_poly_dim; }
  int total() const { return cell_poly_dim + 6 * face_poly_dim; }

  int interior(int i) const { return i; }
  int face(int local_face, int i) const {
    return cell_poly_dim + local_face * face_poly_dim + i;
  }
};

WeakVectorLayout vector_layout(const Discretization& disc);
WeakScalarLayout scalar_layout(const Discretization& disc);

/// One discrete weak derivative on one cell.  `moments` maps layout
/// coefficients to the defining moment functionals against a component-major
/// [P_r]^3 test basis; `op` = blockdiag(mass)^-1 * moments realizes the
/// derivative as target-space coefficients; `target_mass` is the scalar
/// P_r(cell) Gram block shared by the three components.
struct WeakDerivMatrix {
  Eigen::MatrixXd moments;      // (3 * target_dim) x layout_total
  Eigen::MatrixXd op;           // (3 * target_dim) x layout_total
  Eigen::MatrixXd target_mass;  // target_dim x target_dim
  int target_dim = 0;
};

/// Weak gradient of a weak scalar: target space [P_k(cell)]^3, defined by
/// integration by parts against the divergence plus the face flux.
WeakDerivMatrix weak_gradient_matrix(const Mesh& mesh, int cell,
                                     const Discretization& disc);

/// Weak curl of a weak vector: target space [P_{k-1}(cell)]^3, defined by
/// integration by parts against the curl plus the tangential face trace.
WeakDerivMatrix weak_curl_matrix(const Mesh& mesh, int cell,
                                 const Discretization& disc);

/// L2 projection of a scalar function onto the span of `basis`, computed with
/// the given quadrature rule.
Eigen::VectorXd project_cell(const std::function<double(const Vec3&)>& fn,
                             const CellBasis& basis, const QuadRule& quad);

/// L2 projection on a face; `fn` is evaluated at physical points of the face.
Eigen::VectorXd project_face(const std::function<double(const Vec3&)>& fn,
                             const Face& face, const FaceBasis& basis,
                             const FaceQuadRule& quad);

}  // namespace wg
