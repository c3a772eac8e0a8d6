// Scaled monomial bases on cells and faces, tensor Gauss quadrature rules and
// the quadrature-backed mass matrices used throughout the discretization.

#pragma once

#include "wg/mesh.hpp"

#include <Eigen/Dense>

#include <array>
#include <vector>

namespace wg {

/// Gauss-Legendre rule on [-1, 1]; weights sum to 2.
struct GaussRule1d {
  std::vector<double> points;
  std::vector<double> weights;
};

/// Nodes and weights of the n-point Gauss-Legendre rule, exact for
/// polynomials of degree <= 2n - 1.  Throws std::invalid_argument for n < 1.
GaussRule1d gauss_legendre(int npoints);

/// Volume quadrature rule on a cell; weights sum to the cell volume.
struct QuadRule {
  std::vector<Vec3> points;
  std::vector<double> weights;
};

/// Surface quadrature rule on a face, stored in the face's frame coordinates;
/// weights sum to the face area.
struct FaceQuadRule {
  std::vector<Vec2> points;
  std::vector<double> weights;
};

/// Tensor Gauss rule with `points_per_axis` nodes per direction, exact per
/// direction for degree <= 2 * points_per_axis - 1.
QuadRule cell_quadrature(const Cell& cell, int points_per_axis);
FaceQuadRule face_quadrature(const Face& face, int points_per_axis);

/// Monomial basis of P_degree on a cell in the affine-invariant variables
/// (x - center) / scale; the graded ordering starts 1, x, y, z, ...
class CellBasis {
 public:
  CellBasis(int degree, const Vec3& center, double scale);
  CellBasis(int degree, const Cell& cell) : CellBasis(degree, cell.center(), cell.h) {}

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(exponents_.size()); }
  const std::vector<std::array<int, 3>>& exponents() const { return exponents_; }

  /// Values of all basis functions at a physical point.
  Eigen::VectorXd eval(const Vec3& x) const;
  /// Gradients of all basis functions at a physical point (dim x 3).
  Eigen::MatrixXd grad(const Vec3& x) const;

  /// dim P_degree(R^3) = (degree+1)(degree+2)(degree+3)/6.
  static int dimension(int degree);

 private:
  int degree_;
  Vec3 center_;
  double scale_;
  std::vector<std::array<int, 3>> exponents_;
};

/// Monomial basis of P_degree on a face in the scaled frame coordinates
/// (xi / scale, eta / scale); the graded ordering starts 1, xi, eta, ...
class FaceBasis {
 public:
  FaceBasis(int degree, double scale);
  FaceBasis(int degree, const Face& face) : FaceBasis(degree, face.edge) {}

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(exponents_.size()); }
  const std::vector<std::array<int, 2>>& exponents() const { return exponents_; }

  Eigen::VectorXd eval(const Vec2& xi) const;

  /// dim P_degree(R^2) = (degree+1)(degree+2)/2.
  static int dimension(int degree);

 private:
  int degree_;
  double scale_;
  std::vector<std::array<int, 2>> exponents_;
};

/// Gram matrix of the basis under the given quadrature rule.  Throws
/// std::runtime_error if the resulting matrix is not numerically SPD
/// (which indicates an insufficient rule for the requested degree).
Eigen::MatrixXd mass_matrix(const CellBasis& basis, const QuadRule& quad);
Eigen::MatrixXd mass_matrix(const FaceBasis& basis, const FaceQuadRule& quad);

}  // namespace wg
