#include "wg/polybasis.hpp"

#include <cmath>
#include <stdexcept>

namespace wg {

namespace {

// Powers 0..max of a scalar, reused to evaluate all monomials at one point.
void fill_powers(double t, int max, std::vector<double>& out) {
  out.resize(max + 1);
  out[0] = 1.;
  for (int i = 1; i <= max; ++i) out[i] = out[i - 1] * t;
}

}  // namespace

GaussRule1d gauss_legendre(int npoints) {
  if (npoints < 1) {
    throw std::invalid_argument("gauss_legendre: need at least one point");
  }
  GaussRule1d rule;
  if (npoints == 1) {
    rule.points = {0.};
    rule.weights = {2.};
    return rule;
  }
  // Golub-Welsch: eigen-decomposition of the Jacobi matrix of the Legendre
  // three-term recurrence.  Nodes are the eigenvalues, weights are
  // 2 * (first eigenvector component)^2.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(npoints, npoints);
  for (int i = 1; i < npoints; ++i) {
    const double b = i / std::sqrt(4. * i * i - 1.);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  if (eig.info() != Eigen::Success) {
    throw std::runtime_error("gauss_legendre: Jacobi eigen-decomposition failed");
  }
  rule.points.resize(npoints);
  rule.weights.resize(npoints);
  for (int i = 0; i < npoints; ++i) {
    rule.points[i] = eig.eigenvalues()[i];
    const double v0 = eig.eigenvectors()(0, i);
    rule.weights[i] = 2. * v0 * v0;
  }
  return rule;
}

QuadRule cell_quadrature(const Cell& cell, int points_per_axis) {
  const GaussRule1d g = gauss_legendre(points_per_axis);
  const int n = points_per_axis;
  QuadRule rule;
  rule.points.reserve(static_cast<std::size_t>(n) * n * n);
  rule.weights.reserve(rule.points.capacity());
  const double half = 0.5 * cell.h;
  const Vec3 mid = cell.center();
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        rule.points.emplace_back(mid[0] + half * g.points[ix],
                                 mid[1] + half * g.points[iy],
                                 mid[2] + half * g.points[iz]);
        rule.weights.push_back(half * half * half * g.weights[ix] *
                               g.weights[iy] * g.weights[iz]);
      }
    }
  }
  return rule;
}

FaceQuadRule face_quadrature(const Face& face, int points_per_axis) {
  const GaussRule1d g = gauss_legendre(points_per_axis);
  const int n = points_per_axis;
  FaceQuadRule rule;
  rule.points.reserve(static_cast<std::size_t>(n) * n);
  rule.weights.reserve(rule.points.capacity());
  const double half = 0.5 * face.edge;
  for (int ie = 0; ie < n; ++ie) {
    for (int ix = 0; ix < n; ++ix) {
      rule.points.emplace_back(half * g.points[ix], half * g.points[ie]);
      rule.weights.push_back(half * half * g.weights[ix] * g.weights[ie]);
    }
  }
  return rule;
}

int CellBasis::dimension(int degree) {
  return (degree + 1) * (degree + 2) * (degree + 3) / 6;
}

CellBasis::CellBasis(int degree, const Vec3& center, double scale)
    : degree_(degree), center_(center), scale_(scale) {
  if (degree < 0) throw std::invalid_argument("CellBasis: negative degree");
  if (!(scale > 0.)) throw std::invalid_argument("CellBasis: scale must be positive");
  exponents_.reserve(dimension(degree));
  for (int d = 0; d <= degree; ++d) {
    for (int i = d; i >= 0; --i) {
      for (int j = d - i; j >= 0; --j) {
        exponents_.push_back({i, j, d - i - j});
      }
    }
  }
}

Eigen::VectorXd CellBasis::eval(const Vec3& x) const {
  thread_local std::vector<double> px, py, pz;
  fill_powers((x[0] - center_[0]) / scale_, degree_, px);
  fill_powers((x[1] - center_[1]) / scale_, degree_, py);
  fill_powers((x[2] - center_[2]) / scale_, degree_, pz);
  Eigen::VectorXd values(dim());
  for (int i = 0; i < dim(); ++i) {
    const auto& e = exponents_[i];
    values[i] = px[e[0]] * py[e[1]] * pz[e[2]];
  }
  return values;
}

Eigen::MatrixXd CellBasis::grad(const Vec3& x) const {
  thread_local std::vector<double> px, py, pz;
  fill_powers((x[0] - center_[0]) / scale_, degree_, px);
  fill_powers((x[1] - center_[1]) / scale_, degree_, py);
  fill_powers((x[2] - center_[2]) / scale_, degree_, pz);
  Eigen::MatrixXd grads(dim(), 3);
  for (int i = 0; i < dim(); ++i) {
    const auto& e = exponents_[i];
    grads(i, 0) = e[0] > 0 ? e[0] / scale_ * px[e[0] - 1] * py[e[1]] * pz[e[2]] : 0.;
    grads(i, 1) = e[1] > 0 ? e[1] / scale_ * px[e[0]] * py[e[1] - 1] * pz[e[2]] : 0.;
    grads(i, 2) = e[2] > 0 ? e[2] / scale_ * px[e[0]] * py[e[1]] * pz[e[2] - 1] : 0.;
  }
  return grads;
}

int FaceBasis::dimension(int degree) { return (degree + 1) * (degree + 2) / 2; }

FaceBasis::FaceBasis(int degree, double scale) : degree_(degree), scale_(scale) {
  if (degree < 0) throw std::invalid_argument("FaceBasis: negative degree");
  if (!(scale > 0.)) throw std::invalid_argument("FaceBasis: scale must be positive");
  exponents_.reserve(dimension(degree));
  for (int d = 0; d <= degree; ++d) {
    for (int i = d; i >= 0; --i) {
      exponents_.push_back({i, d - i});
    }
  }
}

Eigen::VectorXd FaceBasis::eval(const Vec2& xi) const {
  thread_local std::vector<double> p0, p1;
  fill_powers(xi[0] / scale_, degree_, p0);
  fill_powers(xi[1] / scale_, degree_, p1);
  Eigen::VectorXd values(dim());
  for (int i = 0; i < dim(); ++i) {
    const auto& e = exponents_[i];
    values[i] = p0[e[0]] * p1[e[1]];
  }
  return values;
}

namespace {

// Shared Gram-matrix accumulation; `eval` maps a quadrature index to the
// basis value vector at that point.
template <typename EvalFn>
Eigen::MatrixXd gram(int dim, std::size_t npoints, const std::vector<double>& weights,
                     EvalFn&& eval, const char* what) {
  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(dim, dim);
  for (std::size_t q = 0; q < npoints; ++q) {
    const Eigen::VectorXd values = eval(q);
    mass.selfadjointView<Eigen::Lower>().rankUpdate(values, weights[q]);
  }
  mass = mass.selfadjointView<Eigen::Lower>();
  // A rank-deficient Gram matrix means the quadrature cannot resolve the
  // basis; surface that as an internal error rather than solving garbage.
  if (Eigen::LLT<Eigen::MatrixXd>(mass).info() != Eigen::Success) {
    throw std::runtime_error(std::string(what) +
                             ": quadrature-backed mass matrix is singular");
  }
  return mass;
}

}  // namespace

Eigen::MatrixXd mass_matrix(const CellBasis& basis, const QuadRule& quad) {
  return gram(
      basis.dim(), quad.points.size(), quad.weights,
      [&](std::size_t q) { return basis.eval(quad.points[q]); }, "mass_matrix(cell)");
}

Eigen::MatrixXd mass_matrix(const FaceBasis& basis, const FaceQuadRule& quad) {
  return gram(
      basis.dim(), quad.points.size(), quad.weights,
      [&](std::size_t q) { return basis.eval(quad.points[q]); }, "mass_matrix(face)");
}

}  // namespace wg
