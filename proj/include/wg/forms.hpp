// Element-local matrices and load vectors of the stabilized mixed scheme:
// the curl-curl form with its tangential-jump stabilizer, the divergence
// coupling form, the scalar face stabilizer and the source terms.

#pragma once

#include "wg/weakcalc.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace wg {

/// Coefficient and data functions of one boundary-value problem.
struct ProblemData {
  std::function<Vec3(const Vec3&)> f;       // vector source
  std::function<double(const Vec3&)> g;     // scalar source
  std::function<Vec3(const Vec3&)> u_boundary;    // trace datum; only its
                                                  // tangential part is used
  std::function<double(const Vec3&)> p_boundary;  // scalar trace datum

  double nu_uniform = 1.;          // material coefficient
  std::vector<double> nu_cells;    // optional per-cell override

  double nu(int cell) const {
    return nu_cells.empty() ? nu_uniform : nu_cells.at(cell);
  }

  /// Zero sources and zero boundary traces.
  static ProblemData homogeneous();
};

/// All local contributions of one cell, in the local weak layouts.
struct LocalBlocks {
  Eigen::MatrixXd A;   // vector x vector: nu * curl energy + tangential jumps
  Eigen::MatrixXd B;   // scalar x vector: divergence coupling
  Eigen::MatrixXd S2;  // scalar x scalar: face stabilizer
  Eigen::VectorXd Fv;  // vector load (f, v_interior); face entries zero
  Eigen::VectorXd Gq;  // scalar load -(g, q_interior); face entries zero
};

/// Energy matrix of the weak curl alone: v^T * E * w = (curl_w v, curl_w w).
Eigen::MatrixXd local_curl_energy(const Mesh& mesh, int cell,
                                  const Discretization& disc);

/// Tangential mismatch stabilizer: sum over the cell's faces of
/// h^-1 <(v_int - v_face) x n, (w_int - w_face) x n>.
Eigen::MatrixXd local_s1(const Mesh& mesh, int cell, const Discretization& disc);

/// Full vector-vector form: nu * curl energy + stabilizer.
Eigen::MatrixXd local_a(const Mesh& mesh, int cell, const Discretization& disc,
                        double nu);

/// Coupling form b(v, q) = (v_interior, grad_w q); rows are scalar test
/// functions, columns vector trial functions (face columns vanish).
Eigen::MatrixXd local_b(const Mesh& mesh, int cell, const Discretization& disc);

/// Scalar face stabilizer: sum over the cell's faces of
/// h <q_int - q_face, r_int - r_face>.
Eigen::MatrixXd local_s2(const Mesh& mesh, int cell, const Discretization& disc);

/// Load pair ((f, v_interior), -(g, q_interior)) in the local layouts.
std::pair<Eigen::VectorXd, Eigen::VectorXd> local_loads(const Mesh& mesh, int cell,
                                                        const ProblemData& data,
                                                        const Discretization& disc);

/// All blocks of one cell, sharing the weak-derivative computations.
LocalBlocks build_local_blocks(const Mesh& mesh, int cell, const ProblemData& data,
                               const Discretization& disc);

}  // namespace wg
