// Manufactured solutions, projections of exact fields into the weak spaces,
// discrete error norms, convergence studies and plane-slice sampling.

#pragma once

#include "wg/condense.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace wg {

/// A closed-form solution pair together with the pieces needed to build the
/// matching sources for any constant material coefficient.
struct ManufacturedCase {
  std::string name;
  std::function<Vec3(const Vec3&)> u;
  std::function<double(const Vec3&)> p;
  std::function<Vec3(const Vec3&)> curl_curl_u;
  std::function<Vec3(const Vec3&)> grad_p;
  std::function<double(const Vec3&)> div_u;

  /// Problem data with f = nu * curl(curl u) - grad p and g = div u.
  ProblemData problem(double nu = 1.) const;
};

/// The built-in cases: "s1" (linear solenoidal field, constant pressure),
/// "s2" (quadratic field, bilinear pressure), "s3" (smooth non-polynomial
/// fields), "s4" (gradient field with trigonometric pressure, homogeneous
/// scalar trace).  Throws std::invalid_argument for unknown names.
ManufacturedCase manufactured_case(const std::string& name);
std::vector<std::string> manufactured_case_names();

/// Componentwise L2 projection of the exact pair into the weak spaces, in the
/// global coefficient numbering.
Eigen::VectorXd project_exact(const Mesh& mesh, const DofMap& dm,
                              const Discretization& disc,
                              const ManufacturedCase& mcase);

/// Discrete error norms of solution minus projected-exact, in table order.
struct ErrorRow {
  double u_h1 = 0.;        // energy norm + broken divergence + normal jumps
  double u_energy = 0.;    // curl energy + tangential mismatch
  double u_l2 = 0.;        // L2 norm of the interior vector error
  double p_l2_like = 0.;   // face mismatch + scaled broken gradient
  double p_face_avg = 0.;  // mismatch against face averages
  double p_l2 = 0.;        // L2 norm of the interior scalar error
};

ErrorRow error_norms(const Mesh& mesh, const Discretization& disc,
                     const ProblemData& data, const WeakFieldPair& solution,
                     const ManufacturedCase& mcase);

enum class SolvePath { Condensed, Full };

/// Solves one problem on one mesh through the chosen path.
WeakFieldPair solve_case(const Mesh& mesh, const ProblemData& data,
                         const Discretization& disc, SolvePath path);

struct StudyRow {
  int level = 0;
  double h = 0.;
  int unknowns = 0;  // free unknowns actually solved for
  ErrorRow errors;
  double solver_residual = 0.;
};

struct StudyReport {
  std::string case_name;
  Discretization disc;
  SolvePath path = SolvePath::Condensed;
  double nu = 1.;
  std::vector<StudyRow> rows;
};

/// Runs the case on levels level_min..level_max and collects the error norms.
StudyReport convergence_study(const ManufacturedCase& mcase, int level_min,
                              int level_max, const Discretization& disc,
                              SolvePath path, double nu = 1.);

/// log2 ratios of consecutive values; the first entry (and any entry whose
/// ratio is undefined) is NaN.
std::vector<double> convergence_rates(const std::vector<double>& values);

/// Point evaluation of the interior fields (cell containing x) and of the
/// face fields (structured face lookup on the nearest z-plane).
double eval_interior_scalar(const Mesh& mesh, const Discretization& disc,
                            const WeakFieldPair& sol, const Vec3& x);
Vec3 eval_interior_vector(const Mesh& mesh, const Discretization& disc,
                          const WeakFieldPair& sol, const Vec3& x);
double eval_face_scalar(const Mesh& mesh, const Discretization& disc,
                        const WeakFieldPair& sol, int face, const Vec3& x);
Vec2 eval_face_tangential(const Mesh& mesh, const Discretization& disc,
                          const WeakFieldPair& sol, int face, const Vec3& x);

/// One sampled field on a z-plane: rows (x, y, value) on a uniform
/// resolution x resolution grid of the unit square.
struct SliceField {
  std::string name;
  std::vector<std::array<double, 3>> samples;
};

/// Samples exact fields, interior errors at (x, y, plane_z) and face errors
/// on the face plane nearest to plane_z.
std::vector<SliceField> sample_slice(const Mesh& mesh, const Discretization& disc,
                                     const ManufacturedCase& mcase,
                                     const WeakFieldPair& sol, double plane_z,
                                     int resolution);

/// Writes one field as CSV ("x,y,value" header plus one row per sample).
void write_slice_csv(const SliceField& field, std::ostream& out);

}  // namespace wg
