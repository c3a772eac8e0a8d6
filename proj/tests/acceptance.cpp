// Acceptance suite: end-to-end checks of the solver against pinned reference
// values, convergence-rate windows and exactness thresholds.  Every tolerance
// is fixed in this file.  Prints one [PASS]/[FAIL] line per criterion (with
// the offending sub-checks listed underneath) and exits with the number of
// failed criteria, so a zero exit status means full acceptance.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "wg/verify.hpp"

namespace {

using namespace wg;
using fixtures::disc_k;

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3e", v);
  return b;
}

std::string fix2(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.2f", v);
  return b;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> failures;
  std::vector<std::string> notes;

  Criterion(int id_, std::string title_) : id(id_), title(std::move(title_)) {}

  void check(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
  void note(const std::string& what) { notes.push_back(what); }

  bool finish(double elapsed) const {
    const bool ok = failures.empty();
    std::cout << (ok ? "[PASS]" : "[FAIL]") << " criterion " << id << ": "
              << title << "  [" << fix2(elapsed) << " s]\n";
    for (const std::string& f : failures) std::cout << "       - " << f << "\n";
    for (const std::string& n : notes) std::cout << "       note: " << n << "\n";
    std::cout.flush();
    return ok;
  }
};

/// The five reported error norms, in table order.
struct Col {
  const char* name;
  double ErrorRow::*field;
};
constexpr Col kCols[5] = {
    {"u_h1", &ErrorRow::u_h1},           // full discrete H1-type vector norm
    {"u_l2", &ErrorRow::u_l2},           // interior vector L2 error
    {"p_l2_like", &ErrorRow::p_l2_like}, // scalar face-mismatch norm
    {"p_face_avg", &ErrorRow::p_face_avg}, // face-average variant
    {"p_l2", &ErrorRow::p_l2},           // interior scalar L2 error
};

std::vector<std::vector<double>> all_rates(const StudyReport& rep) {
  std::vector<std::vector<double>> rates;
  for (const Col& col : kCols) {
    std::vector<double> v;
    for (const StudyRow& row : rep.rows) v.push_back(row.errors.*col.field);
    rates.push_back(convergence_rates(v));
  }
  return rates;
}

void check_window(Criterion& c, const std::string& label, double got,
                  double ref, double rel) {
  const double off = std::abs(got - ref) / ref;
  c.check(off <= rel, label + " = " + sci(got) + ", reference " + sci(ref) +
                          " (off by " + fix2(100. * off) + "%, allowed " +
                          fix2(100. * rel) + "%)");
}

void check_rate(Criterion& c, const std::string& label, double got,
                double target, double window) {
  c.check(std::abs(got - target) <= window,
          label + " rate = " + fix2(got) + ", required " + fix2(target) +
              " +/- " + fix2(window));
}

void check_small(Criterion& c, const std::string& label, double got,
                 double bound) {
  c.check(got < bound, label + " = " + sci(got) + " (required < " + sci(bound) +
                           ")");
}

// --------------------------------------------------------------------------
// 1. The linear solenoidal case lies in the discrete spaces: every error norm
//    vanishes to roundoff on levels 1-4.

bool criterion1() {
  Criterion c(1, "linear case reproduced to roundoff (levels 1-4)");
  Timer t;
  const StudyReport rep = convergence_study(manufactured_case("s1"), 1, 4,
                                            disc_k(1), SolvePath::Condensed);
  for (const StudyRow& row : rep.rows) {
    for (const Col& col : kCols) {
      check_small(c, "level " + std::to_string(row.level) + " " + col.name,
                  row.errors.*col.field, 1e-9);
    }
  }
  const double elapsed = t.s();
  c.check(elapsed < 30., "runtime " + fix2(elapsed) + " s (expected < 30 s)");
  return c.finish(elapsed);
}

// --------------------------------------------------------------------------
// 2. Quadratic case, levels 1-5: the scalar face-mismatch norm and the
//    interior scalar error vanish; the interior vector error superconverges
//    (rate >= 2.0 on levels 3-5).

bool criterion2() {
  Criterion c(2, "quadratic case scalar exactness + vector superconvergence "
                 "(levels 1-5)");
  Timer t;
  const StudyReport rep = convergence_study(manufactured_case("s2"), 1, 5,
                                            disc_k(1), SolvePath::Condensed);
  double max_avg = 0.;
  for (const StudyRow& row : rep.rows) {
    const std::string lvl = "level " + std::to_string(row.level) + " ";
    check_small(c, lvl + "p_l2_like", row.errors.p_l2_like, 1e-9);
    check_small(c, lvl + "p_l2", row.errors.p_l2, 1e-9);
    max_avg = std::max(max_avg, row.errors.p_face_avg);
  }
  c.note("face-average scalar norm p_face_avg stays below " + sci(max_avg) +
         " on all levels; the interior scalar error is exactly zero while the "
         "face deviation has zero mean per face, so only the non-averaged "
         "face norm p_l2_like is nonzero");
  std::vector<double> u_l2;
  for (const StudyRow& row : rep.rows) u_l2.push_back(row.errors.u_l2);
  const std::vector<double> rates = convergence_rates(u_l2);
  for (int i = 2; i <= 4; ++i) {
    c.check(rates[i] >= 2.0, "u_l2 rate at level " + std::to_string(i + 1) +
                                 " = " + fix2(rates[i]) +
                                 " (required >= 2.0)");
  }
  const double elapsed = t.s();
  c.check(elapsed < 300.,
          "runtime " + fix2(elapsed) + " s (expected < 5 min)");
  return c.finish(elapsed);
}

// --------------------------------------------------------------------------
// 3. Smooth non-polynomial case, levels 3-5: pinned reference values within
//    20% and level-5 rates within +/- 0.15 of (1, 2, 1, 2, 2).

bool criterion3() {
  Criterion c(3, "smooth case matches pinned values (20%) and level-5 rates "
                 "(+/- 0.15)");
  Timer t;
  const StudyReport rep = convergence_study(manufactured_case("s3"), 3, 5,
                                            disc_k(1), SolvePath::Condensed);
  const double u_h1_ref[3] = {1.91e-1, 1.02e-1, 5.05e-2};
  const double u_l2_ref[3] = {2.10e-2, 5.10e-3, 1.26e-3};
  const double p_l2_ref[3] = {4.73e-4, 1.18e-4, 2.95e-5};
  for (int i = 0; i < 3; ++i) {
    const std::string lvl = "level " + std::to_string(i + 3) + " ";
    check_window(c, lvl + "u_h1", rep.rows[i].errors.u_h1, u_h1_ref[i], 0.20);
    check_window(c, lvl + "u_l2", rep.rows[i].errors.u_l2, u_l2_ref[i], 0.20);
    check_window(c, lvl + "p_l2", rep.rows[i].errors.p_l2, p_l2_ref[i], 0.20);
  }
  const auto rates = all_rates(rep);
  const double target[5] = {1., 2., 1., 2., 2.};
  for (int k = 0; k < 5; ++k) {
    check_rate(c, std::string("level 5 ") + kCols[k].name, rates[k][2],
               target[k], 0.15);
  }
  const double elapsed = t.s();
  c.check(elapsed < 600.,
          "runtime " + fix2(elapsed) + " s (expected < 10 min)");
  return c.finish(elapsed);
}

// --------------------------------------------------------------------------
// 4. Oscillatory gradient case, levels 3-5: rates within +/- 0.2 of
//    (1, 2, 1, 2, 2) at each level, and level-5 values within 25% of the
//    pinned references.

bool criterion4() {
  Criterion c(4, "oscillatory case rates (+/- 0.2, levels 3-5) and level-5 "
                 "values (25%)");
  Timer t;
  // Level 2 is included so that the level-3 rate is defined.
  const StudyReport rep = convergence_study(manufactured_case("s4"), 2, 5,
                                            disc_k(1), SolvePath::Condensed);
  const auto rates = all_rates(rep);
  const double target[5] = {1., 2., 1., 2., 2.};
  for (int lvl = 3; lvl <= 5; ++lvl) {
    for (int k = 0; k < 5; ++k) {
      check_rate(c,
                 "level " + std::to_string(lvl) + " " + kCols[k].name,
                 rates[k][lvl - 2], target[k], 0.20);
    }
  }
  const double ref5[5] = {1.97e-1, 9.21e-3, 1.71e-1, 1.08e-2, 1.06e-2};
  for (int k = 0; k < 5; ++k) {
    check_window(c, std::string("level 5 ") + kCols[k].name,
                 rep.rows[3].errors.*kCols[k].field, ref5[k], 0.25);
  }
  return c.finish(t.s());
}

// --------------------------------------------------------------------------
// 5. Lowest-order scalar variant (piecewise-constant faces), both
//    non-polynomial cases, levels 3-5: rates within +/- 0.2 of (1, 2, 2, 2).
//    With constant face traces the face-average norm coincides with the
//    plain face norm, so four distinct norms remain.

bool criterion5() {
  Criterion c(5, "lowest-order variant rates (+/- 0.2, levels 3-5, both "
                 "non-polynomial cases)");
  Timer t;
  const double target[4] = {1., 2., 2., 2.};
  const int cols[4] = {0, 1, 2, 4};  // u_h1, u_l2, p_l2_like, p_l2
  for (const char* name : {"s3", "s4"}) {
    const StudyReport rep =
        convergence_study(manufactured_case(name), 2, 5,
                          disc_k(1, ScalarVariant::Lowest), SolvePath::Condensed);
    const auto rates = all_rates(rep);
    for (int lvl = 3; lvl <= 5; ++lvl) {
      for (int j = 0; j < 4; ++j) {
        check_rate(c,
                   std::string(name) + " level " + std::to_string(lvl) + " " +
                       kCols[cols[j]].name,
                   rates[cols[j]][lvl - 2], target[j], 0.20);
      }
    }
  }
  return c.finish(t.s());
}

// --------------------------------------------------------------------------
// 6. Commuting identities: for random polynomial fields of degree <= k+1 the
//    weak derivative of the projected field equals the projection of the
//    exact derivative, to 1e-12.

Eigen::VectorXd lsq_vector_projection(const Cell& T, int deg, int quad_pts,
                                      const std::function<Vec3(const Vec3&)>& f) {
  const CellBasis basis(deg, T);
  const QuadRule quad = cell_quadrature(T, quad_pts);
  const auto basis_fn = [&](const Vec3& x) { return basis.eval(x); };
  Eigen::VectorXd out(3 * basis.dim());
  for (int d = 0; d < 3; ++d) {
    out.segment(d * basis.dim(), basis.dim()) = oracle::lsq_projection(
        quad.points, quad.weights, basis_fn,
        [&](const Vec3& x) { return f(x)[d]; });
  }
  return out;
}

bool criterion6() {
  Criterion c(6, "weak derivatives commute with projection for 50 random "
                 "polynomial fields");
  Timer t;
  const int k = 1;
  const Discretization disc = disc_k(k);
  std::mt19937 rng(7331);
  const Mesh meshes[3] = {build_mesh(1), build_mesh(2), build_mesh(3)};
  std::uniform_int_distribution<int> pick_mesh(0, 2);
  double worst_curl = 0., worst_grad = 0.;
  for (int trial = 0; trial < 50; ++trial) {
    const Mesh& mesh = meshes[pick_mesh(rng)];
    std::uniform_int_distribution<int> pick_cell(0, mesh.num_cells() - 1);
    const int cell = pick_cell(rng);
    const Cell& T = mesh.cell(cell);

    const oracle::VecPoly v = oracle::random_vec_poly(rng, k + 1);
    const oracle::VecPoly cv = oracle::curl(v);
    const Eigen::VectorXd curl_of_proj =
        weak_curl_matrix(mesh, cell, disc).op *
        fixtures::project_weak_vector(mesh, cell, disc,
                                      [&](const Vec3& x) { return v(x); });
    const Eigen::VectorXd proj_of_curl = lsq_vector_projection(
        T, k - 1, disc.quad() + 2, [&](const Vec3& x) { return cv(x); });
    const double curl_resid =
        (curl_of_proj - proj_of_curl).cwiseAbs().maxCoeff() /
        std::max(1.0, proj_of_curl.cwiseAbs().maxCoeff());
    worst_curl = std::max(worst_curl, curl_resid);
    c.check(curl_resid < 1e-12,
            "trial " + std::to_string(trial) + " curl identity residual " +
                sci(curl_resid));

    const oracle::Poly q = oracle::random_poly(rng, k + 1);
    const oracle::VecPoly gq = oracle::gradient(q);
    const Eigen::VectorXd grad_of_proj =
        weak_gradient_matrix(mesh, cell, disc).op *
        fixtures::project_weak_scalar(mesh, cell, disc,
                                      [&](const Vec3& x) { return q(x); });
    const Eigen::VectorXd proj_of_grad = lsq_vector_projection(
        T, k, disc.quad() + 2, [&](const Vec3& x) { return gq(x); });
    const double grad_resid =
        (grad_of_proj - proj_of_grad).cwiseAbs().maxCoeff() /
        std::max(1.0, proj_of_grad.cwiseAbs().maxCoeff());
    worst_grad = std::max(worst_grad, grad_resid);
    c.check(grad_resid < 1e-12,
            "trial " + std::to_string(trial) + " gradient identity residual " +
                sci(grad_resid));
  }
  c.note("worst residuals: curl " + sci(worst_curl) + ", gradient " +
         sci(worst_grad));
  return c.finish(t.s());
}

// --------------------------------------------------------------------------
// 7. Uniqueness: homogeneous data produces the zero solution.

bool criterion7() {
  Criterion c(7, "homogeneous data yields the zero solution (levels 1-3, "
                 "both paths)");
  Timer t;
  const ProblemData zero = ProblemData::homogeneous();
  for (int level = 1; level <= 3; ++level) {
    const Mesh mesh = build_mesh(level);
    for (SolvePath path : {SolvePath::Condensed, SolvePath::Full}) {
      const WeakFieldPair sol = solve_case(mesh, zero, disc_k(1), path);
      check_small(c,
                  "level " + std::to_string(level) +
                      (path == SolvePath::Condensed ? " condensed" : " full") +
                      " max |coefficient|",
                  sol.coeffs.cwiseAbs().maxCoeff(), 1e-11);
    }
  }
  return c.finish(t.s());
}

// --------------------------------------------------------------------------
// 8. Elimination equivalence: the condensed and full paths agree, and on the
//    one-cell mesh the interface system equals the dense Schur complement.

bool criterion8() {
  Criterion c(8, "condensed path agrees with the full path and with the dense "
                 "Schur complement");
  Timer t;
  const Discretization disc = disc_k(1);
  for (const std::string& name : manufactured_case_names()) {
    const ProblemData data = manufactured_case(name).problem();
    for (int level = 1; level <= 3; ++level) {
      const Mesh mesh = build_mesh(level);
      const WeakFieldPair full = solve_case(mesh, data, disc, SolvePath::Full);
      const WeakFieldPair cond =
          solve_case(mesh, data, disc, SolvePath::Condensed);
      check_small(c,
                  name + " level " + std::to_string(level) +
                      " max path difference",
                  (full.coeffs - cond.coeffs).cwiseAbs().maxCoeff(), 1e-8);
    }

    // One-cell mesh: dense brute-force elimination of the interior block.
    const Mesh mesh = build_mesh(1);
    const SaddleSystem sys = assemble(mesh, data, disc);
    const Eigen::MatrixXd D(sys.matrix);
    const DofMap& dm = sys.dofs;
    std::vector<int> ii, bb;
    for (int cell = 0; cell < dm.ncells; ++cell) {
      for (int i = 0; i < dm.vec_cell_dim; ++i) ii.push_back(dm.u0(cell) + i);
      for (int i = 0; i < dm.sca_cell_dim; ++i) ii.push_back(dm.p0(cell) + i);
    }
    for (int f = 0; f < dm.nfaces; ++f) {
      for (int i = 0; i < dm.vec_face_dim; ++i) bb.push_back(dm.ub(f) + i);
    }
    for (int f = 0; f < dm.nfaces; ++f) {
      for (int i = 0; i < dm.sca_face_dim; ++i) bb.push_back(dm.pb(f) + i);
    }
    const int ni = static_cast<int>(ii.size()), nb = static_cast<int>(bb.size());
    Eigen::MatrixXd Kii(ni, ni), Kib(ni, nb), Kbi(nb, ni), Kbb(nb, nb);
    Eigen::VectorXd Fi(ni), Fb(nb);
    for (int r = 0; r < ni; ++r) {
      Fi[r] = sys.rhs[ii[r]];
      for (int s = 0; s < ni; ++s) Kii(r, s) = D(ii[r], ii[s]);
      for (int s = 0; s < nb; ++s) Kib(r, s) = D(ii[r], bb[s]);
    }
    for (int r = 0; r < nb; ++r) {
      Fb[r] = sys.rhs[bb[r]];
      for (int s = 0; s < ni; ++s) Kbi(r, s) = D(bb[r], ii[s]);
      for (int s = 0; s < nb; ++s) Kbb(r, s) = D(bb[r], bb[s]);
    }
    const Eigen::MatrixXd schur = Kbb - Kbi * Kii.fullPivLu().solve(Kib);
    const Eigen::VectorXd shur_rhs = Fb - Kbi * Kii.fullPivLu().solve(Fi);
    const CondensedSystem cond_sys = assemble_condensed(
        mesh, disc, build_local_solvers(mesh, data, disc));
    check_small(c, name + " level 1 max |interface matrix - dense Schur|",
                (Eigen::MatrixXd(cond_sys.matrix) - schur).cwiseAbs().maxCoeff(),
                1e-11);
    check_small(c, name + " level 1 max |interface rhs - dense Schur rhs|",
                (cond_sys.rhs - shur_rhs).cwiseAbs().maxCoeff(), 1e-11);
  }
  return c.finish(t.s());
}

// --------------------------------------------------------------------------
// 9. Data consistency: the embedded sources of every case match a
//    finite-difference application of the strong operators to the exact pair.

bool criterion9() {
  Criterion c(9, "embedded sources match finite-difference strong operators "
                 "(100 points per case)");
  Timer t;
  const double nu = 2.3;
  std::mt19937 rng(40991);
  std::uniform_real_distribution<double> coord(0.05, 0.95);
  for (const std::string& name : manufactured_case_names()) {
    const ManufacturedCase mc = manufactured_case(name);
    const ProblemData data = mc.problem(nu);
    double worst_f = 0., worst_g = 0.;
    for (int i = 0; i < 100; ++i) {
      const Vec3 x{coord(rng), coord(rng), coord(rng)};
      const Vec3 fd_f =
          nu * oracle::fd_curl_curl(mc.u, x, 4e-3, 1e-3) -
          oracle::fd_gradient(mc.p, x, 1e-3);
      const Vec3 f = data.f(x);
      worst_f = std::max(worst_f, (fd_f - f).cwiseAbs().maxCoeff() /
                                      std::max(1.0, f.cwiseAbs().maxCoeff()));
      const double fd_g = oracle::fd_divergence(mc.u, x, 1e-3);
      const double g = data.g(x);
      worst_g = std::max(worst_g,
                         std::abs(fd_g - g) / std::max(1.0, std::abs(g)));
    }
    c.check(worst_f < 1e-6,
            name + " worst relative f mismatch " + sci(worst_f));
    c.check(worst_g < 1e-6,
            name + " worst relative g mismatch " + sci(worst_g));
  }
  return c.finish(t.s());
}

}  // namespace

int main() {
  std::cout << "acceptance suite: weak Galerkin Maxwell solver\n";
  int passed = 0;
  passed += criterion1();
  passed += criterion2();
  passed += criterion3();
  passed += criterion4();
  passed += criterion5();
  passed += criterion6();
  passed += criterion7();
  passed += criterion8();
  passed += criterion9();
  std::cout << passed << "/9 criteria passed\n";
  return 9 - passed;
}
