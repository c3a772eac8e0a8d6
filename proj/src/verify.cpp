#include "wg/verify.hpp"

#include "parallel.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace wg {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

ProblemData ManufacturedCase::problem(double nu) const {
  ProblemData data;
  const auto cc = curl_curl_u;
  const auto gp = grad_p;
  data.f = [nu, cc, gp](const Vec3& x) -> Vec3 { return nu * cc(x) - gp(x); };
  data.g = div_u;
  data.u_boundary = u;
  data.p_boundary = p;
  data.nu_uniform = nu;
  return data;
}

std::vector<std::string> manufactured_case_names() { return {"s1", "s2", "s3", "s4"}; }

ManufacturedCase manufactured_case(const std::string& name) {
  ManufacturedCase mc;
  mc.name = name;
  if (name == "s1") {
    // Linear field with constant curl and constant divergence; constant
    // scalar.  Both sources of the strong form vanish except g = 3.
    mc.u = [](const Vec3& x) -> Vec3 {
      return {x[1] - x[2], x[2] - x[0], 3. * x[2] - 2. * x[1]};
    };
    mc.p = [](const Vec3&) { return 1.; };
    mc.curl_curl_u = [](const Vec3&) -> Vec3 { return Vec3::Zero(); };
    mc.grad_p = [](const Vec3&) -> Vec3 { return Vec3::Zero(); };
    mc.div_u = [](const Vec3&) { return 3.; };
  } else if (name == "s2") {
    // Quadratic field with linear curl, bilinear scalar.
    mc.u = [](const Vec3& x) -> Vec3 {
      return {x[1] * x[2], x[2] * x[0], 3. * x[2] - 2. * x[0] * x[1]};
    };
    mc.p = [](const Vec3& x) { return x[0] * x[2]; };
    mc.curl_curl_u = [](const Vec3&) -> Vec3 { return Vec3::Zero(); };
    mc.grad_p = [](const Vec3& x) -> Vec3 { return {x[2], 0., x[0]}; };
    mc.div_u = [](const Vec3&) { return 3.; };
  } else if (name == "s3") {
    // Smooth non-polynomial fields; divergence-free.
    mc.u = [](const Vec3& x) -> Vec3 {
      return {std::exp(x[1] * x[2]), x[2] / (x[0] + 1.),
              std::exp(x[0] * x[1])};
    };
    mc.p = [](const Vec3& x) { return std::exp(-x[0] * x[1] * x[2]); };
    mc.curl_curl_u = [](const Vec3& x) -> Vec3 {
      const double eyz = std::exp(x[1] * x[2]);
      const double exy = std::exp(x[0] * x[1]);
      const double xp1 = x[0] + 1.;
      return {-(x[1] * x[1] + x[2] * x[2]) * eyz, -2. * x[2] / (xp1 * xp1 * xp1),
              -(x[0] * x[0] + x[1] * x[1]) * exy};
    };
    mc.grad_p = [](const Vec3& x) -> Vec3 {
      const double e = std::exp(-x[0] * x[1] * x[2]);
      return {-x[1] * x[2] * e, -x[0] * x[2] * e, -x[0] * x[1] * e};
    };
    mc.div_u = [](const Vec3&) { return 0.; };
  } else if (name == "s4") {
    // Curl-free gradient field with trigonometric scalar whose trace vanishes
    // on the whole boundary of the unit cube.
    mc.u = [](const Vec3& x) -> Vec3 {
      return {std::cos(kPi * x[0]) * std::sin(kPi * x[1]) * std::sin(kPi * x[2]),
              std::sin(kPi * x[0]) * std::cos(kPi * x[1]) * std::sin(kPi * x[2]),
              std::sin(kPi * x[0]) * std::sin(kPi * x[1]) * std::cos(kPi * x[2])};
    };
    mc.p = [](const Vec3& x) {
      return std::sin(2. * kPi * x[0]) * std::sin(2. * kPi * x[1]) *
             std::sin(2. * kPi * x[2]);
    };
    mc.curl_curl_u = [](const Vec3&) -> Vec3 { return Vec3::Zero(); };
    mc.grad_p = [](const Vec3& x) -> Vec3 {
      const double sx = std::sin(2. * kPi * x[0]), cx = std::cos(2. * kPi * x[0]);
      const double sy = std::sin(2. * kPi * x[1]), cy = std::cos(2. * kPi * x[1]);
      const double sz = std::sin(2. * kPi * x[2]), cz = std::cos(2. * kPi * x[2]);
      return {2. * kPi * cx * sy * sz, 2. * kPi * sx * cy * sz,
              2. * kPi * sx * sy * cz};
    };
    mc.div_u = [](const Vec3& x) {
      return -3. * kPi * std::sin(kPi * x[0]) * std::sin(kPi * x[1]) *
             std::sin(kPi * x[2]);
    };
  } else {
    throw std::invalid_argument("manufactured_case: unknown case '" + name + "'");
  }
  return mc;
}

Eigen::VectorXd project_exact(const Mesh& mesh, const DofMap& dm,
                              const Discretization& disc,
                              const ManufacturedCase& mcase) {
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(dm.total);

  detail::parallel_for(mesh.num_cells(), [&](int c) {
    const Cell& cell = mesh.cell(c);
    const CellBasis bv(disc.k, cell);
    const CellBasis bs(disc.scalar_interior_degree(), cell);
    const QuadRule quad = cell_quadrature(cell, disc.quad());
    for (int d = 0; d < 3; ++d) {
      coeffs.segment(dm.u0(c) + d * bv.dim(), bv.dim()) = project_cell(
          [&](const Vec3& x) { return mcase.u(x)[d]; }, bv, quad);
    }
    coeffs.segment(dm.p0(c), bs.dim()) = project_cell(mcase.p, bs, quad);
  });

  detail::parallel_for(mesh.num_faces(), [&](int f) {
    const Face& face = mesh.face(f);
    const FaceQuadRule fq = face_quadrature(face, disc.quad());
    const FaceBasis fbv(disc.k, face);
    const Vec3 tangents[2] = {face.t1, face.t2};
    for (int comp = 0; comp < 2; ++comp) {
      const Vec3 t = tangents[comp];
      coeffs.segment(dm.ub(f) + comp * fbv.dim(), fbv.dim()) = project_face(
          [&](const Vec3& x) { return mcase.u(x).dot(t); }, face, fbv, fq);
    }
    const FaceBasis fbs(disc.scalar_face_degree(), face);
    coeffs.segment(dm.pb(f), fbs.dim()) = project_face(mcase.p, face, fbs, fq);
  });

  return coeffs;
}

ErrorRow error_norms(const Mesh& mesh, const Discretization& disc,
                     const ProblemData& data, const WeakFieldPair& solution,
                     const ManufacturedCase& mcase) {
  const DofMap& dm = solution.dofs;
  const Eigen::VectorXd diff =
      project_exact(mesh, dm, disc, mcase) - solution.coeffs;
  const int ncells = mesh.num_cells();
  const double h = mesh.h();

  // Per-cell partial sums, reduced in index order afterwards so the result
  // does not depend on any parallel schedule.
  struct CellTerms {
    double curl_s1 = 0., div2 = 0., e0l2 = 0.;
    double mism2 = 0., grad2 = 0., favg2 = 0., eps2 = 0.;
  };
  std::vector<CellTerms> terms(ncells);

  detail::parallel_for(ncells, [&](int c) {
    const Cell& cell = mesh.cell(c);
    const CellBasis bv(disc.k, cell);
    const CellBasis bs(disc.scalar_interior_degree(), cell);
    const QuadRule quad = cell_quadrature(cell, disc.quad());

    const std::vector<int> vdofs = vector_layout_dofs(mesh, dm, c);
    const std::vector<int> sdofs = scalar_layout_dofs(mesh, dm, c);
    Eigen::VectorXd vdiff(vdofs.size()), sdiff(sdofs.size());
    for (std::size_t i = 0; i < vdofs.size(); ++i) vdiff[i] = diff[vdofs[i]];
    for (std::size_t i = 0; i < sdofs.size(); ++i) sdiff[i] = diff[sdofs[i]];

    CellTerms& t = terms[c];
    t.curl_s1 = data.nu(c) * vdiff.dot(local_curl_energy(mesh, c, disc) * vdiff) +
                vdiff.dot(local_s1(mesh, c, disc) * vdiff);
    t.mism2 = sdiff.dot(local_s2(mesh, c, disc) * sdiff);

    const int nk = bv.dim();
    const auto scomp = sdiff.head(bs.dim());
    for (std::size_t q = 0; q < quad.points.size(); ++q) {
      const Vec3& x = quad.points[q];
      const double w = quad.weights[q];
      const Eigen::VectorXd vval = bv.eval(x);
      const Eigen::MatrixXd vgrad = bv.grad(x);
      const Eigen::VectorXd sval = bs.eval(x);
      const Eigen::MatrixXd sgrad = bs.grad(x);

      double div = 0.;
      for (int d = 0; d < 3; ++d) {
        const auto comp = vdiff.segment(d * nk, nk);
        div += vgrad.col(d).dot(comp);
        const double val = vval.dot(comp);
        t.e0l2 += w * val * val;
      }
      t.div2 += w * div * div;

      const double eps = sval.dot(scomp);
      t.eps2 += w * eps * eps;
      t.grad2 += w * (sgrad.transpose() * scomp).squaredNorm();
    }

    // Mismatch of the interior scalar against the plain face average of the
    // face scalar, accumulated face by face.
    const WeakScalarLayout slay = scalar_layout(disc);
    for (int lf = 0; lf < 6; ++lf) {
      const Face& face = mesh.face(mesh.cell_faces(c)[lf].face);
      const FaceQuadRule fq = face_quadrature(face, disc.quad());
      const FaceBasis fbs(disc.scalar_face_degree(), face);
      const auto fcoef = sdiff.segment(slay.face(lf, 0), slay.face_dim());

      double avg = 0.;
      for (std::size_t q = 0; q < fq.points.size(); ++q) {
        avg += fq.weights[q] * fbs.eval(fq.points[q]).dot(fcoef);
      }
      avg /= face.area();

      for (std::size_t q = 0; q < fq.points.size(); ++q) {
        const Vec3 x = face.point(fq.points[q][0], fq.points[q][1]);
        const double v = bs.eval(x).dot(scomp) - avg;
        t.favg2 += cell.h * fq.weights[q] * v * v;
      }
    }
  });

  // Normal jumps of the interior vector across interior faces.
  std::vector<double> jump_terms(mesh.num_faces(), 0.);
  detail::parallel_for(mesh.num_faces(), [&](int f) {
    const Face& face = mesh.face(f);
    if (face.boundary) return;
    const auto cells = mesh.face_cells(f);
    const FaceQuadRule fq = face_quadrature(face, disc.quad());
    double sum = 0.;
    for (std::size_t q = 0; q < fq.points.size(); ++q) {
      const Vec3 x = face.point(fq.points[q][0], fq.points[q][1]);
      double vals[2];
      for (int side = 0; side < 2; ++side) {
        const int c = cells[side];
        const CellBasis bv(disc.k, mesh.cell(c));
        const Eigen::VectorXd basis = bv.eval(x);
        Vec3 v0 = Vec3::Zero();
        for (int d = 0; d < 3; ++d) {
          v0[d] = basis.dot(diff.segment(dm.u0(c) + d * bv.dim(), bv.dim()));
        }
        vals[side] = v0.dot(face.normal);
      }
      const double jump = vals[1] - vals[0];
      sum += fq.weights[q] * jump * jump;
    }
    jump_terms[f] = sum / face.edge;
  });

  double curl_s1 = 0., div2 = 0., e0l2 = 0., mism2 = 0., grad2 = 0., favg2 = 0.,
         eps2 = 0., jump2 = 0.;
  for (const CellTerms& t : terms) {
    curl_s1 += t.curl_s1;
    div2 += t.div2;
    e0l2 += t.e0l2;
    mism2 += t.mism2;
    grad2 += t.grad2;
    favg2 += t.favg2;
    eps2 += t.eps2;
  }
  for (double j : jump_terms) jump2 += j;

  ErrorRow row;
  row.u_energy = std::sqrt(curl_s1);
  row.u_h1 = row.u_energy + std::sqrt(div2) + std::sqrt(jump2);
  row.u_l2 = std::sqrt(e0l2);
  row.p_l2_like = std::sqrt(mism2) + h * std::sqrt(grad2);
  row.p_face_avg = std::sqrt(favg2);
  row.p_l2 = std::sqrt(eps2);
  return row;
}

WeakFieldPair solve_case(const Mesh& mesh, const ProblemData& data,
                         const Discretization& disc, SolvePath path) {
  if (path == SolvePath::Full) {
    const SaddleSystem sys = assemble(mesh, data, disc);
    return solve_full(apply_boundary(sys, mesh, disc, data));
  }
  const std::vector<LocalSolver> solvers = build_local_solvers(mesh, data, disc);
  const CondensedSystem condensed = assemble_condensed(mesh, disc, solvers);
  return solve_condensed_and_recover(condensed, solvers, mesh, disc, data);
}

StudyReport convergence_study(const ManufacturedCase& mcase, int level_min,
                              int level_max, const Discretization& disc,
                              SolvePath path, double nu) {
  if (level_min < 1 || level_max < level_min) {
    throw std::invalid_argument("convergence_study: bad level range");
  }
  StudyReport report;
  report.case_name = mcase.name;
  report.disc = disc;
  report.path = path;
  report.nu = nu;

  const ProblemData data = mcase.problem(nu);
  for (int level = level_min; level <= level_max; ++level) {
    const Mesh mesh = build_mesh(level);
    const DofMap dm = make_dof_map(mesh, disc);
    const WeakFieldPair sol = solve_case(mesh, data, disc, path);

    StudyRow row;
    row.level = level;
    row.h = mesh.h();
    const int prescribed =
        static_cast<int>(boundary_values(mesh, dm, disc, data).index.size());
    row.unknowns =
        (path == SolvePath::Full ? dm.total : condensed_total(dm)) - prescribed;
    row.errors = error_norms(mesh, disc, data, sol, mcase);
    row.solver_residual = sol.solver_residual;
    report.rows.push_back(row);
  }
  return report;
}

std::vector<double> convergence_rates(const std::vector<double>& values) {
  std::vector<double> rates(values.size(),
                            std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i - 1] > 0. && values[i] > 0.) {
      rates[i] = std::log2(values[i - 1] / values[i]);
    }
  }
  return rates;
}

double eval_interior_scalar(const Mesh& mesh, const Discretization& disc,
                            const WeakFieldPair& sol, const Vec3& x) {
  const int c = mesh.cell_containing(x);
  const CellBasis bs(disc.scalar_interior_degree(), mesh.cell(c));
  return bs.eval(x).dot(sol.p0(c));
}

Vec3 eval_interior_vector(const Mesh& mesh, const Discretization& disc,
                          const WeakFieldPair& sol, const Vec3& x) {
  const int c = mesh.cell_containing(x);
  const CellBasis bv(disc.k, mesh.cell(c));
  const Eigen::VectorXd basis = bv.eval(x);
  const Eigen::VectorXd u0 = sol.u0(c);
  Vec3 v;
  for (int d = 0; d < 3; ++d) {
    v[d] = basis.dot(u0.segment(d * bv.dim(), bv.dim()));
  }
  return v;
}

double eval_face_scalar(const Mesh& mesh, const Discretization& disc,
                        const WeakFieldPair& sol, int face, const Vec3& x) {
  const Face& fc = mesh.face(face);
  const FaceBasis fbs(disc.scalar_face_degree(), fc);
  return fbs.eval(fc.frame_coords(x)).dot(sol.pb(face));
}

Vec2 eval_face_tangential(const Mesh& mesh, const Discretization& disc,
                          const WeakFieldPair& sol, int face, const Vec3& x) {
  const Face& fc = mesh.face(face);
  const FaceBasis fbv(disc.k, fc);
  const Eigen::VectorXd basis = fbv.eval(fc.frame_coords(x));
  const Eigen::VectorXd ub = sol.ub(face);
  return {basis.dot(ub.head(fbv.dim())), basis.dot(ub.tail(fbv.dim()))};
}

std::vector<SliceField> sample_slice(const Mesh& mesh, const Discretization& disc,
                                     const ManufacturedCase& mcase,
                                     const WeakFieldPair& sol, double plane_z,
                                     int resolution) {
  if (resolution < 1) {
    throw std::invalid_argument("sample_slice: resolution must be >= 1");
  }
  if (plane_z <= 0. || plane_z >= 1.) {
    throw std::invalid_argument("sample_slice: plane must lie strictly inside (0, 1)");
  }
  const int n = mesh.cells_per_side();
  const int plane = std::clamp(static_cast<int>(std::llround(plane_z * n)), 0, n);
  const double zface = plane * mesh.h();

  std::vector<SliceField> fields(7);
  fields[0].name = "p_exact";
  fields[1].name = "p_interior_error";
  fields[2].name = "p_face_error";
  fields[3].name = "u3_exact";
  fields[4].name = "u3_interior_error";
  fields[5].name = "ut1_face_error";
  fields[6].name = "ut2_face_error";
  for (SliceField& f : fields) {
    f.samples.reserve(static_cast<std::size_t>(resolution) * resolution);
  }

  for (int j = 0; j < resolution; ++j) {
    const double y = (j + 0.5) / resolution;
    for (int i = 0; i < resolution; ++i) {
      const double x = (i + 0.5) / resolution;
      const Vec3 X(x, y, plane_z);
      const Vec3 Xf(x, y, zface);
      const int ix = std::clamp(static_cast<int>(std::floor(x * n)), 0, n - 1);
      const int iy = std::clamp(static_cast<int>(std::floor(y * n)), 0, n - 1);
      const int face = mesh.face_index(2, plane, ix, iy);
      const Face& fc = mesh.face(face);

      fields[0].samples.push_back({x, y, mcase.p(X)});
      fields[1].samples.push_back(
          {x, y, mcase.p(X) - eval_interior_scalar(mesh, disc, sol, X)});
      fields[2].samples.push_back(
          {x, y, mcase.p(Xf) - eval_face_scalar(mesh, disc, sol, face, Xf)});
      fields[3].samples.push_back({x, y, mcase.u(X)[2]});
      fields[4].samples.push_back(
          {x, y, mcase.u(X)[2] - eval_interior_vector(mesh, disc, sol, X)[2]});
      const Vec2 ub = eval_face_tangential(mesh, disc, sol, face, Xf);
      const Vec3 ue = mcase.u(Xf);
      fields[5].samples.push_back({x, y, ue.dot(fc.t1) - ub[0]});
      fields[6].samples.push_back({x, y, ue.dot(fc.t2) - ub[1]});
    }
  }
  return fields;
}

void write_slice_csv(const SliceField& field, std::ostream& out) {
  out << "x,y,value\n";
  out << std::setprecision(17);
  for (const auto& row : field.samples) {
    out << row[0] << ',' << row[1] << ',' << row[2] << '\n';
  }
}

}  // namespace wg
