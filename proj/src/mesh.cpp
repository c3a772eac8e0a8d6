#include "wg/mesh.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wg {

namespace {

// Unit vector along a coordinate axis.
Vec3 axis_vector(int axis) {
  Vec3 e = Vec3::Zero();
  e[axis] = 1.;
  return e;
}

}  // namespace

int Mesh::cell_index(int ix, int iy, int iz) const {
  return ix + n_ * (iy + n_ * iz);
}

int Mesh::face_index(int axis, int plane, int ia, int ib) const {
  const int per_axis = n_ * n_ * (n_ + 1);
  return axis * per_axis + plane * n_ * n_ + ib * n_ + ia;
}

std::array<int, 2> Mesh::face_cells(int f) const {
  const int per_axis = n_ * n_ * (n_ + 1);
  const int axis = f / per_axis;
  const int rem = f % per_axis;
  const int plane = rem / (n_ * n_);
  const int ib = (rem % (n_ * n_)) / n_;
  const int ia = rem % n_;

  std::array<int, 3> idx = {0, 0, 0};
  idx[(axis + 1) % 3] = ia;
  idx[(axis + 2) % 3] = ib;
  std::array<int, 2> cells = {-1, -1};
  if (plane > 0) {
    idx[axis] = plane - 1;
    cells[0] = cell_index(idx[0], idx[1], idx[2]);
  }
  if (plane < n_) {
    idx[axis] = plane;
    cells[1] = cell_index(idx[0], idx[1], idx[2]);
  }
  return cells;
}

int Mesh::cell_containing(const Vec3& x) const {
  std::array<int, 3> idx;
  for (int d = 0; d < 3; ++d) {
    int i = static_cast<int>(std::floor(x[d] / h_));
    idx[d] = std::clamp(i, 0, n_ - 1);
  }
  return cell_index(idx[0], idx[1], idx[2]);
}

Mesh build_mesh(int level) {
  if (level < 1) {
    throw std::invalid_argument("build_mesh: level must be >= 1, got " +
                                std::to_string(level));
  }

  Mesh mesh;
  mesh.level_ = level;
  mesh.n_ = 1 << (level - 1);
  mesh.h_ = 1. / mesh.n_;
  const int n = mesh.n_;
  const double h = mesh.h_;

  mesh.cells_.reserve(static_cast<std::size_t>(n) * n * n);
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        Cell cell;
        cell.origin = Vec3(ix * h, iy * h, iz * h);
        cell.h = h;
        mesh.cells_.push_back(cell);
      }
    }
  }

  // Faces orthogonal to `axis` live on planes x_axis = plane * h and are
  // enumerated by the transverse cell indices (ia, ib) along the axes
  // (axis+1)%3 and (axis+2)%3.  The frame depends only on the normal axis:
  // t1 = e_{axis+1}, t2 = e_{axis+2}, which keeps t1 x t2 = normal.
  mesh.faces_.resize(static_cast<std::size_t>(3) * n * n * (n + 1));
  for (int axis = 0; axis < 3; ++axis) {
    const int a1 = (axis + 1) % 3;
    const int a2 = (axis + 2) % 3;
    for (int plane = 0; plane <= n; ++plane) {
      for (int ib = 0; ib < n; ++ib) {
        for (int ia = 0; ia < n; ++ia) {
          Face face;
          face.id = mesh.face_index(axis, plane, ia, ib);
          face.center[axis] = plane * h;
          face.center[a1] = (ia + 0.5) * h;
          face.center[a2] = (ib + 0.5) * h;
          face.normal = axis_vector(axis);
          face.t1 = axis_vector(a1);
          face.t2 = axis_vector(a2);
          face.edge = h;
          face.boundary = (plane == 0 || plane == n);
          mesh.faces_[face.id] = face;
        }
      }
    }
  }

  // Per-cell incidence: for each axis, the lower face (outward normal -e_axis,
  // sign -1) then the upper face (sign +1).
  mesh.cell_faces_.resize(mesh.cells_.size());
  for (int iz = 0; iz < n; ++iz) {
    for (int iy = 0; iy < n; ++iy) {
      for (int ix = 0; ix < n; ++ix) {
        const int c = mesh.cell_index(ix, iy, iz);
        const std::array<int, 3> idx = {ix, iy, iz};
        for (int axis = 0; axis < 3; ++axis) {
          const int a1 = (axis + 1) % 3;
          const int a2 = (axis + 2) % 3;
          const int ia = idx[a1];
          const int ib = idx[a2];
          mesh.cell_faces_[c][2 * axis] =
              FaceUse{mesh.face_index(axis, idx[axis], ia, ib), -1.};
          mesh.cell_faces_[c][2 * axis + 1] =
              FaceUse{mesh.face_index(axis, idx[axis] + 1, ia, ib), +1.};
        }
      }
    }
  }

  return mesh;
}

Vec3 outward_normal(const Mesh& mesh, int cell, int face) {
  for (const FaceUse& use : mesh.cell_faces(cell)) {
    if (use.face == face) return use.sign * mesh.face(face).normal;
  }
  throw std::invalid_argument("outward_normal: face " + std::to_string(face) +
                              " is not incident on cell " + std::to_string(cell));
}

std::string mesh_to_json(const Mesh& mesh) {
  nlohmann::json j;
  j["level"] = mesh.level();
  j["cells_per_side"] = mesh.cells_per_side();
  j["h"] = mesh.h();

  auto vec = [](const Vec3& v) { return nlohmann::json::array({v[0], v[1], v[2]}); };

  nlohmann::json cells = nlohmann::json::array();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    cells.push_back({{"id", c}, {"origin", vec(cell.origin)}, {"h", cell.h}});
  }
  j["cells"] = std::move(cells);

  nlohmann::json faces = nlohmann::json::array();
  for (int f = 0; f < mesh.num_faces(); ++f) {
    const Face& face = mesh.face(f);
    faces.push_back({{"id", face.id},
                     {"center", vec(face.center)},
                     {"normal", vec(face.normal)},
                     {"t1", vec(face.t1)},
                     {"t2", vec(face.t2)},
                     {"edge", face.edge},
                     {"boundary", face.boundary}});
  }
  j["faces"] = std::move(faces);

  nlohmann::json incidence = nlohmann::json::array();
  for (int c = 0; c < mesh.num_cells(); ++c) {
    nlohmann::json uses = nlohmann::json::array();
    for (const FaceUse& use : mesh.cell_faces(c)) {
      uses.push_back({{"face", use.face}, {"sign", use.sign}});
    }
    incidence.push_back({{"cell", c}, {"faces", std::move(uses)}});
  }
  j["cell_to_faces"] = std::move(incidence);

  return j.dump(2);
}

}  // namespace wg
