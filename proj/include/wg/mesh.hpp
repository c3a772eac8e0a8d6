// Uniform hexahedral meshes of the unit cube with globally framed faces.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <vector>

namespace wg {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

/// Axis-aligned cubic cell given by its lower corner and edge length.
struct Cell {
  Vec3 origin = Vec3::Zero();
  double h = 0.;

  Vec3 center() const { return origin + Vec3::Constant(0.5 * h); }
  double volume() const { return h * h * h; }
};

/// Planar square face carrying a globally assigned orthonormal frame
/// (t1, t2, normal), right-handed so that t1 x t2 = normal.  The frame is a
/// property of the face itself and is shared by the two adjacent cells; the
/// frame choice depends only on the normal axis, so every face orthogonal to
/// the same axis uses the same pair of tangents.
struct Face {
  int id = -1;
  Vec3 center = Vec3::Zero();
  Vec3 normal = Vec3::Zero();  // unit vector along +x, +y or +z
  Vec3 t1 = Vec3::Zero();
  Vec3 t2 = Vec3::Zero();
  double edge = 0.;  // side length of the square
  bool boundary = false;

  double area() const { return edge * edge; }

  /// In-plane coordinates of a physical point relative to the face center.
  Vec2 frame_coords(const Vec3& x) const {
    return {(x - center).dot(t1), (x - center).dot(t2)};
  }

  /// Physical point with the given in-plane coordinates.
  Vec3 point(double xi, double eta) const { return center + xi * t1 + eta * t2; }
};

/// Incidence of a face on a cell: the face index plus the sign relating the
/// global face normal to the outward direction of that cell (+1 if the global
/// normal already points out of the cell, -1 otherwise).
struct FaceUse {
  int face = -1;
  double sign = 0.;
};

/// Uniform n x n x n hexahedral partition of [0,1]^3 with n = 2^(level-1).
///
/// Cells are indexed x-fastest; faces are grouped by normal axis, then by
/// plane index, then by the two transverse cell indices, so constant-time
/// lookups by structured index are available in both directions.
class Mesh {
 public:
  int level() const { return level_; }
  int cells_per_side() const { return n_; }
  double h() const { return h_; }

  int num_cells() const { return static_cast<int>(cells_.size()); }
  int num_faces() const { return static_cast<int>(faces_.size()); }

  const Cell& cell(int c) const { return cells_[c]; }
  const Face& face(int f) const { return faces_[f]; }
  const std::array<FaceUse, 6>& cell_faces(int c) const { return cell_faces_[c]; }

  /// Structured cell lookup, indices in [0, n).
  int cell_index(int ix, int iy, int iz) const;
  /// Structured face lookup: faces orthogonal to `axis` (0,1,2) on plane
  /// `plane` in [0, n], transverse indices along axes (axis+1)%3, (axis+2)%3.
  int face_index(int axis, int plane, int ia, int ib) const;
  /// Cell whose closure contains x (ties resolved toward the lower cell;
  /// coordinates clamped to the unit cube).
  int cell_containing(const Vec3& x) const;
  /// The cells on the negative / positive side of a face along its normal;
  /// -1 marks a missing neighbor (boundary face).
  std::array<int, 2> face_cells(int f) const;

  friend Mesh build_mesh(int level);

 private:
  int level_ = 0;
  int n_ = 0;
  double h_ = 0.;
  std::vector<Cell> cells_;
  std::vector<Face> faces_;
  std::vector<std::array<FaceUse, 6>> cell_faces_;
};

/// Builds the level-`level` mesh (level >= 1; level 1 is the single cell).
/// Throws std::invalid_argument for level < 1.
Mesh build_mesh(int level);

/// Outward unit normal of `face` as seen from `cell`.  Throws
/// std::invalid_argument if the face is not one of the cell's six faces.
Vec3 outward_normal(const Mesh& mesh, int cell, int face);

/// JSON snapshot of the mesh (cells, framed faces, incidence) for debugging.
std::string mesh_to_json(const Mesh& mesh);

}  // namespace wg
