#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace payne {

using Point = Eigen::Vector2d;

enum class DomainTag { disk, rectangle, polygon };

std::string to_string(DomainTag tag);

struct Edge {
  std::array<int, 2> vertices{};  // v0 < v1
  Point midpoint = Point::Zero();
  double length = 0.0;
  /// Unit normal carried by the edge's normal-derivative DOF. Outward on the boundary;
  /// for interior edges the tangent v0->v1 rotated clockwise.
  Point normal = Point::Zero();
  std::array<int, 2> triangles{-1, -1};
  bool boundary = false;
};

/// Conforming affine triangulation of a planar domain with cached incidence.
class Mesh {
public:
  Mesh() = default;

  /// Builds edge/boundary incidence from raw vertex and triangle arrays. Triangles are
  /// reoriented counter-clockwise if necessary. Throws MeshError on invalid topology.
  Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles,
       DomainTag tag = DomainTag::polygon, Point center = Point::Zero(), double radius = 0.0);

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<std::array<int, 3>>& triangles() const { return triangles_; }
  /// Edge indices of triangle t, local edge i opposite local vertex i.
  const std::vector<std::array<int, 3>>& triangle_edges() const { return triangle_edges_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& boundary_edges() const { return boundary_edges_; }
  const std::vector<int>& boundary_vertices() const { return boundary_vertices_; }
  const std::vector<bool>& vertex_on_boundary() const { return vertex_on_boundary_; }

  DomainTag domain_tag() const { return tag_; }
  /// Disk meshes only.
  const Point& center() const { return center_; }
  double radius() const { return radius_; }

  std::size_t num_vertices() const { return vertices_.size(); }
  std::size_t num_triangles() const { return triangles_.size(); }
  std::size_t num_edges() const { return edges_.size(); }

  double triangle_area(std::size_t t) const;
  double total_area() const;
  double perimeter() const;
  double max_edge_length() const;
  int boundary_loop_count() const { return loop_count_; }

  /// 64-bit FNV-1a digest of coordinates and connectivity, hex encoded.
  std::string hash() const;

  /// Checks every structural invariant; throws MeshError with the first violation.
  void validate() const;

private:
  void build_incidence();

  std::vector<Point> vertices_;
  std::vector<std::array<int, 3>> triangles_;
  std::vector<std::array<int, 3>> triangle_edges_;
  std::vector<Edge> edges_;
  std::vector<int> boundary_edges_;
  std::vector<int> boundary_vertices_;
  std::vector<bool> vertex_on_boundary_;
  DomainTag tag_ = DomainTag::polygon;
  Point center_ = Point::Zero();
  double radius_ = 0.0;
  int loop_count_ = 0;
};

/// Upper bound on triangle count accepted by the generators and refinement.
inline constexpr std::size_t kDefaultMaxTriangles = std::size_t{1} << 20;

/// 8-triangle fan around the center, refined `refinement` times with boundary midpoints
/// projected to the circle.
Mesh make_disk_mesh(double radius, int refinement, Point center = Point::Zero(),
                    std::size_t max_triangles = kDefaultMaxTriangles);

/// Structured grid of [0,a]x[0,b] with every cell split along its (0,0)-(1,1) diagonal.
Mesh make_rectangle_mesh(double a, double b, int nx, int ny,
                         std::size_t max_triangles = kDefaultMaxTriangles);

/// Convex polygon (counter-clockwise corners) fanned from its vertex centroid.
Mesh make_polygon_mesh(const std::vector<Point>& corners, int refinement,
                       std::size_t max_triangles = kDefaultMaxTriangles);

/// Uniform red refinement (each triangle split into four at its edge midpoints).
Mesh refine_mesh(const Mesh& mesh, std::size_t max_triangles = kDefaultMaxTriangles);

/// Plain-text serialization: `vertices N triangles M`, N coordinate rows, M index rows.
void write_mesh(std::ostream& os, const Mesh& mesh);
Mesh read_mesh(std::istream& is);

}  // namespace payne
