#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "payne/errors.hpp"
#include "payne/mesh.hpp"
#include "payne/radial_grid.hpp"

using namespace payne;

TEST_CASE("rectangle counts and euler characteristic") {
  const Mesh m = make_rectangle_mesh(2.0, 1.0, 4, 3);
  CHECK(m.num_vertices() == 20);
  CHECK(m.num_triangles() == 24);
  CHECK(static_cast<long>(m.num_vertices()) - static_cast<long>(m.num_edges()) + static_cast<long>(m.num_triangles()) == 1);
  CHECK(m.total_area() == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(m.perimeter() == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(m.boundary_edges().size() == 14);
  CHECK(m.boundary_loop_count() == 1);
  m.validate();
}

TEST_CASE("disk mesh approaches the circle") {
  double prev_gap = 1.0;
  for (int level = 1; level <= 4; ++level) {
    const Mesh m = make_disk_mesh(1.0, level);
    CHECK(m.num_triangles() == 8u << (2 * level));
    for (int v : m.boundary_vertices()) CHECK(m.vertices()[v].norm() == doctest::Approx(1.0).epsilon(1e-13));
    const double gap = std::numbers::pi - m.total_area();
    CHECK(gap > 0.0);
    CHECK(gap < prev_gap / 3.5);  // inscribed polygon area error is O(h^2)
    prev_gap = gap;
  }
  const Mesh m = make_disk_mesh(2.0, 2);
  CHECK(m.domain_tag() == DomainTag::disk);
  CHECK(m.radius() == 2.0);
}

TEST_CASE("polygon and refinement") {
  const std::vector<Point> square = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  const Mesh m = make_polygon_mesh(square, 2);
  CHECK(m.num_triangles() == 4u * 16u);
  CHECK(m.total_area() == doctest::Approx(1.0).epsilon(1e-14));
  const Mesh r = refine_mesh(m);
  CHECK(r.num_triangles() == 4 * m.num_triangles());
  CHECK(r.max_edge_length() == doctest::Approx(m.max_edge_length() / 2).epsilon(1e-12));
}

TEST_CASE("triangles are counter-clockwise with outward boundary normals") {
  const Mesh m = make_disk_mesh(1.0, 2);
  for (std::size_t t = 0; t < m.num_triangles(); ++t) CHECK(m.triangle_area(t) > 0.0);
  for (int e : m.boundary_edges()) {
    const Edge& edge = m.edges()[e];
    CHECK(edge.normal.dot(edge.midpoint) > 0.0);
    CHECK(edge.normal.norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("serialization round trip keeps the hash") {
  const Mesh m = make_disk_mesh(1.0, 2);
  std::stringstream ss;
  write_mesh(ss, m);
  const Mesh back = read_mesh(ss);
  CHECK(back.num_triangles() == m.num_triangles());
  CHECK(back.hash() == m.hash());
  CHECK(make_disk_mesh(1.0, 2).hash() == m.hash());
  CHECK(make_disk_mesh(1.0, 3).hash() != m.hash());
}

TEST_CASE("invalid meshes are rejected") {
  std::vector<Point> v = {{0, 0}, {1, 0}, {2, 0}};
  CHECK_THROWS_AS(Mesh(v, {{0, 1, 2}}), MeshError);
  std::vector<Point> w = {{0, 0}, {1, 0}, {0, 1}};
  CHECK_THROWS_AS(Mesh(w, {{0, 1, 5}}), MeshError);
  std::stringstream bad("vertices 2 triangles 1\n0 0\n");
  CHECK_THROWS(read_mesh(bad));
  CHECK_THROWS_AS(make_disk_mesh(1.0, 12, Point::Zero(), 1000), SizeError);
}

TEST_CASE("radial grid") {
  const RadialGrid g = make_radial_grid(0.1, 50, Grading::geometric);
  CHECK(g.intervals() == 50);
  CHECK(g.nodes.front() == doctest::Approx(0.1));
  CHECK(g.nodes.back() == doctest::Approx(std::numbers::pi));
  for (int i = 1; i < g.intervals(); ++i) {
    CHECK(g.nodes[i + 1] - g.nodes[i] >= g.nodes[i] - g.nodes[i - 1] - 1e-15);
  }
  const RadialGrid u = make_radial_grid(0.5, 10, Grading::uniform);
  CHECK(u.nodes[1] - u.nodes[0] == doctest::Approx((std::numbers::pi - 0.5) / 10));
  CHECK_THROWS_AS(make_radial_grid(0.0, 10, Grading::uniform), DomainError);
  CHECK_THROWS_AS(make_radial_grid(2.0, 10, Grading::uniform), DomainError);
  CHECK_NOTHROW(make_radial_grid(1.5708, 10, Grading::uniform));
}
