#include "payne/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "payne/errors.hpp"

namespace payne {

namespace {

double signed_area(const Point& a, const Point& b, const Point& c) {
  return 0.5 * ((b.x() - a.x()) * (c.y() - a.y()) - (c.x() - a.x()) * (b.y() - a.y()));
}

void check_size(std::size_t triangles, std::size_t max_triangles) {
  if (triangles > max_triangles) {
    throw SizeError("mesh would have " + std::to_string(triangles) +
                    " triangles, above the guard of " + std::to_string(max_triangles));
  }
}

}  // namespace

std::string to_string(DomainTag tag) {
  switch (tag) {
    case DomainTag::disk: return "disk";
    case DomainTag::rectangle: return "rectangle";
    case DomainTag::polygon: return "polygon";
  }
  return "unknown";
}

Mesh::Mesh(std::vector<Point> vertices, std::vector<std::array<int, 3>> triangles, DomainTag tag,
           Point center, double radius)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      tag_(tag),
      center_(center),
      radius_(radius) {
  const int nv = static_cast<int>(vertices_.size());
  for (auto& tri : triangles_) {
    for (int v : tri) {
      if (v < 0 || v >= nv) throw MeshError("triangle references vertex " + std::to_string(v));
    }
    const Point &a = vertices_[tri[0]], &b = vertices_[tri[1]], &c = vertices_[tri[2]];
    const double area = signed_area(a, b, c);
    const double scale = std::max({(b - a).squaredNorm(), (c - b).squaredNorm(), (a - c).squaredNorm()});
    if (!(std::abs(area) > 1e-14 * scale)) throw MeshError("degenerate triangle");
    if (area < 0.0) std::swap(tri[1], tri[2]);
  }
  build_incidence();
}

void Mesh::build_incidence() {
  const std::size_t nt = triangles_.size();
  std::map<std::pair<int, int>, int> lookup;
  triangle_edges_.assign(nt, {-1, -1, -1});
  edges_.clear();

  for (std::size_t t = 0; t < nt; ++t) {
    const auto& tri = triangles_[t];
    for (int i = 0; i < 3; ++i) {
      int a = tri[(i + 1) % 3];
      int b = tri[(i + 2) % 3];
      auto key = std::minmax(a, b);
      auto [it, inserted] = lookup.try_emplace({key.first, key.second}, static_cast<int>(edges_.size()));
      if (inserted) {
        Edge e;
        e.vertices = {key.first, key.second};
        edges_.push_back(e);
      }
      Edge& e = edges_[it->second];
      if (e.triangles[0] < 0) {
        e.triangles[0] = static_cast<int>(t);
      } else if (e.triangles[1] < 0) {
        e.triangles[1] = static_cast<int>(t);
      } else {
        throw MeshError("edge shared by more than two triangles");
      }
      triangle_edges_[t][i] = it->second;
    }
  }

  vertex_on_boundary_.assign(vertices_.size(), false);
  boundary_edges_.clear();
  for (std::size_t k = 0; k < edges_.size(); ++k) {
    Edge& e = edges_[k];
    const Point& p0 = vertices_[e.vertices[0]];
    const Point& p1 = vertices_[e.vertices[1]];
    Point d = p1 - p0;
    e.midpoint = 0.5 * (p0 + p1);
    e.length = d.norm();
    e.normal = Point(d.y(), -d.x()) / e.length;
    e.boundary = e.triangles[1] < 0;
    if (e.boundary) {
      // Orient outward: away from the opposite vertex of the single adjacent triangle.
      const auto& tri = triangles_[e.triangles[0]];
      Point centroid = (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
      if (e.normal.dot(e.midpoint - centroid) < 0.0) e.normal = -e.normal;
      boundary_edges_.push_back(static_cast<int>(k));
      vertex_on_boundary_[e.vertices[0]] = true;
      vertex_on_boundary_[e.vertices[1]] = true;
    }
  }
  boundary_vertices_.clear();
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    if (vertex_on_boundary_[v]) boundary_vertices_.push_back(static_cast<int>(v));
  }

  // Boundary loops: every boundary vertex must touch exactly two boundary edges.
  std::map<int, std::vector<int>> vertex_edges;
  for (int k : boundary_edges_) {
    vertex_edges[edges_[k].vertices[0]].push_back(k);
    vertex_edges[edges_[k].vertices[1]].push_back(k);
  }
  for (const auto& [v, list] : vertex_edges) {
    if (list.size() != 2) throw MeshError("boundary vertex " + std::to_string(v) + " is not on a simple loop");
  }
  std::vector<bool> visited(edges_.size(), false);
  loop_count_ = 0;
  for (int start : boundary_edges_) {
    if (visited[start]) continue;
    ++loop_count_;
    int current = start;
    int vertex = edges_[start].vertices[1];
    while (!visited[current]) {
      visited[current] = true;
      const auto& list = vertex_edges[vertex];
      int next = list[0] == current ? list[1] : list[0];
      const Edge& ne = edges_[next];
      vertex = ne.vertices[0] == vertex ? ne.vertices[1] : ne.vertices[0];
      current = next;
    }
  }
}

double Mesh::triangle_area(std::size_t t) const {
  const auto& tri = triangles_[t];
  return signed_area(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

double Mesh::total_area() const {
  double sum = 0.0;
  for (std::size_t t = 0; t < triangles_.size(); ++t) sum += triangle_area(t);
  return sum;
}

double Mesh::perimeter() const {
  double sum = 0.0;
  for (int k : boundary_edges_) sum += edges_[k].length;
  return sum;
}

double Mesh::max_edge_length() const {
  double h = 0.0;
  for (const auto& e : edges_) h = std::max(h, e.length);
  return h;
}

std::string Mesh::hash() const {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&h](const void* data, std::size_t n) {
    const auto* bytes = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ull;
    }
  };
  for (const auto& p : vertices_) {
    double xy[2] = {p.x(), p.y()};
    mix(xy, sizeof(xy));
  }
  for (const auto& t : triangles_) {
    std::int32_t idx[3] = {t[0], t[1], t[2]};
    mix(idx, sizeof(idx));
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void Mesh::validate() const {
  const double h = max_edge_length();
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    if (!(triangle_area(t) > 0.0)) throw MeshError("triangle " + std::to_string(t) + " has non-positive area");
  }
  for (const auto& e : edges_) {
    if (e.triangles[0] < 0) throw MeshError("dangling edge");
    if (std::abs(e.normal.norm() - 1.0) > 1e-12) throw MeshError("edge normal is not unit length");
  }
  for (int k : boundary_edges_) {
    const Edge& e = edges_[k];
    const auto& tri = triangles_[e.triangles[0]];
    Point centroid = (vertices_[tri[0]] + vertices_[tri[1]] + vertices_[tri[2]]) / 3.0;
    if (!(e.normal.dot(centroid - e.midpoint) < 0.0)) throw MeshError("boundary normal points inward");
  }
  if (loop_count_ < 1) throw MeshError("mesh has no boundary loop");
  if (tag_ == DomainTag::disk) {
    for (int v : boundary_vertices_) {
      double r = (vertices_[v] - center_).norm();
      if (std::abs(r - radius_) > 1e-12 * radius_ + h * h) {
        throw MeshError("disk boundary vertex off the circle");
      }
    }
  }
}

Mesh make_disk_mesh(double radius, int refinement, Point center, std::size_t max_triangles) {
  if (!(radius > 0.0)) throw DomainError("disk radius must be positive");
  if (refinement < 0) throw DomainError("refinement level must be non-negative");
  constexpr int kSectors = 8;
  check_size(static_cast<std::size_t>(kSectors) << (2 * std::min(refinement, 30)), max_triangles);

  std::vector<Point> vertices{center};
  for (int k = 0; k < kSectors; ++k) {
    double phi = 2.0 * std::numbers::pi * k / kSectors;
    vertices.emplace_back(center + radius * Point(std::cos(phi), std::sin(phi)));
  }
  std::vector<std::array<int, 3>> triangles;
  for (int k = 0; k < kSectors; ++k) triangles.push_back({0, 1 + k, 1 + (k + 1) % kSectors});

  Mesh mesh(std::move(vertices), std::move(triangles), DomainTag::disk, center, radius);
  for (int level = 0; level < refinement; ++level) mesh = refine_mesh(mesh, max_triangles);
  return mesh;
}

Mesh make_rectangle_mesh(double a, double b, int nx, int ny, std::size_t max_triangles) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("rectangle sides must be positive");
  if (nx < 1 || ny < 1) throw DomainError("rectangle grid needs at least one cell per direction");
  check_size(2ull * static_cast<std::size_t>(nx) * static_cast<std::size_t>(ny), max_triangles);

  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) vertices.emplace_back(a * i / nx, b * j / ny);
  }
  auto id = [nx](int i, int j) { return i + j * (nx + 1); };
  std::vector<std::array<int, 3>> triangles;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh(std::move(vertices), std::move(triangles), DomainTag::rectangle);
}

Mesh make_polygon_mesh(const std::vector<Point>& corners, int refinement, std::size_t max_triangles) {
  const std::size_t n = corners.size();
  if (n < 3) throw DomainError("polygon needs at least three corners");
  if (refinement < 0) throw DomainError("refinement level must be non-negative");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(signed_area(corners[i], corners[(i + 1) % n], corners[(i + 2) % n]) > 0.0)) {
      throw DomainError("polygon must be strictly convex and counter-clockwise");
    }
  }
  check_size(n << (2 * std::min(refinement, 30)), max_triangles);

  Point centroid = Point::Zero();
  for (const auto& c : corners) centroid += c;
  centroid /= static_cast<double>(n);

  std::vector<Point> vertices{centroid};
  vertices.insert(vertices.end(), corners.begin(), corners.end());
  std::vector<std::array<int, 3>> triangles;
  for (std::size_t k = 0; k < n; ++k) {
    triangles.push_back({0, static_cast<int>(1 + k), static_cast<int>(1 + (k + 1) % n)});
  }
  Mesh mesh(std::move(vertices), std::move(triangles), DomainTag::polygon);
  for (int level = 0; level < refinement; ++level) mesh = refine_mesh(mesh, max_triangles);
  return mesh;
}

Mesh refine_mesh(const Mesh& mesh, std::size_t max_triangles) {
  check_size(4 * mesh.num_triangles(), max_triangles);
  const int nv = static_cast<int>(mesh.num_vertices());

  std::vector<Point> vertices = mesh.vertices();
  vertices.reserve(mesh.num_vertices() + mesh.num_edges());
  for (const auto& e : mesh.edges()) {
    Point m = e.midpoint;
    if (e.boundary && mesh.domain_tag() == DomainTag::disk) {
      Point d = m - mesh.center();
      m = mesh.center() + mesh.radius() * d / d.norm();
    }
    vertices.push_back(m);
  }

  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(4 * mesh.num_triangles());
  for (std::size_t t = 0; t < mesh.num_triangles(); ++t) {
    const auto& v = mesh.triangles()[t];
    const auto& e = mesh.triangle_edges()[t];
    // Local edge i is opposite local vertex i.
    int m01 = nv + e[2];
    int m12 = nv + e[0];
    int m20 = nv + e[1];
    triangles.push_back({v[0], m01, m20});
    triangles.push_back({m01, v[1], m12});
    triangles.push_back({m20, m12, v[2]});
    triangles.push_back({m01, m12, m20});
  }
  return Mesh(std::move(vertices), std::move(triangles), mesh.domain_tag(), mesh.center(), mesh.radius());
}

void write_mesh(std::ostream& os, const Mesh& mesh) {
  char buf[96];
  os << "vertices " << mesh.num_vertices() << " triangles " << mesh.num_triangles() << '\n';
  for (const auto& p : mesh.vertices()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", p.x(), p.y());
    os << buf;
  }
  for (const auto& t : mesh.triangles()) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

Mesh read_mesh(std::istream& is) {
  std::string w1, w2;
  long long nv = -1, nt = -1;
  if (!(is >> w1 >> nv >> w2 >> nt) || w1 != "vertices" || w2 != "triangles" || nv < 0 || nt < 0) {
    throw MeshError("bad mesh header, expected `vertices N triangles M`");
  }
  std::vector<Point> vertices(static_cast<std::size_t>(nv));
  for (auto& p : vertices) {
    std::string xs, ys;
    if (!(is >> xs >> ys)) throw MeshError("truncated vertex block");
    p = Point(std::strtod(xs.c_str(), nullptr), std::strtod(ys.c_str(), nullptr));
  }
  std::vector<std::array<int, 3>> triangles(static_cast<std::size_t>(nt));
  for (auto& t : triangles) {
    if (!(is >> t[0] >> t[1] >> t[2])) throw MeshError("truncated triangle block");
  }
  return Mesh(std::move(vertices), std::move(triangles), DomainTag::polygon);
}

}  // namespace payne
