#include <algorithm>
#include <map>
#include <numeric>

#include "calor/errors.hpp"
#include "calor/fem2d.hpp"

namespace calor::fem2d {

namespace {

std::pair<int, int> sorted_pair(int a, int b) {
  return a < b ? std::make_pair(a, b) : std::make_pair(b, a);
}

std::vector<Rational> refined_lines(std::vector<Rational> stations, int n) {
  std::sort(stations.begin(), stations.end());
  stations.erase(std::unique(stations.begin(), stations.end()), stations.end());
  std::vector<Rational> lines;
  for (size_t i = 0; i + 1 < stations.size(); ++i) {
    const Rational& lo = stations[i];
    const Rational step = (stations[i + 1] - lo) / n;
    for (int k = 0; k < n; ++k) lines.push_back(lo + step * k);
  }
  lines.push_back(stations.back());
  return lines;
}

// Conforming bisection bookkeeping.  Triangles are never erased mid-flight;
// parents are flagged dead and compacted at the end so indices stay stable
// during the recursion.
struct Refiner {
  TriMesh& m;
  std::vector<char> alive;
  std::map<std::pair<int, int>, std::array<int, 2>> edge_tris;
  std::map<std::pair<int, int>, int> midpoint;

  explicit Refiner(TriMesh& mesh) : m(mesh), alive(mesh.triangles.size(), 1) {
    for (int i = 0; i < m.n_triangles(); ++i) add_edges(i);
  }

  void add_edges(int ti) {
    const auto& v = m.triangles[ti].v;
    for (int e = 0; e < 3; ++e) {
      auto key = sorted_pair(v[e], v[(e + 1) % 3]);
      auto [it, fresh] = edge_tris.try_emplace(key, std::array<int, 2>{ti, -1});
      if (!fresh) {
        if (it->second[0] < 0)
          it->second[0] = ti;
        else
          it->second[1] = ti;
      }
    }
  }

  void remove_edges(int ti) {
    const auto& v = m.triangles[ti].v;
    for (int e = 0; e < 3; ++e) {
      auto it = edge_tris.find(sorted_pair(v[e], v[(e + 1) % 3]));
      if (it == edge_tris.end()) continue;
      if (it->second[0] == ti) it->second[0] = -1;
      if (it->second[1] == ti) it->second[1] = -1;
      if (it->second[0] < 0 && it->second[1] < 0) edge_tris.erase(it);
    }
  }

  int other_on_edge(const std::pair<int, int>& e, int self) const {
    auto it = edge_tris.find(e);
    if (it == edge_tris.end()) return -1;
    if (it->second[0] != self && it->second[0] >= 0) return it->second[0];
    if (it->second[1] != self && it->second[1] >= 0) return it->second[1];
    return -1;
  }

  int get_midpoint(const std::pair<int, int>& e) {
    auto it = midpoint.find(e);
    if (it != midpoint.end()) return it->second;
    const auto& a = m.vertices[e.first];
    const auto& b = m.vertices[e.second];
    int mv = m.n_vertices();
    m.vertices.push_back({(a[0] + b[0]) / 2, (a[1] + b[1]) / 2});
    m.vertex_parents.push_back({e.first, e.second});
    midpoint.emplace(e, mv);
    auto bt = m.boundary_tags.find(e);
    if (bt != m.boundary_tags.end()) {
      int tag = bt->second;
      m.boundary_tags.erase(bt);
      m.boundary_tags.emplace(sorted_pair(e.first, mv), tag);
      m.boundary_tags.emplace(sorted_pair(mv, e.second), tag);
    }
    return mv;
  }

  void split(int ti, int mv) {
    remove_edges(ti);
    alive[ti] = 0;
    TriMesh::Tri t = m.triangles[ti];
    TriMesh::Tri c1{{t.v[2], t.v[0], mv}, t.material, t.ancestor};
    TriMesh::Tri c2{{t.v[1], t.v[2], mv}, t.material, t.ancestor};
    int i1 = m.n_triangles();
    m.triangles.push_back(c1);
    m.triangles.push_back(c2);
    alive.push_back(1);
    alive.push_back(1);
    add_edges(i1);
    add_edges(i1 + 1);
  }

  // Guarantees ti has been bisected on return.  When the neighbour across the
  // refinement edge does not share it, the neighbour is refined first (the
  // shared edge then becomes a child's refinement edge), which is the usual
  // recursive closure and keeps the mesh conforming.
  void ensure_refined(int ti) {
    int partner = -1;
    for (;;) {
      if (!alive[ti]) return;  // bisected during a deeper closure step
      auto e = sorted_pair(m.triangles[ti].v[0], m.triangles[ti].v[1]);
      partner = other_on_edge(e, ti);
      if (partner < 0) break;
      auto pe =
          sorted_pair(m.triangles[partner].v[0], m.triangles[partner].v[1]);
      if (pe == e) break;
      ensure_refined(partner);
    }
    auto e = sorted_pair(m.triangles[ti].v[0], m.triangles[ti].v[1]);
    int mv = get_midpoint(e);
    split(ti, mv);
    if (partner >= 0) split(partner, mv);
  }

  void compact() {
    std::vector<TriMesh::Tri> out;
    out.reserve(m.triangles.size());
    for (int i = 0; i < m.n_triangles(); ++i)
      if (alive[i]) out.push_back(m.triangles[i]);
    m.triangles = std::move(out);
  }
};

void refine_marked(TriMesh& m, const std::vector<char>& marked) {
  Refiner r(m);
  for (size_t i = 0; i < marked.size(); ++i)
    if (marked[i]) r.ensure_refined(static_cast<int>(i));
  r.compact();
}

}  // namespace

SectionMesh mesh_brick_union(const System& s, const Rational& x1_left,
                             const Rational& x1_right, int n_per_cell) {
  if (s.components.empty())
    throw Error(ErrorCode::BadArguments, "mesh_brick_union: empty system");
  if (n_per_cell < 1)
    throw Error(ErrorCode::BadArguments, "mesh_brick_union: n_per_cell < 1");
  for (const auto& c : s.components)
    if (c.geometry != frame::GeometryKind::Parallelepiped)
      throw Error(ErrorCode::Unclassifiable,
                  "mesh_brick_union: component '" + c.name +
                      "' is not a parallelepiped");

  const Component& c0 = s.components.front();
  // The section plane needs one cross direction shared by every component.
  int extr = -1;
  for (int cand : {0, 1}) {
    bool uniform = true;
    for (const auto& c : s.components)
      uniform = uniform && c.cross_coords[cand] == c0.cross_coords[cand] &&
                c.cross[cand] == c0.cross[cand];
    if (uniform) {
      extr = cand;
      break;
    }
  }
  if (extr < 0)
    throw Error(ErrorCode::Unclassifiable,
                "mesh_brick_union: union is not invariant along either cross "
                "direction");
  const int mi = 1 - extr;
  for (const auto& c : s.components)
    if (c.axis != c0.axis || c.cross_coords[mi] != c0.cross_coords[mi])
      throw Error(ErrorCode::Unclassifiable,
                  "mesh_brick_union: components disagree on the section axes");

  std::vector<Rational> tx, my;
  for (const auto& c : s.components) {
    tx.push_back(c.span.lo);
    tx.push_back(c.span.hi);
    my.push_back(c.cross[mi].lo);
    my.push_back(c.cross[mi].hi);
  }
  tx = refined_lines(std::move(tx), n_per_cell);
  my = refined_lines(std::move(my), n_per_cell);

  const int nx = static_cast<int>(tx.size()) - 1;
  const int ny = static_cast<int>(my.size()) - 1;
  // material per cell, -1 outside the union
  std::vector<int> cell(static_cast<size_t>(nx) * ny, -1);
  auto cell_at = [&](int i, int j) -> int& {
    return cell[static_cast<size_t>(j) * nx + i];
  };
  for (int j = 0; j < ny; ++j) {
    const Rational cy = (my[j] + my[j + 1]) / 2;
    for (int i = 0; i < nx; ++i) {
      const Rational cx = (tx[i] + tx[i + 1]) / 2;
      for (size_t ci = 0; ci < s.components.size(); ++ci) {
        const Component& c = s.components[ci];
        if (c.span.lo < cx && cx < c.span.hi && c.cross[mi].lo < cy &&
            cy < c.cross[mi].hi) {
          cell_at(i, j) = static_cast<int>(ci);
          break;
        }
      }
    }
  }

  SectionMesh out;
  TriMesh& mesh = out.mesh;
  out.extrusion = to_double(c0.cross[extr].hi - c0.cross[extr].lo);

  std::map<std::pair<int, int>, int> vid;
  auto vertex = [&](int i, int j) {
    auto [it, fresh] = vid.try_emplace({i, j}, mesh.n_vertices());
    if (fresh) {
      mesh.vertices.push_back({to_double(tx[i]), to_double(my[j])});
      mesh.vertex_parents.push_back({-1, -1});
    }
    return it->second;
  };
  auto live = [&](int i, int j) {
    return i >= 0 && j >= 0 && i < nx && j < ny && cell_at(i, j) >= 0;
  };
  auto boundary_tag = [&](const Rational& station, bool axial) {
    if (axial && station == x1_left) return kTagRobinLeft;
    if (axial && station == x1_right) return kTagRobinRight;
    return kTagInsulated;
  };

  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      if (!live(i, j)) continue;
      int p00 = vertex(i, j), p10 = vertex(i + 1, j);
      int p11 = vertex(i + 1, j + 1), p01 = vertex(i, j + 1);
      int mat = cell_at(i, j);
      int base = mesh.n_triangles();
      // both refinement edges on the diagonal: NVB-compatible start
      mesh.triangles.push_back({{p10, p01, p00}, mat, base});
      mesh.triangles.push_back({{p01, p10, p11}, mat, base + 1});
      if (!live(i - 1, j))
        mesh.boundary_tags.emplace(sorted_pair(p00, p01),
                                   boundary_tag(tx[i], true));
      if (!live(i + 1, j))
        mesh.boundary_tags.emplace(sorted_pair(p10, p11),
                                   boundary_tag(tx[i + 1], true));
      if (!live(i, j - 1))
        mesh.boundary_tags.emplace(sorted_pair(p00, p10),
                                   boundary_tag(my[j], false));
      if (!live(i, j + 1))
        mesh.boundary_tags.emplace(sorted_pair(p01, p11),
                                   boundary_tag(my[j + 1], false));
    }
  if (mesh.triangles.empty())
    throw Error(ErrorCode::BadArguments,
                "mesh_brick_union: union has empty interior");
  return out;
}

TriMesh uniform_refine(const TriMesh& m) {
  TriMesh fine = m;
  for (int i = 0; i < fine.n_triangles(); ++i) fine.triangles[i].ancestor = i;
  refine_marked(fine, std::vector<char>(m.triangles.size(), 1));
  return fine;
}

void adapt_nvb(TriMesh& m, const std::vector<double>& indicators,
               double fraction) {
  if (indicators.size() != m.triangles.size())
    throw Error(ErrorCode::BadArguments,
                "adapt_nvb: one indicator per triangle required");
  double total = std::accumulate(indicators.begin(), indicators.end(), 0.0);
  if (!(total > 0)) return;
  std::vector<int> order(indicators.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (indicators[a] != indicators[b]) return indicators[a] > indicators[b];
    return a < b;
  });
  std::vector<char> marked(indicators.size(), 0);
  double acc = 0;
  for (int i : order) {
    marked[i] = 1;
    acc += indicators[i];
    if (acc >= fraction * total) break;
  }
  refine_marked(m, marked);
}

Eigen::VectorXd prolong(const TriMesh& fine, const Eigen::VectorXd& coarse) {
  Eigen::VectorXd u(fine.n_vertices());
  for (int v = 0; v < fine.n_vertices(); ++v) {
    if (v < coarse.size()) {
      u[v] = coarse[v];
      continue;
    }
    const auto& p = fine.vertex_parents[v];
    if (p[0] < 0 || p[1] < 0 || p[0] >= v || p[1] >= v)
      throw Error(ErrorCode::BadArguments,
                  "prolong: vertex without resolvable parents");
    u[v] = (u[p[0]] + u[p[1]]) / 2;
  }
  return u;
}

}  // namespace calor::fem2d
