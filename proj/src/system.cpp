#include "calor/system.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "calor/errors.hpp"

namespace calor {

using frame::GeometryKind;

std::vector<Component> instantiate_components(const PdeTemplate& t) {
  std::vector<Component> out;
  auto binds = t.binding_map();
  for (const auto& tc : t.components) {
    Component c;
    c.name = tc.name;
    c.geometry = tc.geometry;

    if (tc.conductivity_symbol.empty())
      throw Error(ErrorCode::MissingConductivity, tc.name);
    auto kit = binds.find(tc.conductivity_symbol);
    if (kit == binds.end())
      throw Error(ErrorCode::MissingBinding, tc.name + " conductivity " + tc.conductivity_symbol);
    c.conductivity = kit->second;

    if (tc.geometry == GeometryKind::Parallelepiped) {
      int ax = -1;
      for (size_t i = 0; i < tc.domain.coords.size(); ++i)
        if (tc.domain.coords[i] == t.through_axis) ax = (int)i;
      if (ax < 0 || tc.domain.coords.size() != 3)
        throw Error(ErrorCode::NonPositiveDimension,
                    tc.name + " is not a box aligned with the through axis");
      c.axis = t.through_axis;
      c.span = {tc.lo[ax], tc.hi[ax]};
      int slot = 0;
      for (size_t i = 0; i < tc.domain.coords.size(); ++i) {
        if ((int)i == ax) continue;
        c.cross_coords[slot] = tc.domain.coords[i];
        c.cross[slot] = {tc.lo[i], tc.hi[i]};
        ++slot;
      }
    } else {
      // right cylinder: 1d span, cross-section (0,a) x (0,b)
      if (tc.domain.coords.size() != 1)
        throw Error(ErrorCode::NonPositiveDimension,
                    tc.name + " cylinder domain must be a single interval");
      c.axis = tc.domain.coords[0];
      c.span = {tc.lo[0], tc.hi[0]};
      if (tc.dim_symbols.size() < 2)
        throw Error(ErrorCode::MissingBinding, tc.name + " cross-section dimensions");
      for (int d = 0; d < 2; ++d) {
        auto it = binds.find(tc.dim_symbols[d]);
        if (it == binds.end())
          throw Error(ErrorCode::MissingBinding, tc.name + " dimension " + tc.dim_symbols[d]);
        c.cross[d] = {0, it->second};
      }
    }

    if (c.span.length() <= 0)
      throw Error(ErrorCode::NonPositiveDimension, c.name + " has nonpositive length");
    for (int d = 0; d < 2; ++d)
      if (c.cross[d].length() <= 0)
        throw Error(ErrorCode::NonPositiveDimension,
                    c.name + " has a nonpositive cross-section dimension");
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

Rational overlap_len(const Interval& a, const Interval& b) {
  Rational lo = std::max(a.lo, b.lo), hi = std::min(a.hi, b.hi);
  return hi > lo ? Rational(hi - lo) : Rational(0);
}

// Cross-section rectangles of two components, with axes matched by label
// when labels are present.  Returns the overlap lengths per axis.
std::array<Rational, 2> cross_overlap(const Component& a, const Component& b) {
  std::array<Rational, 2> out{0, 0};
  for (int i = 0; i < 2; ++i) {
    int j = i;
    if (!a.cross_coords[i].empty()) {
      j = -1;
      for (int k = 0; k < 2; ++k)
        if (b.cross_coords[k] == a.cross_coords[i]) j = k;
      if (j < 0) return {0, 0};
    }
    out[i] = overlap_len(a.cross[i], b.cross[j]);
  }
  return out;
}

bool ports_coincide(const Component& a, int pa, const Component& b, int pb) {
  if (a.axis != b.axis) return false;
  const Rational& sa = pa ? a.span.hi : a.span.lo;
  const Rational& sb = pb ? b.span.hi : b.span.lo;
  if (sa != sb) return false;
  auto ov = cross_overlap(a, b);
  return ov[0] > 0 && ov[1] > 0;
}

// Closed cross-section rectangles share an edge segment (or overlap in
// area): touching in at least a positive-length segment, not just a corner.
bool cross_rects_adjacent(const Component& a, const Component& b) {
  std::array<Rational, 2> closed{0, 0};
  bool nonempty = true;
  for (int i = 0; i < 2; ++i) {
    int j = i;
    if (!a.cross_coords[i].empty()) {
      j = -1;
      for (int k = 0; k < 2; ++k)
        if (b.cross_coords[k] == a.cross_coords[i]) j = k;
      if (j < 0) return false;
    }
    Rational lo = std::max(a.cross[i].lo, b.cross[j].lo);
    Rational hi = std::min(a.cross[i].hi, b.cross[j].hi);
    if (hi < lo) nonempty = false;
    closed[i] = hi - lo;
  }
  return nonempty && (closed[0] > 0 || closed[1] > 0);
}

// Any coincident face pair between two components; prefers port (axial)
// faces and falls back to transverse box faces.
bool find_shared_face(const Component& a, int ia, const Component& b, int ib,
                      Connection& out) {
  for (int pa = 0; pa < 2; ++pa)
    for (int pb = 0; pb < 2; ++pb)
      if (pa != pb && ports_coincide(a, pa, b, pb)) {
        out = {ia, pa, ib, pb};
        return true;
      }
  if (a.geometry != GeometryKind::Parallelepiped ||
      b.geometry != GeometryKind::Parallelepiped)
    return false;
  // transverse faces: equal station on a shared cross axis, overlapping in
  // the through axis and the remaining cross axis
  if (a.axis != b.axis) return false;
  for (int i = 0; i < 2; ++i) {
    int j = -1;
    for (int k = 0; k < 2; ++k)
      if (b.cross_coords[k] == a.cross_coords[i]) j = k;
    if (j < 0) continue;
    int io = 1 - i;
    int jo = 1 - j;
    if (b.cross_coords[jo] != a.cross_coords[io]) continue;
    for (int sa = 0; sa < 2; ++sa)
      for (int sb = 0; sb < 2; ++sb) {
        if (sa == sb) continue;
        const Rational& va = sa ? a.cross[i].hi : a.cross[i].lo;
        const Rational& vb = sb ? b.cross[j].hi : b.cross[j].lo;
        if (va != vb) continue;
        if (overlap_len(a.span, b.span) > 0 &&
            overlap_len(a.cross[io], b.cross[jo]) > 0) {
          out = {ia, 2 + 2 * i + sa, ib, 2 + 2 * j + sb};
          return true;
        }
      }
  }
  return false;
}

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  void unite(int a, int b) { p[find(a)] = find(b); }
};

}  // namespace

System connect_system(const std::vector<Component>& comps, const frame::Frame& f) {
  System s;
  s.components = comps;
  int n = (int)comps.size();

  // frame components are in the same order the template (and hence `comps`)
  // was built from
  std::map<frame::EntityId, int> index;
  for (size_t i = 0; i < f.components.size(); ++i) index[f.components[i]] = (int)i;

  std::vector<bool> has_solid_edge(n, false);
  for (const auto& e : f.graph.edges) {
    auto ia = index.find(e.a);
    auto ib = index.find(e.b);
    if (ia == index.end() || ib == index.end()) continue;  // fluid-side edge
    Connection con;
    if (!find_shared_face(comps[ia->second], ia->second, comps[ib->second], ib->second, con))
      throw Error(ErrorCode::NoSharedFace,
                  comps[ia->second].name + " and " + comps[ib->second].name +
                      " are connected but share no coincident face",
                  e.sentence);
    s.connections.push_back(con);
    has_solid_edge[ia->second] = true;
    has_solid_edge[ib->second] = true;
  }
  if (n >= 2)
    for (int i = 0; i < n; ++i)
      if (!has_solid_edge[i])
        throw Error(ErrorCode::DanglingComponent,
                    comps[i].name + " has no solid neighbour");

  // dof map: union-find over geometrically coincident ports
  UnionFind uf(2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int pi = 0; pi < 2; ++pi)
        for (int pj = 0; pj < 2; ++pj)
          if (ports_coincide(comps[i], pi, comps[j], pj))
            uf.unite(2 * i + pi, 2 * j + pj);

  s.dof_map.assign(n, {-1, -1});
  std::map<int, int> root_to_dof;
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < 2; ++p) {
      int r = uf.find(2 * i + p);
      auto [it, inserted] = root_to_dof.emplace(r, (int)s.dof_station.size());
      if (inserted)
        s.dof_station.push_back(p ? comps[i].span.hi : comps[i].span.lo);
      s.dof_map[i][p] = it->second;
    }
  s.n_global = (int)s.dof_station.size();
  return s;
}

SliceSet find_slices(const System& s) {
  SliceSet set;
  std::vector<Rational> stations;
  for (const auto& c : s.components) {
    stations.push_back(c.span.lo);
    stations.push_back(c.span.hi);
  }
  std::sort(stations.begin(), stations.end());
  stations.erase(std::unique(stations.begin(), stations.end()), stations.end());

  for (const auto& st : stations) {
    Slice sl;
    sl.station = st;
    for (size_t c = 0; c < s.components.size(); ++c) {
      if (s.components[c].span.lo == st) sl.faces.push_back({(int)c, 0});
      if (s.components[c].span.hi == st) sl.faces.push_back({(int)c, 1});
    }
    // flood fill: faces whose closed cross-sections share a segment (or
    // overlap) belong to one connected part
    int m = (int)sl.faces.size();
    UnionFind uf(m);
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (cross_rects_adjacent(s.components[sl.faces[i].comp],
                                 s.components[sl.faces[j].comp]))
          uf.unite(i, j);
    sl.part_of.resize(m);
    std::map<int, int> root_to_part;
    for (int i = 0; i < m; ++i) {
      int r = uf.find(i);
      auto [it, inserted] = root_to_part.emplace(r, sl.n_parts);
      if (inserted) ++sl.n_parts;
      sl.part_of[i] = it->second;
    }
    set.slices.push_back(std::move(sl));
  }
  return set;
}

ParallelepipedSet find_parallelepipeds(const System& s) {
  int n = (int)s.components.size();
  // greedy chain merge: identical cross-section rectangles, spans meeting
  // end-to-start
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const auto& ca = s.components[a];
    const auto& cb = s.components[b];
    if (ca.cross != cb.cross) {
      for (int i = 0; i < 2; ++i) {
        if (ca.cross[i].lo != cb.cross[i].lo) return ca.cross[i].lo < cb.cross[i].lo;
        if (ca.cross[i].hi != cb.cross[i].hi) return ca.cross[i].hi < cb.cross[i].hi;
      }
    }
    return ca.span.lo < cb.span.lo;
  });

  ParallelepipedSet set;
  for (int idx : order) {
    const auto& c = s.components[idx];
    Parallelepiped* tail =
        set.members.empty() ? nullptr : &set.members.back();
    bool chains = tail && !tail->members.empty() &&
                  s.components[tail->members.back()].cross == c.cross &&
                  s.components[tail->members.back()].cross_coords == c.cross_coords &&
                  tail->span.hi == c.span.lo;
    if (chains) {
      tail->members.push_back(idx);
      tail->span.hi = c.span.hi;
    } else {
      Parallelepiped p;
      p.members = {idx};
      p.span = c.span;
      p.cross = c.cross;
      p.cross_coords = c.cross_coords;
      set.members.push_back(std::move(p));
    }
  }

  // minimality audit: no two members may still be mergeable
  for (size_t i = 0; i < set.members.size(); ++i)
    for (size_t j = i + 1; j < set.members.size(); ++j) {
      const auto& a = set.members[i];
      const auto& b = set.members[j];
      if (a.cross == b.cross && a.cross_coords == b.cross_coords &&
          (a.span.hi == b.span.lo || b.span.hi == a.span.lo))
        throw Error(ErrorCode::BadArguments,
                    "parallelepiped decomposition is not minimal");
    }
  return set;
}

CoalescedMap coalesce_slice_dofs(const System& s, const SliceSet& slices) {
  UnionFind uf(s.n_global);
  for (const auto& sl : slices.slices) {
    // merge all global dofs inside each connected part
    std::map<int, int> part_first;
    for (size_t i = 0; i < sl.faces.size(); ++i) {
      int dof = s.dof_map[sl.faces[i].comp][sl.faces[i].port];
      auto [it, inserted] = part_first.emplace(sl.part_of[i], dof);
      if (!inserted) uf.unite(it->second, dof);
    }
  }
  CoalescedMap m;
  m.from_original.assign(s.n_global, -1);
  std::map<int, int> root_to_dof;
  for (int d = 0; d < s.n_global; ++d) {
    int r = uf.find(d);
    auto [it, inserted] = root_to_dof.emplace(r, m.n_global);
    if (inserted) {
      m.dof_station.push_back(s.dof_station[d]);
      ++m.n_global;
    }
    m.from_original[d] = it->second;
  }
  m.dof_map.assign(s.components.size(), {-1, -1});
  for (size_t c = 0; c < s.components.size(); ++c)
    for (int p = 0; p < 2; ++p)
      m.dof_map[c][p] = m.from_original[s.dof_map[c][p]];
  return m;
}

}  // namespace calor
