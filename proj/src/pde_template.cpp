#include "calor/pde_template.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "calor/errors.hpp"
#include "json.hpp"

namespace calor {

using frame::BcKind;
using frame::EntityId;
using frame::Frame;
using frame::GeometryKind;

const char* to_string(DefectKind k) {
  switch (k) {
    case DefectKind::NonPositiveConductivity: return "NonPositiveConductivity";
    case DefectKind::NegativeHeatTransferCoefficient: return "NegativeHeatTransferCoefficient";
    case DefectKind::PureNeumannUnanchored: return "PureNeumannUnanchored";
    case DefectKind::PureNeumannImbalanced: return "PureNeumannImbalanced";
    case DefectKind::UnboundSymbol: return "UnboundSymbol";
  }
  return "Unknown";
}

std::map<std::string, Rational> PdeTemplate::binding_map() const {
  std::map<std::string, Rational> m;
  for (const auto& b : bindings) m.emplace(b.symbol, b.value);
  return m;
}

int PdeTemplate::axis_of(int c, const std::string& coord) const {
  const auto& coords = components[c].domain.coords;
  for (size_t i = 0; i < coords.size(); ++i)
    if (coords[i] == coord) return (int)i;
  return -1;
}

namespace {

// Walk own entry, then the archetype chain, then the parent chain.
template <typename V>
const V* resolve_up(const Frame& f, EntityId id, const std::map<EntityId, V>& m) {
  std::set<EntityId> seen;
  EntityId cur = id;
  while (cur != -1 && !seen.count(cur)) {
    auto it = m.find(cur);
    if (it != m.end()) return &it->second;
    seen.insert(cur);
    const auto& e = f.at(cur);
    cur = e.archetype != -1 ? e.archetype : e.parent;
  }
  return nullptr;
}

Rational interval_overlap(const Rational& lo1, const Rational& hi1,
                          const Rational& lo2, const Rational& hi2) {
  Rational lo = std::max(lo1, lo2), hi = std::min(hi1, hi2);
  return hi > lo ? Rational(hi - lo) : Rational(0);
}

// Area of face (c, ax): product of the other axes' extents (1 for a 1d chain,
// where the cross-section is the shared geometry-class rectangle).
Rational face_area(const PdeTemplate& t, int c, int ax) {
  const auto& comp = t.components[c];
  Rational a = 1;
  for (size_t j = 0; j < comp.lo.size(); ++j)
    if ((int)j != ax) a *= comp.hi[j] - comp.lo[j];
  return a;
}

// Total area of face (c, ax, side) covered by opposite faces of other
// components.  Components have disjoint interiors, so contributions add.
Rational covered_area(const PdeTemplate& t, int c, int ax, int side) {
  const auto& comp = t.components[c];
  const std::string& coord = comp.domain.coords[ax];
  Rational station = side ? comp.hi[ax] : comp.lo[ax];
  Rational covered = 0;
  for (size_t o = 0; o < t.components.size(); ++o) {
    if ((int)o == c) continue;
    const auto& other = t.components[o];
    int oax = t.axis_of((int)o, coord);
    if (oax < 0) continue;
    const Rational& ost = side ? other.lo[oax] : other.hi[oax];
    if (ost != station) continue;
    Rational overlap = 1;
    bool all_shared = true;
    for (size_t j = 0; j < comp.domain.coords.size() && all_shared; ++j) {
      if ((int)j == ax) continue;
      int oj = t.axis_of((int)o, comp.domain.coords[j]);
      if (oj < 0) { all_shared = false; break; }
      overlap *= interval_overlap(comp.lo[j], comp.hi[j], other.lo[oj], other.hi[oj]);
    }
    if (all_shared && overlap > 0) covered += overlap;
  }
  return covered;
}

std::string face_label(const PdeTemplate& t, const FaceKey& k) {
  const auto& comp = t.components[k.component];
  if (k.axis < 0) return comp.name + " lateral";
  return comp.name + " " + comp.domain.coords[k.axis] + (k.side ? "+" : "-");
}

Rational eval_or_throw(const Affine& e, const std::map<std::string, Rational>& binds,
                       const std::string& what) {
  auto v = e.evaluate(binds);
  if (!v) throw Error(ErrorCode::MissingBinding, what + " has no bound value: " + e.str());
  return *v;
}

}  // namespace

std::vector<FaceKey> exterior_faces(const PdeTemplate& t) {
  std::vector<FaceKey> out;
  for (size_t c = 0; c < t.components.size(); ++c) {
    const auto& comp = t.components[c];
    for (size_t ax = 0; ax < comp.domain.coords.size(); ++ax)
      for (int side = 0; side < 2; ++side)
        if (covered_area(t, (int)c, (int)ax, side) < face_area(t, (int)c, (int)ax))
          out.push_back({(int)c, (int)ax, side});
    if (comp.geometry == GeometryKind::RightCylinderRect)
      out.push_back({(int)c, -1, 0});
  }
  std::sort(out.begin(), out.end());
  return out;
}

PdeTemplate assemble_template(const Frame& f) {
  PdeTemplate t;
  t.bindings = f.bindings;
  t.qois = f.qois;
  t.coordinate_vars = f.coordinate_vars;
  t.through_axis = f.through_axis;
  auto binds = f.binding_map();

  std::map<EntityId, int> comp_index;
  for (EntityId id : f.components) {
    TemplateComponent c;
    c.name = f.at(id).name;
    auto dit = f.domains.find(id);
    if (dit == f.domains.end())
      throw Error(ErrorCode::MissingDomain, c.name);
    c.domain = dit->second;
    if (const auto* g = resolve_up(f, id, f.geometry)) {
      c.geometry = g->kind;
      c.dim_symbols = g->dims;
      for (const auto& d : g->dims) {
        auto ai = g->dim_axis.find(d);
        c.dim_axes.push_back(ai != g->dim_axis.end() ? ai->second : std::string());
      }
    }
    auto kit = f.conductivity.find(id);
    if (kit != f.conductivity.end()) c.conductivity_symbol = kit->second;
    for (size_t ax = 0; ax < c.domain.coords.size(); ++ax) {
      Rational lo = eval_or_throw(c.domain.lo[ax], binds, c.name + " domain lower bound");
      Rational hi = eval_or_throw(c.domain.hi[ax], binds, c.name + " domain upper bound");
      if (hi <= lo)
        throw Error(ErrorCode::NonPositiveDimension,
                    c.name + " extent in " + c.domain.coords[ax] + " is " +
                        to_string_exact(hi - lo));
      c.lo.push_back(lo);
      c.hi.push_back(hi);
    }
    comp_index[id] = (int)t.components.size();
    t.components.push_back(std::move(c));
  }

  for (const auto& bc : f.bcs) {
    if (bc.face == frame::FaceSel::Remainder) continue;
    auto ci_it = comp_index.find(bc.target);
    if (ci_it == comp_index.end())
      throw Error(ErrorCode::UnknownFace, "boundary condition targets a non-component",
                  bc.sentence);
    int ci = ci_it->second;
    BcRecord rec;
    rec.kind = bc.kind;
    rec.h_symbol = bc.h_symbol;
    rec.fluid = bc.fluid >= 0 ? f.at(bc.fluid).name : "";
    rec.fluid_temp_symbol = bc.fluid_temp_symbol;
    rec.value_symbol = bc.value_symbol;
    rec.sentence = bc.sentence;

    FaceKey key;
    if (bc.face == frame::FaceSel::Lateral) {
      key = {ci, -1, 0};
    } else {
      int ax = t.axis_of(ci, bc.coord);
      if (ax < 0)
        throw Error(ErrorCode::UnknownFace,
                    "coordinate " + bc.coord + " is not an axis of " + t.components[ci].name,
                    bc.sentence);
      Rational st = eval_or_throw(*bc.station, binds, "face station");
      int side;
      if (st == t.components[ci].lo[ax]) side = 0;
      else if (st == t.components[ci].hi[ax]) side = 1;
      else
        throw Error(ErrorCode::UnknownFace,
                    "no face of " + t.components[ci].name + " at " + bc.coord + " = " +
                        to_string_exact(st),
                    bc.sentence);
      key = {ci, ax, side};
    }
    auto [it, inserted] = t.bc_map.emplace(key, rec);
    if (!inserted && !(it->second == rec))
      throw Error(ErrorCode::UncoveredBoundary,
                  "face " + face_label(t, key) +
                      " carries two distinct boundary conditions (exactly one required)",
                  bc.sentence);
  }

  for (const FaceKey& fk : exterior_faces(t)) {
    if (t.bc_map.count(fk)) continue;
    if (f.remainder_insulated) {
      BcRecord rec;
      rec.kind = BcKind::Insulated;
      t.bc_map.emplace(fk, rec);
    } else {
      throw Error(ErrorCode::UncoveredBoundary,
                  "no boundary condition on face " + face_label(t, fk));
    }
  }
  return t;
}

// ---- well-posedness -------------------------------------------------------

namespace {

// Component adjacency through positive-area shared faces; used both for the
// anchor analysis and for classification.
std::vector<int> connected_part_ids(const PdeTemplate& t) {
  int n = (int)t.components.size();
  std::vector<int> part(n);
  for (int i = 0; i < n; ++i) part[i] = i;
  std::function<int(int)> find = [&](int x) {
    while (part[x] != x) x = part[x] = part[part[x]];
    return x;
  };
  for (int c = 0; c < n; ++c) {
    const auto& comp = t.components[c];
    for (size_t ax = 0; ax < comp.domain.coords.size(); ++ax) {
      const std::string& coord = comp.domain.coords[ax];
      for (int side = 0; side < 2; ++side) {
        Rational station = side ? comp.hi[ax] : comp.lo[ax];
        for (int o = 0; o < n; ++o) {
          if (o == c) continue;
          int oax = t.axis_of(o, coord);
          if (oax < 0) continue;
          const Rational& ost = side ? t.components[o].lo[oax] : t.components[o].hi[oax];
          if (ost != station) continue;
          Rational overlap = 1;
          bool ok = true;
          for (size_t j = 0; j < comp.domain.coords.size() && ok; ++j) {
            if ((int)j == ax) continue;
            int oj = t.axis_of(o, comp.domain.coords[j]);
            if (oj < 0) { ok = false; break; }
            overlap *= interval_overlap(comp.lo[j], comp.hi[j],
                                        t.components[o].lo[oj], t.components[o].hi[oj]);
          }
          if (ok && overlap > 0) part[find(c)] = find(o);
        }
      }
    }
  }
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = find(i);
  return out;
}

// Area of the boundary face a record applies to, for flux-balance checks.
// Lateral cylinder faces use perimeter * length of the component.
std::optional<Rational> record_face_area(const PdeTemplate& t, const FaceKey& k,
                                         const std::map<std::string, Rational>& binds) {
  const auto& comp = t.components[k.component];
  if (k.axis >= 0) {
    if (comp.domain.coords.size() > 1) return face_area(t, k.component, k.axis);
    // 1d chain: cross-section from the geometry class dims
    if (comp.dim_symbols.size() < 2) return std::nullopt;
    auto a = Affine::symbol(comp.dim_symbols[0]).evaluate(binds);
    auto b = Affine::symbol(comp.dim_symbols[1]).evaluate(binds);
    if (!a || !b) return std::nullopt;
    return *a * *b;
  }
  if (comp.dim_symbols.size() < 2) return std::nullopt;
  auto a = Affine::symbol(comp.dim_symbols[0]).evaluate(binds);
  auto b = Affine::symbol(comp.dim_symbols[1]).evaluate(binds);
  if (!a || !b) return std::nullopt;
  Rational len = comp.hi[0] - comp.lo[0];
  return 2 * (*a + *b) * len;
}

}  // namespace

WellPosedReport check_well_posed(const PdeTemplate& t) {
  WellPosedReport r;
  auto binds = t.binding_map();

  for (const auto& comp : t.components) {
    if (comp.conductivity_symbol.empty()) {
      r.defects.push_back({DefectKind::UnboundSymbol,
                           comp.name + " has no conductivity symbol"});
      continue;
    }
    auto it = binds.find(comp.conductivity_symbol);
    if (it == binds.end()) {
      r.defects.push_back({DefectKind::UnboundSymbol,
                           comp.name + " conductivity " + comp.conductivity_symbol});
    } else if (it->second <= 0) {
      r.defects.push_back({DefectKind::NonPositiveConductivity,
                           comp.name + ": " + comp.conductivity_symbol + " = " +
                               to_string_exact(it->second)});
    }
  }

  for (const auto& [key, rec] : t.bc_map) {
    if (rec.kind != BcKind::Robin) continue;
    auto it = binds.find(rec.h_symbol);
    if (it == binds.end()) {
      r.defects.push_back({DefectKind::UnboundSymbol,
                           face_label(t, key) + ": " + rec.h_symbol});
    } else if (it->second < 0) {
      r.defects.push_back({DefectKind::NegativeHeatTransferCoefficient,
                           face_label(t, key) + ": " + rec.h_symbol + " = " +
                               to_string_exact(it->second)});
    }
  }

  // Anchor analysis: each connected part needs a Dirichlet face or a Robin
  // face with h > 0; otherwise the part is pure-Neumann.
  auto part = connected_part_ids(t);
  std::set<int> roots(part.begin(), part.end());
  for (int root : roots) {
    bool anchored = false;
    bool any_unbound = false;
    Rational net = 0;
    std::vector<std::string> members;
    for (const auto& [key, rec] : t.bc_map) {
      if (part[key.component] != root) continue;
      if (rec.kind == BcKind::Dirichlet) anchored = true;
      if (rec.kind == BcKind::Robin) {
        auto it = binds.find(rec.h_symbol);
        // unbound h already reported above; do not also report unanchored
        if (it == binds.end() || it->second > 0) anchored = true;
      }
      if (rec.kind == BcKind::NeumannFlux) {
        auto v = binds.find(rec.value_symbol);
        auto area = record_face_area(t, key, binds);
        if (v == binds.end() || !area) any_unbound = true;
        else net += v->second * *area;
      }
    }
    if (anchored) continue;
    for (size_t c = 0; c < t.components.size(); ++c)
      if (part[c] == root) members.push_back(t.components[c].name);
    std::string who;
    for (size_t i = 0; i < members.size(); ++i) who += (i ? ", " : "") + members[i];
    if (!any_unbound && net == 0) {
      r.defects.push_back({DefectKind::PureNeumannUnanchored, who});
      r.notes.push_back("pure-Neumann part {" + who +
                        "}: prescribed fluxes balance; solution unique up to a constant");
    } else if (!any_unbound) {
      r.defects.push_back({DefectKind::PureNeumannImbalanced,
                           who + ": net prescribed flux " + to_string_exact(net)});
    } else {
      r.defects.push_back({DefectKind::PureNeumannUnanchored, who + " (fluxes unbound)"});
    }
  }

  r.ok = r.defects.empty();
  return r;
}

// ---- Biot number ----------------------------------------------------------

BiotNumber compute_biot(const PdeTemplate& t) {
  if (t.components.empty())
    throw Error(ErrorCode::Unclassifiable, "no components");
  const auto& first = t.components.front();
  if (first.geometry != GeometryKind::RightCylinderRect)
    throw Error(ErrorCode::Unclassifiable,
                "Biot number requires a right-cylinder rectangular cross-section");
  if (first.dim_symbols.size() < 2)
    throw Error(ErrorCode::MissingBinding, "cross-section dimension symbols");
  auto binds = t.binding_map();
  BiotNumber bi;
  Rational a = eval_or_throw(Affine::symbol(first.dim_symbols[0]), binds,
                             "cross-section dimension");
  Rational b = eval_or_throw(Affine::symbol(first.dim_symbols[1]), binds,
                             "cross-section dimension");
  bi.area = a * b;
  bi.perimeter = 2 * (a + b);

  bi.h_max = 0;
  for (const auto& [key, rec] : t.bc_map) {
    if (rec.kind != BcKind::Robin) continue;
    Rational h = eval_or_throw(Affine::symbol(rec.h_symbol), binds,
                               "heat transfer coefficient");
    bi.h_max = std::max(bi.h_max, h);
  }

  bool have_k = false;
  for (const auto& comp : t.components) {
    if (comp.conductivity_symbol.empty())
      throw Error(ErrorCode::MissingBinding, comp.name + " conductivity symbol");
    Rational k = eval_or_throw(Affine::symbol(comp.conductivity_symbol), binds,
                               comp.name + " conductivity");
    bi.k_min = have_k ? std::min(bi.k_min, k) : k;
    have_k = true;
  }
  if (bi.k_min <= 0)
    throw Error(ErrorCode::BadArguments,
                "Biot number undefined for nonpositive conductivity");
  bi.value = bi.h_max * (bi.area / bi.perimeter) / bi.k_min;
  return bi;
}

// ---- classification -------------------------------------------------------

namespace {

// Returns empty string on success, else the reason the class does not apply.
std::string try_quasi1d(const PdeTemplate& t, const Rational& bi_threshold,
                        ProblemClass& out) {
  if (t.components.empty()) return "no components";
  auto binds = t.binding_map();
  std::optional<Rational> a0, b0;
  std::vector<std::pair<Rational, Rational>> spans;
  for (const auto& comp : t.components) {
    if (comp.geometry != GeometryKind::RightCylinderRect)
      return comp.name + " is not a right cylinder";
    if (comp.domain.coords.size() != 1 || comp.domain.coords[0] != t.through_axis)
      return comp.name + " domain is not an interval of the through axis";
    if (comp.dim_symbols.size() < 2)
      return comp.name + " cross-section dimensions unknown";
    auto a = Affine::symbol(comp.dim_symbols[0]).evaluate(binds);
    auto b = Affine::symbol(comp.dim_symbols[1]).evaluate(binds);
    if (!a || !b) return comp.name + " cross-section dimensions unbound";
    if (!a0) { a0 = *a; b0 = *b; }
    else if (*a != *a0 || *b != *b0)
      return "cross-section varies between components";
    spans.emplace_back(comp.lo[0], comp.hi[0]);
  }
  std::sort(spans.begin(), spans.end());
  for (size_t i = 1; i < spans.size(); ++i)
    if (spans[i].first != spans[i - 1].second)
      return "components do not form a single stack";

  bool lateral_robin = false;
  for (const auto& [key, rec] : t.bc_map) {
    if (key.axis < 0) {
      if (rec.kind == BcKind::Robin) lateral_robin = true;
      else if (rec.kind != BcKind::Insulated)
        return "lateral face " + face_label(t, key) + " carries a non-Robin condition";
    }
  }
  for (const auto& q : t.qois)
    if (q.kind == frame::QoiKind::NondimensionalH)
      return "nondimensional heat-rate output requested";

  BiotNumber bi;
  try {
    bi = compute_biot(t);
  } catch (const Error& e) {
    return std::string("Biot number unavailable: ") + e.what();
  }
  if (lateral_robin && bi.value > bi_threshold)
    return "Biot number " + to_string_exact(bi.value) + " exceeds threshold";

  out.tag = ClassTag::Quasi1d;
  out.area = bi.area;
  out.perimeter = bi.perimeter;
  out.biot = bi.value;
  out.biot_gate_active = lateral_robin;
  return {};
}

std::string try_generalized_wall(const PdeTemplate& t, ProblemClass& out) {
  if (t.components.empty()) return "no components";
  auto binds = t.binding_map();
  for (const auto& comp : t.components) {
    if (comp.geometry != GeometryKind::Parallelepiped)
      return comp.name + " is not a parallelepiped";
    if (comp.domain.coords.size() != 3)
      return comp.name + " domain is not a 3d box";
  }
  bool has_H = false;
  for (const auto& q : t.qois)
    if (q.kind == frame::QoiKind::NondimensionalH) has_H = true;
  if (!has_H) return "no nondimensional heat-rate output requested";

  auto part = connected_part_ids(t);
  for (int p : part)
    if (p != part[0]) return "domain is not connected";

  std::optional<Rational> left, right;
  for (size_t c = 0; c < t.components.size(); ++c) {
    int ax = t.axis_of((int)c, t.through_axis);
    if (ax < 0) return t.components[c].name + " lacks the through axis";
    Rational lo = t.components[c].lo[ax], hi = t.components[c].hi[ax];
    left = left ? std::min(*left, lo) : lo;
    right = right ? std::max(*right, hi) : hi;
  }

  std::optional<Rational> hl, tl, hr, tr;
  for (const auto& [key, rec] : t.bc_map) {
    const auto& comp = t.components[key.component];
    bool at_left = false, at_right = false;
    if (key.axis >= 0 && comp.domain.coords[key.axis] == t.through_axis) {
      Rational station = key.side ? comp.hi[key.axis] : comp.lo[key.axis];
      at_left = key.side == 0 && station == *left;
      at_right = key.side == 1 && station == *right;
    }
    if (rec.kind == BcKind::Robin) {
      if (!at_left && !at_right)
        return "Robin condition on non-extreme face " + face_label(t, key);
      auto h = binds.find(rec.h_symbol);
      auto tf = binds.find(rec.fluid_temp_symbol);
      if (h == binds.end() || tf == binds.end())
        return "Robin data unbound on " + face_label(t, key);
      auto& hs = at_left ? hl : hr;
      auto& ts = at_left ? tl : tr;
      if (!hs) { hs = h->second; ts = tf->second; }
      else if (*hs != h->second || *ts != tf->second)
        return "Robin data differs across the " +
               std::string(at_left ? "left" : "right") + " extreme face";
    } else if (rec.kind == BcKind::Insulated) {
      if (at_left || at_right)
        return "extreme face " + face_label(t, key) + " is insulated";
    } else {
      return face_label(t, key) + " carries an unsupported condition kind";
    }
  }
  if (!hl || !hr) return "an extreme face side has no Robin data";
  if (*hl <= 0 || *hr <= 0) return "extreme-face heat transfer coefficient is not positive";

  out.tag = ClassTag::GeneralizedWall;
  out.x1_axis = t.through_axis;
  out.x1_left = *left;
  out.x1_right = *right;
  out.h_left = *hl;
  out.t_left = *tl;
  out.h_right = *hr;
  out.t_right = *tr;
  return {};
}

}  // namespace

ProblemClass classify_problem(const PdeTemplate& t, const Rational& bi_threshold) {
  ProblemClass pc;
  std::string r1 = try_quasi1d(t, bi_threshold, pc);
  if (r1.empty()) return pc;
  std::string r2 = try_generalized_wall(t, pc);
  if (r2.empty()) return pc;
  throw Error(ErrorCode::Unclassifiable,
              "not a quasi-1d stack (" + r1 + "); not a generalized wall (" + r2 + ")");
}

// ---- canonical serialization ---------------------------------------------

namespace {

const char* geometry_name(GeometryKind g) {
  switch (g) {
    case GeometryKind::RightCylinderRect: return "right_cylinder_rect";
    case GeometryKind::Parallelepiped: return "parallelepiped";
    case GeometryKind::None: break;
  }
  return "none";
}

const char* bc_name(BcKind k) {
  switch (k) {
    case BcKind::Robin: return "robin";
    case BcKind::Dirichlet: return "dirichlet";
    case BcKind::NeumannFlux: return "neumann_flux";
    case BcKind::Insulated: return "insulated";
  }
  return "unknown";
}

const char* qoi_name(frame::QoiKind k) {
  switch (k) {
    case frame::QoiKind::TemperatureAtPoint: return "temperature_at_point";
    case frame::QoiKind::HeatRateAtFace: return "heat_rate_at_face";
    case frame::QoiKind::FluxAtFace: return "flux_at_face";
    case frame::QoiKind::TemperatureFieldPlot: return "temperature_field_plot";
    case frame::QoiKind::NondimensionalH: return "nondimensional_heat_rate";
  }
  return "unknown";
}

std::string face_name(const PdeTemplate& t, const FaceKey& k) {
  if (k.axis < 0) return "lateral";
  return t.components[k.component].domain.coords[k.axis] + (k.side ? "+" : "-");
}

}  // namespace

std::string to_canonical_json(const PdeTemplate& t) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["schema"] = "template_v1";
  doc["coordinates"] = t.coordinate_vars;
  doc["through_axis"] = t.through_axis;

  doc["components"] = json::array();
  for (const auto& comp : t.components) {
    json jc;
    jc["name"] = comp.name;
    jc["geometry"] = geometry_name(comp.geometry);
    json jd;
    jd["coords"] = comp.domain.coords;
    json lo = json::array(), hi = json::array();
    json lov = json::array(), hiv = json::array();
    for (size_t i = 0; i < comp.domain.coords.size(); ++i) {
      lo.push_back(comp.domain.lo[i].str());
      hi.push_back(comp.domain.hi[i].str());
      lov.push_back(to_string_exact(comp.lo[i]));
      hiv.push_back(to_string_exact(comp.hi[i]));
    }
    jd["lo"] = lo;
    jd["hi"] = hi;
    jd["lo_value"] = lov;
    jd["hi_value"] = hiv;
    jc["domain"] = jd;
    jc["conductivity"] = comp.conductivity_symbol;
    json dims = json::array();
    for (size_t i = 0; i < comp.dim_symbols.size(); ++i) {
      json d;
      d["symbol"] = comp.dim_symbols[i];
      d["axis"] = i < comp.dim_axes.size() ? comp.dim_axes[i] : std::string();
      dims.push_back(d);
    }
    jc["dims"] = dims;
    doc["components"].push_back(jc);
  }

  doc["boundary_conditions"] = json::array();
  for (const auto& [key, rec] : t.bc_map) {
    json jb;
    jb["component"] = t.components[key.component].name;
    jb["face"] = face_name(t, key);
    jb["kind"] = bc_name(rec.kind);
    if (rec.kind == BcKind::Robin) {
      jb["h"] = rec.h_symbol;
      jb["fluid"] = rec.fluid;
      jb["fluid_temperature"] = rec.fluid_temp_symbol;
    } else if (rec.kind != BcKind::Insulated) {
      jb["value"] = rec.value_symbol;
    }
    doc["boundary_conditions"].push_back(jb);
  }

  doc["volumetric_sources"] = json::array();

  doc["qoi"] = json::array();
  for (const auto& q : t.qois) {
    json jq;
    jq["kind"] = qoi_name(q.kind);
    if (q.location) jq["location"] = q.location->str();
    if (!q.coord.empty()) jq["coordinate"] = q.coord;
    if (q.kind == frame::QoiKind::NondimensionalH) {
      jq["symbol"] = q.defined_symbol;
      jq["rate_symbol"] = q.rate_symbol;
      json norm;
      norm["conductivity"] = q.norm_k;
      norm["t_hot"] = q.norm_T_hot;
      norm["t_cold"] = q.norm_T_cold;
      norm["length"] = q.norm_length;
      jq["normalization"] = norm;
    }
    doc["qoi"].push_back(jq);
  }

  json binds = json::array();
  std::vector<frame::SymbolBinding> sorted = t.bindings;
  std::sort(sorted.begin(), sorted.end(),
            [](const auto& x, const auto& y) { return x.symbol < y.symbol; });
  for (const auto& b : sorted) {
    json jb;
    jb["symbol"] = b.symbol;
    jb["value"] = to_string_exact(b.value);
    binds.push_back(jb);
  }
  doc["bindings"] = binds;

  return doc.dump(2) + "\n";
}

}  // namespace calor
