#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "calor/errors.hpp"
#include "calor/frame.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace calor;
using namespace calor::frame;

namespace {

std::vector<std::string> component_names(const Frame& f) {
  std::vector<std::string> names;
  for (EntityId id : f.components) names.push_back(f.at(id).name);
  return names;
}

bool has_attribute(const Entity& e, const std::string& needle) {
  for (const auto& a : e.attributes)
    if (a.find(needle) != std::string::npos) return true;
  return false;
}

ErrorCode code_of(const std::string& text) {
  try {
    parse_document(text);
  } catch (const Error& e) {
    return e.code();
  }
  throw std::runtime_error("expected a parse error");
}

}  // namespace

TEST_CASE("corpus component lists") {
  auto w1 = parse_document(testutil::fixture("wall-1d.txt"));
  CHECK(component_names(w1) ==
        std::vector<std::string>{"fir layer", "pine layer", "cedar layer"});

  auto sp = parse_document(testutil::fixture("spoon.txt"));
  CHECK(component_names(sp) == std::vector<std::string>{"head", "handle"});

  auto w3 = parse_document(testutil::fixture("wall-3d.txt"));
  CHECK(component_names(w3) ==
        std::vector<std::string>{"brick 1", "brick 2", "brick 3", "brick 4"});
}

TEST_CASE("entity extraction and aliasing") {
  SUBCASE("adpositional and compound phrasings coalesce") {
    auto f = parse_document(
        "The handle of the spoon is a solid object. The spoon handle is exposed"
        " to air over the face at $x = 0$ through heat transfer coefficient $h$."
        " Air is maintained at temperature $T_a$."
        " The spoon handle is a right cylinder with rectangular cross-section of"
        " dimensions $a$ and $b$; the axial coordinate is $x$."
        " The spatial domain of the spoon handle is $0 < x < L$."
        " The remainder of the boundary is insulated."
        " The spoon handle has thermal conductivity $k$."
        " Find the temperature at $x = L$."
        " You may use the following parameter values: $a = 0.1$, $b = 0.1$,"
        " $L = 1$, $h = 5$, $T_a = 20$, and $k = 2$.");
    EntityId a = f.find("spoon handle");
    EntityId b = f.find("handle of the spoon");
    REQUIRE(a >= 0);
    CHECK(a == b);
  }
  SUBCASE("compound fluids stay distinct") {
    auto f = parse_document(testutil::fixture("wall-1d.txt"));
    EntityId in = f.find("inside air");
    EntityId out = f.find("outside air");
    REQUIRE(in >= 0);
    REQUIRE(out >= 0);
    CHECK(in != out);
    CHECK(f.at(in).state == State::Fluid);
    CHECK(f.at(out).state == State::Fluid);
  }
}

TEST_CASE("snippets") {
  auto mt = run_frontend(testutil::fixture("wall-3d.txt"));
  Frame f;
  extract_entities(f, mt);
  extract_snippets(f, mt);

  SUBCASE("coordinated objects expand") {
    // "brick 2 also connects to brick 3 and brick 4" -> two connect snippets
    EntityId b2 = f.find("brick 2");
    int connects = 0;
    for (const auto& s : f.snippets)
      if (s.subject == b2 && s.verb == "connect") ++connects;
    CHECK(connects == 2);
  }
  SUBCASE("copular complement") {
    auto f2 = parse_document(testutil::fixture("spoon.txt"));
    EntityId cup = f2.find("cup");
    REQUIRE(cup >= 0);
    bool saw = false;
    for (const auto& s : f2.snippets)
      if (s.subject == cup && s.verb == "be" && s.complement.find("insulator") != std::string::npos)
        saw = true;
    CHECK(saw);
    CHECK(f2.at(cup).is_insulator);
  }
  SUBCASE("past tense clauses are dropped") {
    auto mt2 = run_frontend("The wall contained bricks. The wall contains bricks.");
    Frame g;
    extract_entities(g, mt2);
    extract_snippets(g, mt2);
    int contain = 0;
    for (const auto& s : g.snippets)
      if (s.verb == "contain") ++contain;
    CHECK(contain == 1);
  }
}

TEST_CASE("commonsense incorporation") {
  SUBCASE("token-subset match appends attributes") {
    auto f = parse_document(testutil::fixture("wall-1d.txt"));
    EntityId in = f.find("inside air");
    REQUIRE(in >= 0);
    CHECK(has_attribute(f.at(in), "gas"));
  }
  SUBCASE("database entities never join the frame") {
    auto f = parse_document(testutil::fixture("spoon.txt"));
    CHECK(f.find("ice") == -1);     // db-only nouns stay out
    CHECK(f.find("water") == -1);
  }
  SUBCASE("replacement database") {
    auto f = parse_document(
        "A slab is exposed to air over the face at $x = 0$ through"
        " heat transfer coefficient $h$; air is maintained at temperature $T_a$."
        " The slab is a right cylinder with rectangular cross-section of"
        " dimensions $a$ and $b$; the axial coordinate is $x$."
        " The spatial domain of the slab is $0 < x < L$."
        " The remainder of the boundary is insulated."
        " The slab has thermal conductivity $k$."
        " Find the temperature at $x = 0$."
        " You may use the following parameter values: $a = 1$, $b = 1$, $L = 1$,"
        " $h = 5$, $T_a = 20$, and $k = 2$.",
        "Air is a gas. A slab is a solid object.");
    EntityId slab = f.find("slab");
    REQUIRE(slab >= 0);
    CHECK(f.at(slab).state == State::Solid);
  }
  SUBCASE("malformed database sentence") {
    try {
      parse_document("A cup contains tea.", "Air flows.");
      FAIL("expected MalformedDatabase");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedDatabase);
    }
  }
}

TEST_CASE("state classification and inheritance") {
  auto f = parse_document(testutil::fixture("spoon.txt"));

  SUBCASE("fluid and solid states from the database") {
    CHECK(f.at(f.find("tea")).state == State::Fluid);
    CHECK(f.at(f.find("air")).state == State::Fluid);
    CHECK(f.at(f.find("spoon")).state == State::Solid);
  }
  SUBCASE("children inherit solidity from the parent") {
    EntityId head = f.find("head");
    EntityId handle = f.find("handle");
    EntityId spoon = f.find("spoon");
    CHECK(f.at(head).parent == spoon);
    CHECK(f.at(handle).parent == spoon);
    CHECK(f.at(head).state == State::Solid);
    CHECK(f.at(handle).state == State::Solid);
  }
  SUBCASE("cyclic inheritance is rejected") {
    CHECK(code_of("The alpha block comprises the beta block."
                  " The beta block comprises the alpha block.") ==
          ErrorCode::CyclicInheritance);
  }
  SUBCASE("contradictory state evidence is rejected") {
    CHECK(code_of("The blob is a solid object. The blob is a liquid.") ==
          ErrorCode::ConflictingState);
  }
}

TEST_CASE("instantiation from an archetype") {
  auto f = parse_document(testutil::fixture("wall-3d.txt"));
  EntityId brick = f.find("brick");
  REQUIRE(brick >= 0);
  CHECK(f.at(brick).is_archetype);

  SUBCASE("conductivity and geometry propagate to every instance") {
    for (const char* n : {"brick 1", "brick 2", "brick 3", "brick 4"}) {
      EntityId id = f.find(n);
      REQUIRE(id >= 0);
      CHECK(f.at(id).archetype == brick);
      CHECK(f.conductivity.at(id) == "k_b");
      CHECK(f.geometry.at(id).kind == GeometryKind::Parallelepiped);
    }
  }
  SUBCASE("instance match is case-insensitive") {
    // the statement mixes "Brick 1" and "brick 1"
    CHECK(f.find("Brick 1") == f.find("brick 1"));
  }
  SUBCASE("explicit per-instance values take precedence") {
    auto g = parse_document(
        "Brick 1 connects to brick 2."
        " The coordinates are denoted $x_1$, $x_2$, and $x_3$."
        " Each brick is a parallelepiped of rectangular cross-section of"
        " dimensions $a$ (in $x_2$), $b$ (in $x_3$), $L$ (in $x_1$)."
        " The spatial domain of brick 1 is $0 < x_1 < L, 0 < x_2 < a, 0 < x_3 < b$;"
        " the spatial domain of brick 2 is $L < x_1 < 2L, 0 < x_2 < a, 0 < x_3 < b$."
        " Each brick has thermal conductivity $k_b$."
        " Brick 2 has thermal conductivity $k_2$."
        " Brick 1 is exposed to inside air over the face at $x_1 = 0$ through"
        " heat transfer coefficient $h_in$; brick 2 is exposed to outside air"
        " over the face at $x_1 = 2L$ through heat transfer coefficient $h_out$."
        " Inside air is maintained at temperature $T_in$; outside air is"
        " maintained at temperature $T_out$."
        " The remainder of the boundary is insulated."
        " We introduce a nondimensional heat transfer rate $H$ given by"
        " $Q/(k_b(T_in-T_out)a)$; here $Q$ denotes the heat transfer rate into"
        " brick 1 over the face at $x_1 = 0$."
        " Develop a lower bound and also an upper bound for $H$."
        " You may use the following parameter values: $T_in = 23$, $T_out = 0$,"
        " $a = 0.1$, $b = 0.1$, $L = 0.05$, $h_in = 10$, $h_out = 100$,"
        " $k_b = 0.5$, and $k_2 = 0.25$.");
    CHECK(g.conductivity.at(g.find("brick 1")) == "k_b");
    CHECK(g.conductivity.at(g.find("brick 2")) == "k_2");
  }
}

TEST_CASE("connection graph") {
  SUBCASE("separates links the wall to both fluids") {
    auto f = parse_document(testutil::fixture("wall-3d.txt"));
    EntityId wall = f.find("wall");
    CHECK(f.graph.has_edge(wall, f.find("inside air")));
    CHECK(f.graph.has_edge(wall, f.find("outside air")));
    CHECK(f.graph.has_edge(f.find("brick 1"), f.find("brick 2")));
    CHECK(f.graph.has_edge(f.find("brick 2"), f.find("brick 3")));
    CHECK(f.graph.has_edge(f.find("brick 2"), f.find("brick 4")));
    CHECK(!f.graph.has_edge(f.find("brick 3"), f.find("brick 4")));
  }
  SUBCASE("no connection words, no edges") {
    auto mt = run_frontend("A cup holds tea.");
    Frame g;
    extract_entities(g, mt);
    extract_snippets(g, mt);
    build_connection_graph(g, mt);
    CHECK(g.graph.edges.empty());
  }
}

TEST_CASE("component rule holds in both directions") {
  for (const char* name : {"wall-1d.txt", "spoon.txt", "wall-3d.txt"}) {
    CAPTURE(name);
    auto f = parse_document(testutil::fixture(name));
    std::set<EntityId> comp(f.components.begin(), f.components.end());
    for (EntityId id = 0; id < (EntityId)f.entities.size(); ++id) {
      const Entity& e = f.at(id);
      bool is_parent = false;  // inheritance parents are containers, not parts
      for (const Entity& other : f.entities)
        if (other.parent == id) is_parent = true;
      bool eligible = f.graph.degree(id) > 0 && e.state == State::Solid &&
                      !e.is_insulator && !is_parent && !e.is_archetype;
      CAPTURE(e.name);
      CHECK(comp.count(id) == (eligible ? 1u : 0u));
    }
  }
}

TEST_CASE("domains") {
  SUBCASE("symbolic intervals from the statement") {
    auto f = parse_document(testutil::fixture("wall-1d.txt"));
    const auto& pine = f.domains.at(f.find("pine layer"));
    REQUIRE(pine.coords.size() == 1);
    CHECK(pine.coords[0] == "x");
    CHECK(pine.lo[0] == *parse_affine_text("L_f"));
    CHECK(pine.hi[0] == *parse_affine_text("L_f + L_p"));
  }
  SUBCASE("extends-from phrasing") {
    auto f = parse_document(testutil::fixture("spoon.txt"));
    const auto& head = f.domains.at(f.find("head"));
    CHECK(head.lo[0] == *parse_affine_text("-L_1"));
    CHECK(head.hi[0].is_constant());
    CHECK(head.hi[0].constant == 0);
  }
  SUBCASE("three-axis boxes") {
    auto f = parse_document(testutil::fixture("wall-3d.txt"));
    const auto& b3 = f.domains.at(f.find("brick 3"));
    REQUIRE(b3.coords == std::vector<std::string>{"x_1", "x_2", "x_3"});
    CHECK(b3.lo[0] == *parse_affine_text("L"));
    CHECK(b3.hi[0] == *parse_affine_text("2L"));
    CHECK(b3.lo[2] == *parse_affine_text("b"));
    CHECK(b3.hi[2] == *parse_affine_text("2b"));
  }
  SUBCASE("tiling after substitution") {
    for (const char* name : {"wall-1d.txt", "spoon.txt", "wall-3d.txt"}) {
      CAPTURE(name);
      auto f = parse_document(testutil::fixture(name));
      auto binds = f.binding_map();
      struct Box {
        std::vector<Rational> lo, hi;
      };
      std::vector<Box> boxes;
      for (EntityId id : f.components) {
        const auto& d = f.domains.at(id);
        Box bx;
        for (size_t a = 0; a < d.coords.size(); ++a) {
          auto lo = d.lo[a].evaluate(binds), hi = d.hi[a].evaluate(binds);
          REQUIRE(lo);
          REQUIRE(hi);
          CHECK(*lo < *hi);
          bx.lo.push_back(*lo);
          bx.hi.push_back(*hi);
        }
        boxes.push_back(bx);
      }
      for (size_t i = 0; i < boxes.size(); ++i)
        for (size_t j = i + 1; j < boxes.size(); ++j) {
          bool disjoint = false;
          for (size_t a = 0; a < boxes[i].lo.size(); ++a)
            if (boxes[i].hi[a] <= boxes[j].lo[a] || boxes[j].hi[a] <= boxes[i].lo[a])
              disjoint = true;
          CHECK(disjoint);
        }
    }
  }
}

TEST_CASE("boundary conditions and requested outputs") {
  auto f = parse_document(testutil::fixture("wall-1d.txt"));

  SUBCASE("robin pairs the coefficient with the fluid temperature") {
    bool found = false;
    for (const auto& bc : f.bcs)
      if (bc.kind == BcKind::Robin && bc.h_symbol == "h_in") {
        CHECK(bc.fluid_temp_symbol == "T_in");
        CHECK(bc.station.has_value());
        CHECK(bc.station->is_constant());
        found = true;
      }
    CHECK(found);
  }
  SUBCASE("named lateral insulation") {
    int lateral = 0;
    for (const auto& bc : f.bcs)
      if (bc.kind == BcKind::Insulated && bc.face == FaceSel::Lateral) ++lateral;
    CHECK(lateral == 3);
  }
  SUBCASE("remainder clause flagged") {
    auto g = parse_document(testutil::fixture("wall-3d.txt"));
    CHECK(g.remainder_insulated);
  }
  SUBCASE("requested output kinds") {
    REQUIRE(f.qois.size() == 1);
    CHECK(f.qois[0].kind == QoiKind::TemperatureFieldPlot);
    auto sp = parse_document(testutil::fixture("spoon.txt"));
    REQUIRE(sp.qois.size() == 1);
    CHECK(sp.qois[0].kind == QoiKind::TemperatureFieldPlot);
    auto w3 = parse_document(testutil::fixture("wall-3d.txt"));
    REQUIRE(w3.qois.size() == 1);
    CHECK(w3.qois[0].kind == QoiKind::NondimensionalH);
    CHECK(w3.qois[0].defined_symbol == "H");
    CHECK(w3.qois[0].norm_k == "k_b");
    CHECK(w3.qois[0].norm_T_hot == "T_in");
    CHECK(w3.qois[0].norm_T_cold == "T_out");
    CHECK(w3.qois[0].norm_length == "a");
  }
  SUBCASE("robin without a fluid temperature anywhere") {
    CHECK(code_of("A slab is a solid object. A slab is exposed to mist over the"
                  " face at $x = 0$ through heat transfer coefficient $h$."
                  " The slab is a right cylinder with rectangular cross-section"
                  " of dimensions $a$ and $b$; the axial coordinate is $x$."
                  " The spatial domain of the slab is $0 < x < L$."
                  " The remainder of the boundary is insulated."
                  " The slab has thermal conductivity $k$."
                  " Find the temperature at $x = 0$."
                  " You may use the following parameter values: $a = 1$,"
                  " $b = 1$, $L = 1$, $h = 5$, and $k = 2$.") ==
          ErrorCode::IncompleteRobin);
  }
}

TEST_CASE("parameter binding") {
  auto f = parse_document(testutil::fixture("spoon.txt"));
  auto binds = f.binding_map();

  SUBCASE("full list with decimals and superscripts") {
    CHECK(binds.size() == 12);
    CHECK(binds.at("h_1^lat") == Rational(10));
    CHECK(binds.at("k_1") == Rational(50));
    CHECK(binds.at("a") == Rational(1, 500));
    CHECK(binds.at("T_liq") == Rational(90));
  }
  SUBCASE("coordinates never bind") {
    // "$x = 0$" face locators and domain inequalities stay out
    CHECK(binds.count("x") == 0);
    auto w3 = parse_document(testutil::fixture("wall-3d.txt")).binding_map();
    CHECK(w3.count("x_1") == 0);
    CHECK(w3.at("T_in") == Rational(23));
    CHECK(w3.at("T_out") == Rational(0));
  }
  SUBCASE("conflicting duplicate is rejected") {
    CHECK(code_of("A slab is a solid object. A slab is exposed to air over the"
                  " face at $x = 0$ through heat transfer coefficient $h$."
                  " Air is maintained at temperature $T_a$."
                  " The slab is a right cylinder with rectangular cross-section"
                  " of dimensions $a$ and $b$; the axial coordinate is $x$."
                  " The spatial domain of the slab is $0 < x < L$."
                  " The remainder of the boundary is insulated."
                  " The slab has thermal conductivity $k$."
                  " Find the temperature at $x = 0$."
                  " You may use the following parameter values: $a = 1$,"
                  " $b = 1$, $L = 1$, $h = 5$, $h = 7$, $T_a = 20$, and"
                  " $k = 2$.") == ErrorCode::DuplicateBinding);
  }
  SUBCASE("order independence of binding placement") {
    const char* body =
        " A slab is a solid object. A slab is exposed to air over the face at"
        " $x = 0$ through heat transfer coefficient $h$."
        " Air is maintained at temperature $T_a$."
        " The slab is a right cylinder with rectangular cross-section of"
        " dimensions $a$ and $b$; the axial coordinate is $x$."
        " The spatial domain of the slab is $0 < x < L$."
        " The remainder of the boundary is insulated."
        " The slab has thermal conductivity $k$."
        " Find the temperature at $x = L$.";
    const char* values =
        " You may use the following parameter values: $a = 1$, $b = 1$,"
        " $L = 1$, $h = 5$, $T_a = 20$, and $k = 2$.";
    auto before = parse_document(std::string(values) + body);
    auto after = parse_document(std::string(body) + values);
    CHECK(before.binding_map() == after.binding_map());
    CHECK(to_canonical_json(assemble_template(before)) ==
          to_canonical_json(assemble_template(after)));
  }
}

TEST_CASE("attribute monotonicity through the enrichment stages") {
  auto raw = testutil::fixture("spoon.txt");
  auto mt = run_frontend(raw);
  auto db = run_frontend(testutil::read_file(std::string(CALOR_DATA_DIR) + "/commonsense.txt"));

  Frame f;
  extract_entities(f, mt);
  extract_snippets(f, mt);
  derive_attributes(f, mt);

  auto snapshot = [&f] {
    std::vector<std::vector<std::string>> s;
    for (const auto& e : f.entities) s.push_back(e.attributes);
    return s;
  };
  auto is_prefix_of_current = [&f](const std::vector<std::vector<std::string>>& old) {
    for (size_t i = 0; i < old.size(); ++i) {
      if (f.entities[i].attributes.size() < old[i].size()) return false;
      for (size_t j = 0; j < old[i].size(); ++j)
        if (f.entities[i].attributes[j] != old[i][j]) return false;
    }
    return true;
  };

  auto s0 = snapshot();
  incorporate_commonsense(f, db);
  CHECK(is_prefix_of_current(s0));
  classify_state(f);
  auto s1 = snapshot();
  resolve_inheritance(f, mt);
  CHECK(is_prefix_of_current(s1));
  auto s2 = snapshot();
  resolve_instantiation(f, mt);
  CHECK(is_prefix_of_current(s2));
}
