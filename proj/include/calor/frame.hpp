#pragma once
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "calor/affine.hpp"
#include "calor/text.hpp"

namespace calor::frame {

using text::MarkedText;

enum class State { Unknown, Solid, Fluid };

using EntityId = int;

struct Entity {
  std::string name;                  // canonical lowercased name
  std::set<std::string> aliases;     // alternate phrasings mapped to this entity
  std::vector<std::string> attributes;  // append-only, first occurrence order
  State state = State::Unknown;
  bool is_insulator = false;
  EntityId parent = -1;     // inheritance parent, -1 if none
  EntityId archetype = -1;  // archetype this instance was struck from
  bool is_archetype = false;
  int first_mention = 0;  // document-order token counter of first occurrence
};

struct Snippet {
  EntityId subject;
  std::string verb;        // lemma
  std::string complement;  // object or complement text, determiners stripped
  int sentence = 0;
};

struct Edge {
  EntityId a, b;
  int sentence = 0;  // provenance
};

struct ConnectionGraph {
  std::vector<EntityId> nodes;  // entities that participate in any edge
  std::vector<Edge> edges;      // deduplicated, unordered pairs
  int degree(EntityId e) const;
  bool has_edge(EntityId x, EntityId y) const;
};

// Axis-aligned symbolic interval per coordinate.
struct DomainSpec {
  std::vector<std::string> coords;  // coordinate symbol per axis
  std::vector<Affine> lo, hi;       // parallel to coords
  int sentence = 0;
};

enum class FaceSel { AxialStation, Lateral, Remainder };

enum class BcKind { Robin, Dirichlet, NeumannFlux, Insulated };

struct BoundaryConditionSpec {
  BcKind kind = BcKind::Robin;
  EntityId target = -1;  // component entity; -1 when only the face is named
  FaceSel face = FaceSel::AxialStation;
  std::string coord;              // coordinate of the station when axial
  std::optional<Affine> station;  // axial location
  std::string h_symbol;           // Robin
  EntityId fluid = -1;            // Robin: the named fluid entity
  std::string fluid_temp_symbol;  // Robin: resolved from the fluid entity
  std::string value_symbol;       // Dirichlet temperature / Neumann flux
  int sentence = 0;
};

enum class QoiKind {
  TemperatureAtPoint,
  HeatRateAtFace,
  FluxAtFace,
  TemperatureFieldPlot,
  NondimensionalH,
};

struct QoISpec {
  QoiKind kind;
  std::optional<Affine> location;  // for point/face kinds
  std::string coord;
  // normalization for the nondimensional heat transfer rate H
  std::string defined_symbol;  // the nondimensional symbol itself
  std::string norm_k, norm_T_hot, norm_T_cold, norm_length, rate_symbol;
  int sentence = 0;
};

struct SymbolBinding {
  std::string symbol;
  Rational value;
  int sentence = 0;
};

enum class GeometryKind { None, RightCylinderRect, Parallelepiped };

struct GeometrySpec {
  GeometryKind kind = GeometryKind::None;
  std::vector<std::string> dims;  // dimension symbols in attribute order
  std::map<std::string, std::string> dim_axis;  // dim symbol -> coordinate, if annotated
};

struct Frame {
  std::vector<Entity> entities;
  std::vector<Snippet> snippets;
  ConnectionGraph graph;
  std::vector<EntityId> components;  // first-mention order
  std::vector<std::string> coordinate_vars;
  std::string through_axis;  // coordinate aligned with the heat path
  std::map<EntityId, DomainSpec> domains;
  std::vector<BoundaryConditionSpec> bcs;
  bool remainder_insulated = false;
  std::vector<QoISpec> qois;
  std::map<EntityId, std::string> conductivity;  // component -> symbol
  std::map<EntityId, GeometrySpec> geometry;
  std::map<EntityId, std::string> length_symbol;
  std::vector<SymbolBinding> bindings;

  EntityId find(const std::string& name) const;  // by name or alias, -1 if absent
  const Entity& at(EntityId id) const { return entities[id]; }
  std::map<std::string, Rational> binding_map() const;
  // fluid temperature symbol recorded on a fluid entity, empty if none
  std::string fluid_temperature(EntityId fluid) const;
};

// ---- pipeline stages (each mutates the frame in place) -------------------
void extract_entities(Frame& f, const MarkedText& mt);
void extract_snippets(Frame& f, const MarkedText& mt);
void derive_attributes(Frame& f, const MarkedText& mt);
void incorporate_commonsense(Frame& f, const MarkedText& db);
void classify_state(Frame& f);
void resolve_inheritance(Frame& f, const MarkedText& mt);
void resolve_instantiation(Frame& f, const MarkedText& mt);
void build_connection_graph(Frame& f, const MarkedText& mt);
void identify_components(Frame& f);
void extract_domains(Frame& f, const MarkedText& mt);
void extract_bcs_and_qoi(Frame& f, const MarkedText& mt);
void extract_properties(Frame& f, const MarkedText& mt);
void bind_parameters(Frame& f, const MarkedText& mt);
// post-binding validation: domain overlap, face references, conductivity
void validate(Frame& f);

// Run the full pipeline.  `db` defaults to the bundled commonsense database.
Frame parse_document(const MarkedText& mt, const MarkedText* db = nullptr);
Frame parse_document(const std::string& raw_text);
Frame parse_document(const std::string& raw_text, const std::string& db_text);

// Frontend convenience: normalize + tag + prepare with the builtin lexicon.
MarkedText run_frontend(const std::string& raw);

const char* to_string(State s);
const char* to_string(BcKind k);
const char* to_string(QoiKind k);

}  // namespace calor::frame
