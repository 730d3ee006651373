#pragma once
#include <map>
#include <string>
#include <vector>

#include "calor/frame.hpp"

namespace calor {

// Ground-truth PDE description built from a parsed frame: instantiated
// component geometry, a boundary condition on every exterior face, the
// requested outputs, and the numeric parameter bindings.

// One face of one component.  `axis` indexes the component's domain
// coordinates; -1 selects the lateral surface of a right cylinder.
struct FaceKey {
  int component = 0;
  int axis = 0;
  int side = 0;  // 0 = lower station, 1 = upper station
  auto operator<=>(const FaceKey&) const = default;
};

struct BcRecord {
  frame::BcKind kind = frame::BcKind::Insulated;
  std::string h_symbol;           // Robin
  std::string fluid;              // Robin: fluid entity name, for reporting
  std::string fluid_temp_symbol;  // Robin
  std::string value_symbol;       // Dirichlet temperature / Neumann flux
  int sentence = -1;

  bool operator==(const BcRecord&) const = default;
};

struct TemplateComponent {
  std::string name;
  frame::GeometryKind geometry = frame::GeometryKind::None;
  frame::DomainSpec domain;      // symbolic bounds, one interval per coordinate
  std::vector<Rational> lo, hi;  // bound values, parallel to domain.coords
  std::string conductivity_symbol;
  std::vector<std::string> dim_symbols;  // geometry-class dimension symbols
  std::vector<std::string> dim_axes;     // coordinate per dimension, "" if implied
};

struct PdeTemplate {
  std::vector<TemplateComponent> components;
  std::map<FaceKey, BcRecord> bc_map;
  // Slot kept so the schema is stable; no current problem class uses sources.
  std::vector<std::string> volumetric_sources;
  std::vector<frame::QoISpec> qois;
  std::vector<frame::SymbolBinding> bindings;
  std::vector<std::string> coordinate_vars;
  std::string through_axis;

  std::map<std::string, Rational> binding_map() const;
  // Index of `coord` in components[c].domain.coords, -1 if absent.
  int axis_of(int c, const std::string& coord) const;
};

// Well-posedness diagnosis.  Defects are data, not exceptions: a template
// carrying a defect is still inspectable and serializable.
enum class DefectKind {
  NonPositiveConductivity,
  NegativeHeatTransferCoefficient,
  PureNeumannUnanchored,   // a connected part with no Dirichlet/Robin anchor
  PureNeumannImbalanced,   // same, and prescribed fluxes do not balance
  UnboundSymbol,           // a parameter needed for the checks has no value
};

const char* to_string(DefectKind k);

struct Defect {
  DefectKind kind;
  std::string detail;
};

struct WellPosedReport {
  bool ok = true;
  std::vector<Defect> defects;
  std::vector<std::string> notes;  // e.g. "solution unique up to a constant"
};

struct BiotNumber {
  Rational value;  // h_max * (A/P) / k_min, exact
  Rational h_max, k_min, area, perimeter;
};

enum class ClassTag { Quasi1d, GeneralizedWall };

struct ProblemClass {
  ClassTag tag = ClassTag::Quasi1d;
  // Quasi1d metadata
  Rational area, perimeter, biot;
  bool biot_gate_active = false;  // false when no lateral Robin face exists
  // GeneralizedWall metadata
  std::string x1_axis;
  Rational x1_left, x1_right;
  Rational h_left, t_left, h_right, t_right;
};

// Builds the template: resolves geometry and conductivity through the
// inheritance chain, evaluates domain bounds, maps every boundary-condition
// spec onto a concrete face, and covers leftover exterior faces from the
// "remainder insulated" clause.  Throws UncoveredBoundary if an exterior
// face ends up with no record, MissingBinding if a domain bound has no value.
PdeTemplate assemble_template(const frame::Frame& f);

WellPosedReport check_well_posed(const PdeTemplate& t);

// Bi = h_max * (A/P) / k_min over all Robin records / all components, with
// A = a*b and P = 2(a+b) from the rectangular cross-section.
BiotNumber compute_biot(const PdeTemplate& t);

ProblemClass classify_problem(const PdeTemplate& t,
                              const Rational& bi_threshold = Rational(1, 10));

// Canonical serialization: stable key order, exact rationals as strings.
// Byte-equal output is the definition of template equality in tests.
std::string to_canonical_json(const PdeTemplate& t);

// Exterior faces of the assembled domain (area not fully covered by a
// neighbouring component), in FaceKey order.  Exposed for tests and for the
// component model.
std::vector<FaceKey> exterior_faces(const PdeTemplate& t);

}  // namespace calor
