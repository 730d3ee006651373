#pragma once
#include <array>
#include <string>
#include <vector>

#include "calor/pde_template.hpp"

namespace calor {

struct Interval {
  Rational lo, hi;
  Rational length() const { return hi - lo; }
  bool operator==(const Interval&) const = default;
};

// A geometry-class instance with numeric dimensions.  Both classes are
// normalized to a through-axis span plus a transverse cross-section
// rectangle; a right cylinder anchors its cross-section at the origin.
struct Component {
  std::string name;
  frame::GeometryKind geometry = frame::GeometryKind::None;
  Rational conductivity;
  std::string axis;  // through coordinate label
  Interval span;
  std::array<std::string, 2> cross_coords{};  // "" for a cylinder cross-section
  std::array<Interval, 2> cross{};

  Rational cross_area() const { return cross[0].length() * cross[1].length(); }
  Rational cross_perimeter() const {
    return 2 * (cross[0].length() + cross[1].length());
  }
  // 3 for a right cylinder (2 axial + lateral), 6 for a parallelepiped
  int face_count() const {
    return geometry == frame::GeometryKind::Parallelepiped ? 6 : 3;
  }
};

// Face indices: 0 = through-axis lower (port 0), 1 = through-axis upper
// (port 1), 2 = cylinder lateral; parallelepipeds use 2..5 for the
// transverse faces (cross axis 0 lo/hi, cross axis 1 lo/hi).
struct Connection {
  int comp_a = 0, face_a = 0;
  int comp_b = 0, face_b = 0;
};

struct System {
  std::vector<Component> components;
  std::vector<Connection> connections;          // one per solid-solid graph edge
  std::vector<std::array<int, 2>> dof_map;      // (component, port) -> global dof
  int n_global = 0;
  std::vector<Rational> dof_station;            // through-axis station per dof
};

// One through-axis station with every component port face lying on it.
struct SliceFace {
  int comp = 0, port = 0;
};

struct Slice {
  Rational station;
  std::vector<SliceFace> faces;
  std::vector<int> part_of;  // connected-part id per face, 0-based
  int n_parts = 0;
};

struct SliceSet {
  std::vector<Slice> slices;  // sorted by station
};

// Maximal run of components chained along the through axis with identical
// cross-sections; geometrically a single box.
struct Parallelepiped {
  std::vector<int> members;  // component indices in chain order
  Interval span;
  std::array<std::string, 2> cross_coords{};
  std::array<Interval, 2> cross{};
  bool robin_lo = false, robin_hi = false;  // filled by the bound solver

  Rational cross_area() const { return cross[0].length() * cross[1].length(); }
};

struct ParallelepipedSet {
  std::vector<Parallelepiped> members;
};

// Quotient of System::dof_map where every connected slice part collapses to
// one degree of freedom.  Used only by the slice-uniform bound solve.
struct CoalescedMap {
  std::vector<std::array<int, 2>> dof_map;
  int n_global = 0;
  std::vector<Rational> dof_station;
  std::vector<int> from_original;  // original dof -> coalesced dof
};

std::vector<Component> instantiate_components(const PdeTemplate& t);

// Builds the system from the heat-path graph: every solid-solid edge must
// resolve to a coincident face pair (NoSharedFace otherwise), and with two
// or more components each one needs at least one solid neighbour
// (DanglingComponent).  The dof map merges ports that lie on the same
// station with overlapping cross-sections, via union-find.
System connect_system(const std::vector<Component>& comps, const frame::Frame& f);

SliceSet find_slices(const System& s);

ParallelepipedSet find_parallelepipeds(const System& s);

CoalescedMap coalesce_slice_dofs(const System& s, const SliceSet& slices);

}  // namespace calor
