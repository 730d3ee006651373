#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include "calor/genwall.hpp"
#include "calor/system.hpp"

namespace calor::fem2d {

// Boundary edge tags used by the wall solver.  Tests may introduce further
// tags; anything not present in FeCoefficients::robin is treated as a natural
// (insulated) boundary.
inline constexpr int kTagRobinLeft = 0;
inline constexpr int kTagRobinRight = 1;
inline constexpr int kTagInsulated = 2;

// Conforming triangle mesh with the bookkeeping needed for newest-vertex
// bisection.  Triangle vertices are ordered so that (v[0], v[1]) is the
// refinement edge and v[2] is the newest vertex; all triangles are stored
// counter-clockwise.  `ancestor` tracks which triangle of some reference mesh
// a triangle descends from (reset by uniform_refine, propagated on bisection).
// `vertex_parents` records the edge endpoints a midpoint vertex was created
// from ((-1,-1) for vertices of the initial mesh); parents always have smaller
// indices, so piecewise-linear data can be prolonged in one ascending sweep.
struct TriMesh {
  struct Tri {
    std::array<int, 3> v;
    int material = 0;
    int ancestor = -1;
  };

  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<int, 2>> vertex_parents;
  std::vector<Tri> triangles;
  // Boundary edges keyed by the sorted vertex pair; value is the tag.
  std::map<std::pair<int, int>, int> boundary_tags;

  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_triangles() const { return static_cast<int>(triangles.size()); }
};

// Cross-section mesh of a brick union.  The union must be invariant along one
// of the two cross axes (the extrusion direction); the mesh lives in the
// (through-axis, remaining cross axis) plane.  Face integrals of the 3d
// problem are edge integrals times `extrusion`.
struct SectionMesh {
  TriMesh mesh;
  double extrusion = 1.0;
};

// Meshes the component union with a structured, conforming grid: grid lines
// are the component extents (exact station matches), each cell is subdivided
// n_per_cell times per axis and split into two triangles whose shared
// refinement edge is the cell diagonal, which makes the initial mesh NVB
// compatible.  Boundary edges at the through-axis extremes are tagged
// robin-left / robin-right, everything else insulated.
SectionMesh mesh_brick_union(const System& s, const Rational& x1_left,
                             const Rational& x1_right, int n_per_cell = 2);

// Coefficients of the discrete problem: conductivity per material tag, an
// optional volumetric source, and Robin data per boundary tag.  The Robin
// contribution to the weak form is  +h * u*v  on the edge and the load is
// +rhs(x,y)*v; for a physical Robin boundary rhs = h * T_ambient.
struct RobinBc {
  double h = 0.0;
  std::function<double(double, double)> rhs;
};
struct FeCoefficients {
  std::vector<double> k_by_material;
  std::function<double(double, double)> source;  // may be empty
  std::map<int, RobinBc> robin;
};

// Conductivities and Robin data of a classified wall problem, ready for
// assemble_fe.  Materials are component indices of `s`.
FeCoefficients wall_coefficients(const System& s, const HConstants& c);

struct FeSystem {
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd F;
};

// Linear P1 assembly.  Element integrals of k grad u . grad v are exact;
// edge integrals use Simpson's rule, exact for quadratic data.  Throws
// DegenerateTriangle for zero or negatively oriented triangles.
FeSystem assemble_fe(const TriMesh& m, const FeCoefficients& c);

// Sparse LDLT solve with a residual audit (rel. 1e-10); throws SingularSystem.
Eigen::VectorXd solve_fe(const FeSystem& sys);

// Energy inner product a(u,v) = int k grad u . grad v + sum_robin int h u v.
double energy_product(const TriMesh& m, const FeCoefficients& c,
                      const Eigen::VectorXd& u, const Eigen::VectorXd& v);

// Interpolates nodal data from the mesh `fine` was refined from onto `fine`.
Eigen::VectorXd prolong(const TriMesh& fine, const Eigen::VectorXd& coarse);

// One uniform NVB generation: every triangle of `m` is bisected at least
// once.  Ancestors of the result index triangles of `m`.
TriMesh uniform_refine(const TriMesh& m);

// Doerfler marking (smallest set whose indicator mass reaches `fraction` of
// the total) followed by conforming NVB refinement of the marked set.
void adapt_nvb(TriMesh& m, const std::vector<double>& indicators,
               double fraction);

// Nondimensional heat intake H of a wall solution: the Robin-left edge flux
// integral, extrusion applied, normalised by the constants in `c`.
double wall_qoi(const TriMesh& m, const Eigen::VectorXd& u,
                const HConstants& c, double extrusion);

// Two-level error estimate: solve once more on a uniformly refined mesh and
// measure the energy distance between the two solutions.  `indicators` are
// squared local energies of the difference accumulated per coarse triangle
// (Robin edge terms included, attached to the adjacent triangle);
// energy_estimate = sqrt(sum indicators).  `qoi_estimate` is the difference
// of `qoi` between the levels (0 when no functional is supplied).
struct TwoLevelEstimate {
  double energy_estimate = 0.0;
  double qoi_estimate = 0.0;
  std::vector<double> indicators;
  TriMesh fine;
  Eigen::VectorXd u_fine;
};
using QoiFunctional =
    std::function<double(const TriMesh&, const Eigen::VectorXd&)>;
TwoLevelEstimate estimate_error_two_level(const TriMesh& m,
                                          const FeCoefficients& c,
                                          const Eigen::VectorXd& u,
                                          const QoiFunctional& qoi = {});

struct AdaptOptions {
  double tol_qoi = 1e-3;     // relative to |H|
  double tol_energy = 1e-3;  // relative to the solution energy norm
  int max_dofs = 200000;
  double marking_fraction = 0.5;
  int initial_cells = 2;
  int max_iterations = 80;
};

struct AdaptStep {
  int dofs = 0;
  double h_value = 0.0;
  double energy_estimate = 0.0;
  double qoi_estimate = 0.0;
};

struct FeSolution {
  TriMesh mesh;
  Eigen::VectorXd nodal;
  double extrusion = 1.0;
  double qoi_value = 0.0;
  double qoi_error_estimate = 0.0;
  double energy_error_estimate = 0.0;
  bool budget_exceeded = false;
  std::vector<AdaptStep> log;
};

// Adaptive loop: solve, estimate, mark, refine until both estimates drop
// under their relative tolerances.  If the dof cap is hit first the last
// solution is returned with budget_exceeded set.
FeSolution run_adaptive(const System& s, const HConstants& c,
                        const AdaptOptions& opt = {});

}  // namespace calor::fem2d
