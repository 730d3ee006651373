#pragma once
#include <array>
#include <utility>
#include <vector>

#include "calor/system.hpp"

namespace calor {

enum class ElementKind { WallLinear, Fin };

// Port-condensed component: 2x2 stiffness and load over the two axial
// ports, after eliminating the interior profile.
struct CondensedElement {
  ElementKind kind = ElementKind::WallLinear;
  std::array<std::array<double, 2>, 2> K{{{0, 0}, {0, 0}}};
  std::array<double, 2> f{0, 0};
  // fin data, used for field reconstruction
  double m = 0;        // sqrt(h_lat P / (k A))
  double t_fluid = 0;  // lateral ambient temperature
};

// Closed-form temperature on one component.
// wall: T(x) = t0 + slope*(x - x0)
// fin:  T(x) = t_fluid + c1*sinh(m*(x - x0)) + c2*cosh(m*(x - x0))
struct Segment {
  int comp = 0;
  ElementKind kind = ElementKind::WallLinear;
  double x0 = 0, x1 = 0;
  double t0 = 0, slope = 0;
  double t_fluid = 0, m = 0, c1 = 0, c2 = 0;

  double value(double x) const;
  double derivative(double x) const;
};

struct Quasi1dSolution {
  std::vector<double> port_values;  // indexed by global dof
  std::vector<Segment> segments;    // one per component
};

CondensedElement condense_wall(const Component& c);

// Fin condensation with exact sinh/cosh basis.  The load column is the
// port reaction of the zero-port-value ambient lift; its closed form is
// (h P T_f / m) tanh(mL/2) per port, verified in the tests against direct
// quadrature of the weak form.  Throws DegenerateFin when m*L is too small
// to evaluate stably (callers fall back to condense_wall plus a uniform
// lateral load).
CondensedElement condense_fin(const Component& c, double h_lat, double t_fluid);

// Direct stiffness assembly over ports and dense symmetric solve.
// `dirichlet` pins global dofs to prescribed temperatures.  Checks the
// residual to 1e-10 relative and throws SingularSystem when the system has
// no anchor.
std::vector<double> assemble_and_solve(
    const System& s, const std::vector<CondensedElement>& elems,
    const std::vector<std::pair<int, double>>& dirichlet = {});

std::vector<Segment> reconstruct_field(const System& s,
                                       const std::vector<CondensedElement>& elems,
                                       const std::vector<double>& port_values);

// Scalar outputs.  Temperatures evaluate the segment closed forms; flux and
// heat rate at an axial boundary face follow the outward-normal convention:
// positive means heat leaving the domain through that face.  `binds`
// resolves symbolic evaluation locations.
double evaluate_qoi(const Quasi1dSolution& sol, const System& s,
                    const frame::QoISpec& q,
                    const std::map<std::string, Rational>& binds = {});

// Sampled (x, T) pairs, at least `n` per component, for plotting.
std::vector<std::pair<double, double>> sample_field(const Quasi1dSolution& sol,
                                                    int n_per_component = 200);

// Sum of outward heat rates over every boundary face (axial conduction
// through exposed ports, convective lateral loss on fins, prescribed axial
// fluxes).  Zero in exact arithmetic; the tests bound it at 1e-9 relative.
double net_boundary_outflow(const PdeTemplate& t, const System& s,
                            const Quasi1dSolution& sol);

// Full pipeline: evaluate boundary data from the template bindings,
// condense every component, assemble, solve, reconstruct.
Quasi1dSolution solve_quasi1d(const PdeTemplate& t, const System& s);

}  // namespace calor
