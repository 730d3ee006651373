#pragma once

#include <string>

#include <Eigen/Dense>

#include "calor/fem2d.hpp"
#include "calor/frame.hpp"
#include "calor/genwall.hpp"
#include "calor/quasi1d.hpp"
#include "calor/system.hpp"

// Deterministic SVG figure rendering: same inputs, same bytes.  All numeric
// output goes through one %.6g formatter and containers are iterated in
// stored order.

namespace calor::svg {

// Heat-path graph: entities as nodes (solids boxed, fluids rounded,
// insulators dashed), connection edges, layered left-to-right layout.
std::string render_graph_figure(const frame::Frame& f);

// To-scale section of the component union with labels, station ticks, and a
// boundary-condition legend.
std::string render_geometry_figure(const System& s, const PdeTemplate& t);

// T(x) curve with per-component shading.
std::string render_field_quasi1d(const System& s, const Quasi1dSolution& sol);

// Filled temperature map of an FE solution, sampled on a uniform grid, with
// the domain outline and a colorbar.
std::string render_field_fe(const fem2d::TriMesh& m, const Eigen::VectorXd& u);

// H bound interval with the optional certified FE value and its error bar.
std::string render_bound_panel(const BoundResult& r);

}  // namespace calor::svg
