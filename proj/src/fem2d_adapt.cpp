#include <cmath>

#include "calor/errors.hpp"
#include "calor/fem2d.hpp"

namespace calor::fem2d {

FeSolution run_adaptive(const System& s, const HConstants& c,
                        const AdaptOptions& opt) {
  if (!(opt.tol_qoi > 0) || !(opt.tol_energy > 0))
    throw Error(ErrorCode::BadArguments, "run_adaptive: tolerances must be positive");
  if (!(opt.marking_fraction > 0) || opt.marking_fraction > 1)
    throw Error(ErrorCode::BadArguments,
                "run_adaptive: marking fraction outside (0,1]");

  SectionMesh sm = mesh_brick_union(s, c.x1_left, c.x1_right, opt.initial_cells);
  const FeCoefficients fc = wall_coefficients(s, c);
  const double extrusion = sm.extrusion;
  QoiFunctional qoi = [&c, extrusion](const TriMesh& mesh,
                                      const Eigen::VectorXd& u) {
    return wall_qoi(mesh, u, c, extrusion);
  };

  FeSolution sol;
  sol.extrusion = extrusion;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    const FeSystem sys = assemble_fe(sm.mesh, fc);
    const Eigen::VectorXd u = solve_fe(sys);
    const double h_value = qoi(sm.mesh, u);
    const TwoLevelEstimate est = estimate_error_two_level(sm.mesh, fc, u, qoi);
    const double energy_u = std::sqrt(
        std::max(energy_product(sm.mesh, fc, u, u), 0.0));

    sol.mesh = sm.mesh;
    sol.nodal = u;
    sol.qoi_value = h_value;
    sol.qoi_error_estimate = est.qoi_estimate;
    sol.energy_error_estimate = est.energy_estimate;
    sol.log.push_back({sm.mesh.n_vertices(), h_value, est.energy_estimate,
                       est.qoi_estimate});

    const double qoi_scale = std::max(std::abs(h_value), 1e-300);
    const double energy_scale = std::max(energy_u, 1e-300);
    if (est.qoi_estimate <= opt.tol_qoi * qoi_scale &&
        est.energy_estimate <= opt.tol_energy * energy_scale)
      return sol;

    if (sm.mesh.n_vertices() >= opt.max_dofs) break;
    adapt_nvb(sm.mesh, est.indicators, opt.marking_fraction);
    if (sm.mesh.n_vertices() > opt.max_dofs) break;
  }
  sol.budget_exceeded = true;
  return sol;
}

}  // namespace calor::fem2d
