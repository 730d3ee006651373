#include "calor/quasi1d.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "calor/errors.hpp"

namespace calor {

using frame::BcKind;

double Segment::value(double x) const {
  if (kind == ElementKind::WallLinear) return t0 + slope * (x - x0);
  return t_fluid + c1 * std::sinh(m * (x - x0)) + c2 * std::cosh(m * (x - x0));
}

double Segment::derivative(double x) const {
  if (kind == ElementKind::WallLinear) return slope;
  return m * (c1 * std::cosh(m * (x - x0)) + c2 * std::sinh(m * (x - x0)));
}

CondensedElement condense_wall(const Component& c) {
  CondensedElement e;
  e.kind = ElementKind::WallLinear;
  double g = to_double(c.conductivity * c.cross_area() / c.span.length());
  e.K = {{{g, -g}, {-g, g}}};
  return e;
}

CondensedElement condense_fin(const Component& c, double h_lat, double t_fluid) {
  double k = to_double(c.conductivity);
  double A = to_double(c.cross_area());
  double P = to_double(c.cross_perimeter());
  double L = to_double(c.span.length());
  double m = std::sqrt(h_lat * P / (k * A));
  // below this the coth/csch forms cancel catastrophically; the wall
  // element with a uniform lateral load is the exact limit
  if (!(m * L > 1e-12))
    throw Error(ErrorCode::DegenerateFin,
                c.name + ": m*L = " + std::to_string(m * L));
  CondensedElement e;
  e.kind = ElementKind::Fin;
  e.m = m;
  e.t_fluid = t_fluid;
  double mu = k * A * m;
  double coth = 1.0 / std::tanh(m * L);
  double csch = 1.0 / std::sinh(m * L);  // 0 when sinh overflows, as wanted
  e.K = {{{mu * coth, -mu * csch}, {-mu * csch, mu * coth}}};
  double load = h_lat * P * t_fluid / m * std::tanh(m * L / 2);
  e.f = {load, load};
  return e;
}

std::vector<double> assemble_and_solve(
    const System& s, const std::vector<CondensedElement>& elems,
    const std::vector<std::pair<int, double>>& dirichlet) {
  int n = s.n_global;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(n);
  for (size_t c = 0; c < elems.size(); ++c) {
    for (int i = 0; i < 2; ++i) {
      int gi = s.dof_map[c][i];
      F[gi] += elems[c].f[i];
      for (int j = 0; j < 2; ++j) K(gi, s.dof_map[c][j]) += elems[c].K[i][j];
    }
  }

  for (const auto& [dof, value] : dirichlet) {
    F -= K.col(dof) * value;
    K.row(dof).setZero();
    K.col(dof).setZero();
    K(dof, dof) = 1.0;
    F[dof] = value;
  }

  Eigen::LDLT<Eigen::MatrixXd> ldlt(K);
  Eigen::VectorXd u = ldlt.solve(F);
  double rnorm = (K * u - F).lpNorm<Eigen::Infinity>();
  double scale = std::max(F.lpNorm<Eigen::Infinity>(),
                          K.lpNorm<Eigen::Infinity>() * u.lpNorm<Eigen::Infinity>());
  if (!u.allFinite() || (scale > 0 && rnorm > 1e-10 * scale) ||
      ldlt.info() != Eigen::Success)
    throw Error(ErrorCode::SingularSystem,
                "port system is singular or badly conditioned (residual " +
                    std::to_string(rnorm) + ")");
  return std::vector<double>(u.data(), u.data() + n);
}

std::vector<Segment> reconstruct_field(const System& s,
                                       const std::vector<CondensedElement>& elems,
                                       const std::vector<double>& port_values) {
  std::vector<Segment> out;
  for (size_t c = 0; c < s.components.size(); ++c) {
    Segment seg;
    seg.comp = (int)c;
    seg.kind = elems[c].kind;
    seg.x0 = to_double(s.components[c].span.lo);
    seg.x1 = to_double(s.components[c].span.hi);
    double ul = port_values[s.dof_map[c][0]];
    double ur = port_values[s.dof_map[c][1]];
    if (seg.kind == ElementKind::WallLinear) {
      seg.t0 = ul;
      seg.slope = (ur - ul) / (seg.x1 - seg.x0);
    } else {
      seg.m = elems[c].m;
      seg.t_fluid = elems[c].t_fluid;
      double mL = seg.m * (seg.x1 - seg.x0);
      seg.c2 = ul - seg.t_fluid;
      seg.c1 = (ur - seg.t_fluid - seg.c2 * std::cosh(mL)) / std::sinh(mL);
    }
    out.push_back(seg);
  }
  return out;
}

namespace {

// Outward heat rate through the axial face of `seg` at `x`, given the
// through-axis direction of the outward normal.
double axial_outflow(const Segment& seg, const Component& c, double x, int normal) {
  double k = to_double(c.conductivity);
  double A = to_double(c.cross_area());
  // q.n = (-k T') * normal
  return -k * seg.derivative(x) * normal * A;
}

}  // namespace

double evaluate_qoi(const Quasi1dSolution& sol, const System& s,
                    const frame::QoISpec& q,
                    const std::map<std::string, Rational>& binds) {
  if (sol.segments.empty()) throw Error(ErrorCode::BadArguments, "empty solution");
  double xmin = sol.segments.front().x0, xmax = sol.segments.front().x1;
  for (const auto& seg : sol.segments) {
    xmin = std::min(xmin, seg.x0);
    xmax = std::max(xmax, seg.x1);
  }
  double tol = 1e-12 * std::max(1.0, xmax - xmin);

  if (!q.location)
    throw Error(ErrorCode::BadArguments, "quantity has no evaluation location");
  auto loc = q.location->evaluate(binds);
  if (!loc)
    throw Error(ErrorCode::MissingBinding,
                "location " + q.location->str() + " is not numeric");
  double lx = to_double(*loc);

  switch (q.kind) {
    case frame::QoiKind::TemperatureAtPoint: {
      for (const auto& seg : sol.segments)
        if (lx >= seg.x0 - tol && lx <= seg.x1 + tol)
          return seg.value(std::min(std::max(lx, seg.x0), seg.x1));
      throw Error(ErrorCode::LocationOutsideDomain,
                  "x = " + std::to_string(lx) + " is outside the domain");
    }
    case frame::QoiKind::FluxAtFace:
    case frame::QoiKind::HeatRateAtFace: {
      const Segment* seg = nullptr;
      int normal = 0;
      double x = 0;
      if (std::abs(lx - xmin) <= tol) {
        for (const auto& sg : sol.segments)
          if (std::abs(sg.x0 - xmin) <= tol) { seg = &sg; normal = -1; x = sg.x0; }
      } else if (std::abs(lx - xmax) <= tol) {
        for (const auto& sg : sol.segments)
          if (std::abs(sg.x1 - xmax) <= tol) { seg = &sg; normal = 1; x = sg.x1; }
      }
      if (!seg)
        throw Error(ErrorCode::LocationOutsideDomain,
                    "x = " + std::to_string(lx) + " is not an axial boundary face");
      const Component& c = s.components[seg->comp];
      double rate = axial_outflow(*seg, c, x, normal);
      return q.kind == frame::QoiKind::FluxAtFace ? rate / to_double(c.cross_area())
                                                  : rate;
    }
    default:
      throw Error(ErrorCode::BadArguments, "not a scalar closed-form quantity");
  }
}

std::vector<std::pair<double, double>> sample_field(const Quasi1dSolution& sol,
                                                    int n_per_component) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& seg : sol.segments)
    for (int i = 0; i <= n_per_component; ++i) {
      double x = seg.x0 + (seg.x1 - seg.x0) * i / n_per_component;
      pts.emplace_back(x, seg.value(x));
    }
  return pts;
}

double net_boundary_outflow(const PdeTemplate& t, const System& s,
                            const Quasi1dSolution& sol) {
  auto binds = t.binding_map();
  double total = 0;
  for (const auto& [key, rec] : t.bc_map) {
    const Segment& seg = sol.segments[key.component];
    const Component& c = s.components[key.component];
    if (key.axis >= 0) {
      if (rec.kind == BcKind::NeumannFlux) {
        // prescribed inward-positive flux; outward is its negation
        auto v = Affine::symbol(rec.value_symbol).evaluate(binds);
        total -= to_double(*v) * to_double(c.cross_area());
      } else {
        double x = key.side ? seg.x1 : seg.x0;
        total += axial_outflow(seg, c, x, key.side ? 1 : -1);
      }
      continue;
    }
    // lateral face
    if (rec.kind != BcKind::Robin) continue;
    double h = to_double(*Affine::symbol(rec.h_symbol).evaluate(binds));
    double tf = to_double(*Affine::symbol(rec.fluid_temp_symbol).evaluate(binds));
    double P = to_double(c.cross_perimeter());
    double L = seg.x1 - seg.x0;
    double integral;  // of (T - t_fluid) over the span
    if (seg.kind == ElementKind::Fin) {
      double mL = seg.m * L;
      integral = (seg.c1 * (std::cosh(mL) - 1) + seg.c2 * std::sinh(mL)) / seg.m;
    } else {
      integral = (seg.t0 - tf) * L + seg.slope * L * L / 2;
    }
    total += h * P * integral;
  }
  return total;
}

Quasi1dSolution solve_quasi1d(const PdeTemplate& t, const System& s) {
  auto binds = t.binding_map();
  auto need = [&](const std::string& sym, const char* what) {
    auto it = binds.find(sym);
    if (it == binds.end())
      throw Error(ErrorCode::MissingBinding, std::string(what) + " " + sym);
    return to_double(it->second);
  };

  std::vector<CondensedElement> elems;
  for (size_t c = 0; c < s.components.size(); ++c) {
    auto it = t.bc_map.find({(int)c, -1, 0});
    if (it != t.bc_map.end() && it->second.kind == BcKind::Robin) {
      double h = need(it->second.h_symbol, "lateral coefficient");
      double tf = need(it->second.fluid_temp_symbol, "fluid temperature");
      try {
        elems.push_back(condense_fin(s.components[c], h, tf));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateFin) throw;
        CondensedElement w = condense_wall(s.components[c]);
        double load = h * to_double(s.components[c].cross_perimeter()) *
                      to_double(s.components[c].span.length()) * tf / 2;
        w.f = {load, load};
        elems.push_back(w);
      }
    } else {
      elems.push_back(condense_wall(s.components[c]));
    }
  }

  std::vector<std::pair<int, double>> dirichlet;
  for (const auto& [key, rec] : t.bc_map) {
    if (key.axis < 0) continue;
    int port = key.side;
    int dof = s.dof_map[key.component][port];
    double A = to_double(s.components[key.component].cross_area());
    switch (rec.kind) {
      case BcKind::Robin: {
        double h = need(rec.h_symbol, "heat transfer coefficient");
        double tf = need(rec.fluid_temp_symbol, "fluid temperature");
        elems[key.component].K[port][port] += h * A;
        elems[key.component].f[port] += h * A * tf;
        break;
      }
      case BcKind::NeumannFlux:
        elems[key.component].f[port] += need(rec.value_symbol, "flux value") * A;
        break;
      case BcKind::Dirichlet:
        dirichlet.emplace_back(dof, need(rec.value_symbol, "temperature value"));
        break;
      case BcKind::Insulated:
        break;
    }
  }

  Quasi1dSolution sol;
  sol.port_values = assemble_and_solve(s, elems, dirichlet);
  sol.segments = reconstruct_field(s, elems, sol.port_values);
  return sol;
}

}  // namespace calor
