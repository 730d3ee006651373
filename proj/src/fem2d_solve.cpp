#include <cmath>

#include <Eigen/SparseCholesky>

#include "calor/errors.hpp"
#include "calor/fem2d.hpp"

namespace calor::fem2d {

namespace {

struct TriGeom {
  double area;
  std::array<std::array<double, 2>, 3> grad;  // P1 shape gradients
};

TriGeom tri_geom(const TriMesh& m, const TriMesh::Tri& t) {
  const auto& p0 = m.vertices[t.v[0]];
  const auto& p1 = m.vertices[t.v[1]];
  const auto& p2 = m.vertices[t.v[2]];
  const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) -
                     (p1[1] - p0[1]) * (p2[0] - p0[0]);
  if (!(det > 0))
    throw Error(ErrorCode::DegenerateTriangle,
                "triangle with non-positive area");
  TriGeom g;
  g.area = det / 2;
  g.grad[0] = {(p1[1] - p2[1]) / det, (p2[0] - p1[0]) / det};
  g.grad[1] = {(p2[1] - p0[1]) / det, (p0[0] - p2[0]) / det};
  g.grad[2] = {(p0[1] - p1[1]) / det, (p1[0] - p0[0]) / det};
  return g;
}

double edge_length(const TriMesh& m, int a, int b) {
  const auto& pa = m.vertices[a];
  const auto& pb = m.vertices[b];
  return std::hypot(pb[0] - pa[0], pb[1] - pa[1]);
}

double material_k(const FeCoefficients& c, int material) {
  if (material < 0 || material >= static_cast<int>(c.k_by_material.size()))
    throw Error(ErrorCode::BadArguments, "material without conductivity");
  return c.k_by_material[material];
}

}  // namespace

FeCoefficients wall_coefficients(const System& s, const HConstants& c) {
  FeCoefficients fc;
  for (const auto& comp : s.components)
    fc.k_by_material.push_back(to_double(comp.conductivity));
  const double hl = to_double(c.h_left), tl = to_double(c.t_left);
  const double hr = to_double(c.h_right), tr = to_double(c.t_right);
  fc.robin[kTagRobinLeft] = {hl, [hl, tl](double, double) { return hl * tl; }};
  fc.robin[kTagRobinRight] = {hr, [hr, tr](double, double) { return hr * tr; }};
  return fc;
}

FeSystem assemble_fe(const TriMesh& m, const FeCoefficients& c) {
  const int n = m.n_vertices();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(m.triangles.size() * 9 + m.boundary_tags.size() * 4);
  Eigen::VectorXd F = Eigen::VectorXd::Zero(n);

  for (const auto& t : m.triangles) {
    const TriGeom g = tri_geom(m, t);
    const double k = material_k(c, t.material);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        trips.emplace_back(t.v[i], t.v[j],
                           k * g.area *
                               (g.grad[i][0] * g.grad[j][0] +
                                g.grad[i][1] * g.grad[j][1]));
    if (c.source) {
      // edge-midpoint rule, exact for quadratics
      const auto& p0 = m.vertices[t.v[0]];
      const auto& p1 = m.vertices[t.v[1]];
      const auto& p2 = m.vertices[t.v[2]];
      const double f01 =
          c.source((p0[0] + p1[0]) / 2, (p0[1] + p1[1]) / 2);
      const double f12 =
          c.source((p1[0] + p2[0]) / 2, (p1[1] + p2[1]) / 2);
      const double f20 =
          c.source((p2[0] + p0[0]) / 2, (p2[1] + p0[1]) / 2);
      F[t.v[0]] += g.area / 6 * (f01 + f20);
      F[t.v[1]] += g.area / 6 * (f01 + f12);
      F[t.v[2]] += g.area / 6 * (f12 + f20);
    }
  }

  for (const auto& [edge, tag] : m.boundary_tags) {
    auto it = c.robin.find(tag);
    if (it == c.robin.end()) continue;
    const auto [a, b] = edge;
    const double len = edge_length(m, a, b);
    const double h = it->second.h;
    trips.emplace_back(a, a, h * len / 3);
    trips.emplace_back(b, b, h * len / 3);
    trips.emplace_back(a, b, h * len / 6);
    trips.emplace_back(b, a, h * len / 6);
    if (it->second.rhs) {
      const auto& pa = m.vertices[a];
      const auto& pb = m.vertices[b];
      const double ga = it->second.rhs(pa[0], pa[1]);
      const double gb = it->second.rhs(pb[0], pb[1]);
      const double gm =
          it->second.rhs((pa[0] + pb[0]) / 2, (pa[1] + pb[1]) / 2);
      // Simpson, exact for quadratic data against linear shape functions
      F[a] += len / 6 * (ga + 2 * gm);
      F[b] += len / 6 * (2 * gm + gb);
    }
  }

  FeSystem sys;
  sys.K.resize(n, n);
  sys.K.setFromTriplets(trips.begin(), trips.end());
  sys.F = std::move(F);
  return sys;
}

Eigen::VectorXd solve_fe(const FeSystem& sys) {
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> chol;
  chol.compute(sys.K);
  if (chol.info() != Eigen::Success)
    throw Error(ErrorCode::SingularSystem, "sparse factorization failed");
  Eigen::VectorXd u = chol.solve(sys.F);
  if (chol.info() != Eigen::Success)
    throw Error(ErrorCode::SingularSystem, "sparse solve failed");

  // residual audit
  Eigen::VectorXd r = sys.K * u - sys.F;
  double row_norm = 0;  // ||K||_inf
  for (int k = 0; k < sys.K.outerSize(); ++k) {
    // column sums equal row sums for the symmetric stiffness matrix
    double s = 0;
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.K, k); it; ++it)
      s += std::abs(it.value());
    row_norm = std::max(row_norm, s);
  }
  const double scale = std::max({sys.F.lpNorm<Eigen::Infinity>(),
                                 row_norm * u.lpNorm<Eigen::Infinity>(), 1e-300});
  if (!(r.lpNorm<Eigen::Infinity>() <= 1e-10 * scale))
    throw Error(ErrorCode::SingularSystem,
                "linear solve residual exceeds tolerance");
  return u;
}

double energy_product(const TriMesh& m, const FeCoefficients& c,
                      const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  double acc = 0;
  for (const auto& t : m.triangles) {
    const TriGeom g = tri_geom(m, t);
    const double k = material_k(c, t.material);
    double gux = 0, guy = 0, gvx = 0, gvy = 0;
    for (int i = 0; i < 3; ++i) {
      gux += u[t.v[i]] * g.grad[i][0];
      guy += u[t.v[i]] * g.grad[i][1];
      gvx += v[t.v[i]] * g.grad[i][0];
      gvy += v[t.v[i]] * g.grad[i][1];
    }
    acc += k * g.area * (gux * gvx + guy * gvy);
  }
  for (const auto& [edge, tag] : m.boundary_tags) {
    auto it = c.robin.find(tag);
    if (it == c.robin.end()) continue;
    const auto [a, b] = edge;
    const double len = edge_length(m, a, b);
    acc += it->second.h * len / 6 *
           (2 * u[a] * v[a] + u[a] * v[b] + u[b] * v[a] + 2 * u[b] * v[b]);
  }
  return acc;
}

double wall_qoi(const TriMesh& m, const Eigen::VectorXd& u,
                const HConstants& c, double extrusion) {
  std::vector<std::pair<double, double>> samples;
  for (const auto& [edge, tag] : m.boundary_tags) {
    if (tag != kTagRobinLeft) continue;
    const auto [a, b] = edge;
    samples.emplace_back((u[a] + u[b]) / 2,
                         edge_length(m, a, b) * extrusion);
  }
  return evaluate_H_from_field(c, samples);
}

TwoLevelEstimate estimate_error_two_level(const TriMesh& m,
                                          const FeCoefficients& c,
                                          const Eigen::VectorXd& u,
                                          const QoiFunctional& qoi) {
  TwoLevelEstimate est;
  est.fine = uniform_refine(m);
  est.u_fine = solve_fe(assemble_fe(est.fine, c));
  const Eigen::VectorXd d = est.u_fine - prolong(est.fine, u);

  est.indicators.assign(m.triangles.size(), 0.0);
  std::map<std::pair<int, int>, int> edge_owner;
  for (int ti = 0; ti < est.fine.n_triangles(); ++ti) {
    const auto& t = est.fine.triangles[ti];
    const TriGeom g = tri_geom(est.fine, t);
    const double k = material_k(c, t.material);
    double gdx = 0, gdy = 0;
    for (int i = 0; i < 3; ++i) {
      gdx += d[t.v[i]] * g.grad[i][0];
      gdy += d[t.v[i]] * g.grad[i][1];
      const int j = t.v[(i + 1) % 3];
      edge_owner[t.v[i] < j ? std::make_pair(t.v[i], j)
                            : std::make_pair(j, t.v[i])] = ti;
    }
    est.indicators[t.ancestor] += k * g.area * (gdx * gdx + gdy * gdy);
  }
  for (const auto& [edge, tag] : est.fine.boundary_tags) {
    auto it = c.robin.find(tag);
    if (it == c.robin.end()) continue;
    const auto [a, b] = edge;
    const double len = edge_length(est.fine, a, b);
    const double e2 =
        it->second.h * len * (d[a] * d[a] + d[a] * d[b] + d[b] * d[b]) / 3;
    auto owner = edge_owner.find(edge);
    if (owner == edge_owner.end())
      throw Error(ErrorCode::BadArguments,
                  "boundary edge without adjacent triangle");
    est.indicators[est.fine.triangles[owner->second].ancestor] += e2;
  }
  double total = 0;
  for (double e : est.indicators) total += e;
  est.energy_estimate = std::sqrt(total);
  if (qoi) est.qoi_estimate = std::abs(qoi(est.fine, est.u_fine) - qoi(m, u));
  return est;
}

}  // namespace calor::fem2d
