#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "calor/errors.hpp"
#include "calor/fem2d.hpp"
#include "calor/frame.hpp"
#include "calor/genwall.hpp"
#include "calor/pde_template.hpp"
#include "calor/quasi1d.hpp"
#include "calor/report.hpp"
#include "calor/svg.hpp"
#include "calor/system.hpp"

namespace calor::report {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string stem_of(const std::string& path) {
  return fs::path(path).stem().string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
  out << content;
}

const char* state_name(frame::State s) {
  switch (s) {
    case frame::State::Solid:
      return "solid";
    case frame::State::Fluid:
      return "fluid";
    default:
      return "unknown";
  }
}

const char* qoi_kind_name(frame::QoiKind k) {
  switch (k) {
    case frame::QoiKind::TemperatureAtPoint:
      return "temperature_at_point";
    case frame::QoiKind::HeatRateAtFace:
      return "heat_rate_at_face";
    case frame::QoiKind::FluxAtFace:
      return "flux_at_face";
    case frame::QoiKind::TemperatureFieldPlot:
      return "temperature_field_plot";
    case frame::QoiKind::NondimensionalH:
      return "nondimensional_H";
  }
  return "?";
}

json parse_summary(const frame::Frame& f) {
  json entities = json::array();
  for (const auto& e : f.entities) {
    if (e.is_archetype) continue;
    json je;
    je["name"] = e.name;
    je["state"] = state_name(e.state);
    if (e.is_insulator) je["insulator"] = true;
    if (!e.attributes.empty()) je["attributes"] = e.attributes;
    entities.push_back(std::move(je));
  }
  json comps = json::array();
  for (frame::EntityId id : f.components) comps.push_back(f.entities[id].name);
  json edges = json::array();
  for (const auto& e : f.graph.edges)
    edges.push_back({f.entities[e.a].name, f.entities[e.b].name});
  json nodes = json::array();
  for (frame::EntityId id : f.graph.nodes) nodes.push_back(f.entities[id].name);
  json out;
  out["entities"] = std::move(entities);
  out["components"] = std::move(comps);
  out["graph"] = {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
  return out;
}

json well_posed_summary(const WellPosedReport& wp) {
  json defects = json::array();
  for (const auto& d : wp.defects)
    defects.push_back({{"kind", to_string(d.kind)}, {"detail", d.detail}});
  json out;
  out["ok"] = wp.ok;
  out["defects"] = std::move(defects);
  out["notes"] = wp.notes;
  return out;
}

json biot_summary(const ProblemClass& pc) {
  json out;
  out["value"] = to_double(pc.biot);
  out["exact"] = to_string_exact(pc.biot);
  out["verdict"] = pc.biot < Rational(1, 10) ? "small" : "not small";
  out["gate_active"] = pc.biot_gate_active;
  return out;
}

json quasi1d_qois(const frame::Frame& f, const PdeTemplate& t,
                  const System& sys, const Quasi1dSolution& sol) {
  const auto binds = t.binding_map();
  json out = json::array();
  for (const auto& q : f.qois) {
    json jq;
    jq["kind"] = qoi_kind_name(q.kind);
    if (q.location) {
      jq["coord"] = q.coord;
      if (auto v = q.location->evaluate(binds))
        jq["location"] = to_double(*v);
      else
        jq["location"] = q.location->str();
    }
    if (!q.defined_symbol.empty()) jq["symbol"] = q.defined_symbol;
    if (q.kind == frame::QoiKind::TemperatureFieldPlot)
      jq["result"] = "field";
    else
      jq["value"] = evaluate_qoi(sol, sys, q, binds);
    out.push_back(std::move(jq));
  }
  return out;
}

json quasi1d_field(const System& sys, const Quasi1dSolution& sol) {
  const int n = 100;
  json out = json::array();
  for (const auto& seg : sol.segments) {
    json x = json::array(), tv = json::array();
    for (int i = 0; i <= n; ++i) {
      const double xi = seg.x0 + (seg.x1 - seg.x0) * i / n;
      x.push_back(xi);
      tv.push_back(seg.value(xi));
    }
    out.push_back({{"component", sys.components[seg.comp].name},
                   {"x", std::move(x)},
                   {"T", std::move(tv)}});
  }
  return out;
}

json fe_field_export(const fem2d::TriMesh& m, const Eigen::VectorXd& u) {
  json verts = json::array();
  for (const auto& p : m.vertices) verts.push_back({p[0], p[1]});
  json tris = json::array();
  for (const auto& t : m.triangles)
    tris.push_back({t.v[0], t.v[1], t.v[2], t.material});
  json vals = json::array();
  for (int i = 0; i < u.size(); ++i) vals.push_back(u[i]);
  json out;
  out["vertices"] = std::move(verts);
  out["triangles"] = std::move(tris);
  out["nodal"] = std::move(vals);
  return out;
}

}  // namespace

SolveOutcome run_solve(const std::string& input_path, const SolveOptions& opt) {
  SolveOutcome outcome;
  json& rep = outcome.report;
  rep["schema"] = "report_v1";
  rep["problem"] = stem_of(input_path);
  const auto t_start = std::chrono::steady_clock::now();

  try {
    fs::create_directories(opt.out_dir);
    const std::string text = read_file(input_path);

    frame::Frame f = opt.commonsense_path.empty()
                         ? frame::parse_document(text)
                         : frame::parse_document(
                               text, read_file(opt.commonsense_path));
    PdeTemplate t = assemble_template(f);
    rep["parse"] = parse_summary(f);

    WellPosedReport wp = check_well_posed(t);
    rep["well_posed"] = well_posed_summary(wp);
    if (!wp.ok) {
      outcome.exit_code = 2;
      write_file(fs::path(opt.out_dir) / (stem_of(input_path) + "_report.json"),
                 rep.dump(2) + "\n");
      return outcome;
    }

    ProblemClass pc = classify_problem(t);
    rep["problem_class"] =
        pc.tag == ClassTag::Quasi1d ? "quasi-1d" : "generalized-wall";

    std::vector<Component> comps = instantiate_components(t);
    System sys = connect_system(comps, f);

    std::string field_svg;
    if (pc.tag == ClassTag::Quasi1d) {
      rep["biot"] = biot_summary(pc);
      Quasi1dSolution sol = solve_quasi1d(t, sys);
      rep["qoi"] = quasi1d_qois(f, t, sys, sol);
      rep["field"] = quasi1d_field(sys, sol);
      rep["energy_imbalance"] = net_boundary_outflow(t, sys, sol);
      if (!opt.json_only) field_svg = svg::render_field_quasi1d(sys, sol);
    } else {
      HConstants hc = compute_constants(t, pc);
      UpperBound ub = compute_upper_bound(sys, find_slices(sys), hc);
      LowerBound lb = compute_lower_bound(sys, find_parallelepipeds(sys), hc);
      BoundResult br{lb.h, ub.h, std::nullopt, 0};

      if (opt.fe) {
        fem2d::AdaptOptions fe_opt;
        fe_opt.tol_qoi = opt.tol;
        fe_opt.tol_energy = opt.tol;
        fem2d::FeSolution fe = fem2d::run_adaptive(sys, hc, fe_opt);
        br.h_fe = fe.qoi_value;
        br.fe_eps = fe.qoi_error_estimate;
        json jfe;
        jfe["dofs"] = fe.mesh.n_vertices();
        jfe["triangles"] = fe.mesh.n_triangles();
        jfe["iterations"] = fe.log.size();
        jfe["qoi_error_estimate"] = fe.qoi_error_estimate;
        jfe["energy_error_estimate"] = fe.energy_error_estimate;
        jfe["budget_exceeded"] = fe.budget_exceeded;
        rep["fe"] = std::move(jfe);
        if (!opt.json_only) {
          field_svg = svg::render_field_fe(fe.mesh, fe.nodal);
          const fs::path fpath = fs::path(opt.out_dir) /
                                 (stem_of(input_path) + "_field.json");
          write_file(fpath, fe_field_export(fe.mesh, fe.nodal).dump() + "\n");
          rep["field_data"] = fpath.filename().string();
        }
      } else if (!opt.json_only) {
        // no FE field: the field figure shows the certified interval instead
        field_svg = svg::render_bound_panel(br);
      }

      json bounds;
      bounds["H_LB"] = to_double(br.h_lb);
      bounds["H_LB_exact"] = to_string_exact(br.h_lb);
      bounds["H_UB"] = to_double(br.h_ub);
      bounds["H_UB_exact"] = to_string_exact(br.h_ub);
      if (br.h_fe)
        bounds["H_FE"] = *br.h_fe;
      else
        bounds["H_FE"] = nullptr;
      bounds["fe_error_estimate"] = br.fe_eps;
      OrderingReport ord = check_ordering(br);
      bounds["ordering_ok"] = ord.ok;
      if (!ord.ok) bounds["ordering_violation"] = ord.violation;
      rep["bounds"] = std::move(bounds);

      json qois = json::array();
      for (const auto& q : f.qois) {
        json jq;
        jq["kind"] = qoi_kind_name(q.kind);
        if (!q.defined_symbol.empty()) jq["symbol"] = q.defined_symbol;
        if (q.kind == frame::QoiKind::NondimensionalH) jq["result"] = "bounds";
        qois.push_back(std::move(jq));
      }
      rep["qoi"] = std::move(qois);
    }

    if (!opt.json_only) {
      const std::string stem = stem_of(input_path);
      const fs::path dir(opt.out_dir);
      const std::string g = stem + "_graph.svg";
      const std::string geo = stem + "_geometry.svg";
      const std::string fld = stem + "_field.svg";
      write_file(dir / g, svg::render_graph_figure(f));
      write_file(dir / geo, svg::render_geometry_figure(sys, t));
      write_file(dir / fld, field_svg);
      rep["figures"] = {{"graph", g}, {"geometry", geo}, {"field", fld}};
    }
  } catch (const Error& e) {
    json je;
    je["code"] = to_string(e.code());
    je["message"] = e.what();
    if (e.sentence() >= 0) je["sentence"] = e.sentence();
    rep["error"] = std::move(je);
    outcome.exit_code = 1;
  } catch (const std::exception& e) {
    rep["error"] = {{"code", "Internal"}, {"message", e.what()}};
    outcome.exit_code = 1;
  }

  if (opt.timing) {
    const auto dt = std::chrono::duration<double, std::milli>(
        std::chrono::steady_clock::now() - t_start);
    rep["timing"] = {{"total_ms", dt.count()}};
  }

  try {
    write_file(fs::path(opt.out_dir) / (stem_of(input_path) + "_report.json"),
               rep.dump(2) + "\n");
  } catch (const Error&) {
    if (outcome.exit_code == 0) outcome.exit_code = 1;
  }
  return outcome;
}

}  // namespace calor::report
