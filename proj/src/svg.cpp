#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>

#include "calor/svg.hpp"

namespace calor::svg {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '&')
      out += "&amp;";
    else if (c == '<')
      out += "&lt;";
    else if (c == '>')
      out += "&gt;";
    else
      out += c;
  }
  return out;
}

// Tiny element builder; keeps attribute order fixed so output is stable.
struct Canvas {
  std::string body;

  void rect(double x, double y, double w, double h, const std::string& style) {
    body += "<rect x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\" width=\"" +
            fmt(w) + "\" height=\"" + fmt(h) + "\" " + style + "/>\n";
  }
  void line(double x1, double y1, double x2, double y2,
            const std::string& style) {
    body += "<line x1=\"" + fmt(x1) + "\" y1=\"" + fmt(y1) + "\" x2=\"" +
            fmt(x2) + "\" y2=\"" + fmt(y2) + "\" " + style + "/>\n";
  }
  void text(double x, double y, const std::string& s,
            const std::string& style = "") {
    body += "<text x=\"" + fmt(x) + "\" y=\"" + fmt(y) + "\"" +
            (style.empty() ? "" : " " + style) + ">" + esc(s) + "</text>\n";
  }
  void poly(const std::string& tag, const std::string& points,
            const std::string& style) {
    body += "<" + tag + " points=\"" + points + "\" " + style + "/>\n";
  }

  std::string finish(double w, double h, const std::string& title) {
    std::string out =
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(w) +
        "\" height=\"" + fmt(h) + "\" viewBox=\"0 0 " + fmt(w) + " " + fmt(h) +
        "\" font-family=\"monospace\" font-size=\"13\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + fmt(w) + "\" height=\"" +
           fmt(h) + "\" fill=\"#ffffff\"/>\n";
    if (!title.empty())
      out += "<text x=\"" + fmt(w / 2) + "\" y=\"22\" text-anchor=\"middle\" "
             "font-size=\"15\">" +
             esc(title) + "</text>\n";
    out += body;
    out += "</svg>\n";
    return out;
  }
};

// Linear map from a model bounding box to a pixel rectangle (y flipped).
struct Frame2Px {
  double x0, x1, y0, y1;      // model box
  double px, py, pw, ph;      // pixel box
  double sx() const { return pw / (x1 - x0); }
  double sy() const { return ph / (y1 - y0); }
  double X(double x) const { return px + (x - x0) * sx(); }
  double Y(double y) const { return py + ph - (y - y0) * sy(); }
};

std::string bc_description(const BcRecord& b,
                           const std::map<std::string, Rational>& binds) {
  auto val = [&](const std::string& sym) -> std::string {
    auto it = binds.find(sym);
    if (it == binds.end()) return sym;
    return fmt(to_double(it->second));
  };
  switch (b.kind) {
    case frame::BcKind::Robin:
      return "convection h=" + val(b.h_symbol) + ", T=" +
             val(b.fluid_temp_symbol) +
             (b.fluid.empty() ? "" : " (" + b.fluid + ")");
    case frame::BcKind::Dirichlet:
      return "fixed temperature T=" + val(b.value_symbol);
    case frame::BcKind::NeumannFlux:
      return "heat flux q=" + val(b.value_symbol);
    case frame::BcKind::Insulated:
      return "insulated";
  }
  return "?";
}

// Section plane of a box union: through axis on x; the cross direction that
// actually varies on y (either works when both are uniform).
int varying_cross_axis(const System& s) {
  if (s.components.empty()) return 1;
  const Component& c0 = s.components.front();
  for (int cand : {0, 1}) {
    for (const auto& c : s.components)
      if (!(c.cross[cand] == c0.cross[cand])) return cand;
  }
  return 1;
}

}  // namespace

std::string render_graph_figure(const frame::Frame& f) {
  Canvas cv;
  const auto& g = f.graph;
  if (g.nodes.empty()) return cv.finish(640, 200, "heat transfer paths");

  // breadth-first layering per connected part, seeded at chain ends
  std::map<frame::EntityId, int> layer, row;
  std::set<frame::EntityId> seen;
  int part_base_row = 0;
  for (;;) {
    frame::EntityId seed = -1;
    int best_deg = 1 << 20;
    for (frame::EntityId n : g.nodes)
      if (!seen.count(n) && g.degree(n) < best_deg) {
        best_deg = g.degree(n);
        seed = n;
      }
    if (seed < 0) break;
    std::vector<frame::EntityId> frontier{seed};
    seen.insert(seed);
    layer[seed] = 0;
    std::map<int, int> rows_in_layer;
    row[seed] = part_base_row + rows_in_layer[0]++;
    int max_row = row[seed];
    while (!frontier.empty()) {
      std::vector<frame::EntityId> next;
      for (frame::EntityId n : frontier)
        for (const auto& e : g.edges) {
          frame::EntityId other =
              e.a == n ? e.b : (e.b == n ? e.a : frame::EntityId(-1));
          if (other < 0 || seen.count(other)) continue;
          seen.insert(other);
          layer[other] = layer[n] + 1;
          row[other] = part_base_row + rows_in_layer[layer[other]]++;
          max_row = std::max(max_row, row[other]);
          next.push_back(other);
        }
      frontier = std::move(next);
    }
    part_base_row = max_row + 1;
  }

  const double dx = 168, dy = 64, bx = 36, by = 42;
  auto cx = [&](frame::EntityId n) { return bx + 60 + layer[n] * dx; };
  auto cy = [&](frame::EntityId n) { return by + 40 + row[n] * dy; };

  for (const auto& e : g.edges)
    cv.line(cx(e.a), cy(e.a), cx(e.b), cy(e.b),
            "stroke=\"#555555\" stroke-width=\"1.5\"");

  double wmax = 0, hmax = 0;
  for (frame::EntityId n : g.nodes) {
    const auto& ent = f.entities[n];
    const double w = 26 + 7.3 * ent.name.size(), h = 34;
    std::string style = "fill=\"#f6efdf\" stroke=\"#222222\" stroke-width=\"1.5\"";
    if (ent.state == frame::State::Fluid)
      style = "fill=\"#e3eef9\" stroke=\"#222222\" stroke-width=\"1.5\" rx=\"15\"";
    if (ent.is_insulator) style += " stroke-dasharray=\"6 3\"";
    cv.rect(cx(n) - w / 2, cy(n) - h / 2, w, h, style);
    cv.text(cx(n), cy(n) + 4, ent.name, "text-anchor=\"middle\"");
    wmax = std::max(wmax, cx(n) + w / 2);
    hmax = std::max(hmax, cy(n) + h / 2);
  }
  return cv.finish(std::max(wmax + 40.0, 320.0), hmax + 30,
                   "heat transfer paths");
}

std::string render_geometry_figure(const System& s, const PdeTemplate& t) {
  Canvas cv;
  if (s.components.empty()) return cv.finish(640, 200, "geometry");
  const int ya = varying_cross_axis(s);

  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& c : s.components) {
    x0 = std::min(x0, to_double(c.span.lo));
    x1 = std::max(x1, to_double(c.span.hi));
    y0 = std::min(y0, to_double(c.cross[ya].lo));
    y1 = std::max(y1, to_double(c.cross[ya].hi));
  }
  const double legend_h = 18.0 * (t.bc_map.size() + 1);
  const double W = 760, drawing_h = 240;
  Frame2Px fp{x0, x1, y0, y1, 70, 46, W - 140, drawing_h};
  // keep the projection to scale: shrink the larger pixel axis
  if (fp.sx() > fp.sy())
    fp.pw = fp.sy() * (x1 - x0);
  else
    fp.ph = fp.sx() * (y1 - y0);

  for (const auto& c : s.components) {
    const double rx = fp.X(to_double(c.span.lo));
    const double ry = fp.Y(to_double(c.cross[ya].hi));
    const double rw = fp.sx() * to_double(c.span.length());
    const double rh = fp.sy() * to_double(c.cross[ya].length());
    cv.rect(rx, ry, rw, rh,
            "fill=\"#f1e9d7\" stroke=\"#222222\" stroke-width=\"1.2\"");
    cv.text(rx + rw / 2, ry + rh / 2 + 4, c.name,
            "text-anchor=\"middle\" font-size=\"12\"");
  }

  // station ticks along the through axis
  std::vector<double> stations;
  for (const auto& c : s.components) {
    stations.push_back(to_double(c.span.lo));
    stations.push_back(to_double(c.span.hi));
  }
  std::sort(stations.begin(), stations.end());
  stations.erase(std::unique(stations.begin(), stations.end()),
                 stations.end());
  const double axis_y = fp.Y(y0) + 12;
  cv.line(fp.X(x0), axis_y, fp.X(x1), axis_y,
          "stroke=\"#222222\" stroke-width=\"1\"");
  for (double st : stations) {
    cv.line(fp.X(st), axis_y - 4, fp.X(st), axis_y + 4,
            "stroke=\"#222222\" stroke-width=\"1\"");
    cv.text(fp.X(st), axis_y + 18, fmt(st),
            "text-anchor=\"middle\" font-size=\"11\"");
  }
  cv.text(fp.X(x1) + 12, axis_y + 4,
          s.components.front().axis.empty() ? "x" : s.components.front().axis,
          "font-size=\"11\"");

  // boundary-condition legend, one line per face record
  const auto binds = t.binding_map();
  double ly = fp.Y(y0) + 46;
  cv.text(70, ly, "boundary conditions:", "font-size=\"12\"");
  for (const auto& [fk, bc] : t.bc_map) {
    ly += 18;
    const auto& tc = t.components[fk.component];
    std::string face =
        fk.axis < 0 ? "lateral"
                    : tc.domain.coords[fk.axis] + (fk.side ? "+" : "-");
    cv.text(82, ly, tc.name + " [" + face + "]: " + bc_description(bc, binds),
            "font-size=\"12\"");
  }
  return cv.finish(W, ly + 26, "geometry");
}

std::string render_field_quasi1d(const System& s, const Quasi1dSolution& sol) {
  Canvas cv;
  const double W = 760, H = 420;
  if (sol.segments.empty()) return cv.finish(W, 200, "temperature field");

  const int n = 120;
  std::vector<std::vector<std::pair<double, double>>> curves;
  double x0 = 1e300, x1 = -1e300, t0 = 1e300, t1 = -1e300;
  for (const auto& seg : sol.segments) {
    auto& c = curves.emplace_back();
    for (int i = 0; i <= n; ++i) {
      const double x = seg.x0 + (seg.x1 - seg.x0) * i / n;
      const double v = seg.value(x);
      c.emplace_back(x, v);
      t0 = std::min(t0, v);
      t1 = std::max(t1, v);
    }
    x0 = std::min(x0, seg.x0);
    x1 = std::max(x1, seg.x1);
  }
  if (t1 - t0 < 1e-12) {
    t0 -= 1;  // constant field: keep a visible band
    t1 += 1;
  }
  const double pad = (t1 - t0) * 0.07;
  Frame2Px fp{x0, x1, t0 - pad, t1 + pad, 70, 40, W - 100, H - 110};

  // alternate shading per component span
  for (size_t i = 0; i < sol.segments.size(); ++i) {
    const auto& seg = sol.segments[i];
    cv.rect(fp.X(seg.x0), fp.py, fp.sx() * (seg.x1 - seg.x0), fp.ph,
            std::string("fill=\"") + (i % 2 ? "#efe7d4" : "#f8f4ea") +
                "\" stroke=\"none\"");
    cv.text(fp.X((seg.x0 + seg.x1) / 2), fp.py + 14,
            s.components[seg.comp].name,
            "text-anchor=\"middle\" font-size=\"11\"");
  }

  // axes and ticks
  cv.line(fp.px, fp.py, fp.px, fp.py + fp.ph, "stroke=\"#222222\"");
  cv.line(fp.px, fp.py + fp.ph, fp.px + fp.pw, fp.py + fp.ph,
          "stroke=\"#222222\"");
  for (int i = 0; i <= 4; ++i) {
    const double tv = (t0 - pad) + (t1 - t0 + 2 * pad) * i / 4;
    cv.line(fp.px - 4, fp.Y(tv), fp.px, fp.Y(tv), "stroke=\"#222222\"");
    cv.text(fp.px - 8, fp.Y(tv) + 4, fmt(tv),
            "text-anchor=\"end\" font-size=\"11\"");
  }
  std::set<double> stations;
  for (const auto& seg : sol.segments) {
    stations.insert(seg.x0);
    stations.insert(seg.x1);
  }
  for (double st : stations) {
    cv.line(fp.X(st), fp.py + fp.ph, fp.X(st), fp.py + fp.ph + 4,
            "stroke=\"#222222\"");
    cv.text(fp.X(st), fp.py + fp.ph + 18, fmt(st),
            "text-anchor=\"middle\" font-size=\"11\"");
  }

  for (const auto& c : curves) {
    std::string pts;
    for (const auto& [x, v] : c)
      pts += fmt(fp.X(x)) + "," + fmt(fp.Y(v)) + " ";
    cv.poly("polyline", pts,
            "fill=\"none\" stroke=\"#b03a2e\" stroke-width=\"2\"");
  }
  return cv.finish(W, H, "temperature field T(x)");
}

std::string render_field_fe(const fem2d::TriMesh& m, const Eigen::VectorXd& u) {
  Canvas cv;
  const double W = 760;
  if (m.triangles.empty() || u.size() == 0)
    return cv.finish(W, 200, "temperature field");

  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  for (const auto& p : m.vertices) {
    x0 = std::min(x0, p[0]);
    x1 = std::max(x1, p[0]);
    y0 = std::min(y0, p[1]);
    y1 = std::max(y1, p[1]);
  }
  double v0 = u.minCoeff(), v1 = u.maxCoeff();
  if (v1 - v0 < 1e-300) v1 = v0 + 1;
  auto color = [&](double v) {
    const double t = std::clamp((v - v0) / (v1 - v0), 0.0, 1.0);
    const int r = static_cast<int>(std::lround(40 + 215 * t));
    const int g = static_cast<int>(std::lround(60 + 130 * (1 - std::abs(2 * t - 1))));
    const int b = static_cast<int>(std::lround(255 - 215 * t));
    char buf[10];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return std::string(buf);
  };

  const double plot_h = 360;
  Frame2Px fp{x0, x1, y0, y1, 60, 40, W - 160, plot_h};
  if (fp.sx() > fp.sy())
    fp.pw = fp.sy() * (x1 - x0);
  else
    fp.ph = fp.sx() * (y1 - y0);

  // bucket locator over triangle bounding boxes
  const int gx = 48, gy = 48;
  std::vector<std::vector<int>> bucket(static_cast<size_t>(gx) * gy);
  auto bx = [&](double x) {
    return std::clamp(static_cast<int>((x - x0) / (x1 - x0) * gx), 0, gx - 1);
  };
  auto by = [&](double y) {
    return std::clamp(static_cast<int>((y - y0) / (y1 - y0) * gy), 0, gy - 1);
  };
  for (int ti = 0; ti < m.n_triangles(); ++ti) {
    const auto& t = m.triangles[ti];
    double tx0 = 1e300, tx1 = -1e300, ty0 = 1e300, ty1 = -1e300;
    for (int v : t.v) {
      tx0 = std::min(tx0, m.vertices[v][0]);
      tx1 = std::max(tx1, m.vertices[v][0]);
      ty0 = std::min(ty0, m.vertices[v][1]);
      ty1 = std::max(ty1, m.vertices[v][1]);
    }
    for (int i = bx(tx0); i <= bx(tx1); ++i)
      for (int j = by(ty0); j <= by(ty1); ++j)
        bucket[static_cast<size_t>(j) * gx + i].push_back(ti);
  }
  auto sample = [&](double x, double y, double& out) {
    for (int ti : bucket[static_cast<size_t>(by(y)) * gx + bx(x)]) {
      const auto& t = m.triangles[ti];
      const auto& a = m.vertices[t.v[0]];
      const auto& b = m.vertices[t.v[1]];
      const auto& c = m.vertices[t.v[2]];
      const double det =
          (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
      const double l1 =
          ((x - a[0]) * (c[1] - a[1]) - (y - a[1]) * (c[0] - a[0])) / det;
      const double l2 =
          ((b[0] - a[0]) * (y - a[1]) - (b[1] - a[1]) * (x - a[0])) / det;
      const double l0 = 1 - l1 - l2;
      if (l0 < -1e-9 || l1 < -1e-9 || l2 < -1e-9) continue;
      out = l0 * u[t.v[0]] + l1 * u[t.v[1]] + l2 * u[t.v[2]];
      return true;
    }
    return false;
  };

  const int nx = 220;
  const int ny = std::max(
      2, static_cast<int>(std::lround(nx * (y1 - y0) / (x1 - x0))));
  const double cw = fp.pw / nx, ch = fp.ph / ny;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = x0 + (x1 - x0) * (i + 0.5) / nx;
      const double y = y0 + (y1 - y0) * (j + 0.5) / ny;
      double v;
      if (!sample(x, y, v)) continue;
      cv.rect(fp.X(x) - cw / 2 - 0.3, fp.Y(y) - ch / 2 - 0.3, cw + 0.6,
              ch + 0.6, "fill=\"" + color(v) + "\" stroke=\"none\"");
    }

  // domain outline from the boundary edges
  for (const auto& [edge, tag] : m.boundary_tags) {
    (void)tag;
    const auto& a = m.vertices[edge.first];
    const auto& b = m.vertices[edge.second];
    cv.line(fp.X(a[0]), fp.Y(a[1]), fp.X(b[0]), fp.Y(b[1]),
            "stroke=\"#222222\" stroke-width=\"1.2\"");
  }

  // colorbar
  const double cbx = fp.px + fp.pw + 30, cby = fp.py, cbh = fp.ph;
  const int steps = 24;
  for (int i = 0; i < steps; ++i) {
    const double v = v0 + (v1 - v0) * (i + 0.5) / steps;
    cv.rect(cbx, cby + cbh - cbh * (i + 1) / steps, 14.0, cbh / steps + 0.5,
            "fill=\"" + color(v) + "\" stroke=\"none\"");
  }
  cv.rect(cbx, cby, 14, cbh, "fill=\"none\" stroke=\"#222222\"");
  cv.text(cbx + 20, cby + 8, fmt(v1), "font-size=\"11\"");
  cv.text(cbx + 20, cby + cbh + 2, fmt(v0), "font-size=\"11\"");
  return cv.finish(W, fp.py + fp.ph + 50, "temperature field");
}

std::string render_bound_panel(const BoundResult& r) {
  Canvas cv;
  const double W = 700, H = 210;
  const double lb = to_double(r.h_lb), ub = to_double(r.h_ub);
  const double span = std::max(ub - lb, 1e-12);
  Frame2Px fp{lb - 0.15 * span, ub + 0.15 * span, 0, 1, 80, 70, W - 160, 70};

  cv.line(fp.px, 105, fp.px + fp.pw, 105, "stroke=\"#222222\"");
  for (double v : {lb, ub}) {
    cv.line(fp.X(v), 85, fp.X(v), 125, "stroke=\"#222222\" stroke-width=\"2\"");
    cv.text(fp.X(v), 145, fmt(v), "text-anchor=\"middle\" font-size=\"12\"");
  }
  cv.text(fp.X(lb), 75, "H_LB", "text-anchor=\"middle\" font-size=\"12\"");
  cv.text(fp.X(ub), 75, "H_UB", "text-anchor=\"middle\" font-size=\"12\"");
  cv.rect(fp.X(lb), 98, fp.X(ub) - fp.X(lb), 14,
          "fill=\"#dce8f5\" stroke=\"none\"");
  cv.line(fp.px, 105, fp.px + fp.pw, 105, "stroke=\"#222222\"");

  if (r.h_fe) {
    const double v = *r.h_fe;
    if (r.fe_eps > 0)
      cv.line(fp.X(v - r.fe_eps), 105, fp.X(v + r.fe_eps), 105,
              "stroke=\"#b03a2e\" stroke-width=\"4\"");
    cv.body += "<circle cx=\"" + fmt(fp.X(v)) +
               "\" cy=\"105\" r=\"5\" fill=\"#b03a2e\"/>\n";
    cv.text(fp.X(v), 168, "H_FE=" + fmt(v),
            "text-anchor=\"middle\" font-size=\"12\"");
  }
  return cv.finish(W, H, "nondimensional heat intake H");
}

}  // namespace calor::svg
