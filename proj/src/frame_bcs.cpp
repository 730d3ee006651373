// Domain, boundary-condition, quantity-of-interest, property, and parameter
// extraction, plus post-binding validation.
#include <algorithm>
#include <cctype>
#include <optional>

#include "calor/errors.hpp"
#include "calor/frame.hpp"
#include "frame_internal.hpp"

namespace calor::frame {

using namespace detail;

namespace {

const text::MathSpan* span_of(const MarkedText& mt, const Token& t) {
  return t.span >= 0 ? &mt.spans[t.span] : nullptr;
}

std::string symbol_name(const MarkedText& mt, const Token& t) {
  const auto* sp = span_of(mt, t);
  return sp ? sp->inner : "";
}

// First token index at or after `from` with the given part of speech, -1 if
// none.
int next_pos(const std::vector<Token>& toks, int from, Pos pos) {
  for (int i = std::max(from, 0); i < (int)toks.size(); ++i)
    if (toks[i].pos == pos) return i;
  return -1;
}

int next_lemma(const std::vector<Token>& toks, int from, const std::string& l) {
  for (int i = std::max(from, 0); i < (int)toks.size(); ++i)
    if (toks[i].lemma == l) return i;
  return -1;
}

bool has_lemma(const std::vector<Token>& toks, const std::string& l) {
  return next_lemma(toks, 0, l) >= 0;
}

// Consecutive lemma sequence, returning one past the last matched token.
int find_seq(const std::vector<Token>& toks,
             const std::vector<std::string>& lemmas) {
  for (int i = 0; i + (int)lemmas.size() <= (int)toks.size(); ++i) {
    bool ok = true;
    for (int k = 0; k < (int)lemmas.size(); ++k)
      if (toks[i + k].lemma != lemmas[k]) ok = false;
    if (ok) return i + (int)lemmas.size();
  }
  return -1;
}

struct FaceRef {
  bool found = false;
  bool lateral = false;
  std::string lateral_prefix;  // "head" in "the head lateral face"
  std::string coord;
  Affine station = Affine::number(0);
  int face_token = -1;
};

// "face at $x = expr$", "faces at ...", "lateral face(s)", "E lateral face".
FaceRef find_face(const MarkedText& mt, const std::vector<Token>& toks,
                  int from) {
  FaceRef ref;
  for (int j = std::max(from, 0); j < (int)toks.size(); ++j) {
    if (toks[j].lemma != "face") continue;
    if (j > 0 && toks[j - 1].lemma == "lateral") {
      ref.found = true;
      ref.lateral = true;
      ref.face_token = j;
      int k = j - 2;
      int begin = j - 1;
      while (k >= 0 && (toks[k].pos == Pos::Noun || toks[k].pos == Pos::Adj ||
                        toks[k].pos == Pos::Num)) {
        begin = k;
        --k;
      }
      if (begin < j - 1) ref.lateral_prefix = join_words(toks, begin, j - 1);
      return ref;
    }
    if (j + 1 < (int)toks.size() && toks[j + 1].lemma == "at") {
      int eq = next_pos(toks, j + 2, Pos::Equation);
      if (eq < 0) continue;
      const auto* sp = span_of(mt, toks[eq]);
      if (!sp || !sp->equation || sp->equation->chains.size() != 1) continue;
      const auto& ch = sp->equation->chains[0];
      if (ch.exprs.size() != 2 || ch.rels[0] != Rel::Equal) continue;
      if (!ch.exprs[0].is_single_symbol()) continue;
      ref.found = true;
      ref.coord = ch.exprs[0].terms.begin()->first;
      ref.station = ch.exprs[1];
      ref.face_token = j;
      return ref;
    }
  }
  return ref;
}

// First run that starts strictly after token index `from`.
std::optional<Run> run_after(const std::vector<Token>& toks, int sentence,
                             int from) {
  for (const auto& r : scan_runs(toks, sentence))
    if (r.begin > from) return r;
  return std::nullopt;
}

void register_coord(Frame& f, const std::string& c) {
  if (c.empty()) return;
  if (std::find(f.coordinate_vars.begin(), f.coordinate_vars.end(), c) ==
      f.coordinate_vars.end())
    f.coordinate_vars.push_back(c);
}

// normalization pattern num/(k(Th-Tc)len)
struct HNorm {
  std::string defined, rate, k, t_hot, t_cold, length;
  bool has_norm = false;
  bool has_face = false;
  std::string coord;
  Affine station = Affine::number(0);
  EntityId target = -1;
  int sentence = 0;
};

bool parse_h_norm(const std::string& s, HNorm& out) {
  size_t i = 0;
  auto skip = [&]() {
    while (i < s.size() && std::isspace((unsigned char)s[i])) ++i;
  };
  auto ident = [&]() -> std::string {
    skip();
    size_t b = i;
    while (i < s.size() && (std::isalnum((unsigned char)s[i]) || s[i] == '_' ||
                            s[i] == '^' || s[i] == '\''))
      ++i;
    return s.substr(b, i - b);
  };
  auto expect = [&](char c) {
    skip();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  };
  out.rate = ident();
  if (out.rate.empty() || !expect('/') || !expect('(')) return false;
  out.k = ident();
  if (out.k.empty() || !expect('(')) return false;
  out.t_hot = ident();
  if (out.t_hot.empty() || !expect('-')) return false;
  out.t_cold = ident();
  if (out.t_cold.empty() || !expect(')')) return false;
  out.length = ident();
  if (out.length.empty() || !expect(')')) return false;
  skip();
  return i == s.size();
}

}  // namespace

void extract_domains(Frame& f, const MarkedText& mt) {
  auto mentions = find_mentions(f, mt);
  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    const auto& toks = mt.tokens[s];
    // coordinate declarations: "the coordinate(s) ... is/are ... $x$ ..."
    int ci = next_lemma(toks, 0, "coordinate");
    if (ci >= 0) {
      int be = -1;
      for (int j = ci + 1; j < (int)toks.size(); ++j)
        if (toks[j].lemma == "be" && toks[j].tense == Tense::Present) {
          be = j;
          break;
        }
      if (be >= 0) {
        std::vector<std::string> found;
        for (int j = be + 1; j < (int)toks.size(); ++j)
          if (toks[j].pos == Pos::Symbol)
            found.push_back(symbol_name(mt, toks[j]));
        for (const auto& c : found) register_coord(f, c);
        if (ci + 1 < (int)toks.size() && toks[ci + 1].lemma == "through" &&
            !found.empty() && f.through_axis.empty())
          f.through_axis = found.front();
      }
    }
    // "$x_1$ corresponds to distance through ..."
    for (int j = 0; j + 1 < (int)toks.size(); ++j) {
      if (toks[j].pos != Pos::Symbol) continue;
      if (toks[j + 1].lemma != "correspond") continue;
      if (next_lemma(toks, j + 2, "through") < 0) continue;
      if (f.through_axis.empty())
        f.through_axis = symbol_name(mt, toks[j]);
    }
    // "the spatial domain of E is $a < x < b, ...$"
    int di = next_lemma(toks, 0, "domain");
    if (di >= 0 && next_lemma(toks, di + 1, "of") == di + 1) {
      auto run = run_after(toks, s, di + 1);
      if (run) {
        EntityId e = f.find(run->name);
        int eq = next_pos(toks, run->end, Pos::Equation);
        if (e >= 0 && eq >= 0) {
          const auto* sp = span_of(mt, toks[eq]);
          if (sp && sp->equation) {
            DomainSpec spec;
            spec.sentence = s;
            for (const auto& ch : sp->equation->chains) {
              if (ch.exprs.size() != 3 || ch.rels[0] != Rel::Less ||
                  ch.rels[1] != Rel::Less)
                continue;
              if (!ch.exprs[1].is_single_symbol()) continue;
              std::string coord = ch.exprs[1].terms.begin()->first;
              spec.coords.push_back(coord);
              spec.lo.push_back(ch.exprs[0]);
              spec.hi.push_back(ch.exprs[2]);
              register_coord(f, coord);
            }
            if (!spec.coords.empty() && !f.domains.count(e))
              f.domains.emplace(e, std::move(spec));
          }
        }
      }
    }
    // "E extends from $x = a$ to $x = b$"
    for (int j = 0; j < (int)toks.size(); ++j) {
      if (toks[j].lemma != "extend" || toks[j].tense != Tense::Present)
        continue;
      auto subjects = subjects_before(mentions, toks, s, j);
      if (subjects.size() != 1) continue;
      int fr = next_lemma(toks, j + 1, "from");
      if (fr < 0) continue;
      int e1 = next_pos(toks, fr + 1, Pos::Equation);
      if (e1 < 0) continue;
      int to = next_lemma(toks, e1 + 1, "to");
      if (to < 0) continue;
      int e2 = next_pos(toks, to + 1, Pos::Equation);
      if (e2 < 0) continue;
      auto bound = [&](int tok_idx) -> std::optional<std::pair<std::string, Affine>> {
        const auto* sp = span_of(mt, toks[tok_idx]);
        if (!sp || !sp->equation || sp->equation->chains.size() != 1)
          return std::nullopt;
        const auto& ch = sp->equation->chains[0];
        if (ch.exprs.size() != 2 || ch.rels[0] != Rel::Equal ||
            !ch.exprs[0].is_single_symbol())
          return std::nullopt;
        return std::make_pair(ch.exprs[0].terms.begin()->first, ch.exprs[1]);
      };
      auto lo = bound(e1), hi = bound(e2);
      if (!lo || !hi || lo->first != hi->first) continue;
      EntityId ent = subjects[0].entity;
      if (!f.domains.count(ent)) {
        DomainSpec spec;
        spec.sentence = s;
        spec.coords.push_back(lo->first);
        spec.lo.push_back(lo->second);
        spec.hi.push_back(hi->second);
        f.domains.emplace(ent, std::move(spec));
      }
      register_coord(f, lo->first);
    }
  }
  if (f.through_axis.empty() && f.coordinate_vars.size() == 1)
    f.through_axis = f.coordinate_vars.front();
  if (f.through_axis.empty() && !f.coordinate_vars.empty())
    f.through_axis = f.coordinate_vars.front();
}

void extract_bcs_and_qoi(Frame& f, const MarkedText& mt) {
  const Vocab& v = vocab();
  auto mentions = find_mentions(f, mt);

  HNorm pending;
  // pre-pass: the nondimensional rate definition and its face
  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    const auto& toks = mt.tokens[s];
    for (int j = 0; j + 1 < (int)toks.size(); ++j) {
      if (toks[j].lemma != "rate" || toks[j + 1].pos != Pos::Symbol) continue;
      int give = next_lemma(toks, j + 2, "give");
      if (give < 0 || next_lemma(toks, give + 1, "by") != give + 1) continue;
      int def = next_pos(toks, give + 2, Pos::Symbol);
      if (def < 0) continue;
      HNorm h;
      if (parse_h_norm(symbol_name(mt, toks[def]), h)) {
        h.defined = symbol_name(mt, toks[j + 1]);
        h.has_norm = true;
        h.sentence = s;
        h.has_face = pending.has_face;
        h.coord = pending.coord;
        h.station = pending.station;
        h.target = pending.target;
        pending = h;
      }
    }
    // "$Q$ denotes the heat transfer rate into E over the face at $...$"
    bool has_def_verb = false;
    for (const auto& t : toks) has_def_verb |= t.definition_verb;
    if (has_def_verb && find_seq(toks, {"heat", "transfer", "rate"}) >= 0) {
      int into = next_lemma(toks, 0, "into");
      FaceRef face = find_face(mt, toks, 0);
      if (face.found && !face.lateral) {
        pending.has_face = true;
        pending.coord = face.coord;
        pending.station = face.station;
        if (into >= 0) {
          auto run = run_after(toks, s, into);
          if (run) pending.target = f.find(run->name);
        }
        int sym = next_pos(toks, 0, Pos::Symbol);
        if (sym >= 0 && pending.rate.empty())
          pending.rate = symbol_name(mt, toks[sym]);
      }
    }
  }

  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    const auto& toks = mt.tokens[s];
    bool has_def_verb = false;
    for (const auto& t : toks) has_def_verb |= t.definition_verb;
    int coeff_end = find_seq(toks, {"heat", "transfer", "coefficient"});

    // definition-style Robin: "let $h$ denote the heat transfer coefficient
    // from A to B prescribed over <face>"
    if (has_def_verb && coeff_end >= 0 && has_lemma(toks, "from") &&
        has_lemma(toks, "to")) {
      int hs = next_pos(toks, 0, Pos::Symbol);
      int fr = next_lemma(toks, coeff_end, "from");
      auto a_run = fr >= 0 ? run_after(toks, s, fr) : std::nullopt;
      int to = a_run ? next_lemma(toks, a_run->end - 1, "to") : -1;
      auto b_run = to >= 0 ? run_after(toks, s, to) : std::nullopt;
      if (hs >= 0 && a_run && b_run) {
        EntityId ea = f.find(a_run->name), eb = f.find(b_run->name);
        if (ea < 0 || eb < 0)
          throw Error(ErrorCode::IncompleteRobin,
                      "unknown entity in coefficient definition", s);
        bool a_fluid = f.entities[ea].state == State::Fluid;
        bool b_fluid = f.entities[eb].state == State::Fluid;
        if (a_fluid == b_fluid)
          throw Error(ErrorCode::IncompleteRobin,
                      "coefficient must join a solid and a fluid", s);
        EntityId fluid = a_fluid ? ea : eb;
        EntityId solid = a_fluid ? eb : ea;
        FaceRef face = find_face(mt, toks, coeff_end);
        if (!face.found)
          throw Error(ErrorCode::IncompleteRobin,
                      "coefficient definition names no face", s);
        BoundaryConditionSpec bc;
        bc.kind = BcKind::Robin;
        bc.target = solid;
        bc.fluid = fluid;
        bc.h_symbol = symbol_name(mt, toks[hs]);
        bc.sentence = s;
        if (face.lateral) {
          bc.face = FaceSel::Lateral;
          if (!face.lateral_prefix.empty()) {
            EntityId pe = f.find(face.lateral_prefix);
            if (pe >= 0) bc.target = pe;
          }
        } else {
          bc.face = FaceSel::AxialStation;
          bc.coord = face.coord;
          bc.station = face.station;
        }
        f.bcs.push_back(bc);
        continue;
      }
    }

    // "A, B are exposed to F over the face(s) at $...$ through heat transfer
    // coefficient $h$"
    if (coeff_end >= 0) {
      static const std::vector<std::vector<std::string>> exposure_patterns = {
          {"be", "expose", "to"}, {"be", "in", "communication", "with"}};
      for (int i = 0; i < (int)toks.size(); ++i) {
        int end = -1;
        for (const auto& pat : exposure_patterns) {
          int e = match_pattern_at(toks, i, pat);
          if (e > end) end = e;
        }
        if (end < 0) continue;
        auto subjects = subjects_before(mentions, toks, s, i);
        auto fluid_run = run_after(toks, s, end - 1);
        FaceRef face = find_face(mt, toks, end);
        int hsym = next_pos(toks, coeff_end, Pos::Symbol);
        if (subjects.empty() || !fluid_run || hsym < 0) continue;
        EntityId fluid = f.find(fluid_run->name);
        if (fluid < 0 || f.entities[fluid].state != State::Fluid) continue;
        if (!face.found)
          throw Error(ErrorCode::IncompleteRobin,
                      "exposure statement names no face", s);
        for (const auto& sub : subjects) {
          BoundaryConditionSpec bc;
          bc.kind = BcKind::Robin;
          bc.target = sub.entity;
          bc.fluid = fluid;
          bc.h_symbol = symbol_name(mt, toks[hsym]);
          bc.sentence = s;
          if (face.lateral) {
            bc.face = FaceSel::Lateral;
          } else {
            bc.face = FaceSel::AxialStation;
            bc.coord = face.coord;
            bc.station = face.station;
          }
          f.bcs.push_back(bc);
        }
        break;
      }
    }

    // insulation
    if (has_lemma(toks, "insulate")) {
      if (has_lemma(toks, "remainder") && has_lemma(toks, "boundary")) {
        f.remainder_insulated = true;
      } else {
        FaceRef face = find_face(mt, toks, 0);
        if (face.found && !face.lateral) {
          BoundaryConditionSpec bc;
          bc.kind = BcKind::Insulated;
          bc.face = FaceSel::AxialStation;
          bc.coord = face.coord;
          bc.station = face.station;
          bc.sentence = s;
          f.bcs.push_back(bc);
        } else if (face.found && face.lateral && !face.lateral_prefix.empty() &&
                   f.find(face.lateral_prefix) >= 0) {
          BoundaryConditionSpec bc;
          bc.kind = BcKind::Insulated;
          bc.face = FaceSel::Lateral;
          bc.target = f.find(face.lateral_prefix);
          bc.sentence = s;
          f.bcs.push_back(bc);
        } else {
          int mv = main_verb(toks);
          auto subjects =
              mv >= 0 ? subjects_before(mentions, toks, s, mv)
                      : std::vector<Mention>{};
          for (const auto& sub : subjects) {
            BoundaryConditionSpec bc;
            bc.kind = BcKind::Insulated;
            bc.face = FaceSel::Lateral;
            bc.target = sub.entity;
            bc.sentence = s;
            f.bcs.push_back(bc);
          }
        }
      }
    }

    // Dirichlet: "the face at $x = a$ is maintained at temperature $T$"
    if (!has_def_verb) {
      FaceRef face = find_face(mt, toks, 0);
      int maintain = next_lemma(toks, 0, "maintain");
      if (face.found && !face.lateral && maintain > face.face_token) {
        int ti = next_lemma(toks, maintain, "temperature");
        int sym = ti >= 0 ? next_pos(toks, ti, Pos::Symbol) : -1;
        if (sym >= 0) {
          BoundaryConditionSpec bc;
          bc.kind = BcKind::Dirichlet;
          bc.face = FaceSel::AxialStation;
          bc.coord = face.coord;
          bc.station = face.station;
          bc.value_symbol = symbol_name(mt, toks[sym]);
          bc.sentence = s;
          f.bcs.push_back(bc);
        }
      }
    }

    // Neumann: "a heat flux $q$ is prescribed over the face at $x = a$"
    {
      int fe = find_seq(toks, {"heat", "flux"});
      if (fe >= 0 && fe < (int)toks.size() && toks[fe].pos == Pos::Symbol) {
        FaceRef face = find_face(mt, toks, fe);
        if (face.found && !face.lateral) {
          BoundaryConditionSpec bc;
          bc.kind = BcKind::NeumannFlux;
          bc.face = FaceSel::AxialStation;
          bc.coord = face.coord;
          bc.station = face.station;
          bc.value_symbol = symbol_name(mt, toks[fe]);
          bc.sentence = s;
          f.bcs.push_back(bc);
        }
      }
    }

    // quantities of interest
    bool has_find_verb = false;
    for (const auto& t : toks)
      if (t.pos == Pos::Verb && v.find_verbs.count(t.lemma)) has_find_verb = true;
    if (!has_find_verb) continue;

    if (has_lemma(toks, "lower") && has_lemma(toks, "upper") &&
        has_lemma(toks, "bound")) {
      QoISpec q;
      q.kind = QoiKind::NondimensionalH;
      q.sentence = s;
      q.defined_symbol = pending.defined;
      q.rate_symbol = pending.rate;
      q.norm_k = pending.k;
      q.norm_T_hot = pending.t_hot;
      q.norm_T_cold = pending.t_cold;
      q.norm_length = pending.length;
      if (pending.has_face) {
        q.coord = pending.coord;
        q.location = pending.station;
      }
      f.qois.push_back(q);
      continue;
    }
    int rate_end = find_seq(toks, {"heat", "transfer", "rate"});
    if (rate_end < 0) rate_end = find_seq(toks, {"heat", "rate"});
    if (rate_end >= 0) {
      FaceRef face = find_face(mt, toks, rate_end);
      if (face.found && !face.lateral) {
        QoISpec q;
        q.kind = QoiKind::HeatRateAtFace;
        q.coord = face.coord;
        q.location = face.station;
        q.sentence = s;
        f.qois.push_back(q);
        continue;
      }
    }
    int flux_end = find_seq(toks, {"heat", "flux"});
    if (flux_end >= 0) {
      int at = next_lemma(toks, flux_end, "at");
      int eq = at >= 0 ? next_pos(toks, at, Pos::Equation) : -1;
      FaceRef face = find_face(mt, toks, flux_end);
      if (face.found && !face.lateral) {
        QoISpec q;
        q.kind = QoiKind::FluxAtFace;
        q.coord = face.coord;
        q.location = face.station;
        q.sentence = s;
        f.qois.push_back(q);
        continue;
      } else if (eq >= 0) {
        const auto* sp = span_of(mt, toks[eq]);
        if (sp && sp->equation && sp->equation->chains.size() == 1) {
          const auto& ch = sp->equation->chains[0];
          if (ch.exprs.size() == 2 && ch.rels[0] == Rel::Equal &&
              ch.exprs[0].is_single_symbol()) {
            QoISpec q;
            q.kind = QoiKind::FluxAtFace;
            q.coord = ch.exprs[0].terms.begin()->first;
            q.location = ch.exprs[1];
            q.sentence = s;
            f.qois.push_back(q);
            continue;
          }
        }
      }
    }
    if (has_lemma(toks, "temperature")) {
      if (has_lemma(toks, "function") || has_lemma(toks, "distribution")) {
        QoISpec q;
        q.kind = QoiKind::TemperatureFieldPlot;
        q.sentence = s;
        int fi = next_lemma(toks, 0, "function");
        int sym = fi >= 0 ? next_pos(toks, fi, Pos::Symbol) : -1;
        q.coord = sym >= 0 ? symbol_name(mt, toks[sym]) : f.through_axis;
        f.qois.push_back(q);
        continue;
      }
      int ti = next_lemma(toks, 0, "temperature");
      int eq = next_pos(toks, ti, Pos::Equation);
      if (eq >= 0) {
        const auto* sp = span_of(mt, toks[eq]);
        if (sp && sp->equation && sp->equation->chains.size() == 1) {
          const auto& ch = sp->equation->chains[0];
          if (ch.exprs.size() == 2 && ch.rels[0] == Rel::Equal &&
              ch.exprs[0].is_single_symbol()) {
            QoISpec q;
            q.kind = QoiKind::TemperatureAtPoint;
            q.coord = ch.exprs[0].terms.begin()->first;
            q.location = ch.exprs[1];
            q.sentence = s;
            f.qois.push_back(q);
            continue;
          }
        }
      }
    }
  }
}

void extract_properties(Frame& f, const MarkedText& mt) {
  auto mentions = find_mentions(f, mt);
  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    const auto& toks = mt.tokens[s];
    // "the thermal conductivity of E is $k$"
    int ce = find_seq(toks, {"thermal", "conductivity"});
    if (ce >= 0 && ce < (int)toks.size() && toks[ce].lemma == "of") {
      auto run = run_after(toks, s, ce);
      if (run) {
        EntityId e = f.find(run->name);
        int sym = next_pos(toks, run->end, Pos::Symbol);
        if (e >= 0 && sym >= 0 && !f.conductivity.count(e))
          f.conductivity[e] = symbol_name(mt, toks[sym]);
      }
    }
    // "E has thermal conductivity $k$"
    for (int j = 0; j + 2 < (int)toks.size(); ++j) {
      if (toks[j].lemma != "have" || toks[j].tense != Tense::Present) continue;
      if (toks[j + 1].lemma != "thermal" || toks[j + 2].lemma != "conductivity")
        continue;
      int sym = next_pos(toks, j + 3, Pos::Symbol);
      auto subjects = subjects_before(mentions, toks, s, j);
      if (sym >= 0 && subjects.size() == 1) {
        EntityId e = subjects[0].entity;
        if (!f.conductivity.count(e))
          f.conductivity[e] = symbol_name(mt, toks[sym]);
      }
    }
    // "E is of length $L$"
    for (int j = 0; j + 3 < (int)toks.size(); ++j) {
      if (toks[j].lemma != "be" || toks[j].tense != Tense::Present) continue;
      if (toks[j + 1].lemma != "of" || toks[j + 2].lemma != "length") continue;
      if (toks[j + 3].pos != Pos::Symbol) continue;
      auto subjects = subjects_before(mentions, toks, s, j);
      if (subjects.size() == 1) {
        EntityId e = subjects[0].entity;
        if (!f.length_symbol.count(e))
          f.length_symbol[e] = symbol_name(mt, toks[j + 3]);
      }
    }
    // geometry: "... is a right cylinder with rectangular cross-section of
    // dimensions $a$ and $b$" / "... is a parallelepiped of ... dimensions
    // $a$ (in $x_2$), ..."
    GeometryKind kind = GeometryKind::None;
    if (find_seq(toks, {"right", "cylinder"}) >= 0)
      kind = GeometryKind::RightCylinderRect;
    else if (has_lemma(toks, "parallelepiped"))
      kind = GeometryKind::Parallelepiped;
    if (kind != GeometryKind::None) {
      int mv = main_verb(toks);
      auto subjects =
          mv >= 0 ? subjects_before(mentions, toks, s, mv) : std::vector<Mention>{};
      if (subjects.size() == 1) {
        EntityId e = subjects[0].entity;
        // "<entity> geometry" describes the entity itself
        const std::string& name = f.entities[e].name;
        const std::string suffix = " geometry";
        if (name.size() > suffix.size() &&
            name.compare(name.size() - suffix.size(), suffix.size(), suffix) ==
                0) {
          EntityId base = f.find(name.substr(0, name.size() - suffix.size()));
          if (base >= 0) e = base;
        }
        GeometrySpec spec;
        spec.kind = kind;
        int di = next_lemma(toks, 0, "dimension");
        for (int j = di >= 0 ? di + 1 : (int)toks.size(); j < (int)toks.size();
             ++j) {
          const Token& t = toks[j];
          if (t.pos == Pos::Symbol) {
            spec.dims.push_back(symbol_name(mt, t));
          } else if (t.pos == Pos::Punct && t.word == "(") {
            if (j + 3 < (int)toks.size() && toks[j + 1].lemma == "in" &&
                toks[j + 2].pos == Pos::Symbol && toks[j + 3].word == ")" &&
                !spec.dims.empty()) {
              spec.dim_axis[spec.dims.back()] = symbol_name(mt, toks[j + 2]);
              j += 3;
            } else {
              break;
            }
          } else if (t.pos == Pos::Punct && t.word == ",") {
            continue;
          } else if (t.pos == Pos::Conj || t.pos == Pos::Det) {
            continue;
          } else {
            break;
          }
        }
        if (!f.geometry.count(e)) f.geometry.emplace(e, std::move(spec));
      }
    }
  }
}

void bind_parameters(Frame& f, const MarkedText& mt) {
  auto is_coordinate = [&](const std::string& sym) {
    return std::find(f.coordinate_vars.begin(), f.coordinate_vars.end(), sym) !=
           f.coordinate_vars.end();
  };
  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    for (const auto& t : mt.tokens[s]) {
      if (t.pos != Pos::Equation) continue;
      const auto* sp = span_of(mt, t);
      if (!sp || !sp->equation) continue;
      for (const auto& ch : sp->equation->chains) {
        if (ch.exprs.size() != 2 || ch.rels[0] != Rel::Equal) continue;
        if (!ch.exprs[0].is_single_symbol()) continue;
        const std::string& sym = ch.exprs[0].terms.begin()->first;
        if (is_coordinate(sym)) continue;
        if (!ch.exprs[1].is_constant())
          throw Error(ErrorCode::NonNumericRHS,
                      "parameter '" + sym + "' is not bound to a number", s);
        Rational value = ch.exprs[1].constant;
        bool dup = false;
        for (const auto& b : f.bindings) {
          if (b.symbol != sym) continue;
          dup = true;
          if (b.value != value)
            throw Error(ErrorCode::DuplicateBinding,
                        "parameter '" + sym + "' bound to conflicting values",
                        s);
        }
        if (!dup) f.bindings.push_back({sym, value, s});
      }
    }
  }
}

namespace {

// own symbol, else the archetype's, else up the inheritance chain
template <typename Map>
const typename Map::mapped_type* resolve_up(const Frame& f, const Map& m,
                                            EntityId e) {
  for (EntityId cur = e; cur >= 0; cur = f.entities[cur].parent) {
    auto it = m.find(cur);
    if (it != m.end()) return &it->second;
    EntityId arch = f.entities[cur].archetype;
    if (arch >= 0) {
      auto at = m.find(arch);
      if (at != m.end()) return &at->second;
    }
  }
  return nullptr;
}

bool affine_equal(const Affine& a, const Affine& b,
                  const std::map<std::string, Rational>& bm) {
  Affine d = a - b;
  if (d.is_constant()) return d.constant == 0;
  auto va = a.evaluate(bm);
  auto vb = b.evaluate(bm);
  return va && vb && *va == *vb;
}

}  // namespace

void validate(Frame& f) {
  auto bm = f.binding_map();

  // a single component with only a length gets the canonical domain (0, L)
  if (f.components.size() == 1) {
    EntityId c = f.components[0];
    if (!f.domains.count(c)) {
      const std::string* len = resolve_up(f, f.length_symbol, c);
      if (len && !f.through_axis.empty()) {
        DomainSpec spec;
        spec.coords.push_back(f.through_axis);
        spec.lo.push_back(Affine::number(0));
        spec.hi.push_back(Affine::symbol(*len));
        f.domains.emplace(c, std::move(spec));
      }
    }
  }

  for (EntityId c : f.components) {
    if (!f.domains.count(c))
      throw Error(ErrorCode::MissingDomain,
                  "component '" + f.entities[c].name + "' has no domain");
    if (!f.conductivity.count(c)) {
      const std::string* k = resolve_up(f, f.conductivity, c);
      if (k)
        f.conductivity[c] = *k;
      else
        throw Error(ErrorCode::MissingConductivity,
                    "component '" + f.entities[c].name +
                        "' has no thermal conductivity");
    }
  }

  for (auto& bc : f.bcs) {
    if (bc.kind == BcKind::Robin) {
      bc.fluid_temp_symbol = f.fluid_temperature(bc.fluid);
      if (bc.fluid_temp_symbol.empty())
        throw Error(ErrorCode::IncompleteRobin,
                    "no temperature is recorded for fluid '" +
                        (bc.fluid >= 0 ? f.entities[bc.fluid].name : "?") + "'",
                    bc.sentence);
    }
    if (bc.face == FaceSel::AxialStation) {
      if (std::find(f.coordinate_vars.begin(), f.coordinate_vars.end(),
                    bc.coord) == f.coordinate_vars.end())
        throw Error(ErrorCode::UnknownFace,
                    "face coordinate '" + bc.coord + "' is not declared",
                    bc.sentence);
      std::vector<EntityId> owners;
      for (EntityId c : f.components) {
        const DomainSpec& d = f.domains.at(c);
        for (size_t ax = 0; ax < d.coords.size(); ++ax) {
          if (d.coords[ax] != bc.coord) continue;
          if (affine_equal(*bc.station, d.lo[ax], bm) ||
              affine_equal(*bc.station, d.hi[ax], bm))
            owners.push_back(c);
        }
      }
      if (bc.target >= 0) {
        if (std::find(owners.begin(), owners.end(), bc.target) == owners.end())
          throw Error(ErrorCode::UnknownFace,
                      "'" + f.entities[bc.target].name +
                          "' has no face at the stated location",
                      bc.sentence);
      } else {
        if (owners.empty())
          throw Error(ErrorCode::UnknownFace,
                      "no component has a face at the stated location",
                      bc.sentence);
        if (owners.size() > 1)
          throw Error(ErrorCode::UnknownFace,
                      "the stated location is an interior interface",
                      bc.sentence);
        bc.target = owners.front();
      }
    } else if (bc.face == FaceSel::Lateral) {
      if (bc.target < 0)
        throw Error(ErrorCode::UnknownFace,
                    "lateral face does not name a component", bc.sentence);
    }
  }

  // strict pairwise interior overlap, checked once values are bound
  for (size_t i = 0; i < f.components.size(); ++i) {
    for (size_t j = i + 1; j < f.components.size(); ++j) {
      const DomainSpec& a = f.domains.at(f.components[i]);
      const DomainSpec& b = f.domains.at(f.components[j]);
      bool overlap = true, decidable = true;
      int shared = 0;
      for (size_t ax = 0; ax < a.coords.size() && decidable; ++ax) {
        for (size_t bx = 0; bx < b.coords.size(); ++bx) {
          if (a.coords[ax] != b.coords[bx]) continue;
          ++shared;
          auto alo = a.lo[ax].evaluate(bm), ahi = a.hi[ax].evaluate(bm);
          auto blo = b.lo[bx].evaluate(bm), bhi = b.hi[bx].evaluate(bm);
          if (!alo || !ahi || !blo || !bhi) {
            decidable = false;
            break;
          }
          Rational lo = std::max(*alo, *blo), hi = std::min(*ahi, *bhi);
          if (!(lo < hi)) overlap = false;
        }
      }
      if (decidable && shared > 0 && overlap)
        throw Error(ErrorCode::OverlappingDomains,
                    "domains of '" + f.entities[f.components[i]].name +
                        "' and '" + f.entities[f.components[j]].name +
                        "' overlap");
    }
  }
}

}  // namespace calor::frame
