// Frame construction: entities, snippets, attributes, states, inheritance,
// instantiation, and the connection graph.
#include <algorithm>
#include <cctype>
#include <functional>

#include "calor/errors.hpp"
#include "calor/frame.hpp"
#include "frame_internal.hpp"

namespace calor::frame {

using namespace detail;

namespace detail {

std::string lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string join_words(const std::vector<Token>& toks, int begin, int end) {
  std::vector<Token> slice;
  for (int i = begin; i < end && i < (int)toks.size(); ++i) {
    Token t = toks[i];
    if (t.word.empty() || t.word[0] != '$') t.word = lower(t.word);
    slice.push_back(t);
  }
  return text::detokenize(slice);
}

std::vector<Run> scan_runs(const std::vector<Token>& toks, int sentence) {
  std::vector<Run> runs;
  int n = (int)toks.size();
  int i = 0;
  while (i < n) {
    if (toks[i].pos != Pos::Adj && toks[i].pos != Pos::Noun) {
      ++i;
      continue;
    }
    int j = i;
    int last_noun = -1;
    while (j < n && (toks[j].pos == Pos::Adj || toks[j].pos == Pos::Noun)) {
      if (toks[j].pos == Pos::Noun) last_noun = j;
      ++j;
    }
    if (last_noun < 0) {  // adjectives with no head noun
      i = j;
      continue;
    }
    int end = last_noun + 1;
    // trailing instance index ("brick 1")
    if (end < n && toks[end].pos == Pos::Num) ++end;
    Run r;
    r.sentence = sentence;
    r.begin = i;
    r.end = end;
    r.name = join_words(toks, i, end);
    runs.push_back(r);
    i = j > end ? j : end;
  }
  return runs;
}

// Does run X ("of" DET* run Y) start an of-compound at runs[i]?  Returns the
// index of run Y or -1.
static int of_compound_partner(const std::vector<Token>& toks,
                               const std::vector<Run>& runs, int i) {
  if (i + 1 >= (int)runs.size()) return -1;
  const Run& x = runs[i];
  const Run& y = runs[i + 1];
  int p = x.end;
  if (p >= (int)toks.size() || toks[p].lemma != "of") return -1;
  ++p;
  while (p < y.begin && toks[p].pos == Pos::Det) ++p;
  return p == y.begin ? i + 1 : -1;
}

std::vector<Mention> find_mentions(const Frame& f, const MarkedText& mt) {
  std::vector<Mention> out;
  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    const auto& toks = mt.tokens[s];
    auto runs = scan_runs(toks, s);
    for (int i = 0; i < (int)runs.size(); ++i) {
      int partner = of_compound_partner(toks, runs, i);
      if (partner >= 0) {
        std::string compound = runs[partner].name + " " + runs[i].name;
        EntityId e = f.find(compound);
        if (e >= 0) {
          out.push_back({s, runs[i].begin, runs[partner].end, e});
          i = partner;
          continue;
        }
      }
      EntityId e = f.find(runs[i].name);
      if (e >= 0) out.push_back({s, runs[i].begin, runs[i].end, e});
    }
  }
  return out;
}

std::vector<Mention> subjects_before(const std::vector<Mention>& mentions,
                                     const std::vector<Token>& toks,
                                     int sentence, int pos) {
  std::vector<Mention> in_sent;
  for (const auto& m : mentions)
    if (m.sentence == sentence && m.end <= pos) in_sent.push_back(m);
  if (in_sent.empty()) return {};
  auto gap_ok = [&](int from, int to) {
    for (int i = from; i < to; ++i) {
      const Token& t = toks[i];
      bool allowed = t.pos == Pos::Det || t.pos == Pos::Conj ||
                     (t.pos == Pos::Punct && t.word == ",");
      if (!allowed) return false;
    }
    return true;
  };
  // the nearest mention must reach the verb through connector tokens only
  const Mention& last = in_sent.back();
  if (!gap_ok(last.end, pos)) return {};
  std::vector<Mention> chain = {last};
  for (int i = (int)in_sent.size() - 2; i >= 0; --i) {
    if (gap_ok(in_sent[i].end, chain.front().begin))
      chain.insert(chain.begin(), in_sent[i]);
    else
      break;
  }
  return chain;
}

std::vector<Mention> objects_after(const std::vector<Mention>& mentions,
                                   const std::vector<Token>& toks,
                                   int sentence, int pos) {
  std::vector<Mention> in_sent;
  for (const auto& m : mentions)
    if (m.sentence == sentence && m.begin >= pos) in_sent.push_back(m);
  if (in_sent.empty()) return {};
  auto gap_ok = [&](int from, int to, bool leading) {
    for (int i = from; i < to; ++i) {
      const Token& t = toks[i];
      bool allowed = t.pos == Pos::Det || t.pos == Pos::Conj ||
                     (t.pos == Pos::Punct && t.word == ",") ||
                     (leading && (t.pos == Pos::Adp || t.pos == Pos::Num));
      if (!allowed) return false;
    }
    return true;
  };
  const Mention& first = in_sent.front();
  if (!gap_ok(pos, first.begin, true)) return {};
  std::vector<Mention> chain = {first};
  for (int i = 1; i < (int)in_sent.size(); ++i) {
    if (gap_ok(chain.back().end, in_sent[i].begin, false))
      chain.push_back(in_sent[i]);
    else
      break;
  }
  return chain;
}

int match_pattern_at(const std::vector<Token>& toks, int i,
                     const std::vector<std::string>& pat) {
  int p = i;
  for (int k = 0; k < (int)pat.size(); ++k, ++p) {
    if (p >= (int)toks.size()) return -1;
    const Token& t = toks[p];
    if (t.lemma != pat[k] && lower(t.word) != pat[k]) return -1;
    if (k == 0) {
      if (pat[k] == "be") {
        if (t.tense != Tense::Present) return -1;
      } else if (t.pos == Pos::Verb) {
        if (t.tense == Tense::Past) {
          // reduced relative ("a head connected to a handle"): the participle
          // must directly follow the noun it modifies, with no auxiliary
          if (i == 0) return -1;
          const Token& prev = toks[i - 1];
          if (prev.pos != Pos::Noun && prev.pos != Pos::Num) return -1;
        } else if (t.tense == Tense::Other) {
          return -1;
        }
      }
    }
  }
  return p;
}

int main_verb(const std::vector<Token>& toks) {
  for (int i = 0; i < (int)toks.size(); ++i) {
    const Token& t = toks[i];
    if (t.pos == Pos::Verb && t.tense == Tense::Present && !t.definition_verb)
      return i;
  }
  return -1;
}

bool attribute_has_word(const std::string& attribute,
                        const std::set<std::string>& words) {
  std::string w;
  auto flush = [&]() {
    bool hit = !w.empty() && words.count(w) > 0;
    w.clear();
    return hit;
  };
  for (char c : attribute) {
    if (std::isalnum((unsigned char)c) || c == '-')
      w += (char)std::tolower((unsigned char)c);
    else if (flush())
      return true;
  }
  return flush();
}

}  // namespace detail

int ConnectionGraph::degree(EntityId e) const {
  int d = 0;
  for (const auto& ed : edges)
    if (ed.a == e || ed.b == e) ++d;
  return d;
}

bool ConnectionGraph::has_edge(EntityId x, EntityId y) const {
  for (const auto& ed : edges)
    if ((ed.a == x && ed.b == y) || (ed.a == y && ed.b == x)) return true;
  return false;
}

EntityId Frame::find(const std::string& name) const {
  std::string key = detail::lower(name);
  for (int i = 0; i < (int)entities.size(); ++i)
    if (entities[i].name == key) return i;
  for (int i = 0; i < (int)entities.size(); ++i)
    if (entities[i].aliases.count(key)) return i;
  return -1;
}

std::map<std::string, Rational> Frame::binding_map() const {
  std::map<std::string, Rational> out;
  for (const auto& b : bindings) out[b.symbol] = b.value;
  return out;
}

std::string Frame::fluid_temperature(EntityId fluid) const {
  if (fluid < 0) return "";
  for (const auto& attr : entities[fluid].attributes) {
    auto p = attr.find("temperature $");
    if (p == std::string::npos) continue;
    p += std::string("temperature $").size();
    auto q = attr.find('$', p);
    if (q != std::string::npos) return attr.substr(p, q - p);
  }
  return "";
}

const char* to_string(State s) {
  switch (s) {
    case State::Unknown: return "unknown";
    case State::Solid: return "solid";
    case State::Fluid: return "fluid";
  }
  return "?";
}

const char* to_string(BcKind k) {
  switch (k) {
    case BcKind::Robin: return "robin";
    case BcKind::Dirichlet: return "dirichlet";
    case BcKind::NeumannFlux: return "neumann_flux";
    case BcKind::Insulated: return "insulated";
  }
  return "?";
}

const char* to_string(QoiKind k) {
  switch (k) {
    case QoiKind::TemperatureAtPoint: return "temperature_at_point";
    case QoiKind::HeatRateAtFace: return "heat_rate_at_face";
    case QoiKind::FluxAtFace: return "flux_at_face";
    case QoiKind::TemperatureFieldPlot: return "temperature_field_plot";
    case QoiKind::NondimensionalH: return "nondimensional_heat_rate";
  }
  return "?";
}

void extract_entities(Frame& f, const MarkedText& mt) {
  // pass A: every bare run name, so of-compounds can be recognized below
  std::set<std::string> bare;
  std::vector<std::vector<Run>> all_runs;
  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    all_runs.push_back(scan_runs(mt.tokens[s], s));
    for (const auto& r : all_runs.back()) bare.insert(r.name);
  }
  int token_counter = 0;
  auto get_or_create = [&](const std::string& name, int first) {
    EntityId e = f.find(name);
    if (e >= 0) return e;
    Entity ent;
    ent.name = detail::lower(name);
    ent.first_mention = first;
    f.entities.push_back(ent);
    return (EntityId)(f.entities.size() - 1);
  };
  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    const auto& toks = mt.tokens[s];
    const auto& runs = all_runs[s];
    for (int i = 0; i < (int)runs.size(); ++i) {
      int partner = of_compound_partner(toks, runs, i);
      if (partner >= 0) {
        std::string compound = runs[partner].name + " " + runs[i].name;
        if (bare.count(compound)) {
          EntityId e = get_or_create(compound, token_counter + runs[i].begin);
          f.entities[e].aliases.insert(
              detail::lower(join_words(toks, runs[i].begin, runs[partner].end)));
          i = partner;
          continue;
        }
      }
      get_or_create(runs[i].name, token_counter + runs[i].begin);
    }
    token_counter += (int)toks.size();
  }
  if (f.entities.empty())
    throw Error(ErrorCode::EmptyInput, "no entities found in the statement");
}

void extract_snippets(Frame& f, const MarkedText& mt) {
  auto mentions = find_mentions(f, mt);
  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    const auto& toks = mt.tokens[s];
    int mv = main_verb(toks);
    if (mv < 0) continue;
    auto subjects = subjects_before(mentions, toks, s, mv);
    if (subjects.empty()) continue;
    const std::string& verb = toks[mv].lemma;
    if (verb == "be") {
      int c = mv + 1;
      while (c < (int)toks.size() && toks[c].pos == Pos::Det) ++c;
      std::string complement = join_words(toks, c, (int)toks.size());
      for (const auto& sub : subjects)
        f.snippets.push_back({sub.entity, verb, complement, s});
      continue;
    }
    auto objects = objects_after(mentions, toks, s, mv + 1);
    if (!objects.empty()) {
      for (const auto& sub : subjects)
        for (const auto& obj : objects)
          f.snippets.push_back(
              {sub.entity, verb, f.entities[obj.entity].name, s});
    } else {
      int c = mv + 1;
      while (c < (int)toks.size() && toks[c].pos == Pos::Det) ++c;
      std::string complement = join_words(toks, c, (int)toks.size());
      for (const auto& sub : subjects)
        f.snippets.push_back({sub.entity, verb, complement, s});
    }
  }
}

static void append_attribute(Entity& e, const std::string& attr) {
  if (attr.empty()) return;
  for (const auto& a : e.attributes)
    if (a == attr) return;
  e.attributes.push_back(attr);
}

void derive_attributes(Frame& f, const MarkedText& mt) {
  auto mentions = find_mentions(f, mt);
  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    const auto& toks = mt.tokens[s];
    int mv = main_verb(toks);
    if (mv >= 0 && toks[mv].lemma == "be") {
      auto subjects = subjects_before(mentions, toks, s, mv);
      int c = mv + 1;
      while (c < (int)toks.size() && toks[c].pos == Pos::Det) ++c;
      std::string attr = join_words(toks, c, (int)toks.size());
      for (const auto& sub : subjects)
        append_attribute(f.entities[sub.entity], attr);
    }
    // "... at temperature $T$" marks the temperature of the nearest
    // preceding entity (typically a fluid)
    for (int i = 0; i + 1 < (int)toks.size(); ++i) {
      if (toks[i].lemma != "temperature") continue;
      if (toks[i + 1].pos != Pos::Symbol) continue;
      const Mention* best = nullptr;
      for (const auto& m : mentions)
        if (m.sentence == s && m.end <= i && (!best || m.end > best->end))
          best = &m;
      if (best)
        append_attribute(f.entities[best->entity],
                         "temperature " + toks[i + 1].word);
    }
  }
}

void incorporate_commonsense(Frame& f, const MarkedText& db) {
  for (int s = 0; s < (int)db.tokens.size(); ++s) {
    const auto& toks = db.tokens[s];
    int mv = main_verb(toks);
    if (mv < 0 || toks[mv].lemma != "be")
      throw Error(ErrorCode::MalformedDatabase,
                  "database sentence is not a simple statement", s);
    auto runs = scan_runs(toks, s);
    const Run* subject = nullptr;
    for (const auto& r : runs)
      if (r.end <= mv) subject = &r;
    if (!subject)
      throw Error(ErrorCode::MalformedDatabase,
                  "database sentence has no subject", s);
    int c = mv + 1;
    while (c < (int)toks.size() && toks[c].pos == Pos::Det) ++c;
    std::string attr = join_words(toks, c, (int)toks.size());
    if (attr.empty())
      throw Error(ErrorCode::MalformedDatabase,
                  "database sentence has no predicate", s);
    // subject words must all occur in the entity's name
    std::set<std::string> subject_words;
    for (int i = subject->begin; i < subject->end; ++i)
      subject_words.insert(lower(toks[i].word));
    for (auto& e : f.entities) {
      std::set<std::string> name_words;
      std::string w;
      for (char ch : e.name + " ") {
        if (ch == ' ') {
          if (!w.empty()) name_words.insert(w);
          w.clear();
        } else {
          w += ch;
        }
      }
      bool all = true;
      for (const auto& sw : subject_words)
        if (!name_words.count(sw)) all = false;
      if (all) append_attribute(e, attr);
    }
  }
}

void classify_state(Frame& f) {
  const Vocab& v = vocab();
  for (int i = 0; i < (int)f.entities.size(); ++i) {
    Entity& e = f.entities[i];
    bool fluid = false, solid = false;
    for (const auto& a : e.attributes) {
      if (attribute_has_word(a, v.fluid_words)) fluid = true;
      if (attribute_has_word(a, v.solid_words)) solid = true;
      if (attribute_has_word(a, v.insulator_words)) e.is_insulator = true;
    }
    if (fluid && solid)
      throw Error(ErrorCode::ConflictingState,
                  "attributes of '" + e.name + "' imply both solid and fluid");
    if (fluid) e.state = State::Fluid;
    if (solid) e.state = State::Solid;
  }
}

void resolve_inheritance(Frame& f, const MarkedText& mt) {
  const Vocab& v = vocab();
  auto mentions = find_mentions(f, mt);
  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    const auto& toks = mt.tokens[s];
    for (int i = 0; i < (int)toks.size(); ++i) {
      for (const auto& pat : v.inheritance) {
        int end = match_pattern_at(toks, i, pat);
        if (end < 0) continue;
        auto parents = subjects_before(mentions, toks, s, i);
        if (parents.size() != 1) continue;
        EntityId parent = parents[0].entity;
        int colon = -1;
        for (int j = end; j < (int)toks.size(); ++j)
          if (toks[j].pos == Pos::Punct && toks[j].word == ":") colon = j;
        std::vector<EntityId> children;
        if (colon >= 0) {
          for (const auto& m : mentions)
            if (m.sentence == s && m.begin > colon)
              children.push_back(m.entity);
        } else {
          for (const auto& m : objects_after(mentions, toks, s, end))
            children.push_back(m.entity);
        }
        for (EntityId c : children) {
          if (c == parent) continue;
          if (f.entities[c].parent >= 0) continue;
          // walk up from the would-be parent looking for the child
          for (EntityId a = parent; a >= 0; a = f.entities[a].parent)
            if (a == c)
              throw Error(ErrorCode::CyclicInheritance,
                          "inheritance cycle through '" +
                              f.entities[c].name + "'",
                          s);
          f.entities[c].parent = parent;
        }
        i = end - 1;
        break;
      }
    }
  }
  // propagate attributes and fill unknown states, parents first
  std::vector<EntityId> order;
  std::vector<char> seen(f.entities.size(), 0);
  std::function<void(EntityId)> visit = [&](EntityId e) {
    if (seen[e]) return;
    seen[e] = 1;
    if (f.entities[e].parent >= 0) visit(f.entities[e].parent);
    order.push_back(e);
  };
  for (EntityId e = 0; e < (EntityId)f.entities.size(); ++e) visit(e);
  for (EntityId e : order) {
    EntityId p = f.entities[e].parent;
    if (p < 0) continue;
    for (const auto& a : f.entities[p].attributes)
      append_attribute(f.entities[e], a);
    if (f.entities[e].state == State::Unknown)
      f.entities[e].state = f.entities[p].state;
    if (f.entities[p].is_insulator) f.entities[e].is_insulator = true;
  }
}

void resolve_instantiation(Frame& f, const MarkedText& mt) {
  // "<entity> geometry" attributes describe the entity itself
  for (int i = 0; i < (int)f.entities.size(); ++i) {
    const std::string& name = f.entities[i].name;
    const std::string suffix = " geometry";
    if (name.size() <= suffix.size()) continue;
    if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0)
      continue;
    EntityId base = f.find(name.substr(0, name.size() - suffix.size()));
    if (base < 0) continue;
    for (const auto& a : f.entities[i].attributes)
      append_attribute(f.entities[base], a);
  }
  // archetypes: "each brick ..." / "every layer ..."
  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    const auto& toks = mt.tokens[s];
    auto runs = scan_runs(toks, s);
    for (const auto& r : runs) {
      if (r.begin == 0) continue;
      const Token& det = toks[r.begin - 1];
      if (det.pos != Pos::Det || (det.lemma != "each" && det.lemma != "every"))
        continue;
      EntityId arch = f.find(r.name);
      if (arch < 0) continue;
      f.entities[arch].is_archetype = true;
    }
  }
  // attach instances ("brick 1") to their archetype ("brick")
  for (int a = 0; a < (int)f.entities.size(); ++a) {
    if (!f.entities[a].is_archetype) continue;
    const std::string& base = f.entities[a].name;
    for (int e = 0; e < (int)f.entities.size(); ++e) {
      const std::string& name = f.entities[e].name;
      if (name.size() <= base.size() + 1) continue;
      if (name.compare(0, base.size(), base) != 0) continue;
      if (name[base.size()] != ' ') continue;
      bool digits = true;
      for (size_t i = base.size() + 1; i < name.size(); ++i)
        if (!std::isdigit((unsigned char)name[i])) digits = false;
      if (!digits) continue;
      f.entities[e].archetype = a;
      for (const auto& attr : f.entities[a].attributes)
        append_attribute(f.entities[e], attr);
      if (f.entities[e].state == State::Unknown)
        f.entities[e].state = f.entities[a].state;
      if (f.entities[a].is_insulator) f.entities[e].is_insulator = true;
    }
  }
}

void build_connection_graph(Frame& f, const MarkedText& mt) {
  const Vocab& v = vocab();
  auto mentions = find_mentions(f, mt);
  auto add_edge = [&](EntityId a, EntityId b, int sentence) {
    if (a == b || a < 0 || b < 0) return;
    if (f.graph.has_edge(a, b)) return;
    f.graph.edges.push_back({a, b, sentence});
    for (EntityId e : {a, b}) {
      if (std::find(f.graph.nodes.begin(), f.graph.nodes.end(), e) ==
          f.graph.nodes.end())
        f.graph.nodes.push_back(e);
    }
  };
  for (int s = 0; s < (int)mt.tokens.size(); ++s) {
    const auto& toks = mt.tokens[s];
    for (int i = 0; i < (int)toks.size(); ++i) {
      int best_end = -1;
      for (const auto& pat : v.connection) {
        int end = match_pattern_at(toks, i, pat);
        if (end > best_end) best_end = end;
      }
      if (best_end < 0) continue;
      auto subjects = subjects_before(mentions, toks, s, i);
      auto objects = objects_after(mentions, toks, s, best_end);
      for (const auto& sub : subjects)
        for (const auto& obj : objects)
          add_edge(sub.entity, obj.entity, s);
      i = best_end - 1;
    }
  }
}

void identify_components(Frame& f) {
  std::vector<char> is_parent(f.entities.size(), 0);
  for (const auto& e : f.entities)
    if (e.parent >= 0) is_parent[e.parent] = 1;
  std::vector<EntityId> ids;
  for (EntityId e = 0; e < (EntityId)f.entities.size(); ++e) {
    const Entity& ent = f.entities[e];
    if (f.graph.degree(e) == 0) continue;
    if (ent.state != State::Solid) continue;
    if (ent.is_insulator) continue;
    if (is_parent[e] || ent.is_archetype) continue;
    ids.push_back(e);
  }
  std::sort(ids.begin(), ids.end(), [&](EntityId a, EntityId b) {
    return f.entities[a].first_mention < f.entities[b].first_mention;
  });
  f.components = ids;
  if (f.components.empty())
    throw Error(ErrorCode::NoComponents,
                "no solid, connected, non-insulating entity found");
}

}  // namespace calor::frame
