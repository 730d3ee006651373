// Pipeline orchestration and bundled vocabulary.
#include <sstream>

#include "calor/errors.hpp"
#include "calor/frame.hpp"
#include "calor/lexicon.hpp"
#include "frame_internal.hpp"

namespace calor::embedded {
extern const char k_frame_vocab[];
extern const char k_commonsense[];
}  // namespace calor::embedded

namespace calor::frame {

namespace detail {

static Vocab load_vocab(const std::string& tsv) {
  Vocab v;
  std::istringstream in(tsv);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) continue;
    std::string category = line.substr(0, tab);
    std::string phrase = line.substr(tab + 1);
    std::vector<std::string> words;
    std::istringstream ws(phrase);
    std::string w;
    while (ws >> w) words.push_back(w);
    if (words.empty()) continue;
    if (category == "connection")
      v.connection.push_back(words);
    else if (category == "inheritance")
      v.inheritance.push_back(words);
    else if (category == "fluid_state")
      v.fluid_words.insert(words[0]);
    else if (category == "solid_state")
      v.solid_words.insert(words[0]);
    else if (category == "insulator")
      v.insulator_words.insert(words[0]);
    else if (category == "find")
      v.find_verbs.insert(words[0]);
  }
  return v;
}

const Vocab& vocab() {
  static const Vocab v = load_vocab(embedded::k_frame_vocab);
  return v;
}

}  // namespace detail

MarkedText run_frontend(const std::string& raw) {
  MarkedText mt = text::normalize_markup(raw);
  text::tag_tokens(mt, text::Lexicon::builtin());
  text::prepare_syntax(mt, text::Lexicon::builtin());
  return mt;
}

Frame parse_document(const MarkedText& mt, const MarkedText* db) {
  static const MarkedText builtin_db = run_frontend(embedded::k_commonsense);
  if (!db) db = &builtin_db;
  Frame f;
  extract_entities(f, mt);
  extract_snippets(f, mt);
  derive_attributes(f, mt);
  incorporate_commonsense(f, *db);
  classify_state(f);
  resolve_inheritance(f, mt);
  resolve_instantiation(f, mt);
  build_connection_graph(f, mt);
  identify_components(f);
  extract_domains(f, mt);
  extract_bcs_and_qoi(f, mt);
  extract_properties(f, mt);
  bind_parameters(f, mt);
  validate(f);
  return f;
}

Frame parse_document(const std::string& raw_text) {
  return parse_document(run_frontend(raw_text), nullptr);
}

Frame parse_document(const std::string& raw_text, const std::string& db_text) {
  MarkedText db = run_frontend(db_text);
  MarkedText mt = run_frontend(raw_text);
  return parse_document(mt, &db);
}

}  // namespace calor::frame
