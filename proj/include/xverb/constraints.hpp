#pragma once
// ATTRACT constraint generation: all unique pairs inside each verb class,
// cross-lingual translation pairs, and monolingual synonym pairs. Pairs are
// stored undirected in canonical order and deduplicated; provenance labels
// survive union so experiment variants can filter by source.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "xverb/embedding.hpp"
#include "xverb/types.hpp"
#include "xverb/util.hpp"

namespace xverb {

enum class Provenance : unsigned { verbnet = 1u, cross_lingual = 2u, mono_syn = 4u };

inline const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::verbnet: return "verbnet";
    case Provenance::cross_lingual: return "cross_lingual";
    case Provenance::mono_syn: return "mono_syn";
  }
  return "?";
}

inline constexpr Provenance kAllProvenances[] = {
    Provenance::verbnet, Provenance::cross_lingual, Provenance::mono_syn};

// Undirected pair in canonical order (smaller rendered token first). A pair
// that arrives from several sources keeps all labels on one entry.
struct AttractPair {
  Token left;
  Token right;
  unsigned provenance_mask;

  static AttractPair make(Token a, Token b, Provenance p) {
    if (a == b)
      throw std::invalid_argument("reflexive constraint pair: '" +
                                  a.rendered() + "'");
    if (b < a) std::swap(a, b);
    return AttractPair{std::move(a), std::move(b),
                       static_cast<unsigned>(p)};
  }

  bool has(Provenance p) const {
    return (provenance_mask & static_cast<unsigned>(p)) != 0;
  }

  std::string key() const { return left.rendered() + '\t' + right.rendered(); }
};

class ConstraintSet {
 public:
  void add(Token a, Token b, Provenance p) { add_pair(AttractPair::make(std::move(a), std::move(b), p)); }

  void add_pair(AttractPair pair) {
    auto key = pair.key();
    auto it = index_.find(key);
    if (it != index_.end()) {
      pairs_[it->second].provenance_mask |= pair.provenance_mask;
      return;
    }
    index_.emplace(std::move(key), pairs_.size());
    pairs_.push_back(std::move(pair));
  }

  const std::vector<AttractPair>& pairs() const { return pairs_; }
  std::size_t size() const { return pairs_.size(); }
  bool empty() const { return pairs_.empty(); }

  bool contains(const Token& a, const Token& b) const {
    const Token& l = (a < b) ? a : b;
    const Token& r = (a < b) ? b : a;
    return index_.count(l.rendered() + '\t' + r.rendered()) > 0;
  }

  // Number of pairs carrying the given label. Sums to size() when every
  // pair has a single label; a pair merged from several sources is counted
  // under each of them.
  std::size_t count(Provenance p) const {
    std::size_t n = 0;
    for (const auto& pair : pairs_)
      if (pair.has(p)) ++n;
    return n;
  }

  ConstraintSet filtered(Provenance p) const {
    ConstraintSet out;
    for (const auto& pair : pairs_)
      if (pair.has(p)) out.add_pair(pair);
    return out;
  }

 private:
  std::vector<AttractPair> pairs_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Verb-class lexicon with subclass members already folded into each class.
struct VerbClassLexicon {
  LanguageTag language;
  std::map<std::string, std::set<std::string>> classes;  // id -> surfaces

  void validate() const {
    for (const auto& [id, members] : classes)
      if (members.empty())
        throw std::invalid_argument("verb class '" + id + "' has no members");
  }
};

struct BilingualDictionary {
  LanguageTag source;
  LanguageTag target;
  std::vector<std::pair<std::string, std::string>> pairs;  // deduplicated
  std::vector<std::string> warnings;
};

// All unique pairs (v_k, v_l) within each class; pairs coinciding across
// classes are merged so no constraint is double-weighted.
inline ConstraintSet pairs_from_verb_classes(const VerbClassLexicon& lexicon) {
  lexicon.validate();
  ConstraintSet out;
  for (const auto& [id, members] : lexicon.classes) {
    std::vector<Token> tokens;
    tokens.reserve(members.size());
    for (const auto& m : members) tokens.emplace_back(lexicon.language, m);
    for (std::size_t i = 0; i < tokens.size(); ++i)
      for (std::size_t j = i + 1; j < tokens.size(); ++j)
        out.add(tokens[i], tokens[j], Provenance::verbnet);
  }
  return out;
}

// One pair per translation link; the two sides always differ after
// prefixing because the language tags differ.
inline ConstraintSet pairs_from_dictionary(const BilingualDictionary& dict) {
  if (dict.source == dict.target)
    throw std::invalid_argument("dictionary languages must differ");
  ConstraintSet out;
  for (const auto& [src, tgt] : dict.pairs)
    out.add(Token(dict.source, src), Token(dict.target, tgt),
            Provenance::cross_lingual);
  return out;
}

inline ConstraintSet pairs_from_synonyms(
    const std::vector<std::set<std::string>>& synsets,
    const LanguageTag& language) {
  ConstraintSet out;
  for (const auto& synset : synsets) {
    if (synset.empty())
      throw std::invalid_argument("empty synset");
    std::vector<Token> tokens;
    tokens.reserve(synset.size());
    for (const auto& s : synset) tokens.emplace_back(language, s);
    for (std::size_t i = 0; i < tokens.size(); ++i)
      for (std::size_t j = i + 1; j < tokens.size(); ++j)
        out.add(tokens[i], tokens[j], Provenance::mono_syn);
  }
  return out;
}

struct VocabularyFilterResult {
  ConstraintSet retained;
  std::map<Provenance, std::size_t> dropped;  // per label of dropped pairs
  std::size_t dropped_total = 0;
};

// Keeps exactly the pairs with both tokens in the store. Idempotent and
// monotone in the store's vocabulary.
inline VocabularyFilterResult filter_by_vocabulary(
    const ConstraintSet& set, const WordVectorStore& store) {
  VocabularyFilterResult result;
  for (auto p : kAllProvenances) result.dropped[p] = 0;
  for (const auto& pair : set.pairs()) {
    if (store.contains(pair.left) && store.contains(pair.right)) {
      result.retained.add_pair(pair);
    } else {
      ++result.dropped_total;
      for (auto p : kAllProvenances)
        if (pair.has(p)) ++result.dropped[p];
    }
  }
  return result;
}

// Deduplicated union; a pair present in several sets ends up once with the
// union of its provenance labels.
inline ConstraintSet union_of(const std::vector<ConstraintSet>& sets) {
  ConstraintSet out;
  for (const auto& s : sets)
    for (const auto& pair : s.pairs()) out.add_pair(pair);
  return out;
}

// ---- file formats ----------------------------------------------------
// lexicon:   class_id<TAB>verb1 verb2 ...
// dictionary: src_surface<TAB>tgt_surface
// synonyms:  one synset per line, space-separated surfaces
// dump:      left<TAB>right<TAB>provenance[,provenance]

inline VerbClassLexicon load_verb_class_lexicon(
    const std::filesystem::path& path, const LanguageTag& language) {
  VerbClassLexicon lex{language, {}};
  auto lines = read_lines(path);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    auto cols = split_on(lines[li], '\t');
    if (cols.size() != 2)
      throw std::runtime_error(path.string() + ": line " +
                               std::to_string(li + 1) +
                               ": expected 'class_id<TAB>members'");
    auto id = trim(cols[0]);
    auto members = split_whitespace(cols[1]);
    if (id.empty() || members.empty())
      throw std::runtime_error(path.string() + ": line " +
                               std::to_string(li + 1) +
                               ": empty class id or member list");
    auto& dest = lex.classes[id];
    for (auto& m : members) dest.insert(ascii_lower(m));
  }
  return lex;
}

// Entries whose surface contains whitespace are multiword expressions; we
// only have vectors for single words, so they are dropped with a warning.
inline BilingualDictionary load_dictionary(const std::filesystem::path& path,
                                           const LanguageTag& source,
                                           const LanguageTag& target) {
  BilingualDictionary dict{source, target, {}, {}};
  std::set<std::pair<std::string, std::string>> seen;
  auto lines = read_lines(path);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    auto cols = split_on(lines[li], '\t');
    if (cols.size() != 2)
      throw std::runtime_error(path.string() + ": line " +
                               std::to_string(li + 1) +
                               ": expected 'src<TAB>tgt'");
    auto src = ascii_lower(trim(cols[0]));
    auto tgt = ascii_lower(trim(cols[1]));
    if (src.empty() || tgt.empty())
      throw std::runtime_error(path.string() + ": line " +
                               std::to_string(li + 1) + ": empty surface");
    if (src.find(' ') != std::string::npos ||
        tgt.find(' ') != std::string::npos) {
      dict.warnings.push_back(path.string() + ": line " +
                              std::to_string(li + 1) +
                              ": dropped multiword entry");
      continue;
    }
    if (seen.emplace(src, tgt).second) dict.pairs.emplace_back(src, tgt);
  }
  return dict;
}

inline std::vector<std::set<std::string>> load_synsets(
    const std::filesystem::path& path) {
  std::vector<std::set<std::string>> out;
  for (const auto& line : read_lines(path)) {
    if (trim(line).empty()) continue;
    std::set<std::string> synset;
    for (auto& w : split_whitespace(line)) synset.insert(ascii_lower(w));
    out.push_back(std::move(synset));
  }
  return out;
}

inline void dump_constraints(const ConstraintSet& set,
                             const std::filesystem::path& path) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  for (const auto& pair : set.pairs()) {
    out << pair.left.rendered() << '\t' << pair.right.rendered() << '\t';
    bool first = true;
    for (auto p : kAllProvenances) {
      if (!pair.has(p)) continue;
      if (!first) out << ',';
      out << provenance_name(p);
      first = false;
    }
    out << '\n';
  }
}

}  // namespace xverb
