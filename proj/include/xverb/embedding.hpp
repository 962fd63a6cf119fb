#pragma once
// Word-vector storage for a joint multilingual space: load/save in word2vec
// text format, merging per-language stores, normalization and neighbor
// queries. Entry order is insertion order, which keeps runs reproducible.

#include <Eigen/Core>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "xverb/types.hpp"
#include "xverb/util.hpp"

namespace xverb {

class WordVectorStore {
 public:
  using Vector = Eigen::VectorXd;

  WordVectorStore() = default;
  explicit WordVectorStore(std::size_t dimension) : dimension_(dimension) {}

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return tokens_.size(); }
  bool empty() const { return tokens_.empty(); }

  bool contains(const Token& t) const { return contains(t.rendered()); }
  bool contains(const std::string& rendered) const {
    return index_.count(rendered) > 0;
  }

  std::optional<std::size_t> index_of(const std::string& rendered) const {
    auto it = index_.find(rendered);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const Token& token_at(std::size_t i) const { return tokens_[i]; }
  const Vector& vector_at(std::size_t i) const { return vectors_[i]; }

  const Vector& vector(const Token& t) const {
    auto it = index_.find(t.rendered());
    if (it == index_.end())
      throw std::out_of_range("unknown token: '" + t.rendered() + "'");
    return vectors_[it->second];
  }

  void set_vector(std::size_t i, Vector v) {
    if (static_cast<std::size_t>(v.size()) != dimension_)
      throw std::invalid_argument("vector dimension mismatch");
    vectors_[i] = std::move(v);
  }

  void insert(Token token, Vector v) {
    if (dimension_ == 0 && tokens_.empty())
      dimension_ = static_cast<std::size_t>(v.size());
    if (static_cast<std::size_t>(v.size()) != dimension_)
      throw std::invalid_argument("vector dimension mismatch for '" +
                                  token.rendered() + "'");
    auto rendered = token.rendered();
    if (index_.count(rendered))
      throw std::invalid_argument("duplicate token: '" + rendered + "'");
    index_.emplace(std::move(rendered), tokens_.size());
    languages_.insert(token.language);
    tokens_.push_back(std::move(token));
    vectors_.push_back(std::move(v));
  }

  const std::set<std::string>& languages() const { return languages_; }

  // Frozen copy of all vectors, taken when specialisation begins.
  void freeze_snapshot() { initial_ = vectors_; }
  bool has_snapshot() const { return !initial_.empty() || tokens_.empty(); }
  const Vector& initial_vector_at(std::size_t i) const {
    if (initial_.size() != vectors_.size())
      throw std::logic_error("no initial snapshot frozen");
    return initial_[i];
  }
  const Vector& initial_vector(const Token& t) const {
    auto it = index_.find(t.rendered());
    if (it == index_.end())
      throw std::out_of_range("unknown token: '" + t.rendered() + "'");
    return initial_vector_at(it->second);
  }

  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  std::size_t dimension_ = 0;
  std::vector<Token> tokens_;
  std::vector<Vector> vectors_;
  std::vector<Vector> initial_;
  std::unordered_map<std::string, std::size_t> index_;
  std::set<std::string> languages_;
  std::vector<std::string> warnings_;
};

// Reads word2vec text format: header "V d", then one "word v1 ... vd" row
// per line. Words are lowercased and prefixed with the language tag; on a
// case collision the first occurrence wins and a warning is recorded.
inline WordVectorStore load_word_vectors(const std::filesystem::path& path,
                                         const LanguageTag& language) {
  auto lines = read_lines(path);
  if (lines.empty())
    throw std::runtime_error(path.string() + ": line 1: missing header");

  auto header = split_whitespace(lines[0]);
  long long count = 0, dim = 0;
  if (header.size() != 2 || !parse_long(header[0], count) ||
      !parse_long(header[1], dim) || count < 0 || dim < 1)
    throw std::runtime_error(path.string() +
                             ": line 1: malformed header, expected 'V d'");

  WordVectorStore store(static_cast<std::size_t>(dim));
  long long rows = 0;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const std::string line_no = std::to_string(li + 1);
    if (trim(lines[li]).empty()) continue;  // tolerate trailing blank lines
    ++rows;
    if (rows > count)
      throw std::runtime_error(path.string() + ": line " + line_no +
                               ": more rows than declared in header");
    auto fields = split_whitespace(lines[li]);
    if (fields.size() != static_cast<std::size_t>(dim) + 1)
      throw std::runtime_error(path.string() + ": line " + line_no +
                               ": expected " + std::to_string(dim) +
                               " values, got " +
                               std::to_string(fields.size() - 1));
    Eigen::VectorXd v(dim);
    for (long long j = 0; j < dim; ++j) {
      double x;
      if (!parse_double(fields[static_cast<std::size_t>(j) + 1], x))
        throw std::runtime_error(path.string() + ": line " + line_no +
                                 ": cannot parse value '" +
                                 fields[static_cast<std::size_t>(j) + 1] +
                                 "'");
      if (!std::isfinite(x))
        throw std::runtime_error(path.string() + ": line " + line_no +
                                 ": non-finite value");
      v[j] = x;
    }
    Token token(language, ascii_lower(fields[0]));
    if (store.contains(token)) {
      store.add_warning(path.string() + ": line " + line_no +
                        ": duplicate token '" + token.rendered() +
                        "' after lowercasing; keeping first occurrence");
      continue;
    }
    store.insert(std::move(token), std::move(v));
  }
  if (rows != count)
    throw std::runtime_error(path.string() + ": expected " +
                             std::to_string(count) + " rows, found " +
                             std::to_string(rows));
  return store;
}

namespace detail {
inline void write_vector_rows(const WordVectorStore& store,
                              const std::filesystem::path& path,
                              bool rendered_words) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << store.size() << ' ' << store.dimension() << '\n';
  for (std::size_t i = 0; i < store.size(); ++i) {
    out << (rendered_words ? store.token_at(i).rendered()
                           : store.token_at(i).surface);
    const auto& v = store.vector_at(i);
    for (Eigen::Index j = 0; j < v.size(); ++j) out << ' ' << format_g17(v[j]);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}
}  // namespace detail

// Writes the store back out in the same text format, 17 significant digits
// per component so a save/load round trip is value-exact. Only meaningful
// for single-language stores; for a joint space use save_joint_space.
inline void save_word_vectors(const WordVectorStore& store,
                              const std::filesystem::path& path) {
  if (store.languages().size() > 1)
    throw std::invalid_argument(
        "save_word_vectors: store holds several languages; "
        "use save_joint_space");
  detail::write_vector_rows(store, path, /*rendered_words=*/false);
}

// Joint-space variant: rows carry the full "lang_surface" token so a
// multilingual store is self-describing on disk.
inline void save_joint_space(const WordVectorStore& store,
                             const std::filesystem::path& path) {
  detail::write_vector_rows(store, path, /*rendered_words=*/true);
}

inline WordVectorStore load_joint_space(const std::filesystem::path& path) {
  auto lines = read_lines(path);
  if (lines.empty())
    throw std::runtime_error(path.string() + ": line 1: missing header");
  auto header = split_whitespace(lines[0]);
  long long count = 0, dim = 0;
  if (header.size() != 2 || !parse_long(header[0], count) ||
      !parse_long(header[1], dim) || count < 0 || dim < 1)
    throw std::runtime_error(path.string() +
                             ": line 1: malformed header, expected 'V d'");
  WordVectorStore store(static_cast<std::size_t>(dim));
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (trim(lines[li]).empty()) continue;
    auto fields = split_whitespace(lines[li]);
    if (fields.size() != static_cast<std::size_t>(dim) + 1)
      throw std::runtime_error(path.string() + ": line " +
                               std::to_string(li + 1) + ": expected " +
                               std::to_string(dim) + " values");
    Eigen::VectorXd v(dim);
    for (long long j = 0; j < dim; ++j) {
      double x;
      if (!parse_double(fields[static_cast<std::size_t>(j) + 1], x) ||
          !std::isfinite(x))
        throw std::runtime_error(path.string() + ": line " +
                                 std::to_string(li + 1) + ": bad value");
      v[j] = x;
    }
    store.insert(Token::parse(fields[0]), std::move(v));
  }
  if (store.size() != static_cast<std::size_t>(count))
    throw std::runtime_error(path.string() + ": row count mismatch");
  return store;
}

// Disjoint union of per-language stores into one joint space. Supports any
// number of stores as long as dimensions agree and tags do not repeat.
inline WordVectorStore merge_stores(
    const std::vector<WordVectorStore>& stores) {
  if (stores.empty()) return {};
  WordVectorStore merged(stores[0].dimension());
  std::set<std::string> seen_tags;
  for (const auto& s : stores) {
    if (s.dimension() != merged.dimension())
      throw std::invalid_argument(
          "dimension mismatch while merging stores: " +
          std::to_string(s.dimension()) + " vs " +
          std::to_string(merged.dimension()));
    for (const auto& lang : s.languages())
      if (!seen_tags.insert(lang).second)
        throw std::invalid_argument("duplicate language tag while merging: '" +
                                    lang + "'");
    for (std::size_t i = 0; i < s.size(); ++i)
      merged.insert(s.token_at(i), s.vector_at(i));
    for (const auto& w : s.warnings()) merged.add_warning(w);
  }
  return merged;
}

// Scales every vector to unit L2 norm. Cosine similarities are unchanged;
// dot products afterwards are cosines bounded in [-1, 1].
inline WordVectorStore unit_normalize(const WordVectorStore& store) {
  WordVectorStore out(store.dimension());
  for (std::size_t i = 0; i < store.size(); ++i) {
    double n = store.vector_at(i).norm();
    if (n == 0.0)
      throw std::invalid_argument("cannot normalize zero vector for '" +
                                  store.token_at(i).rendered() + "'");
    out.insert(store.token_at(i), store.vector_at(i) / n);
  }
  for (const auto& w : store.warnings()) out.add_warning(w);
  return out;
}

struct Neighbor {
  Token token;
  double similarity;
};

inline double cosine_similarity(const Eigen::VectorXd& a,
                                const Eigen::VectorXd& b) {
  double na = a.norm(), nb = b.norm();
  if (na == 0.0 || nb == 0.0) return 0.0;
  return a.dot(b) / (na * nb);
}

// Top-n tokens by cosine similarity to the query, excluding the query
// itself. Ties are broken by rendered-token order; `restrict` limits
// candidates to one language.
inline std::vector<Neighbor> nearest_neighbors(
    const WordVectorStore& store, const Token& query, std::size_t n,
    const std::optional<LanguageTag>& restrict = std::nullopt) {
  if (!store.contains(query))
    throw std::out_of_range("unknown query token: '" + query.rendered() + "'");
  const auto& q = store.vector(query);
  std::vector<Neighbor> all;
  for (std::size_t i = 0; i < store.size(); ++i) {
    const Token& t = store.token_at(i);
    if (t == query) continue;
    if (restrict && t.language != restrict->code()) continue;
    all.push_back({t, cosine_similarity(q, store.vector_at(i))});
  }
  std::sort(all.begin(), all.end(), [](const Neighbor& a, const Neighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.token < b.token;
  });
  if (all.size() > n)
    all.erase(all.begin() + static_cast<std::ptrdiff_t>(n), all.end());
  return all;
}

}  // namespace xverb
