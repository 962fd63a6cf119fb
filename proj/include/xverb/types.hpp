#pragma once
// Language tags and language-prefixed tokens. A joint vector space holds
// words from several languages; each word is keyed by "lang_surface".

#include <stdexcept>
#include <string>

#include "xverb/util.hpp"

namespace xverb {

// Short lowercase language code ("en", "fr", ...). The tag is used verbatim
// as the token prefix, so it may not contain the separator character.
class LanguageTag {
 public:
  explicit LanguageTag(std::string code) : code_(std::move(code)) {
    if (!valid(code_))
      throw std::invalid_argument("invalid language tag: '" + code_ + "'");
  }

  static bool valid(const std::string& code) {
    if (code.size() < 2 || code.size() > 8) return false;
    for (char c : code)
      if (c < 'a' || c > 'z') return false;
    return true;
  }

  const std::string& code() const { return code_; }

  friend bool operator==(const LanguageTag&, const LanguageTag&) = default;

 private:
  std::string code_;
};

struct Token {
  std::string language;
  std::string surface;

  static constexpr char kSeparator = '_';

  Token(const LanguageTag& tag, std::string surf)
      : Token(tag.code(), std::move(surf)) {}

  Token(std::string lang, std::string surf)
      : language(std::move(lang)), surface(std::move(surf)) {
    if (!LanguageTag::valid(language))
      throw std::invalid_argument("invalid language tag: '" + language + "'");
    if (surface.empty())
      throw std::invalid_argument("empty token surface (language '" +
                                  language + "')");
    for (char c : surface)
      if (c >= 'A' && c <= 'Z')
        throw std::invalid_argument("token surface must be lowercase: '" +
                                    surface + "'");
  }

  std::string rendered() const { return language + kSeparator + surface; }

  // Splits at the first separator. Tags cannot contain '_', so the split is
  // unambiguous even when the surface itself has underscores.
  static Token parse(const std::string& rendered) {
    auto pos = rendered.find(kSeparator);
    if (pos == std::string::npos || pos == 0 || pos + 1 >= rendered.size())
      throw std::invalid_argument("cannot parse token: '" + rendered + "'");
    return Token(rendered.substr(0, pos), rendered.substr(pos + 1));
  }

  friend bool operator==(const Token&, const Token&) = default;

  // Same order as comparing rendered() strings: '_' sorts below [a-z], so
  // (language, surface) lexicographic order coincides with rendered order.
  friend bool operator<(const Token& a, const Token& b) {
    if (int c = a.language.compare(b.language); c != 0) return c < 0;
    return a.surface < b.surface;
  }
};

}  // namespace xverb
