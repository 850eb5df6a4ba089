#include "softskill/preprocess.h"

#include <array>
#include <cstdint>
#include <unordered_set>

namespace softskill {
namespace {

bool is_ascii_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_ascii_punct(unsigned char c) {
  return (c >= 33 && c <= 47) || (c >= 58 && c <= 64) ||
         (c >= 91 && c <= 96) || (c >= 123 && c <= 126);
}

bool is_ascii_alpha(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Typographic punctuation that shows up in scraped job ads.
constexpr std::array<char32_t, 20> kUnicodePunct = {
    0x00A1, 0x00AB, 0x00B7, 0x00BB, 0x00BF, 0x2010, 0x2013,
    0x2014, 0x2018, 0x2019, 0x201A, 0x201C, 0x201D, 0x201E,
    0x2022, 0x2026, 0x2023, 0x25AA, 0x25CF, 0x25E6};

// Decodes one UTF-8 sequence starting at s[i]. Returns its length, or 1
// for invalid bytes (which are then treated as ordinary letters).
std::size_t decode_utf8(std::string_view s, std::size_t i, char32_t* cp) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) {
    return i + k < s.size() &&
           (static_cast<unsigned char>(s[i + k]) & 0xC0) == 0x80;
  };
  if (b0 < 0x80) {
    *cp = b0;
    return 1;
  }
  if ((b0 & 0xE0) == 0xC0 && cont(1)) {
    *cp = (char32_t(b0 & 0x1F) << 6) | (s[i + 1] & 0x3F);
    return 2;
  }
  if ((b0 & 0xF0) == 0xE0 && cont(1) && cont(2)) {
    *cp = (char32_t(b0 & 0x0F) << 12) | (char32_t(s[i + 1] & 0x3F) << 6) |
          (s[i + 2] & 0x3F);
    return 3;
  }
  if ((b0 & 0xF8) == 0xF0 && cont(1) && cont(2) && cont(3)) {
    *cp = (char32_t(b0 & 0x07) << 18) | (char32_t(s[i + 1] & 0x3F) << 12) |
          (char32_t(s[i + 2] & 0x3F) << 6) | (s[i + 3] & 0x3F);
    return 4;
  }
  *cp = 0xFFFD;
  return 1;
}

bool is_punct_codepoint(char32_t cp) {
  if (cp < 0x80) return is_ascii_punct(static_cast<unsigned char>(cp));
  for (char32_t p : kUnicodePunct) {
    if (p == cp) return true;
  }
  return false;
}

// Length in bytes of the trailing punctuation code point, or 0.
std::size_t trailing_punct_length(std::string_view s) {
  std::size_t start = s.size() - 1;
  while (start > 0 && (static_cast<unsigned char>(s[start]) & 0xC0) == 0x80 &&
         s.size() - start < 4) {
    --start;
  }
  char32_t cp;
  const std::size_t len = decode_utf8(s, start, &cp);
  if (start + len != s.size()) return 0;
  return is_punct_codepoint(cp) ? len : 0;
}

std::string_view strip_punct(std::string_view s) {
  while (!s.empty()) {
    char32_t cp;
    const std::size_t len = decode_utf8(s, 0, &cp);
    if (!is_punct_codepoint(cp)) break;
    s.remove_prefix(len);
  }
  while (!s.empty()) {
    const std::size_t len = trailing_punct_length(s);
    if (len == 0) break;
    s.remove_suffix(len);
  }
  return s;
}

std::string_view strip_possessive(std::string_view s) {
  for (std::string_view suffix : {std::string_view("'s"),
                                  std::string_view("\xE2\x80\x99s"),
                                  std::string_view("'S")}) {
    if (s.size() > suffix.size() && s.ends_with(suffix)) {
      s.remove_suffix(suffix.size());
      return strip_punct(s);
    }
  }
  return s;
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

void emit_piece(std::string_view piece, TokenSequence& out) {
  piece = strip_possessive(strip_punct(piece));
  if (!piece.empty()) out.push_back(fold_case(piece));
}

void emit_fragment(std::string_view fragment, TokenSequence& out) {
  std::size_t pos = 0;
  while (true) {
    const std::size_t comma = fragment.find(',', pos);
    if (comma == std::string_view::npos) {
      emit_piece(fragment.substr(pos), out);
      return;
    }
    emit_piece(fragment.substr(pos, comma - pos), out);
    out.emplace_back(kCommaToken);
    pos = comma + 1;
  }
}

const std::unordered_set<std::string_view>& irregulars() {
  static const std::unordered_set<std::string_view> words = {
      "is",        "this",       "its",       "his",       "has",
      "was",       "does",       "yes",       "us",        "as",
      "always",    "perhaps",    "towards",   "afterwards", "besides",
      "sometimes", "whereas",    "news",      "series",    "species",
      "politics",  "economics",  "mathematics", "physics", "ethics",
      "dynamics",  "logistics",  "analytics", "statistics", "athletics",
      "hers",      "ours",       "yours",     "theirs",    "across",
      "whereabouts", "means",    "lens",      "canvas",    "alias",
      "gas",       "bias",       "atlas",     "chaos",     "kudos",
      "thanks",    "graphics",   "aesthetics", "ergonomics", "linguistics",
      "electronics", "mechanics", "genetics", "robotics", "metrics",
      "earnings",  "savings",    "premises",  "headquarters", "crossroads",
      "sales",     "goods",      "clothes",   "trousers",   "glasses",
      "ones",      "lots",       "whatsoever", "nowadays",  "outdoors",
      "indoors",   "overseas",   "downstairs", "upstairs",  "sideways",
  };
  return words;
}

bool letter_before(std::string_view word, std::size_t suffix_len) {
  if (word.size() <= suffix_len) return false;
  const auto c = static_cast<unsigned char>(word[word.size() - suffix_len - 1]);
  return is_ascii_alpha(c) || c >= 0x80;
}

}  // namespace

bool is_reserved_token(std::string_view token) {
  return token == kMaskToken || token == kBeginTag || token == kEndTag;
}

TokenSequence tokenize(std::string_view text) {
  TokenSequence out;
  std::size_t i = 0;
  std::size_t start = 0;
  bool in_fragment = false;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t space_len = 0;
    if (is_ascii_space(c)) {
      space_len = 1;
    } else if (c == 0xC2 && i + 1 < text.size() &&
               static_cast<unsigned char>(text[i + 1]) == 0xA0) {
      space_len = 2;  // no-break space
    }
    if (space_len > 0) {
      if (in_fragment) emit_fragment(text.substr(start, i - start), out);
      in_fragment = false;
      i += space_len;
      continue;
    }
    if (!in_fragment) {
      start = i;
      in_fragment = true;
    }
    ++i;
  }
  if (in_fragment) emit_fragment(text.substr(start), out);
  return out;
}

std::string lemmatize(std::string_view token) {
  std::string word(token);
  if (word.size() <= 3 || word.back() != 's') return word;
  if (irregulars().contains(word)) return word;
  if (word.ends_with("ss") || word.ends_with("us") || word.ends_with("is")) {
    return word;
  }
  if (word.size() > 4 && word.ends_with("ies") && letter_before(word, 3)) {
    word.resize(word.size() - 3);
    word += 'y';
    return word;
  }
  for (std::string_view suffix : {"sses", "zzes", "xes", "ches", "shes"}) {
    if (word.ends_with(suffix) && letter_before(word, suffix.size())) {
      word.resize(word.size() - 2);
      return word;
    }
  }
  if (letter_before(word, 1)) word.pop_back();
  return word;
}

TokenSequence normalize(std::string_view text) {
  TokenSequence tokens = tokenize(text);
  for (std::string& t : tokens) t = lemmatize(t);
  return tokens;
}

std::string join_tokens(const TokenSequence& tokens, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += sep;
    out += tokens[i];
  }
  return out;
}

}  // namespace softskill
