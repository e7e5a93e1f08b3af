#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "postedit/error.hpp"
#include "postedit/text.hpp"

namespace postedit {

namespace {

struct Vowel {
  char code;
  const char* independent;
  const char* sign;  // empty for the inherent 'a'
};

// SLP1 reference table.
constexpr std::array<Vowel, 14> kVowels{{
    {'a', "अ", ""},
    {'A', "आ", "ा"},
    {'i', "इ", "ि"},
    {'I', "ई", "ी"},
    {'u', "उ", "ु"},
    {'U', "ऊ", "ू"},
    {'f', "ऋ", "ृ"},
    {'F', "ॠ", "ॄ"},
    {'x', "ऌ", "ॢ"},
    {'X', "ॡ", "ॣ"},
    {'e', "ए", "े"},
    {'E', "ऐ", "ै"},
    {'o', "ओ", "ो"},
    {'O', "औ", "ौ"},
}};

struct Consonant {
  char code;
  const char* letter;
};

constexpr std::array<Consonant, 34> kConsonants{{
    {'k', "क"}, {'K', "ख"}, {'g', "ग"}, {'G', "घ"},
    {'N', "ङ"}, {'c', "च"}, {'C', "छ"}, {'j', "ज"},
    {'J', "झ"}, {'Y', "ञ"}, {'w', "ट"}, {'W', "ठ"},
    {'q', "ड"}, {'Q', "ढ"}, {'R', "ण"}, {'t', "त"},
    {'T', "थ"}, {'d', "द"}, {'D', "ध"}, {'n', "न"},
    {'p', "प"}, {'P', "फ"}, {'b', "ब"}, {'B', "भ"},
    {'m', "म"}, {'y', "य"}, {'r', "र"}, {'l', "ल"},
    {'v', "व"}, {'S', "श"}, {'z', "ष"}, {'s', "स"},
    {'h', "ह"}, {'L', "ळ"},
}};

struct Mark {
  char code;
  const char* glyph;
};

constexpr std::array<Mark, 4> kMarks{{
    {'M', "ं"},  // anusvara
    {'H', "ः"},  // visarga
    {'~', "ँ"},  // candrabindu
    {'\'', "ऽ"}, // avagraha
}};

constexpr const char* kVirama = "्";

const Vowel* find_vowel(char c) {
  for (const auto& v : kVowels)
    if (v.code == c) return &v;
  return nullptr;
}

const Consonant* find_consonant(char c) {
  for (const auto& k : kConsonants)
    if (k.code == c) return &k;
  return nullptr;
}

const Mark* find_mark(char c) {
  for (const auto& m : kMarks)
    if (m.code == c) return &m;
  return nullptr;
}

bool is_passthrough(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
         (c >= '0' && c <= '9');
}

}  // namespace

std::string slp1_to_devanagari(std::string_view input) {
  std::string out;
  out.reserve(input.size() * 3);
  // Set while the previous symbol was a consonant still waiting for its
  // vowel sign or virama.
  bool pending_consonant = false;

  auto close_consonant = [&] {
    if (pending_consonant) out += kVirama;
    pending_consonant = false;
  };

  for (std::size_t i = 0; i < input.size(); ++i) {
    char c = input[i];
    if (const auto* v = find_vowel(c)) {
      if (pending_consonant) {
        out += v->sign;
        pending_consonant = false;
      } else {
        out += v->independent;
      }
    } else if (const auto* k = find_consonant(c)) {
      close_consonant();
      out += k->letter;
      pending_consonant = true;
    } else if (const auto* m = find_mark(c)) {
      close_consonant();
      out += m->glyph;
    } else if (is_passthrough(c)) {
      close_consonant();
      out += c;
    } else {
      throw InvalidSLP1Character(i, c);
    }
  }
  close_consonant();
  return out;
}

}  // namespace postedit
