#pragma once

#include "fuller/vector_field.hpp"

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace fuller {

/// Letters of the bracket alphabet, declared in the canonical leaf order 0 < 1 < + < -.
enum class Letter : std::uint8_t { zero, one, plus, minus };

char letter_char(Letter l);

/// Nonempty word over {+,-,0,1} naming the right-nested bracket f_I.
class BracketWord {
 public:
  /// Parses text such as "+01"; accepts '-' or the Unicode minus sign.
  explicit BracketWord(std::string_view text);
  explicit BracketWord(std::vector<Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  std::string str() const;

  BracketWord prepend(Letter l) const;
  /// Concatenation (IJ).
  BracketWord concat(const BracketWord& other) const;
  /// Word with the first letter removed; requires size() >= 2.
  BracketWord tail() const;

  bool ends_with_01() const;
  bool is_binary() const;
  std::size_t count(Letter l) const;

  bool operator==(const BracketWord&) const = default;
  /// Lexicographic in the leaf order.
  std::strong_ordering operator<=>(const BracketWord& other) const;

 private:
  std::vector<Letter> letters_;
};

/// Field assigned to a single letter: f0, f1, f0+f1 or f0-f1.
PolyVectorField letter_field(Letter l, const PolyVectorField& f0, const PolyVectorField& f1);

/// Right-nested bracket f_I = [f_{i1}, [f_{i2}, ..., f_{id}]...].
PolyVectorField eval_word_field(const BracketWord& word, const PolyVectorField& f0, const PolyVectorField& f1);

struct SignedWord {
  BracketWord word;
  int sign;
};

/// Signed expansion of every +/- letter into 0 and 1, in lexicographic order of choices.
std::vector<SignedWord> expand_word(const BracketWord& word);

struct WordDecomposition {
  std::vector<SignedWord> terms;
  /// Index of the unique term with the most 0 letters.
  std::size_t j1 = 0;
  /// Index of the unique term with the most 1 letters.
  std::size_t j2 = 0;
};

/// Expansion with the distinguished words J1 and J2; the word must end in (01).
WordDecomposition decompose_word(const BracketWord& word);

}  // namespace fuller
