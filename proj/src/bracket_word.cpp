#include "fuller/bracket_word.hpp"

#include <algorithm>

namespace fuller {

char letter_char(Letter l) {
  switch (l) {
    case Letter::zero:
      return '0';
    case Letter::one:
      return '1';
    case Letter::plus:
      return '+';
    case Letter::minus:
      return '-';
  }
  return '?';
}

BracketWord::BracketWord(std::string_view text) {
  static constexpr std::string_view kUnicodeMinus = "\xE2\x88\x92";
  for (std::size_t i = 0; i < text.size();) {
    if (text.substr(i, kUnicodeMinus.size()) == kUnicodeMinus) {
      letters_.push_back(Letter::minus);
      i += kUnicodeMinus.size();
      continue;
    }
    switch (text[i]) {
      case '0':
        letters_.push_back(Letter::zero);
        break;
      case '1':
        letters_.push_back(Letter::one);
        break;
      case '+':
        letters_.push_back(Letter::plus);
        break;
      case '-':
        letters_.push_back(Letter::minus);
        break;
      default:
        throw domain_error("invalid letter in bracket word \"" + std::string(text) + "\"");
    }
    ++i;
  }
  if (letters_.empty()) throw domain_error("bracket word must be nonempty");
}

BracketWord::BracketWord(std::vector<Letter> letters) : letters_(std::move(letters)) {
  if (letters_.empty()) throw domain_error("bracket word must be nonempty");
}

std::string BracketWord::str() const {
  std::string s;
  for (Letter l : letters_) s.push_back(letter_char(l));
  return s;
}

BracketWord BracketWord::prepend(Letter l) const {
  std::vector<Letter> out;
  out.reserve(letters_.size() + 1);
  out.push_back(l);
  out.insert(out.end(), letters_.begin(), letters_.end());
  return BracketWord(std::move(out));
}

BracketWord BracketWord::concat(const BracketWord& other) const {
  std::vector<Letter> out = letters_;
  out.insert(out.end(), other.letters_.begin(), other.letters_.end());
  return BracketWord(std::move(out));
}

BracketWord BracketWord::tail() const {
  if (letters_.size() < 2) throw domain_error("tail of a single-letter word");
  return BracketWord(std::vector<Letter>(letters_.begin() + 1, letters_.end()));
}

bool BracketWord::ends_with_01() const {
  const auto n = letters_.size();
  return n >= 2 && letters_[n - 2] == Letter::zero && letters_[n - 1] == Letter::one;
}

bool BracketWord::is_binary() const {
  return std::all_of(letters_.begin(), letters_.end(),
                     [](Letter l) { return l == Letter::zero || l == Letter::one; });
}

std::size_t BracketWord::count(Letter l) const {
  return static_cast<std::size_t>(std::count(letters_.begin(), letters_.end(), l));
}

std::strong_ordering BracketWord::operator<=>(const BracketWord& other) const {
  return std::lexicographical_compare_three_way(letters_.begin(), letters_.end(), other.letters_.begin(),
                                                other.letters_.end());
}

PolyVectorField letter_field(Letter l, const PolyVectorField& f0, const PolyVectorField& f1) {
  switch (l) {
    case Letter::zero:
      return f0;
    case Letter::one:
      return f1;
    case Letter::plus:
      return f0 + f1;
    case Letter::minus:
      return f0 - f1;
  }
  throw domain_error("invalid letter");
}

PolyVectorField eval_word_field(const BracketWord& word, const PolyVectorField& f0, const PolyVectorField& f1) {
  if (f0.dim() != f1.dim()) throw domain_error("eval_word_field: dimension mismatch");
  const auto& ls = word.letters();
  PolyVectorField out = letter_field(ls.back(), f0, f1);
  for (std::size_t k = ls.size() - 1; k-- > 0;) out = lie_bracket(letter_field(ls[k], f0, f1), out);
  return out;
}

std::vector<SignedWord> expand_word(const BracketWord& word) {
  std::vector<SignedWord> out;
  std::vector<std::pair<std::vector<Letter>, int>> partial{{{}, 1}};
  for (Letter l : word.letters()) {
    std::vector<std::pair<std::vector<Letter>, int>> next;
    for (auto& [prefix, sign] : partial) {
      if (l == Letter::zero || l == Letter::one) {
        auto p = prefix;
        p.push_back(l);
        next.emplace_back(std::move(p), sign);
      } else {
        auto p0 = prefix;
        p0.push_back(Letter::zero);
        next.emplace_back(std::move(p0), sign);
        auto p1 = prefix;
        p1.push_back(Letter::one);
        next.emplace_back(std::move(p1), l == Letter::plus ? sign : -sign);
      }
    }
    partial = std::move(next);
  }
  for (auto& [letters, sign] : partial) out.push_back({BracketWord(std::move(letters)), sign});
  return out;
}

WordDecomposition decompose_word(const BracketWord& word) {
  if (!word.ends_with_01()) throw domain_error("decompose_word: word \"" + word.str() + "\" does not end in 01");
  WordDecomposition d;
  d.terms = expand_word(word);
  std::size_t best0 = 0, best1 = 0, ties0 = 0, ties1 = 0;
  for (std::size_t i = 0; i < d.terms.size(); ++i) {
    std::size_t c0 = d.terms[i].word.count(Letter::zero), c1 = d.terms[i].word.count(Letter::one);
    if (i == 0 || c0 > best0) {
      best0 = c0;
      d.j1 = i;
      ties0 = 1;
    } else if (c0 == best0) {
      ++ties0;
    }
    if (i == 0 || c1 > best1) {
      best1 = c1;
      d.j2 = i;
      ties1 = 1;
    } else if (c1 == best1) {
      ++ties1;
    }
  }
  if (ties0 != 1 || ties1 != 1) throw domain_error("decompose_word: extremal words are not unique");
  return d;
}

}  // namespace fuller
