#include "fuller/bracket_cache.hpp"

namespace fuller {

BracketCache::BracketCache(PolyVectorField f0, PolyVectorField f1) : f0_(std::move(f0)), f1_(std::move(f1)) {
  if (f0_.dim() != f1_.dim()) throw domain_error("BracketCache: f0 and f1 dimensions differ");
}

const PolyVectorField& BracketCache::field(const BracketWord& word) {
  const std::string key = word.str();
  if (auto it = fields_.find(key); it != fields_.end()) return it->second;
  PolyVectorField value = word.size() == 1 ? letter_field(word[0], f0_, f1_)
                                           : lie_bracket(letter_field(word[0], f0_, f1_), field(word.tail()));
  return fields_.emplace(key, std::move(value)).first->second;
}

const NumericField<real>& BracketCache::numeric(const BracketWord& word) {
  const std::string key = word.str();
  if (auto it = numeric_.find(key); it != numeric_.end()) return it->second;
  return numeric_.emplace(key, NumericField<real>(field(word))).first->second;
}

}  // namespace fuller
