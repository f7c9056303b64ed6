#include "rankforge/config.hpp"

#include "rankforge/error.hpp"

namespace rankforge {

std::string to_string(SyntacticSource source) {
  return source == SyntacticSource::kUriel ? "uriel" : "grambank";
}

std::string to_string(Representation representation) {
  return representation == Representation::kDistance ? "distance" : "full";
}

std::string to_string(RelevanceConvention convention) {
  return convention == RelevanceConvention::kBestIsP ? "best_is_p"
                                                     : "best_is_p_minus_1";
}

SyntacticSource syntactic_source_from_string(std::string_view text) {
  if (text == "uriel") return SyntacticSource::kUriel;
  if (text == "grambank") return SyntacticSource::kGrambank;
  throw ValidationError("unknown syntactic source '" + std::string(text) +
                        "' (expected uriel|grambank)");
}

Representation representation_from_string(std::string_view text) {
  if (text == "distance") return Representation::kDistance;
  if (text == "full") return Representation::kFull;
  throw ValidationError("unknown representation '" + std::string(text) +
                        "' (expected distance|full)");
}

RelevanceConvention relevance_convention_from_string(std::string_view text) {
  if (text == "best_is_p") return RelevanceConvention::kBestIsP;
  if (text == "best_is_p_minus_1") return RelevanceConvention::kBestIsPMinus1;
  throw ValidationError("unknown relevance convention '" + std::string(text) +
                        "' (expected best_is_p|best_is_p_minus_1)");
}

}  // namespace rankforge
