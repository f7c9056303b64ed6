#ifndef RANKFORGE_CONFIG_HPP
#define RANKFORGE_CONFIG_HPP

#include <string>
#include <string_view>

namespace rankforge {

enum class SyntacticSource { kUriel, kGrambank };
enum class Representation { kDistance, kFull };

// Genetic and geographic features are always included; only the typology
// representation, the syntactic block source, and the dataset block toggle.
struct FeatureConfig {
  SyntacticSource syntactic_source = SyntacticSource::kUriel;
  Representation representation = Representation::kDistance;
  bool include_dataset = true;
};

// kBestIsP: gold rank r gets relevance p - r + 1 (best = p).
// kBestIsPMinus1: gold rank r gets p - r (best = p - 1).
enum class RelevanceConvention { kBestIsP, kBestIsPMinus1 };

struct EvalConfig {
  int p = 5;
  RelevanceConvention convention = RelevanceConvention::kBestIsP;
};

std::string to_string(SyntacticSource source);
std::string to_string(Representation representation);
std::string to_string(RelevanceConvention convention);
SyntacticSource syntactic_source_from_string(std::string_view text);
Representation representation_from_string(std::string_view text);
RelevanceConvention relevance_convention_from_string(std::string_view text);

}  // namespace rankforge

#endif  // RANKFORGE_CONFIG_HPP
