#ifndef RANKFORGE_VERSION_HPP
#define RANKFORGE_VERSION_HPP

#include <string_view>

namespace rankforge {

inline constexpr std::string_view kToolName = "rankforge";
inline constexpr std::string_view kToolVersion = "1.0.0";

}  // namespace rankforge

#endif  // RANKFORGE_VERSION_HPP
