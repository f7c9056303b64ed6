#ifndef RANKFORGE_UTIL_HPP
#define RANKFORGE_UTIL_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace rankforge {

// Shortest round-trip decimal form (std::to_chars). Deterministic, so
// identical values always serialize to identical bytes.
std::string format_double(double value);

// Strict double parse of a whole field; throws ParseError otherwise.
double parse_double(std::string_view text, std::string_view context);
long parse_long(std::string_view text, std::string_view context);

// FNV-1a 64-bit, used for input digests in manifests.
std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);

// Write via temp file in the same directory + rename.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);

// Splits on a single delimiter, keeping empty fields.
std::vector<std::string> split(std::string_view text, char delim);
std::string_view trim(std::string_view text);

// splitmix64: tiny fully-specified generator, identical on every platform.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next();
  // Uniform in [0,1) with 53 random bits.
  double next_unit();
  std::uint64_t next_below(std::uint64_t n);
};

// Folds several stream identifiers into one derived seed.
std::uint64_t mix_seed(std::initializer_list<std::uint64_t> parts);

// Static index partition over [0,n); disjoint writes only, so results are
// identical for every thread count.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace rankforge

#endif  // RANKFORGE_UTIL_HPP
