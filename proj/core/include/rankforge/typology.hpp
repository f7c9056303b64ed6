#ifndef RANKFORGE_TYPOLOGY_HPP
#define RANKFORGE_TYPOLOGY_HPP

#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rankforge {

// Missing cells are NaN; defined cells are reals in [0,1] (binary unless the
// source was pre-imputed with fractional values).
inline bool is_missing_cell(double value) { return std::isnan(value); }
double missing_cell();

struct TypologyMatrix {
  std::vector<std::string> feature_ids;
  std::vector<std::string> language_codes;
  // cells[language][feature]
  std::vector<std::vector<double>> cells;

  std::size_t language_count() const { return language_codes.size(); }
  std::size_t feature_count() const { return feature_ids.size(); }
  std::optional<std::size_t> find_language(const std::string& code) const;
  // Fraction of missing cells over the whole matrix.
  double missing_fraction() const;
};

struct TypologyVector {
  std::string language_code;
  std::vector<double> values;
};

// Glottolog-style descent path, root family first.
struct Lineage {
  std::string language_code;
  std::vector<std::string> path;
};

struct GeoPoint {
  std::string language_code;
  double latitude;
  double longitude;
};

// Header row: label column then feature ids; data rows: language code then
// cells "0" / "1" / fractional in [0,1]; "?" or empty = missing. Delimiter
// is autodetected (tab wins over comma when both appear in the header).
TypologyMatrix load_typology_matrix(std::istream& in);
void write_typology_matrix(std::ostream& out, const TypologyMatrix& matrix,
                           char delim = ',');

struct CropResult {
  TypologyMatrix matrix;
  std::vector<std::string> dropped_features;
  std::vector<std::string> dropped_languages;
  double residual_missing_fraction;
};

// Drops features missing in strictly more than feature_threshold of the
// input languages, then languages missing strictly more than
// language_threshold of the retained features.
CropResult crop_matrix(const TypologyMatrix& matrix,
                       double feature_threshold = 0.25,
                       double language_threshold = 0.25);

// Full row for one language; requires the row to be fully defined.
TypologyVector matrix_row_vector(const TypologyMatrix& matrix,
                                 const std::string& language_code);

// 1 - cos(a,b), clamped to [0,1]. Zero vectors are an error.
double cosine_distance(const TypologyVector& a, const TypologyVector& b);

// Component-wise logical AND; requires binary values.
TypologyVector and_vector(const TypologyVector& a, const TypologyVector& b);

// 1 - |longest common path prefix| / max(|a|, |b|).
double genetic_distance(const Lineage& a, const Lineage& b);

// Great-circle central angle divided by pi (orthodromic / antipodal).
double geographic_distance(const GeoPoint& a, const GeoPoint& b);

// CSV "language_code,path" with '>'-separated node names.
std::vector<Lineage> load_lineages(std::istream& in);
// CSV "language_code,lat,lon".
std::vector<GeoPoint> load_geopoints(std::istream& in);

}  // namespace rankforge

#endif  // RANKFORGE_TYPOLOGY_HPP
