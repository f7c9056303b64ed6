#include "rankforge/typology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_set>

#include "rankforge/error.hpp"
#include "rankforge/util.hpp"

namespace rankforge {

double missing_cell() { return std::numeric_limits<double>::quiet_NaN(); }

std::optional<std::size_t> TypologyMatrix::find_language(
    const std::string& code) const {
  for (std::size_t i = 0; i < language_codes.size(); ++i) {
    if (language_codes[i] == code) return i;
  }
  return std::nullopt;
}

double TypologyMatrix::missing_fraction() const {
  std::size_t total = language_count() * feature_count();
  if (total == 0) return 0.0;
  std::size_t missing = 0;
  for (const auto& row : cells) {
    for (double v : row) {
      if (is_missing_cell(v)) ++missing;
    }
  }
  return static_cast<double>(missing) / static_cast<double>(total);
}

namespace {

char detect_delimiter(const std::string& header) {
  if (header.find('\t') != std::string::npos) return '\t';
  return ',';
}

double parse_cell(std::string_view field, const std::string& language,
                  const std::string& feature) {
  field = trim(field);
  if (field.empty() || field == "?") return missing_cell();
  double value =
      parse_double(field, "cell (" + language + ", " + feature + ")");
  if (value < 0.0 || value > 1.0) {
    throw ParseError("non-binary cell (" + language + ", " + feature +
                     "): '" + std::string(field) + "' outside [0,1]");
  }
  return value;
}

std::vector<std::string> read_csv_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    lines.push_back(line);
  }
  return lines;
}

}  // namespace

TypologyMatrix load_typology_matrix(std::istream& in) {
  auto lines = read_csv_lines(in);
  if (lines.empty()) throw ParseError("typology matrix: empty input");

  char delim = detect_delimiter(lines[0]);
  auto header = split(lines[0], delim);
  if (header.size() < 2) {
    throw ParseError("typology matrix: header needs a label column and at "
                     "least one feature id");
  }

  TypologyMatrix matrix;
  matrix.feature_ids.assign(header.begin() + 1, header.end());
  for (auto& id : matrix.feature_ids) id = std::string(trim(id));
  {
    std::unordered_set<std::string> seen;
    for (const auto& id : matrix.feature_ids) {
      if (!seen.insert(id).second) {
        throw ParseError("typology matrix: duplicate feature id '" + id + "'");
      }
    }
  }

  std::unordered_set<std::string> seen_languages;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    auto fields = split(lines[i], delim);
    if (fields.size() != header.size()) {
      throw ParseError("typology matrix: ragged row " + std::to_string(i + 1) +
                       " (" + std::to_string(fields.size()) + " fields, "
                       "expected " + std::to_string(header.size()) + ")");
    }
    std::string code = std::string(trim(fields[0]));
    if (code.empty()) {
      throw ParseError("typology matrix: empty language code in row " +
                       std::to_string(i + 1));
    }
    if (!seen_languages.insert(code).second) {
      throw ParseError("typology matrix: duplicate language code '" + code +
                       "'");
    }
    std::vector<double> row;
    row.reserve(matrix.feature_ids.size());
    for (std::size_t f = 0; f < matrix.feature_ids.size(); ++f) {
      row.push_back(parse_cell(fields[f + 1], code, matrix.feature_ids[f]));
    }
    matrix.language_codes.push_back(std::move(code));
    matrix.cells.push_back(std::move(row));
  }
  return matrix;
}

void write_typology_matrix(std::ostream& out, const TypologyMatrix& matrix,
                           char delim) {
  out << "language_code";
  for (const auto& id : matrix.feature_ids) out << delim << id;
  out << "\n";
  for (std::size_t i = 0; i < matrix.language_count(); ++i) {
    out << matrix.language_codes[i];
    for (double v : matrix.cells[i]) {
      out << delim;
      if (is_missing_cell(v)) {
        out << "?";
      } else {
        out << format_double(v);
      }
    }
    out << "\n";
  }
}

CropResult crop_matrix(const TypologyMatrix& matrix, double feature_threshold,
                       double language_threshold) {
  if (matrix.language_count() == 0 || matrix.feature_count() == 0) {
    throw ValidationError("crop_matrix: matrix must have at least one "
                          "language and one feature");
  }

  const std::size_t n_langs = matrix.language_count();
  const std::size_t n_feats = matrix.feature_count();

  // pass 1: features, measured over all input languages
  std::vector<std::size_t> kept_features;
  CropResult result;
  for (std::size_t f = 0; f < n_feats; ++f) {
    std::size_t missing = 0;
    for (std::size_t l = 0; l < n_langs; ++l) {
      if (is_missing_cell(matrix.cells[l][f])) ++missing;
    }
    double fraction =
        static_cast<double>(missing) / static_cast<double>(n_langs);
    if (fraction > feature_threshold) {
      result.dropped_features.push_back(matrix.feature_ids[f]);
    } else {
      kept_features.push_back(f);
    }
  }
  if (kept_features.empty()) {
    throw ValidationError("crop_matrix: all features dropped at threshold " +
                          format_double(feature_threshold));
  }

  // pass 2: languages, measured over the retained features
  std::vector<std::size_t> kept_languages;
  for (std::size_t l = 0; l < n_langs; ++l) {
    std::size_t missing = 0;
    for (std::size_t f : kept_features) {
      if (is_missing_cell(matrix.cells[l][f])) ++missing;
    }
    double fraction = static_cast<double>(missing) /
                      static_cast<double>(kept_features.size());
    if (fraction > language_threshold) {
      result.dropped_languages.push_back(matrix.language_codes[l]);
    } else {
      kept_languages.push_back(l);
    }
  }
  if (kept_languages.empty()) {
    throw ValidationError("crop_matrix: all languages dropped at threshold " +
                          format_double(language_threshold));
  }

  TypologyMatrix cropped;
  for (std::size_t f : kept_features) {
    cropped.feature_ids.push_back(matrix.feature_ids[f]);
  }
  for (std::size_t l : kept_languages) {
    cropped.language_codes.push_back(matrix.language_codes[l]);
    std::vector<double> row;
    row.reserve(kept_features.size());
    for (std::size_t f : kept_features) row.push_back(matrix.cells[l][f]);
    cropped.cells.push_back(std::move(row));
  }
  result.residual_missing_fraction = cropped.missing_fraction();
  result.matrix = std::move(cropped);
  return result;
}

TypologyVector matrix_row_vector(const TypologyMatrix& matrix,
                                 const std::string& language_code) {
  auto index = matrix.find_language(language_code);
  if (!index) {
    throw ValidationError("typology matrix: language '" + language_code +
                          "' not present");
  }
  const auto& row = matrix.cells[*index];
  for (std::size_t f = 0; f < row.size(); ++f) {
    if (is_missing_cell(row[f])) {
      throw ValidationError("typology matrix: language '" + language_code +
                            "' has a missing cell for feature '" +
                            matrix.feature_ids[f] + "'; impute first");
    }
  }
  return TypologyVector{language_code, row};
}

double cosine_distance(const TypologyVector& a, const TypologyVector& b) {
  if (a.values.size() != b.values.size()) {
    throw ValidationError("cosine_distance: length mismatch (" +
                          std::to_string(a.values.size()) + " vs " +
                          std::to_string(b.values.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    dot += a.values[i] * b.values[i];
    na += a.values[i] * a.values[i];
    nb += b.values[i] * b.values[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw ValidationError("cosine_distance: undefined cosine for zero vector "
                          "(" + (na == 0.0 ? a : b).language_code + ")");
  }
  double d = 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
  return std::clamp(d, 0.0, 1.0);
}

TypologyVector and_vector(const TypologyVector& a, const TypologyVector& b) {
  if (a.values.size() != b.values.size()) {
    throw ValidationError("and_vector: length mismatch (" +
                          std::to_string(a.values.size()) + " vs " +
                          std::to_string(b.values.size()) + ")");
  }
  TypologyVector v;
  v.language_code = a.language_code + "&" + b.language_code;
  v.values.reserve(a.values.size());
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    double x = a.values[i];
    double y = b.values[i];
    if ((x != 0.0 && x != 1.0) || (y != 0.0 && y != 1.0)) {
      throw ValidationError("and_vector: non-binary value at component " +
                            std::to_string(i));
    }
    v.values.push_back(x == 1.0 && y == 1.0 ? 1.0 : 0.0);
  }
  return v;
}

double genetic_distance(const Lineage& a, const Lineage& b) {
  if (a.path.empty() || b.path.empty()) {
    throw ValidationError("genetic_distance: empty lineage for '" +
                          (a.path.empty() ? a : b).language_code + "'");
  }
  std::size_t shared = 0;
  std::size_t limit = std::min(a.path.size(), b.path.size());
  while (shared < limit && a.path[shared] == b.path[shared]) ++shared;
  std::size_t longest = std::max(a.path.size(), b.path.size());
  return 1.0 - static_cast<double>(shared) / static_cast<double>(longest);
}

double geographic_distance(const GeoPoint& a, const GeoPoint& b) {
  constexpr double kDegToRad = std::numbers::pi / 180.0;
  double phi1 = a.latitude * kDegToRad;
  double phi2 = b.latitude * kDegToRad;
  double dphi = (b.latitude - a.latitude) * kDegToRad;
  double dlambda = (b.longitude - a.longitude) * kDegToRad;
  double s1 = std::sin(dphi / 2.0);
  double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  double central_angle = 2.0 * std::asin(std::min(1.0, std::sqrt(h)));
  return central_angle / std::numbers::pi;
}

namespace {

void check_coordinates(const GeoPoint& point) {
  if (point.latitude < -90.0 || point.latitude > 90.0 ||
      point.longitude <= -180.0 || point.longitude > 180.0) {
    throw ParseError("geography: coordinates out of range for '" +
                     point.language_code + "' (" +
                     format_double(point.latitude) + ", " +
                     format_double(point.longitude) + ")");
  }
}

bool is_numeric_field(std::string_view field) {
  field = trim(field);
  if (field.empty()) return false;
  double value = 0;
  auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  return res.ec == std::errc() && res.ptr == field.data() + field.size();
}

bool looks_like_header(const std::vector<std::string>& fields,
                       std::size_t numeric_field) {
  if (fields.size() <= numeric_field) return false;
  return !is_numeric_field(fields[numeric_field]);
}

}  // namespace

std::vector<Lineage> load_lineages(std::istream& in) {
  auto lines = read_csv_lines(in);
  std::vector<Lineage> result;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto fields = split(lines[i], ',');
    if (fields.size() != 2) {
      throw ParseError("lineages: row " + std::to_string(i + 1) +
                       " needs exactly 2 comma-separated fields");
    }
    std::string code = std::string(trim(fields[0]));
    if (i == 0 && (code == "language_code" || code == "language")) continue;
    if (!seen.insert(code).second) {
      throw ParseError("lineages: duplicate language code '" + code + "'");
    }
    Lineage lineage;
    lineage.language_code = code;
    for (const auto& node : split(fields[1], '>')) {
      std::string name = std::string(trim(node));
      if (!name.empty()) lineage.path.push_back(std::move(name));
    }
    if (lineage.path.empty()) {
      throw ParseError("lineages: empty descent path for '" + code + "'");
    }
    result.push_back(std::move(lineage));
  }
  return result;
}

std::vector<GeoPoint> load_geopoints(std::istream& in) {
  auto lines = read_csv_lines(in);
  std::vector<GeoPoint> result;
  std::unordered_set<std::string> seen;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    auto fields = split(lines[i], ',');
    if (fields.size() != 3) {
      throw ParseError("geography: row " + std::to_string(i + 1) +
                       " needs exactly 3 comma-separated fields");
    }
    if (i == 0 && looks_like_header(fields, 1)) continue;
    GeoPoint point;
    point.language_code = std::string(trim(fields[0]));
    point.latitude = parse_double(fields[1], "latitude of '" +
                                  point.language_code + "'");
    point.longitude = parse_double(fields[2], "longitude of '" +
                                   point.language_code + "'");
    check_coordinates(point);
    if (!seen.insert(point.language_code).second) {
      throw ParseError("geography: duplicate language code '" +
                       point.language_code + "'");
    }
    result.push_back(std::move(point));
  }
  return result;
}

}  // namespace rankforge
