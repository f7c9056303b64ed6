#include "rankforge/corpus.hpp"

#include <cctype>
#include <fstream>

#include "rankforge/error.hpp"
#include "rankforge/util.hpp"

namespace rankforge {

namespace {

bool id_column_is_range(const std::string& id) {
  return id.find('-') != std::string::npos;
}

bool id_column_is_empty_node(const std::string& id) {
  return id.find('.') != std::string::npos;
}

}  // namespace

TokenizedCorpus parse_conllu(std::istream& in, const std::string& language_code,
                             const std::string& provenance) {
  TokenizedCorpus corpus;
  corpus.language_code = language_code;
  corpus.provenance = provenance;

  std::vector<std::string> current;
  std::string line;
  std::size_t line_no = 0;
  auto flush_sentence = [&]() {
    if (!current.empty()) {
      corpus.sentences.push_back(std::move(current));
      current.clear();
    }
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush_sentence();
      continue;
    }
    if (line.front() == '#') continue;

    std::size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(provenance + ":" + std::to_string(line_no) +
                       ": malformed token line (fewer than 2 tab-separated "
                       "columns)");
    }
    std::string id = line.substr(0, tab);
    std::size_t form_end = line.find('\t', tab + 1);
    std::string form = form_end == std::string::npos
                           ? line.substr(tab + 1)
                           : line.substr(tab + 1, form_end - tab - 1);
    if (id_column_is_range(id) || id_column_is_empty_node(id)) continue;
    if (form.empty()) {
      throw ParseError(provenance + ":" + std::to_string(line_no) +
                       ": empty FORM column");
    }
    current.push_back(std::move(form));
  }
  flush_sentence();

  if (corpus.sentences.empty()) {
    throw ParseError(provenance.empty() ? std::string("no sentences")
                                        : provenance + ": no sentences");
  }
  return corpus;
}

TokenizedCorpus parse_conllu_file(const std::filesystem::path& path,
                                  const std::string& language_code) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open corpus file: " + path.string());
  return parse_conllu(in, language_code, path.string());
}

TokenizedCorpus cap_corpus(const TokenizedCorpus& corpus,
                           std::size_t max_sentences) {
  if (max_sentences == 0) {
    throw ValidationError("cap_corpus: max_sentences must be >= 1");
  }
  if (corpus.sentences.size() <= max_sentences) return corpus;
  TokenizedCorpus capped;
  capped.language_code = corpus.language_code;
  capped.provenance = corpus.provenance;
  capped.sentences.assign(corpus.sentences.begin(),
                          corpus.sentences.begin() +
                              static_cast<std::ptrdiff_t>(max_sentences));
  return capped;
}

std::string fold_token_case(std::string token) {
  for (char& c : token) {
    unsigned char u = static_cast<unsigned char>(c);
    if (u < 0x80) c = static_cast<char>(std::tolower(u));
  }
  return token;
}

std::unordered_set<std::string> vocabulary(const TokenizedCorpus& corpus,
                                           bool fold_case) {
  std::unordered_set<std::string> types;
  for (const auto& sentence : corpus.sentences) {
    for (const auto& token : sentence) {
      types.insert(fold_case ? fold_token_case(token) : token);
    }
  }
  return types;
}

std::size_t token_count(const TokenizedCorpus& corpus) {
  std::size_t count = 0;
  for (const auto& sentence : corpus.sentences) count += sentence.size();
  return count;
}

}  // namespace rankforge
