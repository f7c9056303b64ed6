#ifndef RANKFORGE_CORPUS_HPP
#define RANKFORGE_CORPUS_HPP

#include <cstddef>
#include <filesystem>
#include <istream>
#include <string>
#include <unordered_set>
#include <vector>

namespace rankforge {

// Sentences of surface tokens from one treebank split. Immutable after
// construction; sentence order follows file order.
struct TokenizedCorpus {
  std::string language_code;
  std::vector<std::vector<std::string>> sentences;
  std::string provenance;
};

// CoNLL-U: tab-separated token lines (ID, FORM, ...), '#' comments, blank
// lines between sentences. Multiword ranges (ID with '-') and empty nodes
// (ID with '.') are skipped; FORM becomes the token.
TokenizedCorpus parse_conllu(std::istream& in, const std::string& language_code,
                             const std::string& provenance = "");
TokenizedCorpus parse_conllu_file(const std::filesystem::path& path,
                                  const std::string& language_code);

// First min(n, max_sentences) sentences in file order. Idempotent.
TokenizedCorpus cap_corpus(const TokenizedCorpus& corpus,
                           std::size_t max_sentences);

std::unordered_set<std::string> vocabulary(const TokenizedCorpus& corpus,
                                           bool fold_case = false);
std::size_t token_count(const TokenizedCorpus& corpus);

// ASCII-only case folding; non-ASCII bytes pass through unchanged.
std::string fold_token_case(std::string token);

}  // namespace rankforge

#endif  // RANKFORGE_CORPUS_HPP
