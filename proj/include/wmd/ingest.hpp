#pragma once

#include "wmd/dense_matrix.hpp"
#include "wmd/doc_matrix.hpp"
#include "wmd/query.hpp"

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace wmd {

/// Word vectors, one row per vocabulary entry, plus the token lookup.
class EmbeddingMatrix {
public:
    EmbeddingMatrix() = default;

    /// tokens[i] names row i of vectors. Throws DuplicateToken on repeats.
    EmbeddingMatrix(std::vector<std::string> tokens, DenseMatrix vectors);

    std::size_t vocab_size() const noexcept { return vectors_.rows(); }
    std::size_t dim() const noexcept { return vectors_.cols(); }

    const DenseMatrix& vectors() const noexcept { return vectors_; }
    std::span<const double> row(std::size_t i) const noexcept { return vectors_.row(i); }
    const std::string& token(std::size_t i) const noexcept { return tokens_[i]; }

    std::optional<std::size_t> find(std::string_view token) const;

private:
    std::vector<std::string> tokens_;
    DenseMatrix vectors_;
    std::unordered_map<std::string, std::size_t> token_to_row_;
};

using TokenSet = std::unordered_set<std::string>;
using TokenList = std::vector<std::string>;

/// Token accounting for corpus/query construction.
struct IngestStats {
    std::size_t in_vocab_tokens = 0;
    std::size_t oov_tokens = 0;
};

/// Parses fastText text format: "<count> <dim>" then one "<token> <f1> .. <f_dim>"
/// line per word. Accepts LF or CRLF line endings.
EmbeddingMatrix load_embeddings(std::istream& in);
EmbeddingMatrix load_embeddings_file(const std::filesystem::path& path);

/// Lowercases ASCII letters and splits on every ASCII character that is not
/// a letter or digit. Bytes >= 0x80 are kept so UTF-8 words stay whole.
TokenList tokenize(std::string_view text, const TokenSet& stopwords);

/// One stopword per line; entries are trimmed and lowercased.
TokenSet load_stopwords(std::istream& in);

/// Tokenizes one corpus line after dropping leading `__label__*` tokens.
TokenList tokenize_document(std::string_view line, const TokenSet& stopwords);

/// Reads the one-document-per-line corpus format.
std::vector<TokenList> read_documents(std::istream& in, const TokenSet& stopwords);

/// Drops out-of-vocabulary tokens and builds normalized document histograms.
/// A document left with no tokens raises EmptyDocument(doc index).
DocMatrix build_corpus(std::span<const TokenList> docs, const EmbeddingMatrix& emb,
                       IngestStats* stats = nullptr);

/// Single-document variant; raises EmptyDocument(0) when no token survives.
QueryHistogram build_query(std::span<const std::string> doc, const EmbeddingMatrix& emb,
                           IngestStats* stats = nullptr);

} // namespace wmd
