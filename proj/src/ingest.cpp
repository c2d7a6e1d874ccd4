#include "wmd/ingest.hpp"

#include "wmd/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>

namespace wmd {

namespace {

void strip_line_ending(std::string& line) {
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) {
        line.pop_back();
    }
}

std::vector<std::string_view> split_spaces(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        const std::size_t next = line.find(' ', pos);
        const std::size_t end = next == std::string_view::npos ? line.size() : next;
        fields.push_back(line.substr(pos, end - pos));
        if (next == std::string_view::npos) {
            break;
        }
        pos = next + 1;
    }
    return fields;
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
    if (field.empty()) {
        return false;
    }
    const char* first = field.data();
    if constexpr (std::is_floating_point_v<T>) {
        if (*first == '+') {
            ++first;
        }
    }
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

bool is_word_byte(unsigned char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') ||
           ch >= 0x80;
}

// Counts per vocabulary row, ordered by row so the output is sorted.
std::map<std::size_t, double> count_in_vocab(std::span<const std::string> tokens,
                                             const EmbeddingMatrix& emb, IngestStats* stats) {
    std::map<std::size_t, double> counts;
    for (const std::string& tok : tokens) {
        if (const auto row = emb.find(tok)) {
            counts[*row] += 1.0;
            if (stats) {
                ++stats->in_vocab_tokens;
            }
        } else if (stats) {
            ++stats->oov_tokens;
        }
    }
    return counts;
}

} // namespace

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> tokens, DenseMatrix vectors)
    : tokens_(std::move(tokens)), vectors_(std::move(vectors)) {
    if (tokens_.size() != vectors_.rows()) {
        throw DimensionMismatch("EmbeddingMatrix: " + std::to_string(tokens_.size()) +
                                " tokens for " + std::to_string(vectors_.rows()) + " rows");
    }
    token_to_row_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (!token_to_row_.emplace(tokens_[i], i).second) {
            throw DuplicateToken(tokens_[i]);
        }
    }
}

std::optional<std::size_t> EmbeddingMatrix::find(std::string_view token) const {
    const auto it = token_to_row_.find(std::string(token));
    if (it == token_to_row_.end()) {
        return std::nullopt;
    }
    return it->second;
}

EmbeddingMatrix load_embeddings(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw FormatError("missing embedding header", 1);
    }
    strip_line_ending(line);
    const auto header = split_spaces(line);
    std::size_t count = 0;
    std::size_t dim = 0;
    if (header.size() != 2 || !parse_number(header[0], count) || !parse_number(header[1], dim) ||
        dim == 0) {
        throw FormatError("malformed header '" + line + "', expected '<count> <dim>'", 1);
    }

    std::vector<std::string> tokens;
    std::vector<double> data;
    std::unordered_set<std::string> seen;
    tokens.reserve(count);
    data.reserve(count * dim);

    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t line_no = i + 2;
        if (!std::getline(in, line)) {
            throw FormatError("expected " + std::to_string(count) + " vectors, found " +
                                  std::to_string(i),
                              line_no);
        }
        strip_line_ending(line);
        const auto fields = split_spaces(line);
        if (fields.size() != dim + 1 || fields[0].empty()) {
            throw FormatError("expected token and " + std::to_string(dim) + " values, got " +
                                  std::to_string(fields.size()) + " fields",
                              line_no);
        }
        std::string token(fields[0]);
        if (!seen.insert(token).second) {
            throw DuplicateToken(token);
        }
        for (std::size_t k = 1; k <= dim; ++k) {
            double value = 0.0;
            if (!parse_number(fields[k], value) || !std::isfinite(value)) {
                throw FormatError("bad value '" + std::string(fields[k]) + "'", line_no);
            }
            data.push_back(value);
        }
        tokens.push_back(std::move(token));
    }
    std::size_t line_no = count + 1;
    while (std::getline(in, line)) {
        ++line_no;
        strip_line_ending(line);
        if (!line.empty()) {
            throw FormatError("unexpected content after " + std::to_string(count) + " vectors",
                              line_no);
        }
    }
    return EmbeddingMatrix(std::move(tokens), DenseMatrix(count, dim, std::move(data)));
}

EmbeddingMatrix load_embeddings_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::ios_base::failure("cannot open embeddings file " + path.string());
    }
    return load_embeddings(in);
}

TokenList tokenize(std::string_view text, const TokenSet& stopwords) {
    TokenList tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty() && !stopwords.contains(current)) {
            tokens.push_back(current);
        }
        current.clear();
    };
    for (const char c : text) {
        const auto ch = static_cast<unsigned char>(c);
        if (is_word_byte(ch)) {
            current.push_back(ch >= 'A' && ch <= 'Z' ? static_cast<char>(ch - 'A' + 'a') : c);
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

TokenSet load_stopwords(std::istream& in) {
    TokenSet words;
    std::string line;
    while (std::getline(in, line)) {
        for (const std::string& tok : tokenize(line, {})) {
            words.insert(tok);
        }
    }
    return words;
}

TokenList tokenize_document(std::string_view line, const TokenSet& stopwords) {
    constexpr std::string_view kLabel = "__label__";
    std::size_t pos = 0;
    while (true) {
        while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) {
            ++pos;
        }
        if (line.substr(pos, kLabel.size()) != kLabel) {
            break;
        }
        const std::size_t end = line.find_first_of(" \t", pos);
        pos = end == std::string_view::npos ? line.size() : end;
    }
    return tokenize(line.substr(pos), stopwords);
}

std::vector<TokenList> read_documents(std::istream& in, const TokenSet& stopwords) {
    std::vector<TokenList> docs;
    std::string line;
    while (std::getline(in, line)) {
        docs.push_back(tokenize_document(line, stopwords));
    }
    return docs;
}

DocMatrix build_corpus(std::span<const TokenList> docs, const EmbeddingMatrix& emb,
                       IngestStats* stats) {
    std::vector<DocEntry> entries;
    for (std::size_t j = 0; j < docs.size(); ++j) {
        const auto counts = count_in_vocab(docs[j], emb, stats);
        if (counts.empty()) {
            throw EmptyDocument(j);
        }
        for (const auto& [row, count] : counts) {
            entries.push_back({j, row, count});
        }
    }
    return doc_matrix_from_entries(emb.vocab_size(), docs.size(), entries);
}

QueryHistogram build_query(std::span<const std::string> doc, const EmbeddingMatrix& emb,
                           IngestStats* stats) {
    const auto counts = count_in_vocab(doc, emb, stats);
    if (counts.empty()) {
        throw EmptyDocument(0);
    }
    double total = 0.0;
    for (const auto& entry : counts) {
        total += entry.second;
    }
    std::vector<std::size_t> idx;
    std::vector<double> val;
    for (const auto& [row, count] : counts) {
        idx.push_back(row);
        val.push_back(count / total);
    }
    return QueryHistogram(emb.vocab_size(), std::move(idx), std::move(val));
}

} // namespace wmd
