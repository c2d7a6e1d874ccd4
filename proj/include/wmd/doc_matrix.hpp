#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace wmd {

/// One raw (document, word, count) observation.
struct DocEntry {
    std::size_t doc;
    std::size_t word;
    double count;
};

/// Document-major compressed storage of the corpus histogram matrix.
///
/// Column j of the vocabulary-by-document matrix is stored contiguously as
/// entries [doc_ptr[j], doc_ptr[j+1]). Word indices are strictly increasing
/// inside a document and every document's weights sum to one, so a worker that
/// owns a range of documents owns the matching output columns outright.
class DocMatrix {
public:
    /// Tolerance on |sum(weights) - 1| for each document.
    static constexpr double kNormTolerance = 1e-12;

    DocMatrix() = default;

    /// Adopts already-normalized CSR arrays; throws if any invariant fails.
    DocMatrix(std::size_t vocab_size, std::vector<std::size_t> doc_ptr,
              std::vector<std::size_t> word_idx, std::vector<double> weight);

    std::size_t vocab_size() const noexcept { return vocab_size_; }
    std::size_t num_docs() const noexcept { return doc_ptr_.empty() ? 0 : doc_ptr_.size() - 1; }
    std::size_t nnz() const noexcept { return word_idx_.size(); }

    std::span<const std::size_t> doc_ptr() const noexcept { return doc_ptr_; }
    std::span<const std::size_t> word_idx() const noexcept { return word_idx_; }
    std::span<const double> weight() const noexcept { return weight_; }

    std::size_t doc_nnz(std::size_t doc) const noexcept { return doc_ptr_[doc + 1] - doc_ptr_[doc]; }
    std::size_t max_doc_nnz() const noexcept;

    std::span<const std::size_t> words(std::size_t doc) const noexcept {
        return word_idx().subspan(doc_ptr_[doc], doc_nnz(doc));
    }
    std::span<const double> weights(std::size_t doc) const noexcept {
        return weight().subspan(doc_ptr_[doc], doc_nnz(doc));
    }

private:
    std::size_t vocab_size_ = 0;
    std::vector<std::size_t> doc_ptr_{0};
    std::vector<std::size_t> word_idx_;
    std::vector<double> weight_;
};

/// Builds a normalized DocMatrix from raw counts. Duplicate (doc, word) pairs
/// are summed. Throws EmptyDocument for a document without entries and
/// IndexOutOfRange for indices outside the declared shape.
DocMatrix doc_matrix_from_entries(std::size_t vocab_size, std::size_t num_docs,
                                  std::span<const DocEntry> entries);

} // namespace wmd
