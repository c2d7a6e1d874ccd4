#include "wmd/doc_matrix.hpp"

#include "wmd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wmd {

DocMatrix::DocMatrix(std::size_t vocab_size, std::vector<std::size_t> doc_ptr,
                     std::vector<std::size_t> word_idx, std::vector<double> weight)
    : vocab_size_(vocab_size),
      doc_ptr_(std::move(doc_ptr)),
      word_idx_(std::move(word_idx)),
      weight_(std::move(weight)) {
    if (doc_ptr_.empty() || doc_ptr_.front() != 0) {
        throw std::invalid_argument("DocMatrix: doc_ptr must start at 0");
    }
    if (doc_ptr_.back() != word_idx_.size() || word_idx_.size() != weight_.size()) {
        throw DimensionMismatch("DocMatrix: doc_ptr, word_idx and weight disagree on nnz");
    }
    for (std::size_t j = 0; j + 1 < doc_ptr_.size(); ++j) {
        const std::size_t begin = doc_ptr_[j];
        const std::size_t end = doc_ptr_[j + 1];
        if (end < begin) {
            throw std::invalid_argument("DocMatrix: doc_ptr must be nondecreasing");
        }
        if (end == begin) {
            throw EmptyDocument(j);
        }
        double sum = 0.0;
        for (std::size_t e = begin; e < end; ++e) {
            if (word_idx_[e] >= vocab_size_) {
                throw IndexOutOfRange("DocMatrix: word index " + std::to_string(word_idx_[e]) +
                                      " >= vocab size " + std::to_string(vocab_size_));
            }
            if (e > begin && word_idx_[e] <= word_idx_[e - 1]) {
                throw std::invalid_argument("DocMatrix: word indices of document " +
                                            std::to_string(j) + " are not strictly increasing");
            }
            if (!(weight_[e] > 0.0) || !std::isfinite(weight_[e])) {
                throw std::invalid_argument("DocMatrix: weights must be positive and finite");
            }
            sum += weight_[e];
        }
        if (std::abs(sum - 1.0) > kNormTolerance) {
            throw std::invalid_argument("DocMatrix: weights of document " + std::to_string(j) +
                                        " do not sum to 1");
        }
    }
}

std::size_t DocMatrix::max_doc_nnz() const noexcept {
    std::size_t best = 0;
    for (std::size_t j = 0; j < num_docs(); ++j) {
        best = std::max(best, doc_nnz(j));
    }
    return best;
}

DocMatrix doc_matrix_from_entries(std::size_t vocab_size, std::size_t num_docs,
                                  std::span<const DocEntry> entries) {
    std::vector<DocEntry> sorted;
    sorted.reserve(entries.size());
    for (const DocEntry& e : entries) {
        if (e.doc >= num_docs || e.word >= vocab_size) {
            throw IndexOutOfRange("entry (doc " + std::to_string(e.doc) + ", word " +
                                  std::to_string(e.word) + ") outside " +
                                  std::to_string(vocab_size) + "x" + std::to_string(num_docs));
        }
        if (!(e.count > 0.0) || !std::isfinite(e.count)) {
            throw std::invalid_argument("entry counts must be positive and finite");
        }
        sorted.push_back(e);
    }
    std::stable_sort(sorted.begin(), sorted.end(), [](const DocEntry& a, const DocEntry& b) {
        return a.doc != b.doc ? a.doc < b.doc : a.word < b.word;
    });

    std::vector<std::size_t> doc_ptr(num_docs + 1, 0);
    std::vector<std::size_t> word_idx;
    std::vector<double> weight;
    word_idx.reserve(sorted.size());
    weight.reserve(sorted.size());

    std::size_t k = 0;
    for (std::size_t j = 0; j < num_docs; ++j) {
        const std::size_t begin = word_idx.size();
        double total = 0.0;
        for (; k < sorted.size() && sorted[k].doc == j; ++k) {
            if (word_idx.size() > begin && word_idx.back() == sorted[k].word) {
                weight.back() += sorted[k].count;
            } else {
                word_idx.push_back(sorted[k].word);
                weight.push_back(sorted[k].count);
            }
            total += sorted[k].count;
        }
        if (word_idx.size() == begin) {
            throw EmptyDocument(j);
        }
        for (std::size_t e = begin; e < weight.size(); ++e) {
            weight[e] /= total;
        }
        doc_ptr[j + 1] = word_idx.size();
    }
    return DocMatrix(vocab_size, std::move(doc_ptr), std::move(word_idx), std::move(weight));
}

} // namespace wmd
