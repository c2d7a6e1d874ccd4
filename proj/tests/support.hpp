#pragma once

// Test-only generators and oracles. Nothing here calls into the code paths it
// is used to check.

#include "wmd/dense_matrix.hpp"
#include "wmd/doc_matrix.hpp"
#include "wmd/ingest.hpp"
#include "wmd/partition.hpp"
#include "wmd/query.hpp"

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <random>
#include <string>
#include <vector>

namespace wmd::test {

inline std::vector<std::size_t> random_doc_ptr(std::mt19937_64& rng, std::size_t max_docs,
                                               std::size_t max_len, bool allow_empty) {
    std::uniform_int_distribution<std::size_t> ndocs(1, max_docs);
    std::uniform_int_distribution<std::size_t> len(allow_empty ? 0 : 1, max_len);
    std::vector<std::size_t> ptr{0};
    const std::size_t n = ndocs(rng);
    for (std::size_t j = 0; j < n; ++j) {
        ptr.push_back(ptr.back() + len(rng));
    }
    return ptr;
}

/// Walks documents in order, accumulating nnz, and closes worker k's range at
/// the first document that starts at or past ceil(k * nnz / p).
inline PartitionPlan linear_scan_partition(const std::vector<std::size_t>& doc_ptr,
                                           std::size_t p) {
    const std::size_t n = doc_ptr.size() - 1;
    const std::size_t nnz = doc_ptr.back();
    auto target = [&](std::size_t k) { return (k * nnz + p - 1) / p; };
    PartitionPlan plan;
    std::size_t worker = 0;
    std::size_t begin = 0;
    std::size_t cum = 0;
    for (std::size_t d = 0; d < n; ++d) {
        while (worker + 1 < p && cum >= target(worker + 1)) {
            plan.ranges.push_back({begin, d});
            ++worker;
            begin = d;
        }
        cum += doc_ptr[d + 1] - doc_ptr[d];
    }
    plan.ranges.push_back({begin, n});
    while (plan.ranges.size() < p) {
        plan.ranges.push_back({n, n});
    }
    return plan;
}

inline DenseMatrix random_dense(std::mt19937_64& rng, std::size_t rows, std::size_t cols,
                                double lo, double hi) {
    std::uniform_real_distribution<double> dist(lo, hi);
    DenseMatrix m(rows, cols);
    for (double& v : m.data()) {
        v = dist(rng);
    }
    return m;
}

/// Random corpus: every document gets between 1 and max(1, density * V) words.
inline DocMatrix random_corpus(std::mt19937_64& rng, std::size_t vocab, std::size_t docs,
                               double density) {
    const auto max_words =
        std::clamp<std::size_t>(static_cast<std::size_t>(density * static_cast<double>(vocab)), 1,
                                vocab);
    std::uniform_int_distribution<std::size_t> nwords(1, max_words);
    std::uniform_int_distribution<int> count(1, 5);
    std::vector<std::size_t> all(vocab);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::vector<DocEntry> entries;
    for (std::size_t j = 0; j < docs; ++j) {
        std::shuffle(all.begin(), all.end(), rng);
        const std::size_t k = nwords(rng);
        for (std::size_t t = 0; t < k; ++t) {
            entries.push_back({j, all[t], static_cast<double>(count(rng))});
        }
    }
    return doc_matrix_from_entries(vocab, docs, entries);
}

inline QueryHistogram random_query(std::mt19937_64& rng, std::size_t vocab, std::size_t words) {
    std::vector<std::size_t> all(vocab);
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::shuffle(all.begin(), all.end(), rng);
    std::vector<std::size_t> idx(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(words));
    std::sort(idx.begin(), idx.end());
    std::uniform_int_distribution<int> count(1, 4);
    std::vector<double> val;
    double total = 0.0;
    for (std::size_t k = 0; k < words; ++k) {
        val.push_back(count(rng));
        total += val.back();
    }
    for (double& v : val) {
        v /= total;
    }
    return QueryHistogram(vocab, std::move(idx), std::move(val));
}

inline EmbeddingMatrix random_embeddings(std::mt19937_64& rng, std::size_t vocab, std::size_t dim,
                                         double scale = 1.0) {
    std::vector<std::string> tokens;
    for (std::size_t g = 0; g < vocab; ++g) {
        tokens.push_back("t" + std::to_string(g));
    }
    return EmbeddingMatrix(std::move(tokens), random_dense(rng, vocab, dim, 0.0, scale));
}

inline EmbeddingMatrix make_embeddings(std::vector<std::vector<double>> rows) {
    std::vector<std::string> tokens;
    std::vector<double> data;
    const std::size_t dim = rows.empty() ? 0 : rows.front().size();
    for (std::size_t g = 0; g < rows.size(); ++g) {
        tokens.push_back("e" + std::to_string(g));
        data.insert(data.end(), rows[g].begin(), rows[g].end());
    }
    return EmbeddingMatrix(std::move(tokens), DenseMatrix(rows.size(), dim, std::move(data)));
}

/// SDDMM oracle: full dense KT * u, then keep the entries c touches.
inline std::vector<double> dense_sddmm_oracle(const DocMatrix& c, const DenseMatrix& KT,
                                              const DenseMatrix& u) {
    std::vector<double> full(KT.rows() * u.cols(), 0.0);
    for (std::size_t g = 0; g < KT.rows(); ++g) {
        for (std::size_t j = 0; j < u.cols(); ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < KT.cols(); ++i) {
                s += KT(g, i) * u(i, j);
            }
            full[g * u.cols() + j] = s;
        }
    }
    std::vector<double> out;
    for (std::size_t j = 0; j < c.num_docs(); ++j) {
        const auto words = c.words(j);
        const auto weights = c.weights(j);
        for (std::size_t e = 0; e < words.size(); ++e) {
            out.push_back(weights[e] / full[words[e] * u.cols() + j]);
        }
    }
    return out;
}

/// SpMM oracle: scatter v into a dense V x N matrix and multiply.
inline DenseMatrix dense_spmm_oracle(const DenseMatrix& A, const DocMatrix& c,
                                     const std::vector<double>& values) {
    std::vector<double> vd(c.vocab_size() * c.num_docs(), 0.0);
    std::size_t e = 0;
    for (std::size_t j = 0; j < c.num_docs(); ++j) {
        for (const std::size_t g : c.words(j)) {
            vd[g * c.num_docs() + j] = values[e++];
        }
    }
    DenseMatrix x(A.rows(), c.num_docs());
    for (std::size_t i = 0; i < A.rows(); ++i) {
        for (std::size_t j = 0; j < c.num_docs(); ++j) {
            double s = 0.0;
            for (std::size_t g = 0; g < c.vocab_size(); ++g) {
                s += A(i, g) * vd[g * c.num_docs() + j];
            }
            x(i, j) = s;
        }
    }
    return x;
}

} // namespace wmd::test
