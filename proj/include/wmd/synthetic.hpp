#pragma once

#include "wmd/doc_matrix.hpp"
#include "wmd/ingest.hpp"
#include "wmd/query.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace wmd {

/// Parameters of a seeded random corpus.
struct SyntheticParams {
    std::size_t vocab_size = 1000;
    std::size_t dim = 16;
    std::size_t num_docs = 100;
    /// Fraction of the V x N matrix that is nonzero; every document gets at least one word.
    double density = 0.01;
    std::size_t num_queries = 1;
    std::size_t query_words = 8;
    /// Embedding coordinates are drawn uniformly from [-scale, scale].
    double scale = 1.0;
    std::uint64_t seed = 1;
};

struct SyntheticInstance {
    EmbeddingMatrix emb;
    DocMatrix corpus;
    std::vector<QueryHistogram> queries;
};

/// Deterministic for a given parameter set.
SyntheticInstance make_synthetic(const SyntheticParams& params);

} // namespace wmd
