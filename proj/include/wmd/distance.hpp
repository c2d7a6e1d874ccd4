#pragma once

#include "wmd/dense_matrix.hpp"
#include "wmd/ingest.hpp"
#include "wmd/query.hpp"

#include <cstddef>
#include <cstdint>
#include <span>

namespace wmd {

/// Which Euclidean distance kernel builds M.
enum class DistanceKernel {
    reference,  ///< serial per-pair loop
    blocked,    ///< cache-blocked, packed, parallel
};

/// Tile sizes for the blocked kernel. The embedding dimension is never blocked.
struct BlockingConfig {
    std::size_t vocab_block = 64;
    std::size_t query_block = 0;  ///< 0 means the whole query in one block
};

/// Per-query matrices reused by every scaling iteration.
///   M(i, g)        Euclidean distance between query word i and vocabulary word g
///   K              exp(-lambda * M)
///   K_over_r(i, :) K(i, :) / r[i]
///   KT             transpose of K (vocabulary-major, unit stride per word)
struct PrecomputedMats {
    DenseMatrix M;
    DenseMatrix K;
    DenseMatrix K_over_r;
    DenseMatrix KT;
    double lambda = 0.0;
    /// Floating-point operations spent in the distance loop, 3 per (a-b)^2 accumulate.
    std::uint64_t distance_flops = 0;
};

/// Reference distances: out(i, g) = ||emb[sel[i]] - emb[g]||. Serial.
/// When `updates` is given it receives the number of inner-loop updates.
DenseMatrix euclidean_rows(const EmbeddingMatrix& emb, std::span<const std::size_t> sel,
                           std::uint64_t* updates = nullptr);

/// Computes M, K, K_over_r and KT in one blocked pass over the vocabulary.
/// Vocabulary blocks are spread over `workers`; each worker writes disjoint
/// columns, so the result does not depend on the worker count.
PrecomputedMats fused_distance_precompute(const EmbeddingMatrix& emb, const CompactQuery& query,
                                          double lambda, std::size_t workers = 1,
                                          const BlockingConfig& blocking = {});

/// Derives K, K_over_r and KT from an existing distance matrix (used with the
/// reference kernel).
PrecomputedMats precompute_from_distances(DenseMatrix M, const CompactQuery& query,
                                          double lambda);

} // namespace wmd
