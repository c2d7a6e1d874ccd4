#include "wmd/distance.hpp"

#include "wmd/errors.hpp"
#include "wmd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace wmd {

namespace {

void check_query(const EmbeddingMatrix& emb, std::span<const std::size_t> sel) {
    for (std::size_t i = 0; i < sel.size(); ++i) {
        if (sel[i] >= emb.vocab_size()) {
            throw IndexOutOfRange("query word " + std::to_string(sel[i]) + " outside vocabulary of " +
                                  std::to_string(emb.vocab_size()));
        }
        if (i > 0 && sel[i] <= sel[i - 1]) {
            throw std::invalid_argument("query selection must be strictly increasing");
        }
    }
}

void check_lambda(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("lambda must be positive and finite");
    }
}

} // namespace

DenseMatrix euclidean_rows(const EmbeddingMatrix& emb, std::span<const std::size_t> sel,
                           std::uint64_t* updates) {
    check_query(emb, sel);
    const std::size_t vocab = emb.vocab_size();
    const std::size_t dim = emb.dim();
    DenseMatrix out(sel.size(), vocab);
    std::uint64_t count = 0;
    for (std::size_t i = 0; i < sel.size(); ++i) {
        const auto a = emb.row(sel[i]);
        for (std::size_t g = 0; g < vocab; ++g) {
            const auto b = emb.row(g);
            double sum = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                const double d = a[k] - b[k];
                sum += d * d;
            }
            count += dim;
            out(i, g) = std::sqrt(sum);
        }
    }
    if (updates) {
        *updates = count;
    }
    return out;
}

PrecomputedMats precompute_from_distances(DenseMatrix M, const CompactQuery& query, double lambda) {
    check_lambda(lambda);
    if (M.rows() != query.size()) {
        throw DimensionMismatch("distance matrix rows differ from query size");
    }
    const std::size_t vr = M.rows();
    const std::size_t vocab = M.cols();
    PrecomputedMats mats;
    mats.lambda = lambda;
    mats.K = DenseMatrix(vr, vocab);
    mats.K_over_r = DenseMatrix(vr, vocab);
    mats.KT = DenseMatrix(vocab, vr);
    for (std::size_t i = 0; i < vr; ++i) {
        for (std::size_t g = 0; g < vocab; ++g) {
            const double k = std::exp(-lambda * M(i, g));
            mats.K(i, g) = k;
            mats.K_over_r(i, g) = k / query.r[i];
            mats.KT(g, i) = k;
        }
    }
    mats.M = std::move(M);
    return mats;
}

PrecomputedMats fused_distance_precompute(const EmbeddingMatrix& emb, const CompactQuery& query,
                                          double lambda, std::size_t workers,
                                          const BlockingConfig& blocking) {
    check_lambda(lambda);
    if (query.size() == 0) {
        throw EmptyDocument(0);
    }
    if (query.r.size() != query.sel.size()) {
        throw DimensionMismatch("query sel and r lengths differ");
    }
    check_query(emb, query.sel);
    workers = std::max<std::size_t>(workers, 1);

    const std::size_t vr = query.size();
    const std::size_t vocab = emb.vocab_size();
    const std::size_t dim = emb.dim();
    const std::size_t vb = std::max<std::size_t>(blocking.vocab_block, 1);
    const std::size_t qb = blocking.query_block == 0 ? vr : blocking.query_block;
    const std::size_t num_blocks = (vocab + vb - 1) / vb;

    PrecomputedMats mats;
    mats.lambda = lambda;
    mats.M = DenseMatrix(vr, vocab);
    mats.K = DenseMatrix(vr, vocab);
    mats.K_over_r = DenseMatrix(vr, vocab);
    mats.KT = DenseMatrix(vocab, vr);

    std::vector<std::uint64_t> worker_updates(workers, 0);
    for_each_worker(workers, [&](std::size_t w) {
        const Chunk blocks = static_chunk(num_blocks, w, workers);
        std::vector<double> packed(dim * vb);
        std::vector<double> acc(vb);
        std::uint64_t updates = 0;
        for (std::size_t blk = blocks.begin; blk < blocks.end; ++blk) {
            const std::size_t g0 = blk * vb;
            const std::size_t nb = std::min(vb, vocab - g0);
            // Pack the vocabulary block dimension-major so the inner loop runs
            // with unit stride over vocabulary words.
            for (std::size_t gg = 0; gg < nb; ++gg) {
                const auto b = emb.row(g0 + gg);
                for (std::size_t k = 0; k < dim; ++k) {
                    packed[k * nb + gg] = b[k];
                }
            }
            for (std::size_t i0 = 0; i0 < vr; i0 += qb) {
                const std::size_t i1 = std::min(vr, i0 + qb);
                for (std::size_t i = i0; i < i1; ++i) {
                    const auto a = emb.row(query.sel[i]);
                    std::fill_n(acc.begin(), nb, 0.0);
                    for (std::size_t k = 0; k < dim; ++k) {
                        const double ak = a[k];
                        const double* bk = packed.data() + k * nb;
                        for (std::size_t gg = 0; gg < nb; ++gg) {
                            const double d = ak - bk[gg];
                            acc[gg] += d * d;
                        }
                    }
                    updates += nb * dim;
                    for (std::size_t gg = 0; gg < nb; ++gg) {
                        const std::size_t g = g0 + gg;
                        const double m = std::sqrt(acc[gg]);
                        const double kval = std::exp(-lambda * m);
                        mats.M(i, g) = m;
                        mats.K(i, g) = kval;
                        mats.K_over_r(i, g) = kval / query.r[i];
                        mats.KT(g, i) = kval;
                    }
                }
            }
        }
        worker_updates[w] = updates;
    });

    std::uint64_t total = 0;
    for (const auto u : worker_updates) {
        total += u;
    }
    mats.distance_flops = 3 * total;
    return mats;
}

} // namespace wmd
