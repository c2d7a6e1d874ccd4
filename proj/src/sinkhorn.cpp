#include "wmd/sinkhorn.hpp"

#include "wmd/errors.hpp"
#include "wmd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wmd {

namespace {

constexpr double kUnderflowFloor = 1e-300;

std::size_t plan_workers(const PartitionPlan& plan) {
    return std::max<std::size_t>(plan.num_workers(), 1);
}

void reciprocal(const DenseMatrix& x, DenseMatrix& u, std::size_t workers) {
    if (u.rows() != x.rows() || u.cols() != x.cols()) {
        u = DenseMatrix(x.rows(), x.cols());
    }
    const auto src = x.data();
    const auto dst = u.data();
    for_each_worker(workers, [&](std::size_t w) {
        const Chunk chunk = static_chunk(src.size(), w, workers);
        for (std::size_t k = chunk.begin; k < chunk.end; ++k) {
            dst[k] = 1.0 / src[k];
        }
    });
}

double max_change(const DenseMatrix& a, const DenseMatrix& b, std::size_t workers) {
    std::vector<double> local(workers, 0.0);
    for_each_worker(workers, [&](std::size_t w) {
        const Chunk chunk = static_chunk(a.size(), w, workers);
        double worst = 0.0;
        for (std::size_t k = chunk.begin; k < chunk.end; ++k) {
            worst = std::max(worst, std::abs(a.data()[k] - b.data()[k]));
        }
        local[w] = worst;
    });
    return *std::max_element(local.begin(), local.end());
}

} // namespace

void SolverConfig::validate() const {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("lambda must be positive and finite");
    }
    if (max_iter < 1) {
        throw std::invalid_argument("max_iter must be >= 1");
    }
    if (!(tol >= 0.0)) {
        throw std::invalid_argument("tol must be nonnegative");
    }
}

CompactQuery select_nonzero(const QueryHistogram& r) {
    if (r.size() == 0) {
        throw EmptyDocument(0);
    }
    return CompactQuery{r.idx(), r.val()};
}

CompactQuery select_nonzero(std::span<const double> r) {
    CompactQuery q;
    double sum = 0.0;
    for (std::size_t g = 0; g < r.size(); ++g) {
        if (r[g] < 0.0 || !std::isfinite(r[g])) {
            throw std::invalid_argument("query weights must be nonnegative and finite");
        }
        if (r[g] > 0.0) {
            q.sel.push_back(g);
            q.r.push_back(r[g]);
            sum += r[g];
        }
    }
    if (q.sel.empty()) {
        throw EmptyDocument(0);
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("query weights must sum to 1");
    }
    return q;
}

IterationState init_state(std::size_t v_r, std::size_t num_docs) {
    if (v_r == 0 || num_docs == 0) {
        throw std::invalid_argument("init_state needs v_r >= 1 and N >= 1");
    }
    const double start = 1.0 / static_cast<double>(v_r);
    IterationState state;
    state.x = DenseMatrix(v_r, num_docs, start);
    state.u = DenseMatrix(v_r, num_docs, static_cast<double>(v_r));
    return state;
}

IterationState sinkhorn_iterate(IterationState state, const PrecomputedMats& mats,
                                const DocMatrix& c, const SolverConfig& cfg,
                                const PartitionPlan& plan) {
    cfg.validate();
    if (state.x.rows() != mats.K.rows() || state.x.cols() != c.num_docs()) {
        throw DimensionMismatch("iteration state does not match the query and corpus");
    }
    const std::size_t workers = plan_workers(plan);
    for (std::size_t t = 0; t < cfg.max_iter; ++t) {
        reciprocal(state.x, state.u, workers);
        DenseMatrix next = sddmm_spmm(c, mats.KT, state.u, mats.K_over_r, plan, state.stats);
        ++state.iterations_run;
        const bool converged = cfg.mode == SolverMode::until_converged &&
                               max_change(next, state.x, workers) <= cfg.tol;
        state.x = std::move(next);
        if (converged) {
            break;
        }
    }
    state.stats.iterations = state.iterations_run;
    return state;
}

WmdResult finalize_wmd(IterationState state, const PrecomputedMats& mats, const DocMatrix& c,
                       const PartitionPlan& plan) {
    const std::size_t workers = plan_workers(plan);
    reciprocal(state.x, state.u, workers);

    DenseMatrix km(mats.K.rows(), mats.K.cols());
    for_each_worker(workers, [&](std::size_t w) {
        const Chunk chunk = static_chunk(km.size(), w, workers);
        for (std::size_t k = chunk.begin; k < chunk.end; ++k) {
            km.data()[k] = mats.K.data()[k] * mats.M.data()[k];
        }
    });

    WmdResult result = fused_final(c, mats.KT, state.u, km, plan);
    KernelStats total = state.stats;
    total += result.stats;
    total.iterations = state.iterations_run;
    total.distance_flop_count = mats.distance_flops;
    result.stats = total;
    return result;
}

PrecomputedMats precompute(const EmbeddingMatrix& emb, const CompactQuery& query,
                           const SolverConfig& cfg, std::size_t workers) {
    PrecomputedMats mats;
    if (cfg.distance == DistanceKernel::reference) {
        std::uint64_t updates = 0;
        DenseMatrix m = euclidean_rows(emb, query.sel, &updates);
        mats = precompute_from_distances(std::move(m), query, cfg.lambda);
        mats.distance_flops = 3 * updates;
    } else {
        mats = fused_distance_precompute(emb, query, cfg.lambda, workers, cfg.blocking);
    }
    for (std::size_t i = 0; i < mats.K.rows(); ++i) {
        const auto row = mats.K.row(i);
        if (std::all_of(row.begin(), row.end(), [](double k) { return k < kUnderflowFloor; })) {
            throw LambdaTooLarge(i);
        }
    }
    return mats;
}

WmdResult sinkhorn_wmd(const QueryHistogram& r, const DocMatrix& c, const EmbeddingMatrix& emb,
                       const SolverConfig& cfg, std::size_t workers) {
    cfg.validate();
    if (r.vocab_size() != c.vocab_size() || c.vocab_size() != emb.vocab_size()) {
        throw DimensionMismatch("query, corpus and embeddings disagree on vocabulary size");
    }
    if (c.num_docs() == 0) {
        throw std::invalid_argument("corpus has no documents");
    }
    workers = std::max<std::size_t>(workers, 1);
    const CompactQuery query = select_nonzero(r);
    const PrecomputedMats mats = precompute(emb, query, cfg, workers);
    const PartitionPlan plan = partition_nonzeros(c, workers);
    IterationState state = init_state(query.size(), c.num_docs());
    state = sinkhorn_iterate(std::move(state), mats, c, cfg, plan);
    return finalize_wmd(std::move(state), mats, c, plan);
}

} // namespace wmd
