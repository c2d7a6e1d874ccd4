#pragma once

#include "wmd/dense_matrix.hpp"
#include "wmd/distance.hpp"
#include "wmd/doc_matrix.hpp"
#include "wmd/ingest.hpp"
#include "wmd/partition.hpp"
#include "wmd/query.hpp"
#include "wmd/sparse_kernels.hpp"

#include <cstddef>
#include <span>

namespace wmd {

enum class SolverMode {
    fixed_iterations,
    until_converged,
};

struct SolverConfig {
    double lambda = 10.0;
    std::size_t max_iter = 15;
    /// Convergence threshold on max |x_new - x_old|.
    double tol = 1e-9;
    SolverMode mode = SolverMode::fixed_iterations;
    DistanceKernel distance = DistanceKernel::blocked;
    BlockingConfig blocking;

    void validate() const;
};

/// Scaling variables of the one-to-many problem. The transport plan for
/// document j is diag(u[:, j]) * K * diag(v[:, j]), with v the SDDMM output.
struct IterationState {
    DenseMatrix x;  ///< v_r x N, strictly positive
    DenseMatrix u;  ///< 1 ./ x as of the last update
    std::size_t iterations_run = 0;
    KernelStats stats;
};

CompactQuery select_nonzero(const QueryHistogram& r);

/// Dense-vector entry point: keeps the strictly positive entries of r.
CompactQuery select_nonzero(std::span<const double> r);

/// x = ones(v_r, N) / v_r.
IterationState init_state(std::size_t v_r, std::size_t num_docs);

/// Repeats { u = 1 ./ x; x = K_over_r * (c .* (1 ./ (KT * u))) } for max_iter
/// rounds, or until max |dx| <= tol in until-converged mode.
IterationState sinkhorn_iterate(IterationState state, const PrecomputedMats& mats,
                                const DocMatrix& c, const SolverConfig& cfg,
                                const PartitionPlan& plan);

/// u = 1 ./ x, then distances[j] = sum(u .* ((K .* M) * v))[j].
WmdResult finalize_wmd(IterationState state, const PrecomputedMats& mats, const DocMatrix& c,
                       const PartitionPlan& plan);

/// Builds the per-query matrices with the kernel chosen in cfg and fails fast
/// with LambdaTooLarge when an entire row of K has underflowed.
PrecomputedMats precompute(const EmbeddingMatrix& emb, const CompactQuery& query,
                           const SolverConfig& cfg, std::size_t workers);

/// One query against every document of c.
WmdResult sinkhorn_wmd(const QueryHistogram& r, const DocMatrix& c, const EmbeddingMatrix& emb,
                       const SolverConfig& cfg, std::size_t workers);

} // namespace wmd
