#pragma once

#include "wmd/dense_matrix.hpp"
#include "wmd/doc_matrix.hpp"
#include "wmd/partition.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace wmd {

/// Instrumented operation counts. One fused pass over all documents adds
/// nnz * v_r to each MAC counter.
struct KernelStats {
    std::uint64_t sddmm_mac_count = 0;
    std::uint64_t spmm_mac_count = 0;
    std::uint64_t iterations = 0;
    std::uint64_t distance_flop_count = 0;

    KernelStats& operator+=(const KernelStats& other) noexcept;
    bool operator==(const KernelStats&) const = default;
};

/// Sparse v = c .* (1 ./ (KT * u)). Shares the sparsity pattern of its DocMatrix,
/// which must outlive it.
class SddmmOutput {
public:
    SddmmOutput(const DocMatrix& pattern, std::vector<double> values);

    const DocMatrix& pattern() const noexcept { return *pattern_; }
    std::span<const double> values() const noexcept { return values_; }

private:
    const DocMatrix* pattern_;
    std::vector<double> values_;
};

/// Per-document distances from one query plus the work counters.
struct WmdResult {
    std::vector<double> distances;
    KernelStats stats;
};

/// Serial SDDMM: value[e] = weight[e] / dot(KT[word(e), :], u[:, doc(e)]).
/// Only entries in the sparsity pattern are evaluated.
SddmmOutput sddmm(const DocMatrix& c, const DenseMatrix& KT, const DenseMatrix& u);

/// Serial SpMM: x(i, j) = sum over entries e of doc j of A(i, word(e)) * value[e].
DenseMatrix spmm(const DenseMatrix& A, const SddmmOutput& v);

/// Fused SDDMM_SpMM. Each worker walks its own document range from `plan`,
/// computes every v entry as a scalar and scatters it straight into its
/// column of x. The result equals spmm(A, sddmm(c, KT, u)) bit for bit.
DenseMatrix sddmm_spmm(const DocMatrix& c, const DenseMatrix& KT, const DenseMatrix& u,
                       const DenseMatrix& A, const PartitionPlan& plan, KernelStats& stats);

/// Final distance reduction: out[j] = sum_i u(i, j) * (KM * v)(i, j) with v
/// formed on the fly as in sddmm_spmm. KM must be K .* M.
WmdResult fused_final(const DocMatrix& c, const DenseMatrix& KT, const DenseMatrix& u,
                      const DenseMatrix& KM, const PartitionPlan& plan);

} // namespace wmd
