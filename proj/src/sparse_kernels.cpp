#include "wmd/sparse_kernels.hpp"

#include "wmd/errors.hpp"
#include "wmd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace wmd {

namespace {

void check_shapes(const DocMatrix& c, const DenseMatrix& KT, const DenseMatrix& u) {
    if (KT.rows() != c.vocab_size()) {
        throw DimensionMismatch("KT has " + std::to_string(KT.rows()) + " rows, vocabulary is " +
                                std::to_string(c.vocab_size()));
    }
    if (u.rows() != KT.cols() || u.cols() != c.num_docs()) {
        throw DimensionMismatch("u must be " + std::to_string(KT.cols()) + "x" +
                                std::to_string(c.num_docs()));
    }
}

void check_operand(const DocMatrix& c, const DenseMatrix& A, std::size_t vr) {
    if (A.rows() != vr || A.cols() != c.vocab_size()) {
        throw DimensionMismatch("dense operand must be " + std::to_string(vr) + "x" +
                                std::to_string(c.vocab_size()));
    }
}

void check_plan(const DocMatrix& c, const PartitionPlan& plan) {
    std::size_t next = 0;
    for (const DocRange& r : plan.ranges) {
        if (r.begin != next || r.end < r.begin) {
            throw std::invalid_argument("partition plan ranges are not contiguous");
        }
        next = r.end;
    }
    if (plan.ranges.empty() || next != c.num_docs()) {
        throw std::invalid_argument("partition plan does not cover all documents");
    }
}

// The helpers below are the only place the per-entry arithmetic lives; the
// serial and fused kernels both call them so their results agree bitwise.

// On-the-fly transpose of column j of u into unit-stride storage.
inline void gather_column(const DenseMatrix& u, std::size_t j, double* out) {
    for (std::size_t i = 0; i < u.rows(); ++i) {
        out[i] = u(i, j);
    }
}

inline double entry_value(std::span<const double> kt_row, const double* ucol, double weight,
                          std::size_t entry) {
    double dot = 0.0;
    for (std::size_t i = 0; i < kt_row.size(); ++i) {
        dot += kt_row[i] * ucol[i];
    }
    if (!(dot > 0.0) || !std::isfinite(dot)) {
        throw NumericalBreakdown(entry);
    }
    const double value = weight / dot;
    if (!std::isfinite(value)) {
        throw NumericalBreakdown(entry);
    }
    return value;
}

inline void scatter(const DenseMatrix& A, std::size_t word, double value, double* acc) {
    const std::size_t vr = A.rows();
    for (std::size_t i = 0; i < vr; ++i) {
        acc[i] += A(i, word) * value;
    }
}

inline void check_column(const double* acc, std::size_t vr, std::size_t entry) {
    for (std::size_t i = 0; i < vr; ++i) {
        if (!std::isfinite(acc[i])) {
            throw NumericalBreakdown(entry);
        }
    }
}

// Runs the fused SDDMM_SpMM over documents [range.begin, range.end), handing
// each finished column accumulator to `emit`.
template <typename Emit>
void fused_range(const DocMatrix& c, const DenseMatrix& KT, const DenseMatrix& u,
                 const DenseMatrix& A, DocRange range, KernelStats& stats, Emit&& emit) {
    const std::size_t vr = KT.cols();
    const auto doc_ptr = c.doc_ptr();
    const auto word_idx = c.word_idx();
    const auto weight = c.weight();
    std::vector<double> ucol(vr);
    std::vector<double> acc(vr);
    for (std::size_t j = range.begin; j < range.end; ++j) {
        gather_column(u, j, ucol.data());
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t e = doc_ptr[j]; e < doc_ptr[j + 1]; ++e) {
            const std::size_t g = word_idx[e];
            const double value = entry_value(KT.row(g), ucol.data(), weight[e], e);
            scatter(A, g, value, acc.data());
        }
        check_column(acc.data(), vr, doc_ptr[j]);
        emit(j, acc.data(), ucol.data());
        const std::uint64_t macs = static_cast<std::uint64_t>(doc_ptr[j + 1] - doc_ptr[j]) * vr;
        stats.sddmm_mac_count += macs;
        stats.spmm_mac_count += macs;
    }
}

} // namespace

KernelStats& KernelStats::operator+=(const KernelStats& other) noexcept {
    sddmm_mac_count += other.sddmm_mac_count;
    spmm_mac_count += other.spmm_mac_count;
    iterations += other.iterations;
    distance_flop_count += other.distance_flop_count;
    return *this;
}

SddmmOutput::SddmmOutput(const DocMatrix& pattern, std::vector<double> values)
    : pattern_(&pattern), values_(std::move(values)) {
    if (values_.size() != pattern.nnz()) {
        throw DimensionMismatch("SddmmOutput values must match the pattern nnz");
    }
}

SddmmOutput sddmm(const DocMatrix& c, const DenseMatrix& KT, const DenseMatrix& u) {
    check_shapes(c, KT, u);
    const auto doc_ptr = c.doc_ptr();
    const auto word_idx = c.word_idx();
    const auto weight = c.weight();
    std::vector<double> values(c.nnz());
    std::vector<double> ucol(KT.cols());
    for (std::size_t j = 0; j < c.num_docs(); ++j) {
        gather_column(u, j, ucol.data());
        for (std::size_t e = doc_ptr[j]; e < doc_ptr[j + 1]; ++e) {
            values[e] = entry_value(KT.row(word_idx[e]), ucol.data(), weight[e], e);
        }
    }
    return SddmmOutput(c, std::move(values));
}

DenseMatrix spmm(const DenseMatrix& A, const SddmmOutput& v) {
    const DocMatrix& c = v.pattern();
    check_operand(c, A, A.rows());
    const std::size_t vr = A.rows();
    const auto doc_ptr = c.doc_ptr();
    const auto word_idx = c.word_idx();
    const auto values = v.values();
    DenseMatrix x(vr, c.num_docs());
    std::vector<double> acc(vr);
    for (std::size_t j = 0; j < c.num_docs(); ++j) {
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t e = doc_ptr[j]; e < doc_ptr[j + 1]; ++e) {
            scatter(A, word_idx[e], values[e], acc.data());
        }
        check_column(acc.data(), vr, doc_ptr[j]);
        for (std::size_t i = 0; i < vr; ++i) {
            x(i, j) = acc[i];
        }
    }
    return x;
}

DenseMatrix sddmm_spmm(const DocMatrix& c, const DenseMatrix& KT, const DenseMatrix& u,
                       const DenseMatrix& A, const PartitionPlan& plan, KernelStats& stats) {
    check_shapes(c, KT, u);
    check_operand(c, A, KT.cols());
    check_plan(c, plan);
    const std::size_t vr = KT.cols();
    DenseMatrix x(vr, c.num_docs());
    std::vector<KernelStats> local(plan.num_workers());
    for_each_worker(plan.num_workers(), [&](std::size_t w) {
        fused_range(c, KT, u, A, plan.ranges[w], local[w],
                    [&](std::size_t j, const double* acc, const double*) {
                        for (std::size_t i = 0; i < vr; ++i) {
                            x(i, j) = acc[i];
                        }
                    });
    });
    for (const auto& s : local) {
        stats += s;
    }
    return x;
}

WmdResult fused_final(const DocMatrix& c, const DenseMatrix& KT, const DenseMatrix& u,
                      const DenseMatrix& KM, const PartitionPlan& plan) {
    check_shapes(c, KT, u);
    check_operand(c, KM, KT.cols());
    check_plan(c, plan);
    const std::size_t vr = KT.cols();
    WmdResult result;
    result.distances.assign(c.num_docs(), 0.0);
    std::vector<KernelStats> local(plan.num_workers());
    for_each_worker(plan.num_workers(), [&](std::size_t w) {
        fused_range(c, KT, u, KM, plan.ranges[w], local[w],
                    [&](std::size_t j, const double* acc, const double* ucol) {
                        double total = 0.0;
                        for (std::size_t i = 0; i < vr; ++i) {
                            total += ucol[i] * acc[i];
                        }
                        result.distances[j] = total;
                    });
    });
    for (const auto& s : local) {
        result.stats += s;
    }
    return result;
}

} // namespace wmd
