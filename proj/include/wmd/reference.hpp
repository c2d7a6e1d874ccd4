#pragma once

// Serial dense formulation of the solver. It materializes KT * u as a full
// V x N matrix and is only meant for small instances, where it serves as the
// correctness oracle for the sparse pipeline.

#include "wmd/dense_matrix.hpp"
#include "wmd/doc_matrix.hpp"
#include "wmd/ingest.hpp"
#include "wmd/query.hpp"
#include "wmd/sinkhorn.hpp"
#include "wmd/sparse_kernels.hpp"

#include <vector>

namespace wmd {

/// Dense-matmul evaluation of the one-to-many Sinkhorn distance. When `trace`
/// is non-null it receives x after every iteration.
WmdResult dense_reference_wmd(const QueryHistogram& r, const DocMatrix& c,
                              const EmbeddingMatrix& emb, const SolverConfig& cfg,
                              std::vector<DenseMatrix>* trace = nullptr);

/// Full V x N dense copy of c.
DenseMatrix densify(const DocMatrix& c);

/// Plain triple-loop product a * b.
DenseMatrix dense_matmul(const DenseMatrix& a, const DenseMatrix& b);

} // namespace wmd
