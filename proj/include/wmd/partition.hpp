#pragma once

#include "wmd/doc_matrix.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace wmd {

/// Half-open range of documents [begin, end).
struct DocRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const noexcept { return end - begin; }
    bool operator==(const DocRange&) const = default;
};

/// One document range per worker; ranges are ordered, disjoint and cover all documents.
struct PartitionPlan {
    std::vector<DocRange> ranges;

    std::size_t num_workers() const noexcept { return ranges.size(); }
    bool operator==(const PartitionPlan&) const = default;
};

/// Splits documents so every worker gets about nnz/p entries.
///
/// Worker k starts at the first document whose offset is at or past
/// ceil(k * nnz / p), found by binary search over doc_ptr. A document that
/// straddles a split point stays with the earlier worker, so every worker's
/// share is at most ceil(nnz / p) + max_doc_nnz.
PartitionPlan partition_nonzeros(const DocMatrix& matrix, std::size_t num_workers);

/// Same partitioner over a raw nondecreasing offset array (doc_ptr[0] == 0).
PartitionPlan partition_nonzeros(std::span<const std::size_t> doc_ptr, std::size_t num_workers);

} // namespace wmd
