#include "wmd/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace wmd {

PartitionPlan partition_nonzeros(std::span<const std::size_t> doc_ptr, std::size_t num_workers) {
    if (num_workers == 0) {
        throw std::invalid_argument("partition_nonzeros: num_workers must be >= 1");
    }
    if (doc_ptr.empty()) {
        throw std::invalid_argument("partition_nonzeros: doc_ptr must hold at least one offset");
    }
    const std::size_t num_docs = doc_ptr.size() - 1;
    const std::size_t nnz = doc_ptr.back();

    std::vector<std::size_t> start(num_workers + 1, num_docs);
    start[0] = 0;
    for (std::size_t k = 1; k < num_workers; ++k) {
        const std::size_t target = (k * nnz + num_workers - 1) / num_workers;
        const auto it = std::lower_bound(doc_ptr.begin(), doc_ptr.end() - 1, target);
        start[k] = std::max(start[k - 1], static_cast<std::size_t>(it - doc_ptr.begin()));
    }

    PartitionPlan plan;
    plan.ranges.reserve(num_workers);
    for (std::size_t k = 0; k < num_workers; ++k) {
        plan.ranges.push_back({start[k], start[k + 1]});
    }
    return plan;
}

PartitionPlan partition_nonzeros(const DocMatrix& matrix, std::size_t num_workers) {
    return partition_nonzeros(matrix.doc_ptr(), num_workers);
}

} // namespace wmd
