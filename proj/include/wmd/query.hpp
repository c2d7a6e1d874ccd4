#pragma once

#include <cstddef>
#include <vector>

namespace wmd {

/// Sparse normalized word histogram of a query document over the vocabulary.
class QueryHistogram {
public:
    QueryHistogram() = default;

    /// Validates: idx strictly increasing and < vocab_size, val > 0, sum(val) == 1.
    QueryHistogram(std::size_t vocab_size, std::vector<std::size_t> idx, std::vector<double> val);

    std::size_t vocab_size() const noexcept { return vocab_size_; }
    std::size_t size() const noexcept { return idx_.size(); }
    const std::vector<std::size_t>& idx() const noexcept { return idx_; }
    const std::vector<double>& val() const noexcept { return val_; }

private:
    std::size_t vocab_size_ = 0;
    std::vector<std::size_t> idx_;
    std::vector<double> val_;
};

/// Query restricted to its nonzero words: sel[i] is the vocabulary row of
/// query word i and r[i] its mass. v_r == sel.size().
struct CompactQuery {
    std::vector<std::size_t> sel;
    std::vector<double> r;

    std::size_t size() const noexcept { return sel.size(); }
};

} // namespace wmd
