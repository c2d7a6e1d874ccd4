#include "wmd/query.hpp"

#include "wmd/errors.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wmd {

QueryHistogram::QueryHistogram(std::size_t vocab_size, std::vector<std::size_t> idx,
                               std::vector<double> val)
    : vocab_size_(vocab_size), idx_(std::move(idx)), val_(std::move(val)) {
    if (idx_.size() != val_.size()) {
        throw DimensionMismatch("QueryHistogram: idx and val lengths differ");
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < idx_.size(); ++k) {
        if (idx_[k] >= vocab_size_) {
            throw IndexOutOfRange("QueryHistogram: index " + std::to_string(idx_[k]) +
                                  " >= vocab size " + std::to_string(vocab_size_));
        }
        if (k > 0 && idx_[k] <= idx_[k - 1]) {
            throw std::invalid_argument("QueryHistogram: indices must be strictly increasing");
        }
        if (!(val_[k] > 0.0) || !std::isfinite(val_[k])) {
            throw std::invalid_argument("QueryHistogram: values must be positive and finite");
        }
        sum += val_[k];
    }
    if (!idx_.empty() && std::abs(sum - 1.0) > 1e-12) {
        throw std::invalid_argument("QueryHistogram: values must sum to 1");
    }
}

} // namespace wmd
