#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <span>

#include "socfield/errors.hpp"

namespace socfield {

/// Chunk widths the multi-step sum accepts (fixed-width vector-add friendly).
bool valid_chunk_width(int k);

/// ceil(n / k) chunks; 0 terms need 0 chunks. Terms past n pad with zero strength.
std::size_t chunk_count(std::size_t n, int k);

/// Bounded per-address buffer for the multi-step sum: exactly K live partials, no
/// storage growing with the term count.
class StepCache {
public:
    explicit StepCache(int k) : k_(k) {
        if (!valid_chunk_width(k)) throw ConfigError("chunk_k", "must be 2, 4, 8, or 16");
        partials_.fill(0.0);
    }

    int chunk_width() const noexcept { return k_; }
    std::span<double> partials() noexcept { return {partials_.data(), static_cast<std::size_t>(k_)}; }
    std::span<const double> partials() const noexcept {
        return {partials_.data(), static_cast<std::size_t>(k_)};
    }

    void reset() { partials_.fill(0.0); }

    /// Folds term i into partial i mod K (K is a power of two).
    void accumulate(std::size_t index, double term) {
        partials_[index & static_cast<std::size_t>(k_ - 1)] += term;
    }

    /// Sum of the K partials, in slot order.
    double total() const {
        double sum = 0.0;
        const int n = std::min(k_, static_cast<int>(partials_.size()));
        for (int j = 0; j < n; ++j) sum += partials_[j];
        return sum;
    }

private:
    int k_;
    std::array<double, 16> partials_; // capacity for the largest allowed K
};

/// Sum of all n terms in index order, one pass.
template <class TermFn>
double one_step_sum(TermFn&& term, std::size_t n) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += term(i);
    return sum;
}

inline double one_step_sum(std::span<const double> terms) {
    return one_step_sum([&](std::size_t i) { return terms[i]; }, terms.size());
}

/// Chunked sum through a K-wide cache: term i feeds partial i mod K (strided
/// layout), the stream is zero-padded to a multiple of K, and the K partials are
/// folded at the end. Algebraically regroups the one-step sum.
template <class TermFn>
double multi_step_sum(TermFn&& term, std::size_t n, int k) {
    StepCache cache(k);
    const std::size_t m = chunk_count(n, k);
    for (std::size_t i = 0; i < m; ++i) {
        for (int j = 0; j < k; ++j) {
            const std::size_t idx = i * static_cast<std::size_t>(k) + j;
            cache.accumulate(idx, idx < n ? term(idx) : 0.0);
        }
    }
    return cache.total();
}

inline double multi_step_sum(std::span<const double> terms, int k) {
    return multi_step_sum([&](std::size_t i) { return terms[i]; }, terms.size(), k);
}

} // namespace socfield
