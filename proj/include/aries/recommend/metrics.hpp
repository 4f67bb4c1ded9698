#pragma once

#include "aries/core/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace aries::recommend {

/// Effective cutoff: k truncated to both list lengths.
inline std::size_t effective_k(std::size_t k, std::size_t a, std::size_t b) { return std::min({k, a, b}); }

/// |top-k(recommended) ∩ top-k(truth)| / k, with k truncated to both lists.
inline double hit_ratio_at_k(const std::vector<std::string>& recommended, const std::vector<std::string>& truth,
                             std::size_t k) {
    if (k == 0) {
        throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    }
    const std::size_t kk = effective_k(k, recommended.size(), truth.size());
    if (kk == 0) {
        return 0.0;
    }
    std::unordered_set<std::string> top(truth.begin(), truth.begin() + static_cast<std::ptrdiff_t>(kk));
    std::size_t hits = 0;
    for (std::size_t i = 0; i < kk; ++i) {
        hits += top.contains(recommended[i]) ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(kk);
}

/// Graded relevance rel(m) = k - rank_truth(m) (0-based rank) inside the
/// truth top-k, 0 elsewhere; DCG discounts by log2(i + 1) for 1-based i.
inline double ndcg_at_k(const std::vector<std::string>& recommended, const std::vector<std::string>& truth,
                        std::size_t k) {
    if (k == 0) {
        throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    }
    const std::size_t kk = effective_k(k, recommended.size(), truth.size());
    if (kk == 0) {
        return 0.0;
    }
    std::unordered_map<std::string, double> rel;
    for (std::size_t r = 0; r < kk; ++r) {
        rel.emplace(truth[r], static_cast<double>(kk - r));
    }
    double dcg = 0.0;
    double idcg = 0.0;
    for (std::size_t i = 0; i < kk; ++i) {
        const double discount = std::log2(static_cast<double>(i) + 2.0);
        if (auto it = rel.find(recommended[i]); it != rel.end()) {
            dcg += it->second / discount;
        }
        idcg += static_cast<double>(kk - i) / discount;
    }
    return dcg / idcg;
}

} // namespace aries::recommend
