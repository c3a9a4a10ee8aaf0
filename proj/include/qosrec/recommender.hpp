// qosrec/recommender.hpp
//
// Five-slot recommendation lists: the plain related-items prefix and the
// QoS-nudged variant that promotes cached items found by a depth-2 BFS.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qosrec/catalog.hpp"

namespace qosrec {

inline constexpr std::size_t kListSize = 5;

struct RecItem {
    std::size_t position = 0;  // 1-based
    VideoId id{};
    bool high_qos = false;

    bool operator==(const RecItem&) const = default;
};

struct RecommendationList {
    std::vector<RecItem> items;
    /// Set when the graph could not supply the requested list length.
    bool exhausted = false;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
    std::size_t high_qos_count() const;
    bool contains(VideoId id) const;

    bool operator==(const RecommendationList&) const = default;
};

enum class CachedPlacement {
    Top,         // cached items fill positions 1..k
    Interleave,  // chosen items keep their BFS encounter order
};

struct RecommendOptions {
    std::size_t list_size = kListSize;
    CachedPlacement placement = CachedPlacement::Top;
    /// Extra ids never recommended (e.g. the session history). The watched
    /// id is always excluded.
    std::span<const VideoId> exclude{};
};

/// First `list_size` related items of `watched` in rank order. High-QoS
/// flags are read from `cache` (pass an empty cache to leave them unset).
/// Throws std::out_of_range if `watched` is not in the graph.
RecommendationList vanilla_recommend(const RelatedGraph& graph, const CacheSet& cache,
                                     VideoId watched, const RecommendOptions& options = {});

/// Breadth-first search over related lists (depth 1 in rank order, then the
/// neighbours of each depth-1 item in rank order) collecting cached items.
/// With at least `list_size` hits the list is the first hits; otherwise the
/// hits come first and the vanilla ranking fills the remaining slots.
RecommendationList nudge_recommend(const RelatedGraph& graph, const CacheSet& cache,
                                   VideoId watched, const RecommendOptions& options = {});

}  // namespace qosrec
