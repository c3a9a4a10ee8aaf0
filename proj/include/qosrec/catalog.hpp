// qosrec/catalog.hpp
//
// Synthetic content catalogs (popularity + related-items graph) and the
// construction of the set of items deliverable in high QoS.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace qosrec {

enum class VideoId : std::uint64_t {};

constexpr std::uint64_t to_u64(VideoId id) { return static_cast<std::uint64_t>(id); }

struct VideoMeta {
    VideoId id{};
    std::uint64_t view_count = 0;
    bool is_trending = false;

    bool operator==(const VideoMeta&) const = default;
};

/// Ordered related-item lists. Position 0 of each list is the most related
/// item. Lists never contain their source and only reference catalog ids.
class RelatedGraph {
public:
    void set_related(VideoId src, std::vector<VideoId> related);
    bool contains(VideoId id) const { return adjacency_.contains(id); }
    /// Empty span when `id` has no entry.
    std::span<const VideoId> related(VideoId id) const;
    const std::map<VideoId, std::vector<VideoId>>& adjacency() const { return adjacency_; }
    std::size_t size() const { return adjacency_.size(); }

    bool operator==(const RelatedGraph&) const = default;

private:
    std::map<VideoId, std::vector<VideoId>> adjacency_;
};

/// Items that can be served in high QoS. Members are kept sorted.
class CacheSet {
public:
    CacheSet() = default;
    CacheSet(std::vector<VideoId> members, std::size_t capacity);

    bool contains(VideoId id) const;
    std::span<const VideoId> members() const { return members_; }
    std::size_t size() const { return members_.size(); }
    std::size_t capacity() const { return capacity_; }
    bool empty() const { return members_.empty(); }
    /// Set when the candidate pool could not fill the capacity.
    bool under_capacity() const { return members_.size() < capacity_; }

    bool operator==(const CacheSet&) const = default;

private:
    std::vector<VideoId> members_;
    std::size_t capacity_ = 0;
};

struct CatalogConfig {
    std::size_t n_videos = 10000;
    std::size_t n_trending = 50;
    std::size_t related_out_degree = 50;
    double popularity_skew = 1.0;
    /// Probability that a related-list slot is drawn by popularity rather
    /// than uniformly.
    double related_popularity_bias = 0.5;
    std::uint64_t seed = 1;
};

struct Catalog {
    std::vector<VideoMeta> videos;  // indexed by id
    RelatedGraph graph;
    std::vector<VideoId> trending;  // descending view count

    bool operator==(const Catalog&) const = default;
};

/// Throws std::invalid_argument when n_videos < n_trending + related_out_degree
/// or any count is zero.
Catalog generate_catalog(const CatalogConfig& config);

inline constexpr std::size_t kDefaultCacheCapacity = 500;
inline constexpr std::size_t kTrendingReserve = 50;

/// First `trending_reserve` trending ids, then the most viewed depth-1
/// related items of those ids until `capacity` is reached. Equal view counts
/// are ordered by ascending id.
CacheSet build_cache_set(std::span<const VideoMeta> videos, const RelatedGraph& graph,
                         std::span<const VideoId> trending,
                         std::size_t capacity = kDefaultCacheCapacity,
                         std::size_t trending_reserve = kTrendingReserve);

}  // namespace qosrec
