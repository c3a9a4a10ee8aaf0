// recommender.cpp

#include "qosrec/recommender.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace qosrec {

std::size_t RecommendationList::high_qos_count() const {
    return static_cast<std::size_t>(
        std::count_if(items.begin(), items.end(), [](const RecItem& r) { return r.high_qos; }));
}

bool RecommendationList::contains(VideoId id) const {
    return std::any_of(items.begin(), items.end(), [id](const RecItem& r) { return r.id == id; });
}

namespace {

void require_known(const RelatedGraph& graph, VideoId watched) {
    if (!graph.contains(watched))
        throw std::out_of_range("video " + std::to_string(to_u64(watched)) +
                                " is not in the related graph");
}

bool excluded(VideoId id, VideoId watched, std::span<const VideoId> exclude) {
    return id == watched || std::find(exclude.begin(), exclude.end(), id) != exclude.end();
}

RecommendationList finish(const std::vector<VideoId>& ids, const CacheSet& cache,
                          std::size_t list_size) {
    RecommendationList list;
    list.items.reserve(ids.size());
    for (std::size_t i = 0; i < ids.size(); ++i)
        list.items.push_back({i + 1, ids[i], cache.contains(ids[i])});
    list.exhausted = ids.size() < list_size;
    return list;
}

}  // namespace

RecommendationList vanilla_recommend(const RelatedGraph& graph, const CacheSet& cache,
                                     VideoId watched, const RecommendOptions& options) {
    require_known(graph, watched);
    std::vector<VideoId> ids;
    for (VideoId r : graph.related(watched)) {
        if (ids.size() == options.list_size) break;
        if (excluded(r, watched, options.exclude)) continue;
        ids.push_back(r);
    }
    return finish(ids, cache, options.list_size);
}

RecommendationList nudge_recommend(const RelatedGraph& graph, const CacheSet& cache,
                                   VideoId watched, const RecommendOptions& options) {
    require_known(graph, watched);
    const std::size_t n = options.list_size;

    // BFS encounter order up to depth 2.
    std::vector<VideoId> order;
    std::unordered_set<VideoId> visited;
    auto visit = [&](VideoId id) {
        if (excluded(id, watched, options.exclude)) return;
        if (visited.insert(id).second) order.push_back(id);
    };
    auto depth1 = graph.related(watched);
    for (VideoId r : depth1) visit(r);
    for (VideoId r : depth1)
        for (VideoId rr : graph.related(r)) visit(rr);

    std::vector<VideoId> hits;
    for (VideoId id : order) {
        if (!cache.contains(id)) continue;
        hits.push_back(id);
        if (hits.size() == n) return finish(hits, cache, n);
    }

    std::vector<VideoId> ids = hits;
    std::unordered_set<VideoId> chosen(hits.begin(), hits.end());
    for (VideoId r : depth1) {
        if (ids.size() == n) break;
        if (excluded(r, watched, options.exclude) || chosen.contains(r)) continue;
        ids.push_back(r);
        chosen.insert(r);
    }

    if (options.placement == CachedPlacement::Interleave) {
        std::unordered_map<VideoId, std::size_t> rank;
        for (std::size_t i = 0; i < order.size(); ++i) rank.emplace(order[i], i);
        std::stable_sort(ids.begin(), ids.end(),
                         [&](VideoId a, VideoId b) { return rank.at(a) < rank.at(b); });
    }
    return finish(ids, cache, n);
}

}  // namespace qosrec
