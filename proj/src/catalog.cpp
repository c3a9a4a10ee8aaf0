// catalog.cpp

#include "qosrec/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "qosrec/random.hpp"

namespace qosrec {

void RelatedGraph::set_related(VideoId src, std::vector<VideoId> related) {
    std::unordered_set<VideoId> seen;
    for (VideoId dst : related) {
        if (dst == src)
            throw std::invalid_argument("related list of " + std::to_string(to_u64(src)) +
                                        " contains itself");
        if (!seen.insert(dst).second)
            throw std::invalid_argument("related list of " + std::to_string(to_u64(src)) +
                                        " repeats " + std::to_string(to_u64(dst)));
    }
    adjacency_[src] = std::move(related);
}

std::span<const VideoId> RelatedGraph::related(VideoId id) const {
    auto it = adjacency_.find(id);
    if (it == adjacency_.end()) return {};
    return it->second;
}

CacheSet::CacheSet(std::vector<VideoId> members, std::size_t capacity)
    : members_(std::move(members)), capacity_(capacity) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    if (members_.size() > capacity_)
        throw std::invalid_argument("cache holds more members than its capacity");
}

bool CacheSet::contains(VideoId id) const {
    return std::binary_search(members_.begin(), members_.end(), id);
}

namespace {

// Picks `degree` distinct ids != src. Each slot is popularity-weighted with
// probability `bias`, uniform otherwise.
std::vector<VideoId> draw_related(std::size_t src, std::size_t degree,
                                  std::span<const double> cumulative, double bias, Rng& rng) {
    const std::size_t n = cumulative.size();
    const double total = cumulative.back();
    std::vector<VideoId> out;
    out.reserve(degree);

    if (degree * 2 > n) {
        // Dense request: weighted sampling without replacement via exponential
        // keys, avoiding long rejection loops.
        std::vector<std::pair<double, std::size_t>> keyed;
        keyed.reserve(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == src) continue;
            double w_pop = cumulative[i] - (i == 0 ? 0.0 : cumulative[i - 1]);
            double w = bias * w_pop / total + (1.0 - bias) / static_cast<double>(n);
            double u = uniform01(rng);
            double key = u > 0.0 ? std::log(u) / w : -INFINITY;
            keyed.emplace_back(key, i);
        }
        std::partial_sort(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(degree),
                          keyed.end(), [](const auto& a, const auto& b) {
                              return a.first != b.first ? a.first > b.first : a.second < b.second;
                          });
        for (std::size_t k = 0; k < degree; ++k) out.push_back(VideoId{keyed[k].second});
        return out;
    }

    std::unordered_set<std::size_t> taken{src};
    while (out.size() < degree) {
        std::size_t pick;
        if (uniform01(rng) < bias) {
            double u = uniform01(rng) * total;
            pick = static_cast<std::size_t>(
                std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
            if (pick >= n) pick = n - 1;
        } else {
            pick = uniform_index(rng, n);
        }
        if (taken.insert(pick).second) out.push_back(VideoId{pick});
    }
    return out;
}

}  // namespace

Catalog generate_catalog(const CatalogConfig& config) {
    if (config.n_videos == 0 || config.n_trending == 0 || config.related_out_degree == 0)
        throw std::invalid_argument("catalog sizes must be positive");
    if (config.n_videos < config.n_trending + config.related_out_degree)
        throw std::invalid_argument("n_videos must be at least n_trending + related_out_degree");
    if (!(config.popularity_skew > 0.0))
        throw std::invalid_argument("popularity_skew must be positive");
    if (config.related_popularity_bias < 0.0 || config.related_popularity_bias > 1.0)
        throw std::invalid_argument("related_popularity_bias must lie in [0,1]");

    Rng rng(config.seed);
    const std::size_t n = config.n_videos;

    // Popularity ranks are a random permutation; views follow rank^-skew.
    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), std::size_t{1});
    shuffle(rank, rng);

    Catalog catalog;
    catalog.videos.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        double views = 1e9 * std::pow(static_cast<double>(rank[i]), -config.popularity_skew);
        catalog.videos[i].id = VideoId{i};
        catalog.videos[i].view_count = std::max<std::uint64_t>(1, std::llround(views));
    }

    std::vector<std::size_t> by_views(n);
    std::iota(by_views.begin(), by_views.end(), std::size_t{0});
    auto more_viewed = [&](std::size_t a, std::size_t b) {
        const auto& va = catalog.videos[a].view_count;
        const auto& vb = catalog.videos[b].view_count;
        return va != vb ? va > vb : a < b;
    };
    std::sort(by_views.begin(), by_views.end(), more_viewed);

    // Trending: a random subset of the popular head.
    std::size_t head = std::min(n, std::max(config.n_trending, n / 10));
    std::vector<std::size_t> pool(by_views.begin(), by_views.begin() + static_cast<std::ptrdiff_t>(head));
    shuffle(pool, rng);
    pool.resize(config.n_trending);
    std::sort(pool.begin(), pool.end(), more_viewed);
    for (std::size_t i : pool) {
        catalog.videos[i].is_trending = true;
        catalog.trending.push_back(VideoId{i});
    }

    std::vector<double> cumulative(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += static_cast<double>(catalog.videos[i].view_count);
        cumulative[i] = acc;
    }
    for (std::size_t i = 0; i < n; ++i) {
        catalog.graph.set_related(VideoId{i},
                                  draw_related(i, config.related_out_degree, cumulative,
                                               config.related_popularity_bias, rng));
    }
    return catalog;
}

CacheSet build_cache_set(std::span<const VideoMeta> videos, const RelatedGraph& graph,
                         std::span<const VideoId> trending, std::size_t capacity,
                         std::size_t trending_reserve) {
    if (capacity == 0) throw std::invalid_argument("cache capacity must be positive");

    std::unordered_map<VideoId, std::uint64_t> views;
    views.reserve(videos.size());
    for (const auto& v : videos) views.emplace(v.id, v.view_count);

    std::vector<VideoId> members;
    std::unordered_set<VideoId> in_cache;
    const std::size_t reserved = std::min({trending.size(), trending_reserve, capacity});
    for (std::size_t i = 0; i < trending.size() && members.size() < reserved; ++i) {
        if (in_cache.insert(trending[i]).second) members.push_back(trending[i]);
    }
    const std::size_t seeds = members.size();

    std::vector<VideoId> candidates;
    std::unordered_set<VideoId> seen;
    for (std::size_t i = 0; i < seeds; ++i) {
        for (VideoId r : graph.related(members[i])) {
            if (in_cache.contains(r) || !seen.insert(r).second) continue;
            candidates.push_back(r);
        }
    }
    auto views_of = [&](VideoId id) {
        auto it = views.find(id);
        return it == views.end() ? std::uint64_t{0} : it->second;
    };
    std::sort(candidates.begin(), candidates.end(), [&](VideoId a, VideoId b) {
        auto va = views_of(a), vb = views_of(b);
        return va != vb ? va > vb : a < b;
    });
    const std::size_t slots = capacity - members.size();
    for (std::size_t i = 0; i < candidates.size() && i < slots; ++i) members.push_back(candidates[i]);
    return CacheSet(std::move(members), capacity);
}

}  // namespace qosrec
