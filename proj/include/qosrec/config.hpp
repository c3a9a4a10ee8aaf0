// qosrec/config.hpp
//
// Run configuration: one JSON document with the sections catalog, cache,
// recommender, click, ratings, abandon, model, eval, io and seeds. Every
// key is optional; unknown keys and wrongly typed values are errors.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qosrec/catalog.hpp"
#include "qosrec/dataio.hpp"
#include "qosrec/features.hpp"
#include "qosrec/qoemodel.hpp"
#include "qosrec/simulator.hpp"

namespace qosrec {

/// Schema violation; `path` is the dotted key (e.g. "ratings.qos_high").
class ConfigError : public std::invalid_argument {
public:
    ConfigError(std::string path, const std::string& message)
        : std::invalid_argument(path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

struct Seeds {
    std::uint64_t catalog = 1;
    std::uint64_t simulation = 2;
    std::uint64_t cv = 3;
    std::uint64_t mlp = 17;
};

enum class OutlierSetting { None, QosInt, QosIntQor };
enum class InputKind { Sessions, Ratings };

struct RunConfig {
    CatalogConfig catalog{};
    std::size_t cache_capacity = kDefaultCacheCapacity;
    std::size_t trending_reserve = kTrendingReserve;
    SimulationParams simulation{};
    std::size_t n_sessions = 1000;

    ModelKind model = ModelKind::Ordinal;
    std::vector<std::string> features{"QoS", "Int", "min(QoS,Int)"};
    bool allow_ratio = false;
    OutlierSetting outliers = OutlierSetting::QosIntQor;
    FitOptions fit{};

    std::size_t folds = 5;
    int heatmap_qor = 3;
    bool yates = false;

    InputKind input = InputKind::Sessions;
    std::optional<ColumnMapping> mapping;

    Seeds seeds{};

    FeatureSpec feature_spec() const { return FeatureSpec::from_names(features, allow_ratio); }
    /// Sets every seed to `seed`.
    void override_seed(std::uint64_t seed);
};

RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);
/// Effective configuration with every key spelled out; parse_config of the
/// result gives back an equal configuration.
nlohmann::json config_to_json(const RunConfig& config);

}  // namespace qosrec
