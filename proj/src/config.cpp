// config.cpp

#include "qosrec/config.hpp"

#include <fstream>
#include <set>

namespace qosrec {

namespace {

using nlohmann::json;

// Walks one JSON object, remembering which keys were consumed.
class Section {
public:
    Section(const json& parent, const std::string& key, const std::string& path)
        : path_(path.empty() ? key : path + "." + key) {
        if (!parent.contains(key)) return;
        node_ = &parent.at(key);
        if (!node_->is_object()) throw ConfigError(path_, "expected an object");
    }
    Section(const json* parent, const std::string& key, const std::string& path)
        : path_(path + "." + key) {
        if (!parent || !parent->contains(key)) return;
        node_ = &parent->at(key);
        if (!node_->is_object()) throw ConfigError(path_, "expected an object");
    }
    Section(const json& root) : node_(&root) {
        if (!root.is_object()) throw ConfigError("<root>", "expected an object");
    }

    const std::string& path() const { return path_; }
    const json* node() const { return node_; }

    const json* find(const std::string& key) {
        seen_.insert(key);
        if (!node_ || !node_->contains(key)) return nullptr;
        return &node_->at(key);
    }
    std::string key_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void number(const std::string& key, double& out) {
        if (auto* v = find(key)) {
            if (!v->is_number()) throw ConfigError(key_path(key), "expected a number");
            out = v->get<double>();
        }
    }
    template <typename T>
    void integer(const std::string& key, T& out) {
        if (auto* v = find(key)) {
            if (!v->is_number_integer()) throw ConfigError(key_path(key), "expected an integer");
            if constexpr (std::is_unsigned_v<T>) {
                if (v->is_number_unsigned())
                    out = static_cast<T>(v->get<std::uint64_t>());
                else if (v->get<std::int64_t>() < 0)
                    throw ConfigError(key_path(key), "must not be negative");
                else
                    out = static_cast<T>(v->get<std::int64_t>());
            } else {
                out = v->get<T>();
            }
        }
    }
    void boolean(const std::string& key, bool& out) {
        if (auto* v = find(key)) {
            if (!v->is_boolean()) throw ConfigError(key_path(key), "expected true or false");
            out = v->get<bool>();
        }
    }
    void string(const std::string& key, std::string& out) {
        if (auto* v = find(key)) {
            if (!v->is_string()) throw ConfigError(key_path(key), "expected a string");
            out = v->get<std::string>();
        }
    }
    template <std::size_t N>
    void numbers(const std::string& key, std::array<double, N>& out) {
        if (auto* v = find(key)) {
            if (!v->is_array() || v->size() != N)
                throw ConfigError(key_path(key), "expected an array of " + std::to_string(N) + " numbers");
            for (std::size_t i = 0; i < N; ++i) {
                if (!(*v)[i].is_number()) throw ConfigError(key_path(key), "expected numbers");
                out[i] = (*v)[i].get<double>();
            }
        }
    }

    void finish() const {
        if (!node_) return;
        for (const auto& [k, _] : node_->items())
            if (!seen_.contains(k)) throw ConfigError(key_path(k), "unknown key");
    }

private:
    const json* node_ = nullptr;
    std::string path_;
    std::set<std::string> seen_;
};

template <typename E>
E choose(const std::string& path, const std::string& value,
         std::initializer_list<std::pair<const char*, E>> options) {
    std::string allowed;
    for (const auto& [name, e] : options) {
        if (value == name) return e;
        allowed += (allowed.empty() ? "" : ", ") + std::string(name);
    }
    throw ConfigError(path, "'" + value + "' is not one of " + allowed);
}

void check_pmf(const std::string& path, const RatingPmf& pmf) {
    double sum = 0.0;
    for (double p : pmf) {
        if (!(p >= 0.0)) throw ConfigError(path, "probabilities must be non-negative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-6) throw ConfigError(path, "probabilities must sum to 1");
}

void require(bool ok, const std::string& path, const std::string& message) {
    if (!ok) throw ConfigError(path, message);
}

}  // namespace

void RunConfig::override_seed(std::uint64_t seed) {
    seeds = {seed, seed, seed, seed};
    catalog.seed = seed;
    fit.mlp.seed = seed;
}

RunConfig parse_config(const json& j) {
    RunConfig c;
    Section root(j);
    for (const char* name : {"catalog", "cache", "recommender", "click", "ratings", "abandon", "model", "eval", "io",
                             "seeds"})
        root.find(name);
    root.finish();

    {
        Section s(j, "catalog", "");
        s.integer("n_videos", c.catalog.n_videos);
        s.integer("n_trending", c.catalog.n_trending);
        s.integer("related_out_degree", c.catalog.related_out_degree);
        s.number("popularity_skew", c.catalog.popularity_skew);
        s.number("related_popularity_bias", c.catalog.related_popularity_bias);
        s.finish();
        require(c.catalog.n_videos >= c.catalog.n_trending + c.catalog.related_out_degree, "catalog.n_videos",
                "must be at least n_trending + related_out_degree");
        require(c.catalog.n_trending > 0 && c.catalog.related_out_degree > 0, "catalog",
                "n_trending and related_out_degree must be positive");
        require(c.catalog.related_popularity_bias >= 0.0 && c.catalog.related_popularity_bias <= 1.0,
                "catalog.related_popularity_bias", "must lie in [0, 1]");
    }
    {
        Section s(j, "cache", "");
        s.integer("capacity", c.cache_capacity);
        s.integer("trending_reserve", c.trending_reserve);
        s.finish();
    }
    {
        Section s(j, "recommender", "");
        std::string kind = "nudge", placement = "top";
        s.string("kind", kind);
        s.string("placement", placement);
        s.boolean("exclude_history", c.simulation.exclude_history);
        s.finish();
        c.simulation.recommender = choose<RecommenderKind>(
            "recommender.kind", kind, {{"nudge", RecommenderKind::Nudge}, {"vanilla", RecommenderKind::Vanilla}});
        c.simulation.placement = choose<CachedPlacement>(
            "recommender.placement", placement,
            {{"top", CachedPlacement::Top}, {"interleave", CachedPlacement::Interleave}});
    }
    {
        Section s(j, "click", "");
        std::string kind = "zipf";
        s.string("kind", kind);
        s.number("exponent", c.simulation.click.exponent);
        s.finish();
        c.simulation.click.kind =
            choose<ClickKind>("click.kind", kind, {{"zipf", ClickKind::Zipf}, {"uniform", ClickKind::Uniform}});
        require(c.simulation.click.exponent >= 0.0, "click.exponent", "must be non-negative");
    }
    {
        Section s(j, "ratings", "");
        auto& r = c.simulation.ratings;
        s.numbers("interest_high", r.interest_high);
        s.numbers("interest_low", r.interest_low);
        s.numbers("qos_high", r.qos_high);
        s.numbers("qos_low", r.qos_low);
        s.numbers("qor_base", r.qor_base);
        s.number("qor_shift", r.qor_shift);
        {
            Section q(s.node(), "qoe", "ratings");
            s.find("qoe");
            q.numbers("weights", r.qoe.weights);
            q.numbers("thresholds", r.qoe.thresholds);
            q.number("noise_scale", r.qoe.noise_scale);
            q.finish();
            for (std::size_t k = 1; k < 4; ++k)
                require(r.qoe.thresholds[k] > r.qoe.thresholds[k - 1], "ratings.qoe.thresholds",
                        "must be strictly increasing");
            require(r.qoe.noise_scale >= 0.0, "ratings.qoe.noise_scale", "must be non-negative");
        }
        s.finish();
        for (auto [name, pmf] : {std::pair{"interest_high", &r.interest_high}, {"interest_low", &r.interest_low},
                                 {"qos_high", &r.qos_high}, {"qos_low", &r.qos_low}, {"qor_base", &r.qor_base}})
            check_pmf(std::string("ratings.") + name, *pmf);
        const double m = pmf_mean(r.qor_base);
        require(m + r.qor_shift > 1.0 && m + r.qor_shift < 5.0, "ratings.qor_shift",
                "shifted QoR mean must stay inside (1, 5)");
    }
    {
        Section s(j, "abandon", "");
        s.number("base_rate", c.simulation.abandon.base_rate);
        s.number("interest_coef", c.simulation.abandon.interest_coef);
        s.number("qos_coef", c.simulation.abandon.qos_coef);
        s.finish();
        require(c.simulation.abandon.base_rate >= 0.0 && c.simulation.abandon.base_rate <= 1.0, "abandon.base_rate",
                "must lie in [0, 1]");
    }
    {
        Section s(j, "model", "");
        std::string kind = "ordinal", outliers = "qos_int_qor";
        s.string("kind", kind);
        if (auto* f = s.find("features")) {
            if (!f->is_array()) throw ConfigError("model.features", "expected an array of feature names");
            c.features.clear();
            for (const auto& e : *f) {
                if (!e.is_string()) throw ConfigError("model.features", "expected feature names");
                c.features.push_back(e.get<std::string>());
            }
        }
        s.boolean("allow_ratio", c.allow_ratio);
        s.string("outliers", outliers);
        s.number("logistic_l2", c.fit.logistic_l2);
        s.integer("max_iterations", c.fit.optimizer.max_iterations);
        {
            Section m(s.node(), "mlp", "model");
            s.find("mlp");
            m.integer("hidden1", c.fit.mlp.hidden1);
            m.integer("hidden2", c.fit.mlp.hidden2);
            m.integer("epochs", c.fit.mlp.epochs);
            m.integer("batch_size", c.fit.mlp.batch_size);
            m.number("learning_rate", c.fit.mlp.learning_rate);
            m.finish();
            require(c.fit.mlp.hidden1 > 0 && c.fit.mlp.hidden2 > 0 && c.fit.mlp.batch_size > 0 && c.fit.mlp.epochs > 0,
                    "model.mlp", "sizes and epochs must be positive");
        }
        s.finish();
        try {
            c.model = parse_model_kind(kind);
            c.feature_spec().validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError("model", e.what());
        }
        c.outliers = choose<OutlierSetting>("model.outliers", outliers,
                                            {{"none", OutlierSetting::None},
                                             {"qos_int", OutlierSetting::QosInt},
                                             {"qos_int_qor", OutlierSetting::QosIntQor}});
        require(c.fit.optimizer.max_iterations > 0, "model.max_iterations", "must be positive");
    }
    {
        Section s(j, "eval", "");
        s.integer("folds", c.folds);
        s.integer("n_sessions", c.n_sessions);
        s.integer("heatmap_qor", c.heatmap_qor);
        s.boolean("yates", c.yates);
        s.finish();
        require(c.folds >= 2, "eval.folds", "must be at least 2");
        require(c.heatmap_qor >= 1 && c.heatmap_qor <= 5, "eval.heatmap_qor", "must be a rating 1..5");
    }
    {
        Section s(j, "io", "");
        std::string input = "sessions";
        s.string("input", input);
        s.string("region", c.simulation.region);
        if (auto* m = s.find("mapping")) {
            try {
                c.mapping = ColumnMapping::from_json(*m);
            } catch (const std::exception& e) {
                throw ConfigError("io.mapping", e.what());
            }
        }
        s.finish();
        c.input = choose<InputKind>("io.input", input, {{"sessions", InputKind::Sessions}, {"ratings", InputKind::Ratings}});
    }
    {
        Section s(j, "seeds", "");
        s.integer("catalog", c.seeds.catalog);
        s.integer("simulation", c.seeds.simulation);
        s.integer("cv", c.seeds.cv);
        s.integer("mlp", c.seeds.mlp);
        s.finish();
    }
    c.catalog.seed = c.seeds.catalog;
    c.fit.mlp.seed = c.seeds.mlp;
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot open " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("<file>", std::string("invalid JSON: ") + e.what());
    }
    return parse_config(j);
}

json config_to_json(const RunConfig& c) {
    const auto& r = c.simulation.ratings;
    json j;
    j["catalog"] = {{"n_videos", c.catalog.n_videos},
                    {"n_trending", c.catalog.n_trending},
                    {"related_out_degree", c.catalog.related_out_degree},
                    {"popularity_skew", c.catalog.popularity_skew},
                    {"related_popularity_bias", c.catalog.related_popularity_bias}};
    j["cache"] = {{"capacity", c.cache_capacity}, {"trending_reserve", c.trending_reserve}};
    j["recommender"] = {{"kind", c.simulation.recommender == RecommenderKind::Nudge ? "nudge" : "vanilla"},
                        {"placement", c.simulation.placement == CachedPlacement::Top ? "top" : "interleave"},
                        {"exclude_history", c.simulation.exclude_history}};
    j["click"] = {{"kind", c.simulation.click.kind == ClickKind::Zipf ? "zipf" : "uniform"},
                  {"exponent", c.simulation.click.exponent}};
    j["ratings"] = {{"interest_high", r.interest_high},
                    {"interest_low", r.interest_low},
                    {"qos_high", r.qos_high},
                    {"qos_low", r.qos_low},
                    {"qor_base", r.qor_base},
                    {"qor_shift", r.qor_shift},
                    {"qoe", {{"weights", r.qoe.weights}, {"thresholds", r.qoe.thresholds}, {"noise_scale", r.qoe.noise_scale}}}};
    j["abandon"] = {{"base_rate", c.simulation.abandon.base_rate},
                    {"interest_coef", c.simulation.abandon.interest_coef},
                    {"qos_coef", c.simulation.abandon.qos_coef}};
    const char* outliers = c.outliers == OutlierSetting::None     ? "none"
                           : c.outliers == OutlierSetting::QosInt ? "qos_int"
                                                                  : "qos_int_qor";
    j["model"] = {{"kind", std::string(model_kind_name(c.model))},
                  {"features", c.features},
                  {"allow_ratio", c.allow_ratio},
                  {"outliers", outliers},
                  {"logistic_l2", c.fit.logistic_l2},
                  {"max_iterations", c.fit.optimizer.max_iterations},
                  {"mlp",
                   {{"hidden1", c.fit.mlp.hidden1},
                    {"hidden2", c.fit.mlp.hidden2},
                    {"epochs", c.fit.mlp.epochs},
                    {"batch_size", c.fit.mlp.batch_size},
                    {"learning_rate", c.fit.mlp.learning_rate}}}};
    j["eval"] = {{"folds", c.folds}, {"n_sessions", c.n_sessions}, {"heatmap_qor", c.heatmap_qor}, {"yates", c.yates}};
    j["io"] = {{"input", c.input == InputKind::Sessions ? "sessions" : "ratings"}, {"region", c.simulation.region}};
    if (c.mapping) j["io"]["mapping"] = {{"columns", c.mapping->columns}, {"require_version", c.mapping->require_version}};
    j["seeds"] = {{"catalog", c.seeds.catalog}, {"simulation", c.seeds.simulation}, {"cv", c.seeds.cv}, {"mlp", c.seeds.mlp}};
    return j;
}

}  // namespace qosrec
