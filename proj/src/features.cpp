// features.cpp

#include "qosrec/features.hpp"

#include <algorithm>
#include <stdexcept>

namespace qosrec {

void validate(const Sample& s) {
    for (int v : {s.qos, s.interest, s.qor, s.qoe})
        if (v < 1 || v > 5) throw std::out_of_range("rating " + std::to_string(v) + " outside 1..5");
}

namespace {

double rating_of(const Sample& s, Rating r) {
    switch (r) {
        case Rating::QoS: return s.qos;
        case Rating::Int: return s.interest;
        case Rating::QoR: return s.qor;
    }
    return 0.0;
}

Rating parse_rating(std::string_view s) {
    if (s == "QoS") return Rating::QoS;
    if (s == "Int") return Rating::Int;
    if (s == "QoR") return Rating::QoR;
    throw std::invalid_argument("unknown rating '" + std::string(s) + "'");
}

}  // namespace

std::string_view rating_name(Rating r) {
    switch (r) {
        case Rating::QoS: return "QoS";
        case Rating::Int: return "Int";
        case Rating::QoR: return "QoR";
    }
    return "?";
}

double Feature::value(const Sample& s) const {
    const double x = rating_of(s, a);
    const double y = rating_of(s, b);
    switch (kind) {
        case FeatureKind::Basic: return x;
        case FeatureKind::Min: return std::min(x, y);
        case FeatureKind::Max: return std::max(x, y);
        case FeatureKind::Product: return x * y;
        case FeatureKind::Ratio: return x / y;
    }
    return 0.0;
}

std::string Feature::name() const {
    const std::string pair = "(" + std::string(rating_name(a)) + "," + std::string(rating_name(b)) + ")";
    switch (kind) {
        case FeatureKind::Basic: return std::string(rating_name(a));
        case FeatureKind::Min: return "min" + pair;
        case FeatureKind::Max: return "max" + pair;
        case FeatureKind::Product: return "prod" + pair;
        case FeatureKind::Ratio: return "ratio" + pair;
    }
    return {};
}

bool Feature::same_as(const Feature& other) const {
    if (kind != other.kind) return false;
    if (kind == FeatureKind::Basic) return a == other.a;
    if (kind == FeatureKind::Ratio) return a == other.a && b == other.b;
    return (a == other.a && b == other.b) || (a == other.b && b == other.a);
}

Feature parse_feature(std::string_view name) {
    auto open = name.find('(');
    if (open == std::string_view::npos) return Feature::basic(parse_rating(name));
    auto comma = name.find(',', open);
    if (comma == std::string_view::npos || name.back() != ')')
        throw std::invalid_argument("malformed feature name '" + std::string(name) + "'");
    auto head = name.substr(0, open);
    Rating a = parse_rating(name.substr(open + 1, comma - open - 1));
    Rating b = parse_rating(name.substr(comma + 1, name.size() - comma - 2));
    if (head == "min") return Feature::min(a, b);
    if (head == "max") return Feature::max(a, b);
    if (head == "prod") return Feature::product(a, b);
    if (head == "ratio") return Feature::ratio(a, b);
    throw std::invalid_argument("unknown feature function '" + std::string(head) + "'");
}

void FeatureSpec::validate() const {
    if (features.empty()) throw std::invalid_argument("feature spec is empty");
    for (std::size_t i = 0; i < features.size(); ++i) {
        const Feature& f = features[i];
        if (f.kind != FeatureKind::Basic && f.a == f.b)
            throw std::invalid_argument("meta-feature " + f.name() + " needs two distinct ratings");
        if (f.kind == FeatureKind::Ratio && !allow_ratio)
            throw std::invalid_argument("ratio meta-features are disabled: " + f.name());
        for (std::size_t j = 0; j < i; ++j)
            if (features[j].same_as(f))
                throw std::invalid_argument("duplicate feature " + f.name());
    }
}

std::vector<std::string> FeatureSpec::names() const {
    std::vector<std::string> out;
    out.reserve(features.size());
    for (const auto& f : features) out.push_back(f.name());
    return out;
}

FeatureSpec FeatureSpec::qos_int() {
    return {{Feature::basic(Rating::QoS), Feature::basic(Rating::Int)}};
}

FeatureSpec FeatureSpec::selected() {
    return {{Feature::basic(Rating::QoS), Feature::basic(Rating::Int),
             Feature::min(Rating::QoS, Rating::Int)}};
}

FeatureSpec FeatureSpec::basics() {
    return {{Feature::basic(Rating::QoS), Feature::basic(Rating::Int), Feature::basic(Rating::QoR)}};
}

FeatureSpec FeatureSpec::full() {
    using R = Rating;
    return {{Feature::basic(R::QoS), Feature::basic(R::Int), Feature::basic(R::QoR),
             Feature::min(R::QoS, R::Int), Feature::min(R::QoS, R::QoR), Feature::min(R::QoR, R::Int),
             Feature::max(R::QoS, R::Int), Feature::max(R::QoS, R::QoR), Feature::max(R::QoR, R::Int)}};
}

FeatureSpec FeatureSpec::from_names(std::span<const std::string> names, bool allow_ratio) {
    FeatureSpec spec;
    spec.allow_ratio = allow_ratio;
    for (const auto& n : names) spec.features.push_back(parse_feature(n));
    spec.validate();
    return spec;
}

DesignMatrix build_design(std::span<const Sample> samples, const FeatureSpec& spec) {
    spec.validate();
    DesignMatrix d;
    d.feature_names = spec.names();
    d.x.resize(static_cast<Eigen::Index>(samples.size()), static_cast<Eigen::Index>(spec.size()));
    d.labels.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        validate(samples[i]);
        for (std::size_t j = 0; j < spec.size(); ++j)
            d.x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                spec.features[j].value(samples[i]);
        d.labels.push_back(samples[i].qoe);
    }
    return d;
}

Eigen::VectorXd feature_row(const Sample& sample, const FeatureSpec& spec) {
    Eigen::VectorXd row(static_cast<Eigen::Index>(spec.size()));
    for (std::size_t j = 0; j < spec.size(); ++j)
        row(static_cast<Eigen::Index>(j)) = spec.features[j].value(sample);
    return row;
}

std::vector<Sample> filter_outliers(std::span<const Sample> samples, OutlierMode mode) {
    std::vector<Sample> kept;
    kept.reserve(samples.size());
    for (const Sample& s : samples) {
        int lo = std::min(s.qos, s.interest);
        int hi = std::max(s.qos, s.interest);
        if (mode == OutlierMode::QosIntQor) {
            lo = std::min(lo, s.qor);
            hi = std::max(hi, s.qor);
        }
        if (s.qoe >= lo && s.qoe <= hi) kept.push_back(s);
    }
    return kept;
}

}  // namespace qosrec
