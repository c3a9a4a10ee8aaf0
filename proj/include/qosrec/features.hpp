// qosrec/features.hpp
//
// Rated samples, basic and meta-features, outlier filtering and design
// matrices for the QoE models.

#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qosrec {

/// One rated viewing: every field is a 1..5 star rating.
struct Sample {
    int qos = 3;
    int interest = 3;
    int qor = 3;
    int qoe = 3;

    bool operator==(const Sample&) const = default;
};

/// Throws std::out_of_range if a rating is outside 1..5.
void validate(const Sample& s);

enum class Rating { QoS, Int, QoR };

enum class FeatureKind { Basic, Min, Max, Product, Ratio };

struct Feature {
    FeatureKind kind = FeatureKind::Basic;
    Rating a = Rating::QoS;
    Rating b = Rating::QoS;  // unused for Basic

    static Feature basic(Rating r) { return {FeatureKind::Basic, r, r}; }
    static Feature min(Rating a, Rating b) { return {FeatureKind::Min, a, b}; }
    static Feature max(Rating a, Rating b) { return {FeatureKind::Max, a, b}; }
    static Feature product(Rating a, Rating b) { return {FeatureKind::Product, a, b}; }
    static Feature ratio(Rating a, Rating b) { return {FeatureKind::Ratio, a, b}; }

    double value(const Sample& s) const;
    /// "QoS", "min(QoS,Int)", "prod(QoS,Int)", "ratio(QoS,Int)", ...
    std::string name() const;
    /// Same column up to argument order of the symmetric metas.
    bool same_as(const Feature& other) const;

    bool operator==(const Feature&) const = default;
};

std::string_view rating_name(Rating r);
/// Inverse of Feature::name(). Throws std::invalid_argument.
Feature parse_feature(std::string_view name);

struct FeatureSpec {
    std::vector<Feature> features;
    /// Ratio metas are rejected unless enabled.
    bool allow_ratio = false;

    /// Throws std::invalid_argument when empty, duplicated or using a
    /// disabled ratio feature.
    void validate() const;
    std::vector<std::string> names() const;
    std::size_t size() const { return features.size(); }

    /// {QoS, Int}
    static FeatureSpec qos_int();
    /// {QoS, Int, min(QoS,Int)}
    static FeatureSpec selected();
    /// {QoS, Int, QoR}
    static FeatureSpec basics();
    /// The three basics plus min and max over every pair (9 columns).
    static FeatureSpec full();
    static FeatureSpec from_names(std::span<const std::string> names, bool allow_ratio = false);
};

struct DesignMatrix {
    Eigen::MatrixXd x;        // rows = samples, cols = features
    std::vector<int> labels;  // QoE, 1..5
    std::vector<std::string> feature_names;

    std::size_t rows() const { return labels.size(); }
    std::size_t cols() const { return feature_names.size(); }
};

DesignMatrix build_design(std::span<const Sample> samples, const FeatureSpec& spec);
/// Single feature row for prediction.
Eigen::VectorXd feature_row(const Sample& sample, const FeatureSpec& spec);

enum class OutlierMode {
    QosInt,     // QoE outside [min(QoS,Int), max(QoS,Int)]
    QosIntQor,  // QoE outside [min, max] over QoS, Int and QoR
};

std::vector<Sample> filter_outliers(std::span<const Sample> samples, OutlierMode mode);

}  // namespace qosrec
