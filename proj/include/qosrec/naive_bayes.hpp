// qosrec/naive_bayes.hpp
//
// High/Low QoE classifier from binarized QoS, Int and QoR, assuming the
// three features are conditionally independent given the QoE class.

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qosrec/features.hpp"
#include "qosrec/stats.hpp"

namespace qosrec {

struct BinaryFeatures {
    Level qos = Level::Low;
    Level interest = Level::Low;
    Level qor = Level::Low;
    Level qoe = Level::Low;

    std::array<Level, 3> inputs() const { return {qos, interest, qor}; }
    bool operator==(const BinaryFeatures&) const = default;
};

BinaryFeatures binarize(const Sample& s);
std::vector<BinaryFeatures> binarize(std::span<const Sample> samples);

struct NBModel {
    /// p_high[c][f] = P(feature f = High | QoE class c), c: 0 = Low, 1 = High;
    /// features ordered QoS, Int, QoR.
    std::array<std::array<double, 3>, 2> p_high{};
    /// Fraction of High QoE in the training data.
    double empirical_prior = 0.5;

    double likelihood(Level qoe_class, const std::array<Level, 3>& input) const;
};

/// Laplace add-one estimates. Throws std::invalid_argument unless both QoE
/// classes are present.
NBModel nb_fit(std::span<const BinaryFeatures> samples);

/// High iff π·P(x|High) ≥ (1−π)·P(x|Low).
Level nb_predict(const NBModel& model, const std::array<Level, 3>& input, double prior_high);

inline constexpr std::array<double, 9> kDecisionPriors{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};

struct DecisionRow {
    std::array<Level, 3> input{};           // QoS, Int, QoR
    std::array<Level, 9> prediction{};      // one per prior
};

/// The 8 input combinations (QoS slowest, QoR fastest; Low before High)
/// against the given priors.
std::vector<DecisionRow> nb_decision_table(const NBModel& model,
                                           std::span<const double> priors = kDecisionPriors);

/// k-fold accuracy (percent) with each fold's model using its training
/// prior.
double nb_cv_accuracy(std::span<const BinaryFeatures> samples, std::size_t k = 5, std::uint64_t seed = 1);

}  // namespace qosrec
