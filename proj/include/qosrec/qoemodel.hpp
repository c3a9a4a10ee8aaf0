// qosrec/qoemodel.hpp
//
// QoE prediction models over a design matrix: proportional-odds ordinal
// regression, multinomial logistic regression, least-squares linear
// regression, a two-hidden-layer MLP, and the Dummy / Vanilla-RS baselines.
// Includes k-fold cross validation and top-N feature sweeps.

#pragma once

#include <Eigen/Core>
#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "qosrec/features.hpp"
#include "qosrec/optimize.hpp"

namespace qosrec {

/// Clamp to [1,5] then round half up.
int round_rating(double value);

struct FitDiagnostics {
    int iterations = 0;
    bool converged = true;
    /// Empty unless the fit stopped on its iteration budget.
    std::string warning;
};

/// P(y ≤ k | x) = logistic(θ_k − w·x), k = 1..4.
struct OrdinalModel {
    Eigen::VectorXd weights;
    std::array<double, 4> thresholds{};
    FitDiagnostics diagnostics;

    double latent(const Eigen::VectorXd& row) const { return weights.dot(row); }
    std::array<double, 4> cumulative(const Eigen::VectorXd& row) const;
    std::array<double, 5> class_probabilities(const Eigen::VectorXd& row) const;
    /// Median category: smallest k with P(y ≤ k) ≥ 1/2.
    int predict(const Eigen::VectorXd& row) const;
    /// Weights divided by their L1 norm; thresholds rescaled by the same
    /// factor so every prediction is unchanged.
    OrdinalModel normalized() const;
};

struct LinearModel {
    Eigen::VectorXd weights;
    double intercept = 0.0;

    double output(const Eigen::VectorXd& row) const { return intercept + weights.dot(row); }
    int predict(const Eigen::VectorXd& row) const { return round_rating(output(row)); }
};

/// Multinomial over the five classes; row k of `weights` belongs to class k+1.
struct LogisticModel {
    Eigen::MatrixXd weights;    // 5 x p
    Eigen::VectorXd intercepts; // 5
    FitDiagnostics diagnostics;

    Eigen::VectorXd probabilities(const Eigen::VectorXd& row) const;
    int predict(const Eigen::VectorXd& row) const;
};

/// inputs → hidden1 (ReLU) → hidden2 (ReLU) → scalar. Parameters are stored
/// flat: W1 (h1×p, column-major), b1, W2 (h2×h1), b2, w3 (h2), b3.
struct MlpModel {
    std::size_t inputs = 0;
    std::size_t hidden1 = 16;
    std::size_t hidden2 = 16;
    std::vector<double> params;

    static std::size_t parameter_count(std::size_t inputs, std::size_t h1, std::size_t h2);
    double output(const Eigen::VectorXd& row) const;
    int predict(const Eigen::VectorXd& row) const { return round_rating(output(row)); }
};

/// Mean squared error of `model` over (x, y) and its gradient with respect
/// to model.params (written into `grad`).
double mlp_loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& x,
                             std::span<const double> y, std::span<double> grad);

struct DummyModel {
    int predict(const Eigen::VectorXd&) const { return 3; }
};

/// Predicts QoE = Int, read from the given design column.
struct VanillaModel {
    std::size_t interest_column = 0;
    int predict(const Eigen::VectorXd& row) const {
        return round_rating(row(static_cast<Eigen::Index>(interest_column)));
    }
};

using Model = std::variant<OrdinalModel, LinearModel, LogisticModel, MlpModel, DummyModel, VanillaModel>;

enum class ModelKind { Ordinal, Linear, Logistic, Mlp, Dummy, Vanilla };

std::string_view model_kind_name(ModelKind kind);
/// Accepts "ordinal", "linear", "logistic", "mlp", "dummy", "vanilla".
ModelKind parse_model_kind(std::string_view name);
ModelKind kind_of(const Model& model);

struct MlpOptions {
    std::size_t hidden1 = 16;
    std::size_t hidden2 = 16;
    int epochs = 200;
    std::size_t batch_size = 32;
    double learning_rate = 0.005;
    std::uint64_t seed = 17;
};

struct FitOptions {
    MinimizeOptions optimizer{};
    double logistic_l2 = 1e-3;
    MlpOptions mlp{};
};

/// Error thrown for unusable training data (too few rows, one class).
struct FitError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kMinTrainingRows = 50;

OrdinalModel fit_ordinal(const DesignMatrix& design, const FitOptions& options = {});
LinearModel fit_linear(const DesignMatrix& design, const FitOptions& options = {});
LogisticModel fit_logistic(const DesignMatrix& design, const FitOptions& options = {});
MlpModel fit_mlp(const DesignMatrix& design, const FitOptions& options = {});
/// Baselines need no data, except Vanilla which needs an "Int" column.
Model fit_model(ModelKind kind, const DesignMatrix& design, const FitOptions& options = {});

int predict(const Model& model, const Eigen::VectorXd& row);

/// L1-normalized weights with signs kept (ordinal and linear); empty for
/// the other kinds.
std::vector<double> normalized_weights(const Model& model);

struct ErrorSummary {
    std::size_t n = 0;
    double mae = 0.0;
    double bucket_exact = 0.0;  // % with |error| = 0
    double bucket_one = 0.0;    // % with |error| = 1
    double bucket_gt1 = 0.0;    // % with |error| > 1
};

ErrorSummary summarize_errors(std::span<const int> predicted, std::span<const int> truth);

struct FoldResult {
    std::size_t n_test = 0;
    double mae = 0.0;
};

struct EvalReport {
    ModelKind kind = ModelKind::Ordinal;
    std::vector<std::string> feature_names;
    std::size_t folds = 0;
    ErrorSummary errors;
    std::vector<FoldResult> per_fold;
    /// From a fit on all samples (GLMs only).
    std::vector<double> normalized_weights;
    std::vector<double> raw_weights;
};

/// Shuffled partition of 0..n-1 into k near-equal disjoint folds.
std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, std::uint64_t seed);

EvalReport cross_validate(std::span<const Sample> samples, const FeatureSpec& spec, ModelKind kind,
                          std::size_t k = 5, std::uint64_t seed = 1, const FitOptions& options = {},
                          unsigned jobs = 1);

struct SweepPoint {
    std::size_t n_features = 0;
    double mae = 0.0;
    std::vector<std::string> features;  // in spec order
};

struct FeatureSweep {
    /// Feature names ordered by decreasing |normalized weight| of the full fit.
    std::vector<std::string> ranking;
    std::vector<double> ranked_weights;
    std::vector<SweepPoint> points;  // N = 1..|spec|
};

FeatureSweep feature_sweep(std::span<const Sample> samples, const FeatureSpec& spec,
                           ModelKind kind = ModelKind::Ordinal, std::uint64_t seed = 1,
                           std::size_t k = 5, const FitOptions& options = {});

/// Model (de)serialization. The JSON carries the feature names so that a
/// loaded model can rebuild its design rows.
nlohmann::json model_to_json(const Model& model, const FeatureSpec& spec,
                             const nlohmann::json& hyperparameters = nlohmann::json::object());
struct LoadedModel {
    Model model;
    FeatureSpec spec;
};
LoadedModel model_from_json(const nlohmann::json& j);

}  // namespace qosrec
