// qoemodel.cpp

#include "qosrec/qoemodel.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "qosrec/parallel.hpp"
#include "qosrec/random.hpp"

namespace qosrec {

int round_rating(double value) {
    if (!std::isfinite(value)) return value > 0 ? 5 : 1;
    double clamped = std::clamp(value, 1.0, 5.0);
    return static_cast<int>(std::floor(clamped + 0.5));
}

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    double e = std::exp(z);
    return e / (1.0 + e);
}

double log_sigmoid(double z) {
    return z >= 0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
}

void check_trainable(const DesignMatrix& d) {
    if (d.rows() < kMinTrainingRows)
        throw FitError("need at least " + std::to_string(kMinTrainingRows) + " training rows, got " +
                       std::to_string(d.rows()));
    std::array<std::size_t, 5> counts{};
    for (int y : d.labels) {
        if (y < 1 || y > 5) throw FitError("label outside 1..5");
        ++counts[static_cast<std::size_t>(y - 1)];
    }
    if (std::count_if(counts.begin(), counts.end(), [](std::size_t c) { return c > 0; }) < 2)
        throw FitError("labels cover a single class");
}

Eigen::VectorXd row_of(const DesignMatrix& d, std::size_t i) {
    return d.x.row(static_cast<Eigen::Index>(i)).transpose();
}

}  // namespace

// ---------------------------------------------------------------- ordinal

std::array<double, 4> OrdinalModel::cumulative(const Eigen::VectorXd& row) const {
    const double s = latent(row);
    std::array<double, 4> c{};
    for (std::size_t k = 0; k < 4; ++k) c[k] = sigmoid(thresholds[k] - s);
    return c;
}

std::array<double, 5> OrdinalModel::class_probabilities(const Eigen::VectorXd& row) const {
    auto c = cumulative(row);
    return {c[0], c[1] - c[0], c[2] - c[1], c[3] - c[2], 1.0 - c[3]};
}

int OrdinalModel::predict(const Eigen::VectorXd& row) const {
    // P(y ≤ k) ≥ 1/2  ⇔  θ_k ≥ s
    const double s = latent(row);
    int label = 1;
    for (double t : thresholds)
        if (t < s) ++label;
    return label;
}

OrdinalModel OrdinalModel::normalized() const {
    OrdinalModel out = *this;
    const double l1 = weights.lpNorm<1>();
    if (l1 <= 0.0) return out;
    out.weights /= l1;
    for (double& t : out.thresholds) t /= l1;
    return out;
}

namespace {

// Parameter vector: [w_1..w_p, θ_1, log(θ_2−θ_1), log(θ_3−θ_2), log(θ_4−θ_3)].
std::array<double, 4> unpack_thresholds(std::span<const double> v, std::size_t p) {
    std::array<double, 4> t{};
    t[0] = v[p];
    for (std::size_t j = 1; j < 4; ++j) t[j] = t[j - 1] + std::exp(v[p + j]);
    return t;
}

double ordinal_nll(const DesignMatrix& d, std::span<const double> v, std::span<double> grad) {
    const std::size_t p = d.cols();
    const std::size_t n = d.rows();
    const auto theta = unpack_thresholds(v, p);
    Eigen::Map<const Eigen::VectorXd> w(v.data(), static_cast<Eigen::Index>(p));
    const Eigen::VectorXd s = d.x * w;

    Eigen::VectorXd dw = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(p));
    std::array<double, 4> dtheta{};
    double loglik = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int y = d.labels[i];
        const double si = s(static_cast<Eigen::Index>(i));
        double d_upper = 0.0, d_lower = 0.0;  // ∂ log p / ∂(θ_y − s), ∂(θ_{y−1} − s)
        if (y == 1) {
            double b = theta[0] - si;
            loglik += log_sigmoid(b);
            d_upper = sigmoid(-b);
        } else if (y == 5) {
            double a = theta[3] - si;
            loglik += log_sigmoid(-a);
            d_lower = -sigmoid(a);
        } else {
            double b = theta[static_cast<std::size_t>(y - 1)] - si;
            double a = theta[static_cast<std::size_t>(y - 2)] - si;
            double gap = b - a;
            double inv = 1.0 / std::expm1(gap);
            loglik += log_sigmoid(b) + log_sigmoid(-a) + std::log(-std::expm1(-gap));
            d_upper = sigmoid(-b) + inv;
            d_lower = -sigmoid(a) - inv;
        }
        if (y <= 4) dtheta[static_cast<std::size_t>(y - 1)] += d_upper;
        if (y >= 2) dtheta[static_cast<std::size_t>(y - 2)] += d_lower;
        dw -= (d_upper + d_lower) * d.x.row(static_cast<Eigen::Index>(i)).transpose();
    }

    const double scale = -1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < p; ++j) grad[j] = scale * dw(static_cast<Eigen::Index>(j));
    double tail = 0.0;
    for (std::size_t k = 4; k-- > 1;) {
        tail += dtheta[k];
        grad[p + k] = scale * tail * std::exp(v[p + k]);
    }
    grad[p] = scale * (tail + dtheta[0]);
    return scale * loglik;
}

}  // namespace

OrdinalModel fit_ordinal(const DesignMatrix& design, const FitOptions& options) {
    check_trainable(design);
    const std::size_t p = design.cols();
    const std::size_t n = design.rows();

    // Start from w = 0 with thresholds at the empirical cumulative logits.
    std::array<double, 5> counts{};
    for (int y : design.labels) counts[static_cast<std::size_t>(y - 1)] += 1.0;
    std::array<double, 4> theta{};
    double cum = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        cum += counts[k];
        double q = (cum + 0.5) / (static_cast<double>(n) + 1.0);
        theta[k] = std::log(q / (1.0 - q));
        if (k > 0) theta[k] = std::max(theta[k], theta[k - 1] + 1e-2);
    }
    std::vector<double> x0(p + 4, 0.0);
    x0[p] = theta[0];
    for (std::size_t k = 1; k < 4; ++k) x0[p + k] = std::log(theta[k] - theta[k - 1]);

    auto result = minimize_lbfgs(
        [&](std::span<const double> v, std::span<double> g) { return ordinal_nll(design, v, g); },
        std::move(x0), options.optimizer);

    OrdinalModel m;
    m.weights = Eigen::Map<const Eigen::VectorXd>(result.x.data(), static_cast<Eigen::Index>(p));
    m.thresholds = unpack_thresholds(result.x, p);
    m.diagnostics.iterations = result.iterations;
    m.diagnostics.converged = result.converged;
    if (!result.converged) m.diagnostics.warning = "ordinal fit stopped on its iteration budget";
    return m;
}

// ----------------------------------------------------------------- linear

LinearModel fit_linear(const DesignMatrix& design, const FitOptions&) {
    check_trainable(design);
    const auto n = static_cast<Eigen::Index>(design.rows());
    const auto p = static_cast<Eigen::Index>(design.cols());
    Eigen::MatrixXd a(n, p + 1);
    a.col(0).setOnes();
    a.rightCols(p) = design.x;
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) y(i) = design.labels[static_cast<std::size_t>(i)];
    // Minimum-norm solution; meta columns can be exactly collinear.
    Eigen::VectorXd beta = a.completeOrthogonalDecomposition().solve(y);
    LinearModel m;
    m.intercept = beta(0);
    m.weights = beta.tail(p);
    return m;
}

// --------------------------------------------------------------- logistic

Eigen::VectorXd LogisticModel::probabilities(const Eigen::VectorXd& row) const {
    Eigen::VectorXd z = weights * row + intercepts;
    z.array() -= z.maxCoeff();
    Eigen::VectorXd e = z.array().exp();
    return e / e.sum();
}

int LogisticModel::predict(const Eigen::VectorXd& row) const {
    Eigen::VectorXd z = weights * row + intercepts;
    Eigen::Index best = 0;
    for (Eigen::Index k = 1; k < z.size(); ++k)
        if (z(k) > z(best)) best = k;
    return static_cast<int>(best) + 1;
}

LogisticModel fit_logistic(const DesignMatrix& design, const FitOptions& options) {
    check_trainable(design);
    const auto n = static_cast<Eigen::Index>(design.rows());
    const auto p = static_cast<Eigen::Index>(design.cols());
    const double l2 = options.logistic_l2;
    // Parameters: 5 x (p + 1) column-major; column 0 holds intercepts.
    auto objective = [&](std::span<const double> v, std::span<double> g) {
        Eigen::Map<const Eigen::MatrixXd> theta(v.data(), 5, p + 1);
        Eigen::Map<Eigen::MatrixXd> grad(g.data(), 5, p + 1);
        Eigen::MatrixXd z = design.x * theta.rightCols(p).transpose();  // n x 5
        z.rowwise() += theta.col(0).transpose();
        double nll = 0.0;
        Eigen::MatrixXd resid(n, 5);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mx = z.row(i).maxCoeff();
            Eigen::RowVectorXd e = (z.row(i).array() - mx).exp();
            const double total = e.sum();
            const int y = design.labels[static_cast<std::size_t>(i)] - 1;
            nll -= z(i, y) - mx - std::log(total);
            resid.row(i) = e / total;
            resid(i, y) -= 1.0;
        }
        const double inv_n = 1.0 / static_cast<double>(n);
        grad.col(0) = resid.colwise().sum().transpose() * inv_n;
        grad.rightCols(p) = resid.transpose() * design.x * inv_n + l2 * theta.rightCols(p);
        return nll * inv_n + 0.5 * l2 * theta.rightCols(p).squaredNorm();
    };
    std::vector<double> x0(static_cast<std::size_t>(5 * (p + 1)), 0.0);
    auto result = minimize_lbfgs(objective, std::move(x0), options.optimizer);
    Eigen::Map<const Eigen::MatrixXd> theta(result.x.data(), 5, p + 1);
    LogisticModel m;
    m.intercepts = theta.col(0);
    m.weights = theta.rightCols(p);
    m.diagnostics.iterations = result.iterations;
    m.diagnostics.converged = result.converged;
    if (!result.converged) m.diagnostics.warning = "logistic fit stopped on its iteration budget";
    return m;
}

// -------------------------------------------------------------------- MLP

std::size_t MlpModel::parameter_count(std::size_t inputs, std::size_t h1, std::size_t h2) {
    return h1 * inputs + h1 + h2 * h1 + h2 + h2 + 1;
}

namespace {

struct MlpView {
    Eigen::Map<const Eigen::MatrixXd> w1;
    Eigen::Map<const Eigen::VectorXd> b1;
    Eigen::Map<const Eigen::MatrixXd> w2;
    Eigen::Map<const Eigen::VectorXd> b2;
    Eigen::Map<const Eigen::VectorXd> w3;
    double b3;

    static MlpView of(const MlpModel& m) {
        const auto p = static_cast<Eigen::Index>(m.inputs);
        const auto h1 = static_cast<Eigen::Index>(m.hidden1);
        const auto h2 = static_cast<Eigen::Index>(m.hidden2);
        const double* ptr = m.params.data();
        const double* pw1 = ptr;
        const double* pb1 = pw1 + h1 * p;
        const double* pw2 = pb1 + h1;
        const double* pb2 = pw2 + h2 * h1;
        const double* pw3 = pb2 + h2;
        return {Eigen::Map<const Eigen::MatrixXd>(pw1, h1, p), Eigen::Map<const Eigen::VectorXd>(pb1, h1),
                Eigen::Map<const Eigen::MatrixXd>(pw2, h2, h1), Eigen::Map<const Eigen::VectorXd>(pb2, h2),
                Eigen::Map<const Eigen::VectorXd>(pw3, h2), pw3[h2]};
    }
};

}  // namespace

double MlpModel::output(const Eigen::VectorXd& row) const {
    auto v = MlpView::of(*this);
    Eigen::VectorXd h1 = (v.w1 * row + v.b1).cwiseMax(0.0);
    Eigen::VectorXd h2 = (v.w2 * h1 + v.b2).cwiseMax(0.0);
    return v.w3.dot(h2) + v.b3;
}

double mlp_loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& x,
                             std::span<const double> y, std::span<double> grad) {
    auto v = MlpView::of(model);
    const auto n = x.rows();
    const auto p = static_cast<Eigen::Index>(model.inputs);
    const auto h1 = static_cast<Eigen::Index>(model.hidden1);
    const auto h2 = static_cast<Eigen::Index>(model.hidden2);

    Eigen::MatrixXd z1 = x * v.w1.transpose();
    z1.rowwise() += v.b1.transpose();
    Eigen::MatrixXd a1 = z1.cwiseMax(0.0);
    Eigen::MatrixXd z2 = a1 * v.w2.transpose();
    z2.rowwise() += v.b2.transpose();
    Eigen::MatrixXd a2 = z2.cwiseMax(0.0);
    Eigen::VectorXd out = a2 * v.w3;
    out.array() += v.b3;

    Eigen::Map<const Eigen::VectorXd> target(y.data(), n);
    Eigen::VectorXd resid = out - target;
    const double loss = resid.squaredNorm() / static_cast<double>(n);

    Eigen::VectorXd dout = 2.0 * resid / static_cast<double>(n);
    Eigen::MatrixXd dz2 = (dout * v.w3.transpose()).array() * (z2.array() > 0.0).cast<double>();
    Eigen::MatrixXd dz1 = (dz2 * v.w2).array() * (z1.array() > 0.0).cast<double>();

    double* g = grad.data();
    Eigen::Map<Eigen::MatrixXd>(g, h1, p) = dz1.transpose() * x;
    g += h1 * p;
    Eigen::Map<Eigen::VectorXd>(g, h1) = dz1.colwise().sum().transpose();
    g += h1;
    Eigen::Map<Eigen::MatrixXd>(g, h2, h1) = dz2.transpose() * a1;
    g += h2 * h1;
    Eigen::Map<Eigen::VectorXd>(g, h2) = dz2.colwise().sum().transpose();
    g += h2;
    Eigen::Map<Eigen::VectorXd>(g, h2) = a2.transpose() * dout;
    g += h2;
    *g = dout.sum();
    return loss;
}

MlpModel fit_mlp(const DesignMatrix& design, const FitOptions& options) {
    check_trainable(design);
    const MlpOptions& o = options.mlp;
    MlpModel m;
    m.inputs = design.cols();
    m.hidden1 = o.hidden1;
    m.hidden2 = o.hidden2;
    m.params.assign(MlpModel::parameter_count(m.inputs, m.hidden1, m.hidden2), 0.0);

    Rng rng(o.seed);
    // He-uniform weights, zero biases, output bias at the label mean.
    auto init = [&](std::size_t offset, std::size_t count, std::size_t fan_in) {
        const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
        for (std::size_t i = 0; i < count; ++i)
            m.params[offset + i] = (2.0 * uniform01(rng) - 1.0) * limit;
    };
    const std::size_t p = m.inputs, h1 = m.hidden1, h2 = m.hidden2;
    init(0, h1 * p, p);
    init(h1 * p + h1, h2 * h1, h1);
    init(h1 * p + h1 + h2 * h1 + h2, h2, h2);
    double mean_label = 0.0;
    for (int y : design.labels) mean_label += y;
    mean_label /= static_cast<double>(design.rows());
    m.params.back() = mean_label;

    const std::size_t n = design.rows();
    const std::size_t batch = std::max<std::size_t>(1, std::min(o.batch_size, n));
    std::vector<double> adam_m(m.params.size(), 0.0), adam_v(m.params.size(), 0.0), grad(m.params.size());
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    constexpr double beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
    long step = 0;
    Eigen::MatrixXd xb;
    std::vector<double> yb;
    for (int epoch = 0; epoch < o.epochs; ++epoch) {
        shuffle(order, rng);
        for (std::size_t start = 0; start < n; start += batch) {
            const std::size_t len = std::min(batch, n - start);
            xb.resize(static_cast<Eigen::Index>(len), static_cast<Eigen::Index>(p));
            yb.resize(len);
            for (std::size_t r = 0; r < len; ++r) {
                xb.row(static_cast<Eigen::Index>(r)) = design.x.row(static_cast<Eigen::Index>(order[start + r]));
                yb[r] = design.labels[order[start + r]];
            }
            mlp_loss_and_gradient(m, xb, yb, grad);
            ++step;
            const double c1 = 1.0 - std::pow(beta1, static_cast<double>(step));
            const double c2 = 1.0 - std::pow(beta2, static_cast<double>(step));
            for (std::size_t i = 0; i < grad.size(); ++i) {
                adam_m[i] = beta1 * adam_m[i] + (1 - beta1) * grad[i];
                adam_v[i] = beta2 * adam_v[i] + (1 - beta2) * grad[i] * grad[i];
                m.params[i] -= o.learning_rate * (adam_m[i] / c1) / (std::sqrt(adam_v[i] / c2) + eps);
            }
        }
    }
    return m;
}

// ---------------------------------------------------------------- generic

std::string_view model_kind_name(ModelKind kind) {
    switch (kind) {
        case ModelKind::Ordinal: return "ordinal";
        case ModelKind::Linear: return "linear";
        case ModelKind::Logistic: return "logistic";
        case ModelKind::Mlp: return "mlp";
        case ModelKind::Dummy: return "dummy";
        case ModelKind::Vanilla: return "vanilla";
    }
    return "?";
}

ModelKind parse_model_kind(std::string_view name) {
    for (ModelKind k : {ModelKind::Ordinal, ModelKind::Linear, ModelKind::Logistic, ModelKind::Mlp,
                        ModelKind::Dummy, ModelKind::Vanilla})
        if (model_kind_name(k) == name) return k;
    throw std::invalid_argument("unknown model kind '" + std::string(name) + "'");
}

ModelKind kind_of(const Model& model) {
    return static_cast<ModelKind>(model.index());
}

namespace {

std::size_t interest_column(const std::vector<std::string>& names) {
    auto it = std::find(names.begin(), names.end(), "Int");
    if (it == names.end()) throw std::invalid_argument("vanilla baseline needs an 'Int' feature");
    return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

Model fit_model(ModelKind kind, const DesignMatrix& design, const FitOptions& options) {
    switch (kind) {
        case ModelKind::Ordinal: return fit_ordinal(design, options);
        case ModelKind::Linear: return fit_linear(design, options);
        case ModelKind::Logistic: return fit_logistic(design, options);
        case ModelKind::Mlp: return fit_mlp(design, options);
        case ModelKind::Dummy: return DummyModel{};
        case ModelKind::Vanilla: return VanillaModel{interest_column(design.feature_names)};
    }
    throw std::invalid_argument("unknown model kind");
}

int predict(const Model& model, const Eigen::VectorXd& row) {
    return std::visit([&](const auto& m) { return m.predict(row); }, model);
}

std::vector<double> normalized_weights(const Model& model) {
    Eigen::VectorXd w;
    if (auto* o = std::get_if<OrdinalModel>(&model))
        w = o->weights;
    else if (auto* l = std::get_if<LinearModel>(&model))
        w = l->weights;
    else
        return {};
    const double l1 = w.lpNorm<1>();
    if (l1 > 0.0) w /= l1;
    return {w.data(), w.data() + w.size()};
}

ErrorSummary summarize_errors(std::span<const int> predicted, std::span<const int> truth) {
    if (predicted.size() != truth.size())
        throw std::invalid_argument("prediction and truth lengths differ");
    ErrorSummary s;
    s.n = truth.size();
    if (s.n == 0) return s;
    std::size_t exact = 0, one = 0, more = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < s.n; ++i) {
        int e = std::abs(predicted[i] - truth[i]);
        total += e;
        if (e == 0)
            ++exact;
        else if (e == 1)
            ++one;
        else
            ++more;
    }
    const double n = static_cast<double>(s.n);
    s.mae = total / n;
    s.bucket_exact = 100.0 * static_cast<double>(exact) / n;
    s.bucket_one = 100.0 * static_cast<double>(one) / n;
    s.bucket_gt1 = 100.0 * static_cast<double>(more) / n;
    return s;
}

std::vector<std::vector<std::size_t>> make_folds(std::size_t n, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("cross validation needs k >= 2");
    if (n < k) throw std::invalid_argument("fewer samples than folds");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    shuffle(idx, rng);
    std::vector<std::vector<std::size_t>> folds(k);
    for (std::size_t f = 0; f < k; ++f)
        folds[f].assign(idx.begin() + static_cast<std::ptrdiff_t>(f * n / k),
                        idx.begin() + static_cast<std::ptrdiff_t>((f + 1) * n / k));
    return folds;
}

EvalReport cross_validate(std::span<const Sample> samples, const FeatureSpec& spec, ModelKind kind,
                          std::size_t k, std::uint64_t seed, const FitOptions& options, unsigned jobs) {
    spec.validate();
    const auto folds = make_folds(samples.size(), k, seed);
    const DesignMatrix all = build_design(samples, spec);

    std::vector<int> predicted(samples.size(), 0);
    EvalReport report;
    report.kind = kind;
    report.feature_names = all.feature_names;
    report.folds = k;
    report.per_fold.resize(k);

    parallel_for(k, jobs, [&](std::size_t f) {
        std::vector<char> is_test(samples.size(), 0);
        for (std::size_t i : folds[f]) is_test[i] = 1;
        std::vector<Sample> train;
        train.reserve(samples.size() - folds[f].size());
        for (std::size_t i = 0; i < samples.size(); ++i)
            if (!is_test[i]) train.push_back(samples[i]);
        const Model model = fit_model(kind, build_design(train, spec), options);
        std::vector<int> fold_pred, fold_truth;
        for (std::size_t i : folds[f]) {
            predicted[i] = predict(model, row_of(all, i));
            fold_pred.push_back(predicted[i]);
            fold_truth.push_back(all.labels[i]);
        }
        report.per_fold[f] = {folds[f].size(), summarize_errors(fold_pred, fold_truth).mae};
    });

    report.errors = summarize_errors(predicted, all.labels);
    if ((kind == ModelKind::Ordinal || kind == ModelKind::Linear) && samples.size() >= kMinTrainingRows) {
        const Model full = fit_model(kind, all, options);
        report.normalized_weights = normalized_weights(full);
        const Eigen::VectorXd& w = kind == ModelKind::Ordinal ? std::get<OrdinalModel>(full).weights
                                                               : std::get<LinearModel>(full).weights;
        report.raw_weights.assign(w.data(), w.data() + w.size());
    }
    return report;
}

FeatureSweep feature_sweep(std::span<const Sample> samples, const FeatureSpec& spec, ModelKind kind,
                           std::uint64_t seed, std::size_t k, const FitOptions& options) {
    spec.validate();
    if (spec.size() < 2) throw std::invalid_argument("feature sweep needs at least two features");
    if (kind != ModelKind::Ordinal && kind != ModelKind::Linear)
        throw std::invalid_argument("feature sweep ranks by GLM weights (ordinal or linear)");

    const std::vector<double> w = normalized_weights(fit_model(kind, build_design(samples, spec), options));
    std::vector<std::size_t> order(spec.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return std::abs(w[a]) > std::abs(w[b]); });

    FeatureSweep sweep;
    for (std::size_t i : order) {
        sweep.ranking.push_back(spec.features[i].name());
        sweep.ranked_weights.push_back(w[i]);
    }
    for (std::size_t top = 1; top <= spec.size(); ++top) {
        std::vector<char> keep(spec.size(), 0);
        for (std::size_t r = 0; r < top; ++r) keep[order[r]] = 1;
        FeatureSpec sub;
        sub.allow_ratio = spec.allow_ratio;
        for (std::size_t j = 0; j < spec.size(); ++j)
            if (keep[j]) sub.features.push_back(spec.features[j]);
        EvalReport r = cross_validate(samples, sub, kind, k, seed, options);
        sweep.points.push_back({top, r.errors.mae, sub.names()});
    }
    return sweep;
}

// ----------------------------------------------------------- persistence

namespace {

std::vector<double> to_vec(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

Eigen::VectorXd from_vec(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

nlohmann::json model_to_json(const Model& model, const FeatureSpec& spec,
                             const nlohmann::json& hyperparameters) {
    nlohmann::json j;
    j["format"] = "qosrec.model/1";
    j["kind"] = std::string(model_kind_name(kind_of(model)));
    j["features"] = spec.names();
    j["allow_ratio"] = spec.allow_ratio;
    j["hyperparameters"] = hyperparameters;
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, OrdinalModel>) {
                j["weights"] = to_vec(m.weights);
                j["thresholds"] = m.thresholds;
                j["normalized_weights"] = normalized_weights(model);
                j["converged"] = m.diagnostics.converged;
            } else if constexpr (std::is_same_v<T, LinearModel>) {
                j["weights"] = to_vec(m.weights);
                j["intercept"] = m.intercept;
                j["normalized_weights"] = normalized_weights(model);
            } else if constexpr (std::is_same_v<T, LogisticModel>) {
                nlohmann::json rows = nlohmann::json::array();
                for (Eigen::Index k = 0; k < m.weights.rows(); ++k)
                    rows.push_back(to_vec(m.weights.row(k).transpose()));
                j["weights"] = rows;
                j["intercepts"] = to_vec(m.intercepts);
                j["converged"] = m.diagnostics.converged;
            } else if constexpr (std::is_same_v<T, MlpModel>) {
                j["inputs"] = m.inputs;
                j["hidden1"] = m.hidden1;
                j["hidden2"] = m.hidden2;
                j["params"] = m.params;
            } else if constexpr (std::is_same_v<T, VanillaModel>) {
                j["interest_column"] = m.interest_column;
            }
        },
        model);
    return j;
}

LoadedModel model_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "qosrec.model/1")
        throw std::invalid_argument("not a qosrec model document");
    const auto names = j.at("features").get<std::vector<std::string>>();
    FeatureSpec spec = FeatureSpec::from_names(names, j.value("allow_ratio", false));
    const ModelKind kind = parse_model_kind(j.at("kind").get<std::string>());
    const auto p = static_cast<Eigen::Index>(spec.size());
    auto check_len = [&](Eigen::Index got) {
        if (got != p) throw std::invalid_argument("model weights do not match its feature list");
    };
    switch (kind) {
        case ModelKind::Ordinal: {
            OrdinalModel m;
            m.weights = from_vec(j.at("weights").get<std::vector<double>>());
            check_len(m.weights.size());
            m.thresholds = j.at("thresholds").get<std::array<double, 4>>();
            for (std::size_t k = 1; k < 4; ++k)
                if (!(m.thresholds[k] > m.thresholds[k - 1]))
                    throw std::invalid_argument("ordinal thresholds must be strictly increasing");
            m.diagnostics.converged = j.value("converged", true);
            return {m, spec};
        }
        case ModelKind::Linear: {
            LinearModel m;
            m.weights = from_vec(j.at("weights").get<std::vector<double>>());
            check_len(m.weights.size());
            m.intercept = j.at("intercept").get<double>();
            return {m, spec};
        }
        case ModelKind::Logistic: {
            LogisticModel m;
            const auto rows = j.at("weights").get<std::vector<std::vector<double>>>();
            if (rows.size() != 5) throw std::invalid_argument("logistic model needs 5 class rows");
            m.weights.resize(5, p);
            for (Eigen::Index k = 0; k < 5; ++k) {
                check_len(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(k)].size()));
                m.weights.row(k) = from_vec(rows[static_cast<std::size_t>(k)]).transpose();
            }
            m.intercepts = from_vec(j.at("intercepts").get<std::vector<double>>());
            if (m.intercepts.size() != 5) throw std::invalid_argument("logistic model needs 5 intercepts");
            return {m, spec};
        }
        case ModelKind::Mlp: {
            MlpModel m;
            m.inputs = j.at("inputs").get<std::size_t>();
            m.hidden1 = j.at("hidden1").get<std::size_t>();
            m.hidden2 = j.at("hidden2").get<std::size_t>();
            m.params = j.at("params").get<std::vector<double>>();
            check_len(static_cast<Eigen::Index>(m.inputs));
            if (m.params.size() != MlpModel::parameter_count(m.inputs, m.hidden1, m.hidden2))
                throw std::invalid_argument("MLP parameter count does not match its layer sizes");
            return {m, spec};
        }
        case ModelKind::Dummy: return {DummyModel{}, spec};
        case ModelKind::Vanilla: {
            VanillaModel m{j.at("interest_column").get<std::size_t>()};
            if (m.interest_column >= spec.size())
                throw std::invalid_argument("vanilla interest column out of range");
            return {m, spec};
        }
    }
    throw std::invalid_argument("unknown model kind");
}

}  // namespace qosrec
