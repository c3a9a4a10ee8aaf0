// naive_bayes.cpp

#include "qosrec/naive_bayes.hpp"

#include <stdexcept>

#include "qosrec/qoemodel.hpp"

namespace qosrec {

BinaryFeatures binarize(const Sample& s) {
    return {binarize(s.qos), binarize(s.interest), binarize(s.qor), binarize(s.qoe)};
}

std::vector<BinaryFeatures> binarize(std::span<const Sample> samples) {
    std::vector<BinaryFeatures> out;
    out.reserve(samples.size());
    for (const auto& s : samples) out.push_back(binarize(s));
    return out;
}

double NBModel::likelihood(Level qoe_class, const std::array<Level, 3>& input) const {
    const auto& p = p_high[qoe_class == Level::High ? 1 : 0];
    double l = 1.0;
    for (std::size_t f = 0; f < 3; ++f) l *= input[f] == Level::High ? p[f] : 1.0 - p[f];
    return l;
}

NBModel nb_fit(std::span<const BinaryFeatures> samples) {
    std::array<double, 2> n_class{};
    std::array<std::array<double, 3>, 2> n_high{};
    for (const auto& s : samples) {
        const std::size_t c = s.qoe == Level::High ? 1 : 0;
        n_class[c] += 1.0;
        const auto in = s.inputs();
        for (std::size_t f = 0; f < 3; ++f)
            if (in[f] == Level::High) n_high[c][f] += 1.0;
    }
    if (n_class[0] == 0.0 || n_class[1] == 0.0)
        throw std::invalid_argument("nb_fit: samples must cover both QoE classes");
    NBModel m;
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t f = 0; f < 3; ++f) m.p_high[c][f] = (n_high[c][f] + 1.0) / (n_class[c] + 2.0);
    m.empirical_prior = n_class[1] / (n_class[0] + n_class[1]);
    return m;
}

Level nb_predict(const NBModel& model, const std::array<Level, 3>& input, double prior_high) {
    const double high = prior_high * model.likelihood(Level::High, input);
    const double low = (1.0 - prior_high) * model.likelihood(Level::Low, input);
    return high >= low ? Level::High : Level::Low;
}

std::vector<DecisionRow> nb_decision_table(const NBModel& model, std::span<const double> priors) {
    if (priors.size() != 9) throw std::invalid_argument("decision table expects 9 priors");
    std::vector<DecisionRow> rows;
    for (int code = 0; code < 8; ++code) {
        DecisionRow row;
        row.input = {(code & 4) ? Level::High : Level::Low, (code & 2) ? Level::High : Level::Low,
                     (code & 1) ? Level::High : Level::Low};
        for (std::size_t j = 0; j < priors.size(); ++j) row.prediction[j] = nb_predict(model, row.input, priors[j]);
        rows.push_back(row);
    }
    return rows;
}

double nb_cv_accuracy(std::span<const BinaryFeatures> samples, std::size_t k, std::uint64_t seed) {
    const auto folds = make_folds(samples.size(), k, seed);
    std::size_t correct = 0;
    for (const auto& fold : folds) {
        std::vector<char> is_test(samples.size(), 0);
        for (std::size_t i : fold) is_test[i] = 1;
        std::vector<BinaryFeatures> train;
        for (std::size_t i = 0; i < samples.size(); ++i)
            if (!is_test[i]) train.push_back(samples[i]);
        const NBModel m = nb_fit(train);
        for (std::size_t i : fold)
            if (nb_predict(m, samples[i].inputs(), m.empirical_prior) == samples[i].qoe) ++correct;
    }
    return 100.0 * static_cast<double>(correct) / static_cast<double>(samples.size());
}

}  // namespace qosrec
