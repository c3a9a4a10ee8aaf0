#include <doctest.h>

#include "qosrec/naive_bayes.hpp"
#include "qosrec/random.hpp"

using namespace qosrec;

namespace {

// Posterior P(QoE = High | x) by summing the full joint over all 16 cells.
double brute_posterior(const NBModel& m, const std::array<Level, 3>& x, double prior) {
    double num = 0.0, den = 0.0;
    for (int c = 0; c < 2; ++c)
        for (int code = 0; code < 8; ++code) {
            double joint = c ? prior : 1.0 - prior;
            bool match = true;
            for (int f = 0; f < 3; ++f) {
                const bool high = code & (4 >> f);
                joint *= high ? m.p_high[c][f] : 1.0 - m.p_high[c][f];
                match = match && (high == (x[f] == Level::High));
            }
            if (!match) continue;
            den += joint;
            if (c) num += joint;
        }
    return num / den;
}

}  // namespace

TEST_SUITE("naive_bayes") {

TEST_CASE("decision table agrees with brute-force posteriors") {
    Rng rng(3);
    int mismatches = 0, non_monotone = 0;
    for (int trial = 0; trial < 100; ++trial) {
        NBModel m;
        for (auto& row : m.p_high)
            for (double& p : row) p = 0.02 + 0.96 * uniform01(rng);
        const auto table = nb_decision_table(m);
        REQUIRE(table.size() == 8);
        for (const auto& row : table) {
            for (std::size_t j = 0; j < kDecisionPriors.size(); ++j) {
                const double post = brute_posterior(m, row.input, kDecisionPriors[j]);
                // skip exact ties, where rounding decides
                if (std::abs(post - 0.5) < 1e-12) continue;
                mismatches += (post > 0.5) != (row.prediction[j] == Level::High);
            }
            for (std::size_t j = 1; j < kDecisionPriors.size(); ++j)
                non_monotone += row.prediction[j - 1] == Level::High && row.prediction[j] == Level::Low;
        }
    }
    CHECK(mismatches == 0);
    CHECK(non_monotone == 0);
}

TEST_CASE("rows follow the input enumeration order") {
    const auto t = nb_decision_table(NBModel{});
    CHECK(t[0].input == std::array<Level, 3>{Level::Low, Level::Low, Level::Low});
    CHECK(t[1].input == std::array<Level, 3>{Level::Low, Level::Low, Level::High});
    CHECK(t[4].input == std::array<Level, 3>{Level::High, Level::Low, Level::Low});
    CHECK(t[7].input == std::array<Level, 3>{Level::High, Level::High, Level::High});
}

TEST_CASE("ties go to High") {
    NBModel m;
    m.p_high = {{{0.5, 0.5, 0.5}, {0.5, 0.5, 0.5}}};
    CHECK(nb_predict(m, {Level::Low, Level::Low, Level::Low}, 0.5) == Level::High);
}

TEST_CASE("laplace smoothing") {
    std::vector<BinaryFeatures> s{
        {Level::High, Level::High, Level::Low, Level::High},
        {Level::High, Level::Low, Level::Low, Level::High},
        {Level::Low, Level::Low, Level::High, Level::Low},
    };
    const NBModel m = nb_fit(s);
    CHECK(m.p_high[1][0] == doctest::Approx(3.0 / 4.0));
    CHECK(m.p_high[1][1] == doctest::Approx(2.0 / 4.0));
    CHECK(m.p_high[1][2] == doctest::Approx(1.0 / 4.0));
    CHECK(m.p_high[0][0] == doctest::Approx(1.0 / 3.0));
    CHECK(m.p_high[0][2] == doctest::Approx(2.0 / 3.0));
    CHECK(m.empirical_prior == doctest::Approx(2.0 / 3.0));
    s.pop_back();
    CHECK_THROWS(nb_fit(s));
}

TEST_CASE("binarized samples") {
    const auto b = binarize(Sample{4, 3, 5, 1});
    CHECK(b == BinaryFeatures{Level::High, Level::Low, Level::High, Level::Low});
}

TEST_CASE("cross-validated accuracy on separable data") {
    std::vector<BinaryFeatures> s;
    for (int i = 0; i < 200; ++i) {
        const Level l = i % 2 ? Level::High : Level::Low;
        s.push_back({l, l, Level::Low, l});
    }
    CHECK(nb_cv_accuracy(s) == 100.0);
}

}
