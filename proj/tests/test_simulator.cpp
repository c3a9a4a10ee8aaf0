#include <doctest.h>

#include <cmath>
#include <numeric>

#include "qosrec/catalog.hpp"
#include "qosrec/simulator.hpp"

using namespace qosrec;

namespace {

struct Fixture {
    Catalog catalog;
    CacheSet cache;

    explicit Fixture(std::size_t n_videos = 3000, std::size_t degree = 20, std::size_t capacity = 200,
                     double bias = 0.5) {
        CatalogConfig cfg;
        cfg.n_videos = n_videos;
        cfg.related_out_degree = degree;
        cfg.related_popularity_bias = bias;
        cfg.seed = 3;
        catalog = generate_catalog(cfg);
        cache = build_cache_set(catalog.videos, catalog.graph, catalog.trending, capacity);
    }
    SimulationWorld world() const { return {catalog.graph, cache, catalog.trending}; }
};

}  // namespace

TEST_SUITE("simulator") {

TEST_CASE("click probabilities") {
    const auto u = click_probabilities({ClickKind::Uniform, 0.78}, 5);
    for (double p : u) CHECK(p == doctest::Approx(0.2));

    // Hand normalization of i^-0.78.
    double h[5], z = 0.0;
    for (int i = 0; i < 5; ++i) z += h[i] = std::pow(i + 1.0, -0.78);
    const auto zipf = click_probabilities({ClickKind::Zipf, 0.78}, 5);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(zipf[i] - h[i] / z) < 1e-12);
    CHECK(std::abs(zipf[0] - 0.380) < 0.001);
    CHECK(std::abs(zipf[4] - 0.108) < 0.001);
    for (int i = 1; i < 5; ++i) CHECK(zipf[i] < zipf[i - 1]);
    CHECK(std::accumulate(zipf.begin(), zipf.end(), 0.0) == doctest::Approx(1.0));

    const auto flat = click_probabilities({ClickKind::Zipf, 0.0}, 5);
    for (double p : flat) CHECK(p == doctest::Approx(0.2));
    CHECK_THROWS(click_probabilities({ClickKind::Uniform, 0.78}, 0));

    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t pos = draw_click({ClickKind::Zipf, 0.78}, 3, rng);
        CHECK(pos >= 1);
        CHECK(pos <= 3);
    }
}

TEST_CASE("tilting reaches the target mean") {
    const RatingModel rm;
    CHECK(std::abs(pmf_mean(rm.qor_base) - 3.6) < 1e-9);
    const RatingPmf t = tilt_to_mean(rm.qor_base, 3.4);
    CHECK(std::abs(pmf_mean(t) - 3.4) < 1e-9);
    CHECK(std::accumulate(t.begin(), t.end(), 0.0) == doctest::Approx(1.0));
    CHECK_THROWS(tilt_to_mean(rm.qor_base, 5.0));
}

TEST_CASE("default QoS pmfs match the calibration means") {
    const RatingModel rm;
    CHECK(std::abs(pmf_mean(rm.qos_high) - 4.30) < 1e-9);
    CHECK(std::abs(pmf_mean(rm.qos_low) - 1.87) < 1e-9);
}

TEST_CASE("QoE generator distribution matches sampling") {
    const QoeGenerator gen;
    Rng rng(11);
    for (auto [q, i] : {std::pair{1, 5}, {3, 3}, {5, 2}, {4, 4}}) {
        const RatingPmf exact = gen.distribution(q, i);
        std::array<int, 5> counts{};
        const int n = 40000;
        for (int k = 0; k < n; ++k) ++counts[gen.sample(q, i, rng) - 1];
        for (int k = 0; k < 5; ++k) CHECK(std::abs(counts[k] / double(n) - exact[k]) < 0.01);
    }
}

TEST_CASE("abandon probability stays in [0,1] and hits the boundaries") {
    AbandonModel a;
    for (int i = 1; i <= 5; ++i)
        for (int q = 1; q <= 5; ++q) {
            double p = a.probability(i, q);
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }
    CHECK(a.probability(3, 3) == doctest::Approx(a.base_rate));
    a.base_rate = 0.0;
    CHECK(a.probability(1, 1) == 0.0);
    a.base_rate = 1.0;
    CHECK(a.probability(5, 5) == 1.0);
}

TEST_CASE("no abandonment gives five steps") {
    Fixture f;
    SimulationParams p;
    p.abandon.base_rate = 0.0;
    const auto sessions = run_experiment(f.world(), p, 200, 9);
    for (const auto& s : sessions) {
        REQUIRE(s.steps.size() == kMaxSteps);
        CHECK(s.steps.back().action == StepAction::SessionEnd);
    }
}

TEST_CASE("certain abandonment gives one step") {
    Fixture f;
    SimulationParams p;
    p.abandon.base_rate = 1.0;
    for (const auto& s : run_experiment(f.world(), p, 100, 9)) {
        REQUIRE(s.steps.size() == 1);
        CHECK(s.steps[0].action == StepAction::Abandoned);
    }
}

TEST_CASE("sessions chain and start from a trending video") {
    Fixture f;
    SimulationParams p;
    const auto sessions = run_experiment(f.world(), p, 300, 4);
    for (const auto& s : sessions) {
        CHECK(std::find(f.catalog.trending.begin(), f.catalog.trending.end(), s.steps[0].watched) !=
              f.catalog.trending.end());
        for (std::size_t k = 0; k < s.steps.size(); ++k) {
            const auto& st = s.steps[k];
            CHECK(st.step_index == k + 1);
            CHECK_FALSE(st.recs.contains(st.watched));
            for (int r : {st.ratings.interest, st.ratings.qos, st.ratings.qor, st.ratings.qoe}) {
                CHECK(r >= 1);
                CHECK(r <= 5);
            }
            if (k + 1 < s.steps.size()) {
                REQUIRE(st.action == StepAction::Selected);
                CHECK(s.steps[k + 1].watched == st.recs.items[st.selected_position - 1].id);
            } else {
                CHECK(st.action != StepAction::Selected);
            }
        }
    }
}

TEST_CASE("all-items cache makes every watched video high QoS") {
    Fixture f(1000, 10, 1000);
    std::vector<VideoId> all;
    for (std::uint64_t i = 0; i < 1000; ++i) all.push_back(VideoId{i});
    const CacheSet full(all, 1000);
    const SimulationWorld w{f.catalog.graph, full, f.catalog.trending};
    for (ClickKind kind : {ClickKind::Uniform, ClickKind::Zipf}) {
        SimulationParams p;
        p.click.kind = kind;
        for (const auto& s : run_experiment(w, p, 100, 2))
            for (const auto& st : s.steps) CHECK(st.watched_high_qos);
    }
}

TEST_CASE("experiments are reproducible and independent of jobs") {
    Fixture f;
    SimulationParams p;
    const auto a = run_experiment(f.world(), p, 150, 77, 1);
    const auto b = run_experiment(f.world(), p, 150, 77, 1);
    const auto c = run_experiment(f.world(), p, 150, 77, 6);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a[0].session_id == session_label(0));
}

TEST_CASE("one session equals run_session with child seed 0") {
    Fixture f;
    SimulationParams p;
    const auto batch = run_experiment(f.world(), p, 1, 123);
    CHECK(batch[0] == run_session(f.world(), p, child_seed(123, 0), session_label(0)));
}

TEST_CASE("total steps match the abandonment expectation") {
    // Constant abandonment q per step (coefficients zero): E[steps] = sum_{t<5} (1-q)^t.
    Fixture f;
    SimulationParams p;
    p.click.kind = ClickKind::Uniform;
    p.abandon.base_rate = 0.2;
    p.abandon.interest_coef = 0.0;
    p.abandon.qos_coef = 0.0;
    const std::size_t n = 742;
    const auto sessions = run_experiment(f.world(), p, n, 31);
    double total = 0.0;
    for (const auto& s : sessions) total += static_cast<double>(s.steps.size());
    double expected = 0.0;
    for (int t = 0; t < 5; ++t) expected += std::pow(0.8, t);
    // sd of steps is about 1.5; 4 sigma of the mean at n = 742.
    CHECK(std::abs(total / n - expected) < 4 * 1.5 / std::sqrt(double(n)));
}

TEST_CASE("mean QoS per class follows the calibration") {
    Fixture f(50000, 10, 500, 0.1);
    SimulationParams p;
    p.abandon.base_rate = 0.0;
    std::vector<double> hi, lo;
    for (const auto& s : run_experiment(f.world(), p, 4000, 8, 4))
        for (const auto& st : s.steps) (st.watched_high_qos ? hi : lo).push_back(st.ratings.qos);
    REQUIRE(hi.size() > 1000);
    REQUIRE(lo.size() > 1000);
    CHECK(std::abs(std::accumulate(hi.begin(), hi.end(), 0.0) / hi.size() - 4.30) < 0.1);
    CHECK(std::abs(std::accumulate(lo.begin(), lo.end(), 0.0) / lo.size() - 1.87) < 0.1);
}

}
