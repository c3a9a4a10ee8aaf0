#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qosrec/reports.hpp"

using namespace qosrec;

namespace {

RecommendationList list_with(std::size_t n_high, std::uint64_t base) {
    RecommendationList l;
    for (std::size_t i = 0; i < 5; ++i) l.items.push_back({i + 1, VideoId{base + i}, i < n_high});
    return l;
}

SessionStep step(std::size_t idx, bool high, std::size_t n_high, Ratings r, StepAction a, std::size_t pos = 0) {
    SessionStep s;
    s.step_index = idx;
    s.watched = VideoId{idx * 100};
    s.watched_high_qos = high;
    s.recs = list_with(n_high, idx * 100 + 1);
    s.ratings = r;
    s.action = a;
    s.selected_position = pos;
    return s;
}

// Two sessions: a 3-step one ending at the length limit stand-in and a
// 1-step abandoned one.
std::vector<Session> toy_sessions() {
    Session a{"a", "r", {}};
    a.steps.push_back(step(1, false, 2, {4, 2, 5, 3}, StepAction::Selected, 1));
    a.steps.push_back(step(2, true, 0, {5, 4, 3, 5}, StepAction::Selected, 3));
    a.steps.push_back(step(3, false, 5, {3, 1, 4, 1}, StepAction::SessionEnd));
    Session b{"b", "r", {}};
    b.steps.push_back(step(1, false, 1, {1, 2, 2, 1}, StepAction::Abandoned));
    return {a, b};
}

}  // namespace

TEST_SUITE("reports") {

TEST_CASE("number formatting") {
    CHECK(format_number(1.0) == "1.0000");
    CHECK(format_number(-0.00001) == "0.0000");
    CHECK(format_number(-1.5, 1) == "-1.5");
    CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("csv writer layout") {
    Table t{"demo", {"a", "b"}, {{"1", "x,y"}}, {"hello"}};
    std::ostringstream out;
    write_csv(out, t, {"qosrec 1.0"});
    CHECK(out.str() == "# qosrec 1.0\n# table: demo\n# note: hello\na,b\n1,\"x,y\"\n");
    const auto j = table_to_json(t);
    CHECK(j["rows"][0][1] == "x,y");
}

TEST_CASE("hr/rr groups clicked steps by k") {
    const auto t = compute_hr_rr(toy_sessions());
    REQUIRE(t.rows.size() == 6);
    CHECK(t.n_steps == 2);
    CHECK(t.rows[2].n_steps == 1);
    CHECK(t.rows[2].n_high_selected == 1);
    CHECK(t.rows[0].n_steps == 1);
    CHECK(t.rows[0].n_high_selected == 0);
    CHECK_FALSE(t.rows[3].observed_hr.has_value());
    CHECK(t.overall_hr == doctest::Approx(0.5));
    CHECK(t.overall_rr == doctest::Approx(0.2));
    CHECK(t.rows[5].zipf_hr == 1.0);
    CHECK(t.rows[2].uniform_hr == doctest::Approx(0.4));
    for (std::size_t k = 1; k < 6; ++k) CHECK(t.rows[k].zipf_hr > t.rows[k].uniform_hr - 1e-12);
    const Table e = emit_hr_rr(t);
    CHECK(e.rows.size() == 6);
    CHECK(e.rows[3][4] == "");
}

TEST_CASE("ratings table uses the previous step's QoR") {
    const auto t = compute_ratings_table(toy_sessions());
    REQUIRE(t.rows.size() == 2);
    const auto& low = t.rows[0];
    const auto& high = t.rows[1];
    CHECK_FALSE(low.high_qos);
    CHECK(low.n_steps == 3);
    CHECK(low.qor.n == 1);
    CHECK(low.qor.mean == doctest::Approx(3.0));  // step a3 was picked from a2's list
    CHECK(high.qor.n == 1);
    CHECK(high.qor.mean == doctest::Approx(5.0));
    CHECK(low.qoe.mean == doctest::Approx(5.0 / 3.0));
}

TEST_CASE("an empty class is omitted with a note") {
    auto s = toy_sessions();
    s[0].steps[1].watched_high_qos = false;
    const auto t = compute_ratings_table(s);
    CHECK(t.rows.size() == 1);
    CHECK(t.notes.front().find("high") != std::string::npos);
}

TEST_CASE("mean and ci") {
    const auto m = mean_ci({1, 2, 3, 4});
    CHECK(m.mean == doctest::Approx(2.5));
    CHECK(m.half_width == doctest::Approx(1.96 * std::sqrt(5.0 / 3.0) / 2.0));
    CHECK(mean_ci({}).n == 0);
    CHECK(mean_ci({7}).half_width == 0.0);
}

TEST_CASE("abandonment excludes natural ends") {
    const auto t = compute_abandonment(toy_sessions());
    CHECK(t.n_all == 3);
    CHECK(t.n_abandoned == 1);
    REQUIRE(t.columns.size() == 3);
    const auto& in = t.columns[0];
    CHECK(in.all.mean == doctest::Approx(10.0 / 3.0));
    CHECK(in.abandoned.mean == doctest::Approx(1.0));
    CHECK(*in.gap_percent == doctest::Approx((10.0 / 3.0 - 1.0) / (10.0 / 3.0) * 100.0));
    CHECK_FALSE(in.welch_p.has_value());  // one abandoned step is too few
}

TEST_CASE("heatmap of the vanilla model is the Int column") {
    const auto spec = FeatureSpec::qos_int();
    const Model m = VanillaModel{1};
    const auto grid = compute_heatmap(m, spec);
    for (int q = 0; q < 5; ++q)
        for (int i = 0; i < 5; ++i) CHECK(grid[q][i] == i + 1);
    const Table t = emit_heatmap(grid);
    CHECK(t.rows[2] == std::vector<std::string>{"3", "1", "2", "3", "4", "5"});
}

TEST_CASE("interest distribution sums to 100") {
    for (const auto& r : compute_distribution(toy_sessions())) {
        double sum = 0.0;
        for (double p : r.percent) sum += p;
        CHECK(sum == doctest::Approx(100.0));
    }
}

TEST_CASE("decision table emitter") {
    NBModel m;
    m.p_high = {{{0.2, 0.3, 0.4}, {0.8, 0.7, 0.6}}};
    const Table t = emit_decision_table(nb_decision_table(m));
    CHECK(t.rows.size() == 8);
    CHECK(t.columns.size() == 3 + 9);
}

}
