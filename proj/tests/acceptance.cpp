// Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
// non-zero if any criterion fails.
//
//   acceptance <qosrec cli> <work dir>
//
// The dataset criterion reads QOSREC_DATASET (and optionally QOSREC_MAPPING,
// a JSON column mapping file).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "qosrec/config.hpp"
#include "qosrec/dataio.hpp"
#include "qosrec/naive_bayes.hpp"
#include "qosrec/pipeline.hpp"
#include "qosrec/qoemodel.hpp"
#include "qosrec/recommender.hpp"
#include "qosrec/simulator.hpp"
#include "qosrec/stats.hpp"

namespace fs = std::filesystem;
using namespace qosrec;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
    Verdict verdict = Verdict::Pass;
    std::string detail;
};

struct Checker {
    bool ok = true;
    std::vector<std::string> problems;
    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            if (problems.size() < 6) problems.push_back(what);
        }
    }
    Outcome outcome(const std::string& summary) const {
        std::string d = summary;
        for (const auto& p : problems) d += "; " + p;
        return {ok ? Verdict::Pass : Verdict::Fail, d};
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

unsigned worker_count() { return std::max(1u, std::min(8u, std::thread::hardware_concurrency())); }

struct SimWorld {
    Catalog catalog;
    CacheSet cache;
    SimulationWorld view() const { return {catalog.graph, cache, catalog.trending}; }
};

// Sparse catalog with a small cache, so lists mix cached and uncached items.
SimWorld mixed_world() {
    CatalogConfig cfg;
    cfg.n_videos = 50000;
    cfg.related_out_degree = 10;
    cfg.related_popularity_bias = 0.1;
    cfg.seed = 11;
    SimWorld w;
    w.catalog = generate_catalog(cfg);
    w.cache = build_cache_set(w.catalog.videos, w.catalog.graph, w.catalog.trending, 500);
    return w;
}

// i^-a normalized over five positions, written out independently of the library.
std::array<double, 5> zipf5(double a) {
    std::array<double, 5> p{};
    double z = 0.0;
    for (int i = 0; i < 5; ++i) z += p[i] = 1.0 / std::pow(i + 1.0, a);
    for (double& x : p) x /= z;
    return p;
}

std::vector<Sample> generator_samples(std::size_t n, std::uint64_t seed, const QoeGenerator& gen) {
    Rng rng(seed);
    std::vector<Sample> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Sample s;
        s.qos = 1 + static_cast<int>(uniform_index(rng, 5));
        s.interest = 1 + static_cast<int>(uniform_index(rng, 5));
        s.qor = 1 + static_cast<int>(uniform_index(rng, 5));
        s.qoe = gen.sample(s.qos, s.interest, rng);
        out.push_back(s);
    }
    return out;
}

// ---- 1

Outcome click_fidelity() {
    const auto t0 = std::chrono::steady_clock::now();
    Checker chk;
    std::string summary;
    const std::size_t n = 100000;
    for (ClickKind kind : {ClickKind::Uniform, ClickKind::Zipf}) {
        Rng rng(kind == ClickKind::Uniform ? 31 : 32);
        std::array<double, 5> counts{};
        for (std::size_t d = 0; d < n; ++d) counts[draw_click({kind, 0.78}, 5, rng) - 1] += 1.0;
        const auto expected = kind == ClickKind::Uniform ? std::array<double, 5>{0.2, 0.2, 0.2, 0.2, 0.2} : zipf5(0.78);
        double worst = 0.0;
        for (int i = 0; i < 5; ++i) worst = std::max(worst, std::abs(counts[i] / double(n) - expected[i]));
        const char* name = kind == ClickKind::Uniform ? "uniform" : "zipf";
        chk.expect(worst <= 0.01, fmt::format("{} max deviation {:.4f}", name, worst));
        summary += fmt::format("{}: {} draws, max dev {:.4f}; ", name, n, worst);
    }
    const double secs = seconds_since(t0);
    chk.expect(secs < 5.0, fmt::format("took {:.1f}s", secs));
    return chk.outcome(summary + fmt::format("{:.2f}s", secs));
}

// ---- 2

Outcome hit_ratio() {
    const auto t0 = std::chrono::steady_clock::now();
    const SimWorld w = mixed_world();
    Checker chk;
    std::string summary;
    for (ClickKind kind : {ClickKind::Uniform, ClickKind::Zipf}) {
        SimulationParams p;
        p.click.kind = kind;
        const auto sessions = run_experiment(w.view(), p, 10000, 32, worker_count());
        const auto expected = zipf5(0.78);
        // Pooled: observed hits vs the expectation over the same steps.
        double hits = 0.0, expect_hits = 0.0, steps = 0.0;
        std::array<double, 6> n_k{}, hit_k{};
        for (const auto& s : sessions)
            for (const auto& st : s.steps) {
                if (st.action != StepAction::Selected || st.recs.size() != 5) continue;
                const std::size_t k = st.recs.high_qos_count();
                double e = 0.0;
                if (kind == ClickKind::Uniform)
                    e = k / 5.0;
                else
                    for (std::size_t i = 0; i < k; ++i) e += expected[i];
                const bool hit = st.recs.items[st.selected_position - 1].high_qos;
                hits += hit;
                expect_hits += e;
                steps += 1.0;
                n_k[k] += 1.0;
                hit_k[k] += hit;
            }
        const char* name = kind == ClickKind::Uniform ? "uniform" : "zipf";
        const double pooled = std::abs(hits - expect_hits) / steps;
        chk.expect(pooled <= 0.02, fmt::format("{} pooled HR off by {:.4f}", name, pooled));
        summary += fmt::format("{}: {} steps, pooled dev {:.4f}", name, steps, pooled);
        for (std::size_t k = 0; k <= 5; ++k) {
            if (n_k[k] == 0) continue;
            double e = kind == ClickKind::Uniform ? k / 5.0 : 0.0;
            if (kind == ClickKind::Zipf)
                for (std::size_t i = 0; i < k; ++i) e += expected[i];
            const double dev = std::abs(hit_k[k] / n_k[k] - e);
            chk.expect(dev <= 0.02, fmt::format("{} k={} HR {:.4f} vs {:.4f}", name, k, hit_k[k] / n_k[k], e));
            summary += fmt::format(", k={} (n={}) dev {:.4f}", k, n_k[k], dev);
        }
        summary += "; ";
    }
    const double secs = seconds_since(t0);
    chk.expect(secs < 30.0, fmt::format("took {:.1f}s", secs));
    return chk.outcome(summary + fmt::format("{:.1f}s", secs));
}

// ---- 3

Outcome weight_recovery() {
    const auto t0 = std::chrono::steady_clock::now();
    const QoeGenerator gen;
    const auto samples = generator_samples(5000, 33, gen);
    const auto spec = FeatureSpec::selected();
    const auto report = cross_validate(samples, spec, ModelKind::Ordinal, 5, 3, {}, worker_count());
    const auto& w = report.normalized_weights;

    // Bayes MAE: the conditional median of the true label distribution,
    // scored on fresh labels.
    Rng rng(34);
    double abs_err = 0.0;
    const std::size_t n_bayes = 200000;
    for (std::size_t i = 0; i < n_bayes; ++i) {
        const int q = 1 + static_cast<int>(uniform_index(rng, 5));
        const int in = 1 + static_cast<int>(uniform_index(rng, 5));
        const auto pmf = gen.distribution(q, in);
        int median = 5;
        double cum = 0.0;
        for (int k = 0; k < 5; ++k) {
            cum += pmf[k];
            if (cum >= 0.5) {
                median = k + 1;
                break;
            }
        }
        abs_err += std::abs(gen.sample(q, in, rng) - median);
    }
    const double bayes = abs_err / n_bayes;

    Checker chk;
    chk.expect(w.size() == 3, "weights missing");
    const std::array<double, 3> truth{0.17, 0.30, 0.53};
    for (std::size_t i = 0; i < std::min<std::size_t>(3, w.size()); ++i)
        chk.expect(std::abs(w[i] - truth[i]) <= 0.10, fmt::format("w[{}] = {:.3f}", i, w[i]));
    chk.expect(std::abs(report.errors.mae - bayes) <= 0.05,
               fmt::format("cv MAE {:.4f} vs Bayes {:.4f}", report.errors.mae, bayes));
    const double secs = seconds_since(t0);
    chk.expect(secs < 60.0, fmt::format("took {:.1f}s", secs));
    return chk.outcome(fmt::format("w = ({:.3f}, {:.3f}, {:.3f}), cv MAE {:.4f}, Bayes MAE {:.4f}, {:.1f}s",
                                   w.size() > 0 ? w[0] : NAN, w.size() > 1 ? w[1] : NAN, w.size() > 2 ? w[2] : NAN,
                                   report.errors.mae, bayes, secs));
}

// ---- 4

Outcome baselines() {
    Rng rng(35);
    std::vector<Sample> uniform, echo;
    for (int i = 0; i < 10000; ++i) {
        uniform.push_back({1 + int(uniform_index(rng, 5)), 1 + int(uniform_index(rng, 5)), 3, 1 + int(uniform_index(rng, 5))});
        const int in = 1 + int(uniform_index(rng, 5));
        echo.push_back({1 + int(uniform_index(rng, 5)), in, 1 + int(uniform_index(rng, 5)), in});
    }
    const double dummy = cross_validate(uniform, FeatureSpec::qos_int(), ModelKind::Dummy).errors.mae;
    const double vanilla =
        cross_validate(echo, FeatureSpec::from_names(std::vector<std::string>{"Int"}), ModelKind::Vanilla).errors.mae;
    Checker chk;
    chk.expect(std::abs(dummy - 1.2) <= 0.05, fmt::format("dummy MAE {:.4f}", dummy));
    chk.expect(vanilla == 0.0, fmt::format("vanilla MAE {}", vanilla));
    return chk.outcome(fmt::format("dummy MAE {:.4f}, vanilla MAE {:.4f}", dummy, vanilla));
}

// ---- 5

Outcome naive_bayes() {
    Rng rng(36);
    int mismatches = 0, non_monotone = 0, cells = 0;
    for (int trial = 0; trial < 100; ++trial) {
        NBModel m;
        for (auto& row : m.p_high)
            for (double& p : row) p = 0.01 + 0.98 * uniform01(rng);
        const auto table = nb_decision_table(m);
        for (int code = 0; code < 8; ++code) {
            const auto& row = table[code];
            std::array<Level, 3> x{(code & 4) ? Level::High : Level::Low, (code & 2) ? Level::High : Level::Low,
                                   (code & 1) ? Level::High : Level::Low};
            if (row.input != x) ++mismatches;
            for (std::size_t j = 0; j < 9; ++j) {
                // Full joint over class and all three features, then condition on x.
                double num = 0.0, den = 0.0;
                for (int c = 0; c < 2; ++c)
                    for (int y = 0; y < 8; ++y) {
                        if (y != code) continue;
                        double joint = c ? kDecisionPriors[j] : 1.0 - kDecisionPriors[j];
                        for (int f = 0; f < 3; ++f)
                            joint *= (y & (4 >> f)) ? m.p_high[c][f] : 1.0 - m.p_high[c][f];
                        den += joint;
                        if (c) num += joint;
                    }
                const double post = num / den;
                ++cells;
                if (std::abs(post - 0.5) < 1e-12) continue;
                if ((post > 0.5) != (row.prediction[j] == Level::High)) ++mismatches;
                if (j > 0 && row.prediction[j - 1] == Level::High && row.prediction[j] == Level::Low) ++non_monotone;
            }
        }
    }
    Checker chk;
    chk.expect(mismatches == 0, fmt::format("{} mismatches", mismatches));
    chk.expect(non_monotone == 0, fmt::format("{} non-monotone rows", non_monotone));
    return chk.outcome(fmt::format("{} cells, {} mismatches, {} monotonicity violations", cells, mismatches, non_monotone));
}

// ---- 6

// Upper tail from the finite series: for even dof Q(k, y) = e^-y sum_{j<k} y^j/j!;
// for odd dof Q(1/2, y) = erfc(sqrt y) plus the terms y^a e^-y / Gamma(a+1).
double chi2_sf_series(double x, int dof) {
    const double y = 0.5 * x;
    if (dof % 2 == 0) {
        double term = 1.0, sum = 0.0;
        for (int j = 0; j < dof / 2; ++j) {
            sum += term;
            term *= y / (j + 1);
        }
        return std::exp(-y) * sum;
    }
    double q = std::erfc(std::sqrt(y));
    for (double a = 0.5; a + 1.0 <= 0.5 * dof + 1e-9; a += 1.0) q += std::exp(a * std::log(y) - y - std::lgamma(a + 1.0));
    return q;
}

Outcome chi_square_checks() {
    Checker chk;
    Rng rng(37);
    double worst_closed = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        std::uint64_t a = 1 + uniform_index(rng, 500), b = 1 + uniform_index(rng, 500);
        std::uint64_t c = 1 + uniform_index(rng, 500), d = 1 + uniform_index(rng, 500);
        const double n = double(a + b + c + d), det = double(a) * double(d) - double(b) * double(c);
        const double closed = n * det * det / (double(a + b) * double(c + d) * double(a + c) * double(b + d));
        const double got = chi_square(ContingencyTable({{a, b}, {c, d}})).statistic;
        worst_closed = std::max(worst_closed, std::abs(got - closed) / std::max(1.0, closed));
    }
    chk.expect(worst_closed <= 1e-9, fmt::format("closed form off by {:.2e}", worst_closed));

    double worst_indep = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t R = 2 + uniform_index(rng, 4), C = 2 + uniform_index(rng, 4);
        std::vector<std::vector<std::uint64_t>> t(R, std::vector<std::uint64_t>(C));
        std::vector<std::uint64_t> u(R), v(C);
        for (auto& x : u) x = 1 + uniform_index(rng, 20);
        for (auto& x : v) x = 1 + uniform_index(rng, 20);
        for (std::size_t r = 0; r < R; ++r)
            for (std::size_t cc = 0; cc < C; ++cc) t[r][cc] = u[r] * v[cc];
        worst_indep = std::max(worst_indep, std::abs(chi_square(ContingencyTable(t)).statistic));
    }
    chk.expect(worst_indep <= 1e-9, fmt::format("independent table statistic {:.2e}", worst_indep));

    double worst_p = 0.0;
    for (int dof = 1; dof <= 10; ++dof)
        for (double x = 0.5; x <= 50.0; x += 0.5) {
            const double ref = std::log10(chi2_sf_series(x, dof));
            const double got = chi_square_log10_sf(x, dof);
            worst_p = std::max(worst_p, std::abs(got - ref) / std::max(std::abs(ref), 1e-3));
        }
    chk.expect(worst_p <= 1e-6, fmt::format("log10 p relative error {:.2e}", worst_p));
    return chk.outcome(fmt::format("closed-form err {:.1e}, independent stat {:.1e}, log10 p rel err {:.1e}",
                                   worst_closed, worst_indep, worst_p));
}

// ---- 7

Outcome recommender_contract() {
    Rng rng(38);
    Checker chk;
    int full = 0, partial = 0;
    for (int g = 0; g < 200; ++g) {
        const std::size_t n = 15 + uniform_index(rng, 50);
        const std::size_t degree = 2 + uniform_index(rng, 6);
        RelatedGraph graph;
        std::vector<std::vector<VideoId>> adj(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<VideoId> pool;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) pool.push_back(VideoId{j});
            shuffle(pool, rng);
            pool.resize(std::min(degree, pool.size()));
            adj[i] = pool;
            graph.set_related(VideoId{i}, pool);
        }
        std::vector<VideoId> members;
        const double frac = uniform01(rng) * 0.5;
        for (std::size_t i = 0; i < n; ++i)
            if (uniform01(rng) < frac) members.push_back(VideoId{i});
        const CacheSet cache(members, n);
        const std::set<VideoId> cached(members.begin(), members.end());

        for (int t = 0; t < 5; ++t) {
            const VideoId w{uniform_index(rng, n)};
            // Oracle: distinct cached items within two hops, BFS order.
            std::vector<VideoId> hits;
            std::set<VideoId> seen{w};
            auto visit = [&](VideoId x) {
                if (seen.insert(x).second && cached.contains(x)) hits.push_back(x);
            };
            for (VideoId a : adj[to_u64(w)]) visit(a);
            for (VideoId a : adj[to_u64(w)])
                for (VideoId b : adj[to_u64(a)]) visit(b);

            const auto list = nudge_recommend(graph, cache, w);
            const auto vanilla = vanilla_recommend(graph, CacheSet{}, w);
            chk.expect(nudge_recommend(graph, CacheSet{}, w) == vanilla, fmt::format("graph {} empty cache differs", g));
            for (const auto& item : list.items)
                chk.expect(item.high_qos == cached.contains(item.id), fmt::format("graph {} wrong flag", g));
            if (hits.size() >= 5) {
                ++full;
                chk.expect(list.size() == 5 && list.high_qos_count() == 5, fmt::format("graph {} not all cached", g));
                for (std::size_t i = 0; i < std::min<std::size_t>(5, list.size()); ++i)
                    chk.expect(list.items[i].id == hits[i], fmt::format("graph {} not in BFS order", g));
            } else {
                ++partial;
                chk.expect(list.high_qos_count() == hits.size(), fmt::format("graph {} missed cached items", g));
                for (std::size_t i = 0; i < list.size(); ++i)
                    chk.expect(list.items[i].high_qos == (i < hits.size()), fmt::format("graph {} cached not on top", g));
            }
        }
    }
    return chk.outcome(fmt::format("1000 queries ({} all-cached, {} mixed)", full, partial));
}

// ---- 8

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    if (!fs::exists(root)) return files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        files[fs::relative(e.path(), root).string()] = ss.str();
    }
    return files;
}

int run_cli(const std::string& cli, const std::string& args) {
    const std::string cmd = "\"" + cli + "\" " + args + " 2>/dev/null";
    return std::system(cmd.c_str());
}

std::string diff_trees(const std::map<std::string, std::string>& a, const std::map<std::string, std::string>& b) {
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        if (it == b.end()) return k + " missing";
        if (it->second != v) return k + " differs";
    }
    for (const auto& [k, v] : b)
        if (!a.contains(k)) return k + " extra";
    return "";
}

Outcome determinism(const std::string& cli, const fs::path& work) {
    const auto t0 = std::chrono::steady_clock::now();
    Checker chk;
    const fs::path r1 = work / "report_a", r2 = work / "report_b", r8 = work / "report_jobs8";
    for (const auto& d : {r1, r2, r8}) fs::remove_all(d);
    chk.expect(run_cli(cli, "report --seed 7 --jobs 1 --out \"" + r1.string() + "\"") == 0, "first run failed");
    chk.expect(run_cli(cli, "report --seed 7 --jobs 1 --out \"" + r2.string() + "\"") == 0, "second run failed");
    chk.expect(run_cli(cli, "report --seed 7 --jobs 8 --out \"" + r8.string() + "\"") == 0, "jobs 8 run failed");
    const auto a = read_tree(r1), b = read_tree(r2), c = read_tree(r8);
    chk.expect(!a.empty(), "empty output tree");
    const std::string d12 = diff_trees(a, b), d18 = diff_trees(a, c);
    chk.expect(d12.empty(), "repeat: " + d12);
    chk.expect(d18.empty(), "jobs: " + d18);
    return chk.outcome(fmt::format("{} files compared across 3 runs, {:.1f}s", a.size(), seconds_since(t0)));
}

// ---- 9

Outcome dataset_reproduction() {
    const char* path = std::getenv("QOSREC_DATASET");
    if (!path || !*path || !fs::exists(path)) return {Verdict::Skip, "QOSREC_DATASET not set or missing"};

    RunConfig cfg;
    if (const char* m = std::getenv("QOSREC_MAPPING"); m && *m) {
        std::ifstream in(m);
        cfg.mapping = ColumnMapping::from_json(nlohmann::json::parse(in));
    }
    {
        std::ifstream in(path);
        std::string first;
        std::getline(in, first);
        cfg.input = first.rfind("# " + std::string(kSessionSchema), 0) == 0 ? InputKind::Sessions : InputKind::Ratings;
    }
    const auto samples = load_input_samples(cfg, path);
    const auto used = apply_outliers(cfg, samples);
    const unsigned jobs = worker_count();
    const auto ordinal = cross_validate(used, cfg.feature_spec(), ModelKind::Ordinal, cfg.folds, cfg.seeds.cv, cfg.fit, jobs);
    const double dummy = cross_validate(used, cfg.feature_spec(), ModelKind::Dummy, cfg.folds, cfg.seeds.cv).errors.mae;
    const double vanilla = cross_validate(used, FeatureSpec::from_names(std::vector<std::string>{"Int"}), ModelKind::Vanilla,
                                          cfg.folds, cfg.seeds.cv)
                               .errors.mae;

    std::vector<int> qos, qoe;
    for (const auto& s : samples) {
        qos.push_back(binarize(s.qos) == Level::High);
        qoe.push_back(binarize(s.qoe) == Level::High);
    }
    const double chi = chi_square(cross_tabulate(qos, qoe, 2, 2)).statistic;
    const double nb = nb_cv_accuracy(binarize(samples), cfg.folds, cfg.seeds.cv);

    Checker chk;
    const auto& e = ordinal.errors;
    chk.expect(std::abs(e.mae - 0.41) <= 0.03, fmt::format("ordinal MAE {:.3f}", e.mae));
    chk.expect(std::abs(e.bucket_exact - 62) <= 3, fmt::format("exact {:.1f}%", e.bucket_exact));
    chk.expect(std::abs(e.bucket_one - 33) <= 3, fmt::format("off by one {:.1f}%", e.bucket_one));
    chk.expect(std::abs(e.bucket_gt1 - 5) <= 3, fmt::format("off by more {:.1f}%", e.bucket_gt1));
    chk.expect(std::abs(dummy - 1.25) <= 0.03, fmt::format("dummy MAE {:.3f}", dummy));
    chk.expect(std::abs(vanilla - 0.80) <= 0.03, fmt::format("vanilla MAE {:.3f}", vanilla));
    chk.expect(std::abs(chi - 137.77) <= 1.0, fmt::format("chi-square {:.2f}", chi));
    chk.expect(std::abs(nb - 86) <= 2, fmt::format("NB accuracy {:.1f}%", nb));
    return chk.outcome(fmt::format("n = {} ({} after filter), MAE {:.3f} ({:.0f}/{:.0f}/{:.0f}), dummy {:.3f}, vanilla "
                                   "{:.3f}, chi2 {:.2f}, NB {:.1f}%",
                                   samples.size(), used.size(), e.mae, e.bucket_exact, e.bucket_one, e.bucket_gt1, dummy,
                                   vanilla, chi, nb));
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::cerr << "usage: acceptance <qosrec cli> <work dir>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const fs::path work = argv[2];
    fs::create_directories(work);

    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 click-model fidelity", click_fidelity},
        {"2 hit ratio vs cached share", hit_ratio},
        {"3 weight recovery", weight_recovery},
        {"4 dummy and vanilla baselines", baselines},
        {"5 naive Bayes decisions", naive_bayes},
        {"6 chi-square", chi_square_checks},
        {"7 recommender contract", recommender_contract},
        {"8 report determinism", [&] { return determinism(cli, work); }},
        {"9 dataset reproduction", dataset_reproduction},
    };

    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {Verdict::Fail, std::string("exception: ") + e.what()};
        }
        const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Fail ? "FAIL" : "SKIP";
        if (o.verdict == Verdict::Fail) ++failures;
        std::cout << tag << " [" << name << "] " << o.detail << std::endl;
    }
    return failures ? 1 : 0;
}
