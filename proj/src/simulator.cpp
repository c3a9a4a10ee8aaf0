// simulator.cpp

#include "qosrec/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qosrec/parallel.hpp"

namespace qosrec {

std::vector<double> click_probabilities(const ClickModel& model, std::size_t list_len) {
    if (list_len == 0) throw std::invalid_argument("click_probabilities: empty list");
    std::vector<double> p(list_len, 1.0 / static_cast<double>(list_len));
    if (model.kind == ClickKind::Uniform) return p;
    if (model.exponent < 0.0) throw std::invalid_argument("zipf exponent must be non-negative");
    double total = 0.0;
    for (std::size_t i = 0; i < list_len; ++i) {
        p[i] = std::pow(static_cast<double>(i + 1), -model.exponent);
        total += p[i];
    }
    for (double& x : p) x /= total;
    return p;
}

std::size_t draw_click(const ClickModel& model, std::size_t list_len, Rng& rng) {
    return sample_discrete(click_probabilities(model, list_len), rng) + 1;
}

double pmf_mean(const RatingPmf& pmf) {
    double m = 0.0, total = 0.0;
    for (std::size_t k = 0; k < pmf.size(); ++k) {
        m += static_cast<double>(k + 1) * pmf[k];
        total += pmf[k];
    }
    return m / total;
}

RatingPmf tilt_to_mean(const RatingPmf& base, double target_mean) {
    if (!(target_mean > 1.0 && target_mean < 5.0))
        throw std::invalid_argument("tilted mean must lie strictly inside (1, 5)");
    auto tilted = [&](double lambda) {
        RatingPmf out{};
        double total = 0.0;
        for (std::size_t k = 0; k < base.size(); ++k) {
            out[k] = base[k] * std::exp(lambda * static_cast<double>(k));
            total += out[k];
        }
        for (double& x : out) x /= total;
        return out;
    };
    // The tilted mean is increasing in lambda.
    double lo = -50.0, hi = 50.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (pmf_mean(tilted(mid)) < target_mean)
            lo = mid;
        else
            hi = mid;
    }
    return tilted(0.5 * (lo + hi));
}

double QoeGenerator::latent(int qos, int interest) const {
    return weights[0] * qos + weights[1] * interest + weights[2] * std::min(qos, interest);
}

int QoeGenerator::sample(int qos, int interest, Rng& rng) const {
    double s = latent(qos, interest) + noise_scale * sample_logistic(rng);
    int label = 1;
    for (double t : thresholds)
        if (t < s) ++label;
    return label;
}

RatingPmf QoeGenerator::distribution(int qos, int interest) const {
    const double s = latent(qos, interest);
    auto cdf = [&](double t) {
        if (noise_scale <= 0.0) return s <= t ? 1.0 : 0.0;
        return 1.0 / (1.0 + std::exp(-(t - s) / noise_scale));
    };
    RatingPmf out{};
    double prev = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        double c = cdf(thresholds[k]);
        out[k] = c - prev;
        prev = c;
    }
    out[4] = 1.0 - prev;
    return out;
}

double AbandonModel::probability(int interest, int qos) const {
    if (base_rate <= 0.0) return 0.0;
    if (base_rate >= 1.0) return 1.0;
    double z = std::log(base_rate / (1.0 - base_rate)) + interest_coef * (interest - 3) +
               qos_coef * (qos - 3);
    return 1.0 / (1.0 + std::exp(-z));
}

namespace {

int sample_rating(const RatingPmf& pmf, Rng& rng) {
    return static_cast<int>(sample_discrete(pmf, rng)) + 1;
}

}  // namespace

Session run_session(const SimulationWorld& world, const SimulationParams& params,
                    std::uint64_t seed, std::string session_id) {
    if (world.trending.empty()) throw std::invalid_argument("run_session: no trending videos");
    Rng rng(seed);

    std::vector<VideoId> shown = world.trending;
    shuffle(shown, rng);
    shown.resize(std::min(shown.size(), kInitialChoices));
    VideoId watched = shown[uniform_index(rng, shown.size())];

    const RatingModel& rm = params.ratings;
    const double qor_base_mean = pmf_mean(rm.qor_base);

    Session session{std::move(session_id), params.region, {}};
    std::vector<VideoId> history{watched};

    for (std::size_t step = 1; step <= kMaxSteps; ++step) {
        SessionStep s;
        s.step_index = step;
        s.watched = watched;
        s.watched_high_qos = world.cache.contains(watched);

        RecommendOptions opts;
        if (params.exclude_history) opts.exclude = history;
        opts.placement = params.placement;
        s.recs = params.recommender == RecommenderKind::Nudge
                     ? nudge_recommend(world.graph, world.cache, watched, opts)
                     : vanilla_recommend(world.graph, world.cache, watched, opts);

        s.ratings.interest = sample_rating(s.watched_high_qos ? rm.interest_high : rm.interest_low, rng);
        s.ratings.qos = sample_rating(s.watched_high_qos ? rm.qos_high : rm.qos_low, rng);
        double nudged = s.recs.empty() ? 0.0
                                       : static_cast<double>(s.recs.high_qos_count()) /
                                             static_cast<double>(s.recs.size());
        double qor_mean = qor_base_mean + rm.qor_shift * nudged;
        s.ratings.qor = sample_rating(
            qor_mean == qor_base_mean ? rm.qor_base : tilt_to_mean(rm.qor_base, qor_mean), rng);
        s.ratings.qoe = rm.qoe.sample(s.ratings.qos, s.ratings.interest, rng);

        const double u_abandon = uniform01(rng);
        if (step == kMaxSteps || s.recs.empty()) {
            s.action = StepAction::SessionEnd;
        } else if (u_abandon < params.abandon.probability(s.ratings.interest, s.ratings.qos)) {
            s.action = StepAction::Abandoned;
        } else {
            s.action = StepAction::Selected;
            s.selected_position = draw_click(params.click, s.recs.size(), rng);
        }
        session.steps.push_back(s);
        if (s.action != StepAction::Selected) break;
        watched = s.recs.items[s.selected_position - 1].id;
        history.push_back(watched);
    }
    return session;
}

std::string session_label(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "s%06zu", index);
    return buf;
}

std::vector<Session> run_experiment(const SimulationWorld& world, const SimulationParams& params,
                                    std::size_t n_sessions, std::uint64_t master_seed,
                                    unsigned jobs) {
    if (n_sessions == 0) throw std::invalid_argument("run_experiment: n_sessions must be >= 1");
    std::vector<Session> out(n_sessions);
    parallel_for(n_sessions, jobs, [&](std::size_t i) {
        out[i] = run_session(world, params, child_seed(master_seed, i), session_label(i));
    });
    return out;
}

}  // namespace qosrec
