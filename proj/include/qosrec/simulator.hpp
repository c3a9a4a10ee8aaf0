// qosrec/simulator.hpp
//
// User-session simulation: a session starts from a trending video, the user
// rates each watched video, may abandon, and otherwise clicks one of the
// recommended items under a position-bias model.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qosrec/catalog.hpp"
#include "qosrec/random.hpp"
#include "qosrec/recommender.hpp"

namespace qosrec {

inline constexpr std::size_t kMaxSteps = 5;
inline constexpr std::size_t kInitialChoices = 20;
inline constexpr double kYoutubeZipfExponent = 0.78;

enum class ClickKind { Uniform, Zipf };

struct ClickModel {
    ClickKind kind = ClickKind::Zipf;
    double exponent = kYoutubeZipfExponent;
};

/// Position click probabilities for a list of `list_len` items.
/// Uniform: 1/len each. Zipf: i^-a normalized over i = 1..len.
std::vector<double> click_probabilities(const ClickModel& model, std::size_t list_len);

/// 1-based clicked position for a list of `list_len` items.
std::size_t draw_click(const ClickModel& model, std::size_t list_len, Rng& rng);

using RatingPmf = std::array<double, 5>;  // P(rating = 1..5)

double pmf_mean(const RatingPmf& pmf);

/// Exponentially tilts `base` (p_k ∝ base_k·e^{λk}) until its mean equals
/// `target_mean`. The target must lie strictly inside (1, 5).
RatingPmf tilt_to_mean(const RatingPmf& base, double target_mean);

/// Ground-truth QoE: latent s = w_qos·QoS + w_int·Int + w_min·min(QoS,Int)
/// plus logistic noise of the given scale, cut by four increasing thresholds.
struct QoeGenerator {
    std::array<double, 3> weights{0.17, 0.30, 0.53};
    std::array<double, 4> thresholds{1.5, 2.5, 3.5, 4.5};
    double noise_scale = 0.35;

    double latent(int qos, int interest) const;
    int sample(int qos, int interest, Rng& rng) const;
    /// Exact label distribution for a (QoS, Int) pair.
    RatingPmf distribution(int qos, int interest) const;
};

struct RatingModel {
    RatingPmf interest_high{0.13, 0.12, 0.18, 0.23, 0.34};
    RatingPmf interest_low{0.08, 0.16, 0.19, 0.30, 0.27};
    RatingPmf qos_high{0.01, 0.03, 0.11, 0.35, 0.50};
    RatingPmf qos_low{0.46, 0.31, 0.15, 0.06, 0.02};
    /// QoR for a list without high-QoS items; its mean moves by
    /// `qor_shift · (fraction of high-QoS items in the list)`.
    RatingPmf qor_base{0.07, 0.11, 0.23, 0.33, 0.26};
    double qor_shift = -0.2;
    QoeGenerator qoe{};
};

struct AbandonModel {
    double base_rate = 0.12;
    double interest_coef = -0.25;
    double qos_coef = -0.35;

    /// logistic(logit(base_rate) + c_int·(Int−3) + c_qos·(QoS−3)); exactly 0
    /// or 1 when base_rate is 0 or 1.
    double probability(int interest, int qos) const;
};

enum class RecommenderKind { Vanilla, Nudge };

struct SimulationParams {
    RecommenderKind recommender = RecommenderKind::Nudge;
    CachedPlacement placement = CachedPlacement::Top;
    bool exclude_history = false;
    ClickModel click{};
    RatingModel ratings{};
    AbandonModel abandon{};
    std::string region = "synthetic";
};

enum class StepAction { Selected, Abandoned, SessionEnd };

struct Ratings {
    int interest = 3;
    int qos = 3;
    int qor = 3;
    int qoe = 3;

    bool operator==(const Ratings&) const = default;
};

struct SessionStep {
    std::size_t step_index = 1;
    VideoId watched{};
    bool watched_high_qos = false;
    RecommendationList recs;
    Ratings ratings;
    StepAction action = StepAction::SessionEnd;
    std::size_t selected_position = 0;  // 1-based, only for Selected

    bool operator==(const SessionStep&) const = default;
};

struct Session {
    std::string session_id;
    std::string region;
    std::vector<SessionStep> steps;

    bool operator==(const Session&) const = default;
};

/// Everything a session needs from the environment; borrowed, not owned.
struct SimulationWorld {
    const RelatedGraph& graph;
    const CacheSet& cache;
    const std::vector<VideoId>& trending;
};

Session run_session(const SimulationWorld& world, const SimulationParams& params,
                    std::uint64_t seed, std::string session_id = "s0");

std::string session_label(std::size_t index);

/// Session i runs with child_seed(master_seed, i) and id session_label(i).
/// Output order is by index for any number of jobs.
std::vector<Session> run_experiment(const SimulationWorld& world, const SimulationParams& params,
                                    std::size_t n_sessions, std::uint64_t master_seed,
                                    unsigned jobs = 1);

}  // namespace qosrec
