#include "evalda/surrogate.hpp"

#include <cmath>

#include "evalda/errors.hpp"

namespace evalda {

double topic_score(const TopicModel& model, const WordCounts& counts, std::int32_t k) {
    if (counts.total < 1) throw EstimateError("empty word counts");
    double sum = 0.0;
    for (const auto& [v, n] : counts.counts) sum += n * model.phi_at(k, v);
    return sum / counts.total;
}

TopicScores topic_scores(const TopicModel& model, const WordCounts& counts) {
    if (counts.total < 1) throw EstimateError("empty word counts");
    TopicScores scores;
    scores.total = counts.total;
    scores.s.resize(model.num_topics);
    for (std::int32_t k = 0; k < model.num_topics; ++k) {
        double sum = 0.0;
        for (const auto& [v, n] : counts.counts) sum += n * model.phi_at(k, v);
        scores.s[k] = sum / scores.total;
    }
    return scores;
}

std::vector<double> estimate_theta_raw(const TopicScores& scores, ApproximationLevel level) {
    if (level.t < 0) throw ConfigError("approximation level must be nonnegative");
    const std::size_t k_count = scores.s.size();
    std::vector<double> raw(k_count);
    for (std::size_t k = 0; k < k_count; ++k)
        raw[k] = std::pow(scores.s[k], level.t) / static_cast<double>(k_count);
    return raw;
}

namespace {

TopicDistribution normalize_or_throw(std::vector<double> raw) {
    double sum = 0.0;
    for (double x : raw) sum += x;
    if (!(sum > 0.0) || !std::isfinite(sum))
        throw EstimateError("document shares no probability mass with any topic");
    for (double& x : raw) x /= sum;
    TopicDistribution dist;
    dist.theta = std::move(raw);
    return dist;
}

TopicDistribution exact_uniform(std::int32_t k_count) {
    TopicDistribution dist;
    dist.theta.assign(static_cast<std::size_t>(k_count), 1.0 / k_count);
    return dist;
}

}  // namespace

TopicDistribution estimate_theta(const TopicModel& model, const WordCounts& counts,
                                 ApproximationLevel level) {
    if (counts.total < 1) throw EstimateError("empty word counts");
    if (level.t == 0) return exact_uniform(model.num_topics);
    return normalize_or_throw(estimate_theta_raw(topic_scores(model, counts), level));
}

TopicDistribution estimate_theta_recursive(const TopicModel& model, const WordCounts& counts,
                                           ApproximationLevel level) {
    if (level.t < 0) throw ConfigError("approximation level must be nonnegative");
    if (counts.total < 1) throw EstimateError("empty word counts");
    if (level.t == 0) return exact_uniform(model.num_topics);
    TopicScores scores = topic_scores(model, counts);
    std::vector<double> theta(scores.s.size(), 1.0 / scores.s.size());
    for (std::int32_t step = 0; step < level.t; ++step)
        for (std::size_t k = 0; k < theta.size(); ++k) theta[k] *= scores.s[k];
    return normalize_or_throw(std::move(theta));
}

double marginal_q_scored(const TopicModel& model, const TopicScores& base, std::int32_t k,
                         std::int32_t w, std::int32_t w_new, std::int32_t n_moved,
                         ApproximationLevel level, AttackType type) {
    if (k < 0 || k >= model.num_topics) throw ConfigError("topic id out of range");
    if (w < 0 || w >= model.vocab_size() || w_new < 0 || w_new >= model.vocab_size())
        throw ConfigError("word id out of range");
    if (level.t < 0) throw ConfigError("approximation level must be nonnegative");

    double vic_sum = 0.0, vic_k = 0.0;
    double adv_sum = 0.0, adv_k = 0.0;
    for (std::size_t j = 0; j < base.s.size(); ++j) {
        std::int32_t jt = static_cast<std::int32_t>(j);
        double moved = base.s[j] + n_moved * (model.phi_at(jt, w_new) - model.phi_at(jt, w)) / base.total;
        if (moved < 0.0) moved = 0.0;  // cancellation noise on exact removals
        double vic_raw = std::pow(base.s[j], level.t);
        double adv_raw = std::pow(moved, level.t);
        vic_sum += vic_raw;
        adv_sum += adv_raw;
        if (jt == k) {
            vic_k = vic_raw;
            adv_k = adv_raw;
        }
    }
    if (!(vic_sum > 0.0) || !(adv_sum > 0.0))
        throw EstimateError("degenerate estimate while scoring a replacement");

    double delta = adv_k / adv_sum - vic_k / vic_sum;
    return type == AttackType::promote ? delta : -delta;
}

double marginal_q(const TopicModel& model, const WordCounts& counts, std::int32_t k,
                  std::int32_t w, std::int32_t w_new, ApproximationLevel level, AttackType type) {
    if (w == w_new) throw ConfigError("replacement word equals target word");
    if (counts.count_of(w) < 1)
        throw WordLookupError("target word not present in document counts");
    return marginal_q_scored(model, topic_scores(model, counts), k, w, w_new, 1, level, type);
}

}  // namespace evalda
