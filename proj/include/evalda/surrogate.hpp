#pragma once

#include <cstdint>
#include <vector>

#include "evalda/corpus.hpp"
#include "evalda/lda.hpp"

namespace evalda {

// Number of surrogate sampling iterations collapsed into the closed form.
struct ApproximationLevel {
    std::int32_t t = 4;
};

enum class AttackType { promote, demote };

// Per-topic multipliers s_k = (sum_v n_v phi_kv) / N for one document.
struct TopicScores {
    std::vector<double> s;
    double total = 0.0;  // N, the in-vocabulary token count
};

double topic_score(const TopicModel& model, const WordCounts& counts, std::int32_t k);

TopicScores topic_scores(const TopicModel& model, const WordCounts& counts);

// Unnormalized estimate (1/K) * s_k^t.
std::vector<double> estimate_theta_raw(const TopicScores& scores, ApproximationLevel level);

// Closed-form estimate of the document-topic distribution, normalized across
// topics so it is a probability vector. t = 0 is exactly uniform. Throws
// EstimateError when every s_k is zero.
TopicDistribution estimate_theta(const TopicModel& model, const WordCounts& counts,
                                 ApproximationLevel level);

// Same estimate obtained by iterating the per-step recursion
// theta_k^t = theta_k^{t-1} * (sum_v n_v phi_kv) / N from a uniform start,
// then normalizing. Kept as an independent check of the closed form.
TopicDistribution estimate_theta_recursive(const TopicModel& model, const WordCounts& counts,
                                           ApproximationLevel level);

// Signed objective delta of replacing occurrences of word w by w_new
// (n_moved counts shift from w to w_new, N unchanged), evaluated on the
// normalized estimate. promote: theta_adv - theta_vic at topic k; demote is
// the exact negation.
double marginal_q_scored(const TopicModel& model, const TopicScores& base, std::int32_t k,
                         std::int32_t w, std::int32_t w_new, std::int32_t n_moved,
                         ApproximationLevel level, AttackType type);

// Single-occurrence convenience form; validates that counts contains w.
double marginal_q(const TopicModel& model, const WordCounts& counts, std::int32_t k,
                  std::int32_t w, std::int32_t w_new, ApproximationLevel level, AttackType type);

}  // namespace evalda
