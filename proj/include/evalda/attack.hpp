#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "evalda/corpus.hpp"
#include "evalda/lda.hpp"
#include "evalda/lexicon.hpp"
#include "evalda/surrogate.hpp"

namespace evalda {

// Shared read-only side inputs for the attack routines.
struct LexiconRefs {
    const EmbeddingTable& embeddings;
    const SynonymTable& synonyms;
    const StopwordSet& stopwords;
};

struct AttackConfig {
    AttackType type = AttackType::promote;
    std::int32_t target_topic = 0;
    ApproximationLevel level;
    double sigma = 0.6;  // max cosine distance for constrained replacements
    double kappa = 0.01; // position budget as a fraction of document length
    SubstitutionStrategy strategy = SubstitutionStrategy::mixture;
    std::uint64_t seed = 0;             // baseline randomness + final inference
    std::int32_t infer_iterations = 500;
    std::int32_t infer_burn_in = 100;
};

// One rewritten position. gain is the estimated objective delta of the
// unique-word substitution this position belongs to (0 for baselines).
struct ReplacementPair {
    std::int32_t position = 0;
    std::int32_t victim_word = 0;
    std::int32_t adversarial_word = 0;
    double gain = 0.0;
};

struct AttackStrategy {
    std::string victim_id;
    std::vector<ReplacementPair> pairs;  // gain descending, positions distinct

    std::int32_t positions_used() const { return static_cast<std::int32_t>(pairs.size()); }
};

// Selection result before any Gibbs scoring.
struct AttackPlan {
    Document adversarial;
    AttackStrategy strategy;
    std::int32_t budget = 0;  // floor(N * kappa)
    TopicDistribution theta_vic_est, theta_adv_est;  // closed-form estimates
};

struct AttackOutcome {
    Document adversarial;
    AttackStrategy strategy;
    std::int32_t budget = 0;
    TopicDistribution theta_vic, theta_adv;          // full Gibbs inference
    TopicDistribution theta_vic_est, theta_adv_est;  // closed-form estimates
};

enum class BaselineVariant {
    random_random,    // b1: random feasible targets, random vocab replacement
    random_nearest,   // b2: random feasible targets, nearest neighbor if within sigma
    frequent_random,  // b3: targets by descending phi[k][v], random replacement
    frequent_nearest, // b4: targets by descending phi[k][v], nearest neighbor
};

// Greedy surrogate-guided selection. Per feasible unique word, the best
// candidate by estimated objective delta (all occurrences moved at once);
// words with nonpositive best delta are dropped; the rest are applied in
// descending-delta order (ties to the lower word id) until the next word's
// occurrence count would push replaced positions past floor(N * kappa).
// No feasible pair is an empty strategy, not an error.
AttackPlan plan_greedy(const TopicModel& model, const Document& victim, const AttackConfig& cfg,
                       const LexiconRefs& lexicon);

// Reference baselines sharing feasibility and budget rules with the greedy
// attack. Random choices are drawn from cfg.seed. Nearest-neighbor variants
// skip a target whose neighbor is farther than sigma; random-replacement
// variants ignore sigma entirely.
AttackPlan plan_baseline(const TopicModel& model, const Document& victim, const AttackConfig& cfg,
                         const LexiconRefs& lexicon, BaselineVariant variant);

// plan_* plus full Gibbs inference of both documents with cfg.seed.
AttackOutcome evalda_attack(const TopicModel& model, const Document& victim,
                            const AttackConfig& cfg, const LexiconRefs& lexicon);
AttackOutcome baseline_attack(const TopicModel& model, const Document& victim,
                              const AttackConfig& cfg, const LexiconRefs& lexicon,
                              BaselineVariant variant);

enum class OracleScoring { gibbs, surrogate };

struct OracleConfig {
    std::int32_t infer_iterations = 500;
    std::int32_t infer_burn_in = 100;
    std::int32_t num_seeds = 5;  // gibbs scoring averages over this many chains
    std::uint64_t seed = 1;
};

// Brute-force single-substitution search: every (feasible word, candidate)
// pair is scored and the best returned. gibbs scoring reruns full inference
// per rewritten document (all occurrences of the word replaced), averaging
// the target topic's theta over num_seeds chains; surrogate scoring uses
// the same estimate and tie-breaking as plan_greedy. Throws ConfigError
// when no feasible pair exists.
ReplacementPair exhaustive_single(const TopicModel& model, const Document& victim,
                                  const AttackConfig& cfg, const LexiconRefs& lexicon,
                                  OracleScoring scoring, const OracleConfig& oracle);

}  // namespace evalda
