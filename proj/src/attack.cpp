#include "evalda/attack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "evalda/errors.hpp"

namespace evalda {

namespace {

void validate_config(const TopicModel& model, const AttackConfig& cfg) {
    if (cfg.target_topic < 0 || cfg.target_topic >= model.num_topics)
        throw ConfigError("target topic out of range");
    if (!(cfg.kappa > 0.0) || cfg.kappa > 1.0) throw ConfigError("kappa must be in (0, 1]");
    if (!(cfg.sigma > 0.0)) throw ConfigError("sigma must be positive");
    if (cfg.level.t < 0) throw ConfigError("approximation level must be nonnegative");
}

// Feasible unique words of the victim, keyed by model-vocabulary id, each
// with its positions in ascending order. Map iteration gives ascending ids.
std::map<std::int32_t, std::vector<std::int32_t>> feasible_words(const TopicModel& model,
                                                                 const Document& victim,
                                                                 const StopwordSet& stopwords) {
    std::map<std::int32_t, std::vector<std::int32_t>> by_word;
    for (std::int32_t pos : feasible_targets(victim, stopwords, model.vocabulary)) {
        std::int32_t id = *model.vocabulary.id_of(victim.raw_tokens[static_cast<std::size_t>(pos)]);
        by_word[id].push_back(pos);
    }
    return by_word;
}

std::int32_t position_budget(const Document& victim, double kappa) {
    return static_cast<std::int32_t>(std::floor(victim.length() * kappa));
}

struct WordChoice {
    std::int32_t word = 0;
    std::int32_t replacement = 0;
    std::int32_t occurrences = 0;
    double gain = 0.0;
};

// Applies whole-word choices in order until one would overflow the budget.
AttackPlan apply_choices(const TopicModel& model, const Document& victim, const AttackConfig& cfg,
                         const std::vector<WordChoice>& choices,
                         const std::map<std::int32_t, std::vector<std::int32_t>>& by_word,
                         std::int32_t budget) {
    AttackPlan plan;
    plan.adversarial = victim;
    plan.strategy.victim_id = victim.id;
    plan.budget = budget;

    std::int32_t used = 0;
    for (const auto& choice : choices) {
        if (used + choice.occurrences > budget) break;
        const auto& positions = by_word.at(choice.word);
        for (std::int32_t pos : positions) {
            plan.strategy.pairs.push_back({pos, choice.word, choice.replacement, choice.gain});
            plan.adversarial.tokens[static_cast<std::size_t>(pos)] = choice.replacement;
            plan.adversarial.raw_tokens[static_cast<std::size_t>(pos)] =
                model.vocabulary.word(choice.replacement);
        }
        used += choice.occurrences;
    }

    plan.theta_vic_est = estimate_theta(model, word_counts(victim), cfg.level);
    plan.theta_adv_est = estimate_theta(model, word_counts(plan.adversarial), cfg.level);
    return plan;
}

}  // namespace

AttackPlan plan_greedy(const TopicModel& model, const Document& victim, const AttackConfig& cfg,
                       const LexiconRefs& lexicon) {
    validate_config(model, cfg);
    auto by_word = feasible_words(model, victim, lexicon.stopwords);
    TopicScores scores = topic_scores(model, word_counts(victim));

    std::vector<WordChoice> choices;
    for (const auto& [word, positions] : by_word) {
        auto cands = candidates(model.vocabulary.word(word), model.vocabulary, lexicon.embeddings,
                                lexicon.synonyms, cfg.strategy, cfg.sigma);
        if (cands.empty()) continue;

        std::int32_t n_moved = static_cast<std::int32_t>(positions.size());
        double best_gain = -std::numeric_limits<double>::infinity();
        std::int32_t best = -1;
        for (std::int32_t c : cands) {
            double q = marginal_q_scored(model, scores, cfg.target_topic, word, c, n_moved,
                                         cfg.level, cfg.type);
            if (q > best_gain) {
                best_gain = q;
                best = c;
            }
        }
        if (best >= 0 && best_gain > 0.0)
            choices.push_back({word, best, n_moved, best_gain});
    }

    // descending gain; stable keeps the ascending word-id order on ties
    std::stable_sort(choices.begin(), choices.end(),
                     [](const WordChoice& a, const WordChoice& b) { return a.gain > b.gain; });

    return apply_choices(model, victim, cfg, choices, by_word, position_budget(victim, cfg.kappa));
}

AttackPlan plan_baseline(const TopicModel& model, const Document& victim, const AttackConfig& cfg,
                         const LexiconRefs& lexicon, BaselineVariant variant) {
    validate_config(model, cfg);
    auto by_word = feasible_words(model, victim, lexicon.stopwords);
    Rng rng(cfg.seed);

    std::vector<std::int32_t> order;
    order.reserve(by_word.size());
    for (const auto& [word, positions] : by_word) order.push_back(word);

    const bool random_targets =
        variant == BaselineVariant::random_random || variant == BaselineVariant::random_nearest;
    const bool random_replacement =
        variant == BaselineVariant::random_random || variant == BaselineVariant::frequent_random;

    if (random_targets) {
        for (std::size_t i = order.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(rng.below(i));
            std::swap(order[i - 1], order[j]);
        }
    } else {
        std::stable_sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
            return model.phi_at(cfg.target_topic, a) > model.phi_at(cfg.target_topic, b);
        });
    }

    std::int32_t budget = position_budget(victim, cfg.kappa);
    std::vector<WordChoice> choices;
    std::int32_t planned = 0;
    for (std::int32_t word : order) {
        std::int32_t replacement = kOovId;
        if (random_replacement) {
            do {
                replacement = static_cast<std::int32_t>(
                    rng.below(static_cast<std::uint32_t>(model.vocab_size())));
            } while (replacement == word);
        } else {
            std::int32_t nn = nearest_neighbor(model.vocabulary.word(word), model.vocabulary,
                                               lexicon.embeddings);
            if (nn == kOovId) continue;
            if (word_distance(lexicon.embeddings, model.vocabulary.word(word),
                              model.vocabulary.word(nn)) > cfg.sigma)
                continue;
            replacement = nn;
        }

        std::int32_t n_moved = static_cast<std::int32_t>(by_word.at(word).size());
        if (planned + n_moved > budget) break;
        choices.push_back({word, replacement, n_moved, 0.0});
        planned += n_moved;
    }

    return apply_choices(model, victim, cfg, choices, by_word, budget);
}

namespace {

AttackOutcome score_plan(const TopicModel& model, const Document& victim, const AttackConfig& cfg,
                         AttackPlan plan) {
    AttackOutcome outcome;
    outcome.adversarial = std::move(plan.adversarial);
    outcome.strategy = std::move(plan.strategy);
    outcome.budget = plan.budget;
    outcome.theta_vic_est = std::move(plan.theta_vic_est);
    outcome.theta_adv_est = std::move(plan.theta_adv_est);
    outcome.theta_vic = infer(model, victim, cfg.infer_iterations, cfg.infer_burn_in, cfg.seed);
    outcome.theta_adv =
        infer(model, outcome.adversarial, cfg.infer_iterations, cfg.infer_burn_in, cfg.seed);
    return outcome;
}

}  // namespace

AttackOutcome evalda_attack(const TopicModel& model, const Document& victim,
                            const AttackConfig& cfg, const LexiconRefs& lexicon) {
    return score_plan(model, victim, cfg, plan_greedy(model, victim, cfg, lexicon));
}

AttackOutcome baseline_attack(const TopicModel& model, const Document& victim,
                              const AttackConfig& cfg, const LexiconRefs& lexicon,
                              BaselineVariant variant) {
    return score_plan(model, victim, cfg, plan_baseline(model, victim, cfg, lexicon, variant));
}

ReplacementPair exhaustive_single(const TopicModel& model, const Document& victim,
                                  const AttackConfig& cfg, const LexiconRefs& lexicon,
                                  OracleScoring scoring, const OracleConfig& oracle) {
    validate_config(model, cfg);
    auto by_word = feasible_words(model, victim, lexicon.stopwords);
    TopicScores scores = topic_scores(model, word_counts(victim));

    double vic_ref = 0.0;
    if (scoring == OracleScoring::gibbs) {
        for (std::int32_t j = 0; j < oracle.num_seeds; ++j) {
            auto theta = infer(model, victim, oracle.infer_iterations, oracle.infer_burn_in,
                               derive_seed(oracle.seed, static_cast<std::uint64_t>(j), 0));
            vic_ref += theta.theta[static_cast<std::size_t>(cfg.target_topic)];
        }
        vic_ref /= oracle.num_seeds;
    }

    bool found = false;
    ReplacementPair best;
    double best_gain = -std::numeric_limits<double>::infinity();

    for (const auto& [word, positions] : by_word) {
        auto cands = candidates(model.vocabulary.word(word), model.vocabulary, lexicon.embeddings,
                                lexicon.synonyms, cfg.strategy, cfg.sigma);
        std::int32_t n_moved = static_cast<std::int32_t>(positions.size());
        for (std::int32_t c : cands) {
            double gain;
            if (scoring == OracleScoring::surrogate) {
                gain = marginal_q_scored(model, scores, cfg.target_topic, word, c, n_moved,
                                         cfg.level, cfg.type);
            } else {
                Document adv = victim;
                for (std::int32_t pos : positions) {
                    adv.tokens[static_cast<std::size_t>(pos)] = c;
                    adv.raw_tokens[static_cast<std::size_t>(pos)] = model.vocabulary.word(c);
                }
                double mean = 0.0;
                for (std::int32_t j = 0; j < oracle.num_seeds; ++j) {
                    auto theta = infer(model, adv, oracle.infer_iterations, oracle.infer_burn_in,
                                       derive_seed(oracle.seed, static_cast<std::uint64_t>(j), 0));
                    mean += theta.theta[static_cast<std::size_t>(cfg.target_topic)];
                }
                mean /= oracle.num_seeds;
                gain = cfg.type == AttackType::promote ? mean - vic_ref : vic_ref - mean;
            }
            if (gain > best_gain) {
                best_gain = gain;
                best = {positions.front(), word, c, gain};
                found = true;
            }
        }
    }

    if (!found) throw ConfigError("no feasible replacement pair for document '" + victim.id + "'");
    return best;
}

}  // namespace evalda
