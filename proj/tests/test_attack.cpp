#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "evalda/attack.hpp"
#include "evalda/corpus.hpp"
#include "evalda/errors.hpp"
#include "evalda/eval.hpp"
#include "evalda/lda.hpp"
#include "evalda/lexicon.hpp"
#include "evalda/rng.hpp"
#include "evalda/surrogate.hpp"

using namespace evalda;

namespace {

TopicModel matrix_model(std::vector<std::string> words, std::vector<std::vector<double>> rows) {
    TopicModel model;
    model.num_topics = static_cast<std::int32_t>(rows.size());
    model.alpha = 0.1;
    model.beta = 0.01;
    for (auto& w : words) model.vocabulary.add(w);
    for (const auto& row : rows) {
        REQUIRE(row.size() == words.size());
        model.phi.insert(model.phi.end(), row.begin(), row.end());
    }
    return model;
}

struct FixedLexicon {
    EmbeddingTable embeddings;
    SynonymTable synonyms;
    StopwordSet stopwords;

    LexiconRefs refs() const { return LexiconRefs{embeddings, synonyms, stopwords}; }
};

AttackConfig promote_cfg(std::int32_t topic, double kappa,
                         SubstitutionStrategy strategy = SubstitutionStrategy::synonym) {
    AttackConfig cfg;
    cfg.type = AttackType::promote;
    cfg.target_topic = topic;
    cfg.kappa = kappa;
    cfg.strategy = strategy;
    cfg.infer_iterations = 120;
    cfg.infer_burn_in = 20;
    return cfg;
}

}  // namespace

TEST_CASE("config validation covers the documented ranges") {
    TopicModel model = matrix_model({"alpha", "bravo"}, {{0.6, 0.4}, {0.3, 0.7}});
    Document doc = make_document("d", {"alpha", "bravo"}, model.vocabulary);
    FixedLexicon lex;

    AttackConfig cfg = promote_cfg(5, 0.5);
    CHECK_THROWS_AS(plan_greedy(model, doc, cfg, lex.refs()), ConfigError);
    cfg = promote_cfg(0, 0.0);
    CHECK_THROWS_AS(plan_greedy(model, doc, cfg, lex.refs()), ConfigError);
    cfg = promote_cfg(0, 1.5);
    CHECK_THROWS_AS(plan_greedy(model, doc, cfg, lex.refs()), ConfigError);
    cfg = promote_cfg(0, 0.5);
    cfg.sigma = 0.0;
    CHECK_THROWS_AS(plan_greedy(model, doc, cfg, lex.refs()), ConfigError);
    cfg = promote_cfg(0, 0.5);
    cfg.level.t = -1;
    CHECK_THROWS_AS(plan_greedy(model, doc, cfg, lex.refs()), ConfigError);
}

TEST_CASE("greedy picks the best replacement and improves the estimate") {
    // word "alpha" can become "delta" (strong for topic 0) or "carol" (weak)
    TopicModel model = matrix_model({"alpha", "bravo", "carol", "delta"},
                                    {{0.10, 0.10, 0.25, 0.55}, {0.40, 0.40, 0.15, 0.05}});
    Document doc = make_document("d", {"alpha", "bravo"}, model.vocabulary);
    FixedLexicon lex;
    lex.synonyms["alpha"] = {"carol", "delta"};

    AttackConfig cfg = promote_cfg(0, 0.5);
    AttackPlan plan = plan_greedy(model, doc, cfg, lex.refs());
    REQUIRE(plan.budget == 1);
    REQUIRE(plan.strategy.pairs.size() == 1);
    const ReplacementPair& pair = plan.strategy.pairs[0];
    CHECK(pair.position == 0);
    CHECK(pair.victim_word == 0);
    CHECK(pair.adversarial_word == 3);
    CHECK(pair.gain > 0.0);
    CHECK(plan.adversarial.raw_tokens[0] == "delta");
    CHECK(plan.adversarial.raw_tokens[1] == "bravo");

    // single-occurrence replacement: the recorded gain is the estimate delta
    double direct = plan.theta_adv_est.theta[0] - plan.theta_vic_est.theta[0];
    CHECK(pair.gain == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("equal gains resolve toward the lower word id") {
    // alpha and bravo have bit-identical phi columns and the same candidate
    TopicModel model = matrix_model({"alpha", "bravo", "carol", "delta"},
                                    {{0.10, 0.10, 0.35, 0.45}, {0.40, 0.40, 0.15, 0.05}});
    Document doc = make_document("d", {"bravo", "alpha"}, model.vocabulary);
    FixedLexicon lex;
    lex.synonyms["alpha"] = {"delta"};
    lex.synonyms["bravo"] = {"delta"};

    AttackConfig cfg = promote_cfg(0, 0.5);  // budget 1 of 2 positions
    AttackPlan plan = plan_greedy(model, doc, cfg, lex.refs());
    REQUIRE(plan.strategy.pairs.size() == 1);
    CHECK(plan.strategy.pairs[0].victim_word == 0);  // "alpha", at position 1
    CHECK(plan.strategy.pairs[0].position == 1);
}

TEST_CASE("words with nonpositive gain are left alone") {
    TopicModel model = matrix_model({"alpha", "bravo", "carol"},
                                    {{0.60, 0.30, 0.10}, {0.10, 0.30, 0.60}});
    Document doc = make_document("d", {"alpha", "alpha"}, model.vocabulary);
    FixedLexicon lex;
    lex.synonyms["alpha"] = {"carol"};  // strictly worse for topic 0

    AttackConfig cfg = promote_cfg(0, 1.0);
    AttackPlan plan = plan_greedy(model, doc, cfg, lex.refs());
    CHECK(plan.strategy.pairs.empty());
    CHECK(plan.adversarial.tokens == doc.tokens);
    CHECK(plan.theta_adv_est.theta == plan.theta_vic_est.theta);
}

TEST_CASE("replacement touches every occurrence of the chosen word") {
    TopicModel model = matrix_model({"alpha", "bravo", "delta"},
                                    {{0.15, 0.15, 0.70}, {0.60, 0.30, 0.10}});
    Document doc =
        make_document("d", {"alpha", "bravo", "alpha", "bravo", "alpha"}, model.vocabulary);
    FixedLexicon lex;
    lex.synonyms["alpha"] = {"delta"};
    lex.synonyms["bravo"] = {"delta"};

    AttackConfig cfg = promote_cfg(0, 0.8);  // budget 4 of 5
    AttackPlan plan = plan_greedy(model, doc, cfg, lex.refs());
    // alpha occurs 3 times and wins; bravo (2 more) would overflow 3+2 > 4
    REQUIRE(plan.strategy.pairs.size() == 3);
    std::set<std::int32_t> positions;
    for (const auto& p : plan.strategy.pairs) {
        CHECK(p.victim_word == 0);
        CHECK(p.adversarial_word == 2);
        positions.insert(p.position);
    }
    CHECK(positions == std::set<std::int32_t>{0, 2, 4});
    CHECK(plan.adversarial.raw_tokens[1] == "bravo");
    CHECK(plan.adversarial.raw_tokens[3] == "bravo");
}

TEST_CASE("selection stops at the first word that would overflow the budget") {
    // delta is the strong candidate; beta's gain is smaller but would fit.
    // The budget walk stops at the overflow rather than skipping past it.
    TopicModel model = matrix_model({"alpha", "bravo", "carol", "delta"},
                                    {{0.05, 0.10, 0.15, 0.70}, {0.45, 0.35, 0.15, 0.05}});
    Document doc =
        make_document("d", {"alpha", "alpha", "bravo", "carol"}, model.vocabulary);
    FixedLexicon lex;
    lex.synonyms["alpha"] = {"delta"};
    lex.synonyms["bravo"] = {"delta"};

    AttackConfig cfg = promote_cfg(0, 0.25);  // budget 1 of 4
    AttackPlan plan = plan_greedy(model, doc, cfg, lex.refs());
    // alpha (2 occurrences, biggest gain) overflows the budget of 1 and the
    // walk stops before reaching bravo
    CHECK(plan.strategy.pairs.empty());
}

TEST_CASE("full attack wires inference and keeps untouched positions") {
    SyntheticData data = generate_synthetic(3, 40, 30, 60, 0.2, 0.1, 33);
    TopicModel model = data.model;
    EmbeddingTable table = synthetic_embeddings(model, 4, 0.2, 5);
    FixedLexicon lex;
    lex.embeddings = table;

    Document victim = data.corpus.documents[0];
    AttackConfig cfg = promote_cfg(1, 0.2, SubstitutionStrategy::embedding);
    cfg.sigma = 0.9;
    cfg.seed = 17;
    AttackOutcome out = evalda_attack(model, victim, cfg, lex.refs());

    CHECK(out.budget == 12);
    CHECK(out.adversarial.length() == victim.length());
    CHECK(static_cast<std::int32_t>(out.strategy.pairs.size()) <= out.budget);
    std::set<std::int32_t> replaced;
    for (const auto& p : out.strategy.pairs) replaced.insert(p.position);
    for (std::int32_t pos = 0; pos < victim.length(); ++pos) {
        if (!replaced.count(pos)) {
            CHECK(out.adversarial.tokens[static_cast<std::size_t>(pos)] ==
                  victim.tokens[static_cast<std::size_t>(pos)]);
            CHECK(out.adversarial.raw_tokens[static_cast<std::size_t>(pos)] ==
                  victim.raw_tokens[static_cast<std::size_t>(pos)]);
        }
    }
    CHECK(out.theta_vic.theta ==
          infer(model, victim, cfg.infer_iterations, cfg.infer_burn_in, cfg.seed).theta);
    CHECK(out.theta_adv.theta ==
          infer(model, out.adversarial, cfg.infer_iterations, cfg.infer_burn_in, cfg.seed).theta);
}

TEST_CASE("baselines respect the budget and their replacement rules") {
    SyntheticData data = generate_synthetic(4, 50, 20, 80, 0.2, 0.1, 44);
    TopicModel model = data.model;
    EmbeddingTable table = synthetic_embeddings(model, 4, 0.2, 6);
    FixedLexicon lex;
    lex.embeddings = table;

    Document victim = data.corpus.documents[3];
    AttackConfig cfg = promote_cfg(0, 0.1, SubstitutionStrategy::embedding);
    cfg.sigma = 1.1;
    cfg.seed = 9;

    for (auto variant : {BaselineVariant::random_random, BaselineVariant::random_nearest,
                         BaselineVariant::frequent_random, BaselineVariant::frequent_nearest}) {
        CAPTURE(static_cast<int>(variant));
        AttackPlan plan = plan_baseline(model, victim, cfg, lex.refs(), variant);
        CHECK(static_cast<std::int32_t>(plan.strategy.pairs.size()) <= plan.budget);
        for (const auto& p : plan.strategy.pairs) {
            CHECK(p.victim_word != p.adversarial_word);
            CHECK(p.gain == 0.0);
            bool nearest = variant == BaselineVariant::random_nearest ||
                           variant == BaselineVariant::frequent_nearest;
            if (nearest) {
                CHECK(word_distance(table, model.vocabulary.word(p.victim_word),
                                    model.vocabulary.word(p.adversarial_word)) <= cfg.sigma);
            }
        }
        AttackPlan again = plan_baseline(model, victim, cfg, lex.refs(), variant);
        CHECK(plan.adversarial.tokens == again.adversarial.tokens);
    }
}

TEST_CASE("topic-guided baselines hit the highest-phi word first") {
    TopicModel model = matrix_model({"alpha", "bravo", "carol"},
                                    {{0.10, 0.60, 0.30}, {0.50, 0.20, 0.30}});
    Document doc = make_document("d", {"alpha", "bravo", "carol"}, model.vocabulary);
    FixedLexicon lex;
    lex.embeddings = EmbeddingTable{};
    lex.embeddings.dim = 2;
    lex.embeddings.vectors["alpha"] = {1.0, 0.0};
    lex.embeddings.vectors["bravo"] = {0.9, std::sqrt(1.0 - 0.81)};
    lex.embeddings.vectors["carol"] = {0.8, std::sqrt(1.0 - 0.64)};

    AttackConfig cfg = promote_cfg(0, 0.34, SubstitutionStrategy::embedding);
    cfg.sigma = 1.0;
    cfg.seed = 2;
    // budget 1: only the word with the largest phi[0][v] gets replaced
    AttackPlan plan =
        plan_baseline(model, doc, cfg, lex.refs(), BaselineVariant::frequent_nearest);
    REQUIRE(plan.strategy.pairs.size() == 1);
    CHECK(plan.strategy.pairs[0].victim_word == 1);  // "bravo", phi 0.60
    CHECK(plan.strategy.pairs[0].position == 1);
}

TEST_CASE("nearest-neighbor baselines skip words whose neighbor is too far") {
    TopicModel model = matrix_model({"alpha", "bravo"}, {{0.7, 0.3}, {0.2, 0.8}});
    Document doc = make_document("d", {"alpha", "bravo"}, model.vocabulary);
    FixedLexicon lex;
    lex.embeddings.dim = 2;
    lex.embeddings.vectors["alpha"] = {1.0, 0.0};
    lex.embeddings.vectors["bravo"] = {-1.0, 0.0};  // distance 2 from alpha

    AttackConfig cfg = promote_cfg(0, 1.0, SubstitutionStrategy::embedding);
    cfg.sigma = 0.5;
    AttackPlan plan =
        plan_baseline(model, doc, cfg, lex.refs(), BaselineVariant::random_nearest);
    CHECK(plan.strategy.pairs.empty());
    cfg.sigma = 2.0;
    plan = plan_baseline(model, doc, cfg, lex.refs(), BaselineVariant::random_nearest);
    CHECK(plan.strategy.pairs.size() == 2);
}

TEST_CASE("exhaustive oracle agrees with the greedy pick under surrogate scoring") {
    Rng rng(71);
    OracleConfig oracle;
    oracle.infer_iterations = 100;
    oracle.infer_burn_in = 20;
    for (int trial = 0; trial < 25; ++trial) {
        std::int32_t k_count = 2 + static_cast<std::int32_t>(rng.below(3));
        std::int32_t v_count = 8 + static_cast<std::int32_t>(rng.below(8));
        SyntheticData data = generate_synthetic(k_count, v_count, 4, 8, 0.3, 0.3,
                                                1000 + static_cast<std::uint64_t>(trial));
        TopicModel model = data.model;

        // distinct tokens so every feasible word has exactly one occurrence
        std::vector<std::string> tokens;
        std::set<std::int32_t> used;
        Rng pick(derive_seed(5, static_cast<std::uint64_t>(trial)));
        while (tokens.size() < 6) {
            std::int32_t v = static_cast<std::int32_t>(pick.below(static_cast<std::uint32_t>(v_count)));
            if (used.insert(v).second) tokens.push_back(model.vocabulary.word(v));
        }
        Document doc = make_document("tiny", tokens, model.vocabulary);

        FixedLexicon lex;
        for (std::int32_t v : used) {
            const std::string& w = model.vocabulary.word(v);
            std::set<std::string>& entry = lex.synonyms[w];
            while (entry.size() < 2) {
                std::int32_t c = static_cast<std::int32_t>(pick.below(static_cast<std::uint32_t>(v_count)));
                if (c != v) entry.insert(model.vocabulary.word(c));
            }
        }

        AttackConfig cfg = promote_cfg(static_cast<std::int32_t>(
                                           pick.below(static_cast<std::uint32_t>(k_count))),
                                       1.5 / 6.0);
        CAPTURE(trial);
        ReplacementPair oracle_pick;
        try {
            oracle_pick = exhaustive_single(model, doc, cfg, lex.refs(),
                                            OracleScoring::surrogate, oracle);
        } catch (const EstimateError&) {
            continue;
        }
        if (oracle_pick.gain <= 0.0) continue;  // greedy would select nothing
        AttackPlan plan = plan_greedy(model, doc, cfg, lex.refs());
        REQUIRE(plan.strategy.pairs.size() == 1);
        CHECK(plan.strategy.pairs[0].victim_word == oracle_pick.victim_word);
        CHECK(plan.strategy.pairs[0].adversarial_word == oracle_pick.adversarial_word);
        CHECK(plan.strategy.pairs[0].gain == oracle_pick.gain);
    }
}

TEST_CASE("gibbs-scored oracle finds the planted best pair") {
    // one feasible word, two candidates: delta clearly beats carol for topic 0
    TopicModel model = matrix_model({"alpha", "bravo", "carol", "delta"},
                                    {{0.05, 0.05, 0.20, 0.70}, {0.40, 0.40, 0.15, 0.05}});
    Document doc = make_document("d", {"alpha", "bravo", "bravo"}, model.vocabulary);
    FixedLexicon lex;
    lex.synonyms["alpha"] = {"carol", "delta"};

    AttackConfig cfg = promote_cfg(0, 0.4);
    OracleConfig oracle;
    oracle.infer_iterations = 150;
    oracle.infer_burn_in = 30;
    oracle.num_seeds = 3;
    ReplacementPair pick =
        exhaustive_single(model, doc, cfg, lex.refs(), OracleScoring::gibbs, oracle);
    CHECK(pick.victim_word == 0);
    CHECK(pick.adversarial_word == 3);
    CHECK(pick.gain > 0.0);
    CHECK(pick.position == 0);

    ReplacementPair again =
        exhaustive_single(model, doc, cfg, lex.refs(), OracleScoring::gibbs, oracle);
    CHECK(again.gain == pick.gain);
}

TEST_CASE("oracle without any feasible pair refuses") {
    TopicModel model = matrix_model({"alpha", "bravo"}, {{0.6, 0.4}, {0.3, 0.7}});
    Document doc = make_document("d", {"alpha"}, model.vocabulary);
    FixedLexicon lex;  // no synonyms, no embeddings
    AttackConfig cfg = promote_cfg(0, 1.0);
    OracleConfig oracle;
    CHECK_THROWS_AS(
        exhaustive_single(model, doc, cfg, lex.refs(), OracleScoring::surrogate, oracle),
        ConfigError);
}

TEST_CASE("demote selections lower the estimated target share") {
    SyntheticData data = generate_synthetic(3, 30, 10, 50, 0.2, 0.1, 55);
    TopicModel model = data.model;
    EmbeddingTable table = synthetic_embeddings(model, 4, 0.2, 7);
    FixedLexicon lex;
    lex.embeddings = table;

    int attempted = 0, lowered = 0;
    for (std::int32_t m = 0; m < 10; ++m) {
        Document victim = data.corpus.documents[static_cast<std::size_t>(m)];
        TopicDistribution est = estimate_theta(model, word_counts(victim), ApproximationLevel{4});
        std::int32_t top = rank_of_topic(est, 0) == 1 ? 0 : 1;
        AttackConfig cfg = promote_cfg(top, 0.3, SubstitutionStrategy::embedding);
        cfg.type = AttackType::demote;
        cfg.sigma = 0.9;
        AttackPlan plan = plan_greedy(model, victim, cfg, lex.refs());
        if (plan.strategy.pairs.empty()) continue;
        ++attempted;
        if (plan.theta_adv_est.theta[static_cast<std::size_t>(top)] <
            plan.theta_vic_est.theta[static_cast<std::size_t>(top)])
            ++lowered;
    }
    CHECK(attempted > 0);
    CHECK(lowered == attempted);
}
