#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "evalda/attack.hpp"
#include "evalda/corpus.hpp"
#include "evalda/errors.hpp"
#include "evalda/eval.hpp"
#include "evalda/lda.hpp"
#include "evalda/lexicon.hpp"
#include "evalda/util.hpp"

using namespace evalda;

namespace {

TopicDistribution dist(std::vector<double> theta) {
    TopicDistribution d;
    d.theta = std::move(theta);
    return d;
}

std::vector<double> basis(std::size_t dim, std::size_t axis) {
    std::vector<double> v(dim, 0.0);
    v[axis] = 1.0;
    return v;
}

}  // namespace

TEST_CASE("rank displacement is symmetric and zero for a fixed point") {
    TopicDistribution before = dist({0.5, 0.3, 0.2});
    TopicDistribution after = dist({0.2, 0.3, 0.5});
    CHECK(change_of_rank(before, after, 0) == 2);  // rank 1 -> 3
    CHECK(change_of_rank(before, after, 1) == 0);  // rank 2 -> 2
    CHECK(change_of_rank(before, after, 2) == 2);  // rank 3 -> 1
    CHECK(change_of_rank(after, before, 0) == 2);
    CHECK(change_of_rank(before, before, 0) == 0);
}

TEST_CASE("probability shift is an absolute difference") {
    TopicDistribution before = dist({0.0204, 0.9796});
    TopicDistribution after = dist({0.1327, 0.8673});
    CHECK(change_of_prob(before, after, 0) == doctest::Approx(0.1123).epsilon(1e-12));
    CHECK(change_of_prob(after, before, 0) == change_of_prob(before, after, 0));
    CHECK(change_of_prob(before, before, 1) == 0.0);
    CHECK_THROWS_AS(change_of_prob(before, after, 2), ConfigError);
    CHECK_THROWS_AS(change_of_prob(before, after, -1), ConfigError);
    CHECK_THROWS_AS(change_of_prob(before, dist({1.0}), 0), ConfigError);
}

TEST_CASE("word distance averages unique pairs and reports vectorless ones") {
    Vocabulary vocab;
    for (const char* w : {"alpha", "bravo", "carol", "delta", "echo", "fox"}) vocab.add(w);
    EmbeddingTable table;
    table.dim = 3;
    table.vectors["alpha"] = basis(3, 0);
    table.vectors["bravo"] = basis(3, 1);
    table.vectors["carol"] = {1.0, 0.0, 0.0};
    table.vectors["delta"] = {std::sqrt(0.5), std::sqrt(0.5), 0.0};
    table.vectors["echo"] = basis(3, 2);
    // "fox" stays vectorless

    AttackStrategy strategy;
    strategy.pairs.push_back({0, 0, 1, 0.0});  // alpha -> bravo, orthogonal: 1
    strategy.pairs.push_back({3, 0, 1, 0.0});  // duplicate of the same word pair
    strategy.pairs.push_back({5, 2, 3, 0.0});  // carol -> delta: 1 - sqrt(.5)

    std::int32_t excluded = -1;
    double awd = avg_word_distance(table, vocab, strategy, &excluded);
    CHECK(awd == doctest::Approx((1.0 + 1.0 - std::sqrt(0.5)) / 2.0).epsilon(1e-12));
    CHECK(excluded == 0);

    strategy.pairs.push_back({7, 4, 5, 0.0});  // echo -> fox, no vector
    awd = avg_word_distance(table, vocab, strategy, &excluded);
    CHECK(awd == doctest::Approx((1.0 + 1.0 - std::sqrt(0.5)) / 2.0).epsilon(1e-12));
    CHECK(excluded == 1);

    AttackStrategy empty;
    CHECK(avg_word_distance(table, vocab, empty, &excluded) == 0.0);
    CHECK(excluded == 0);
}

TEST_CASE("mean encoder averages the vectors it can find") {
    EmbeddingTable table;
    table.dim = 2;
    table.vectors["up"] = {0.0, 1.0};
    table.vectors["right"] = {1.0, 0.0};
    MeanEmbeddingEncoder enc(table);

    auto v = enc.encode({"up", "right", "nothing"});
    REQUIRE(v.size() == 2);
    CHECK(v[0] == 0.5);
    CHECK(v[1] == 0.5);
    CHECK(enc.encode({"nothing", "else"}).empty());
    CHECK(enc.encode({}).empty());
}

TEST_CASE("sentence distance over an orthonormal window has a closed form") {
    // 11 distinct tokens, one replaced in the middle; every vector is a
    // distinct basis axis, so the window means differ in exactly one axis.
    std::size_t n = 11;
    Vocabulary vocab;
    EmbeddingTable table;
    table.dim = static_cast<std::int32_t>(n + 1);
    std::vector<std::string> before_tokens, after_tokens;
    for (std::size_t i = 0; i < n; ++i) {
        std::string w = "tok" + std::string(1, static_cast<char>('a' + i));
        vocab.add(w);
        table.vectors[w] = basis(n + 1, i);
        before_tokens.push_back(w);
        after_tokens.push_back(w);
    }
    vocab.add("fresh");
    table.vectors["fresh"] = basis(n + 1, n);
    after_tokens[5] = "fresh";

    Document victim = make_document("v", before_tokens, vocab);
    Document adversarial = make_document("v", after_tokens, vocab);
    AttackStrategy strategy;
    strategy.pairs.push_back({5, victim.tokens[5], adversarial.tokens[5], 0.0});

    MeanEmbeddingEncoder enc(table);
    std::int32_t skipped = -1;
    double assd = avg_sentence_distance(victim, adversarial, strategy, enc, 5, &skipped);
    CHECK(assd == doctest::Approx(1.0 - 10.0 / 11.0).epsilon(1e-9));
    CHECK(skipped == 0);

    // cross-check against the raw cosine of the two window means
    auto ev = enc.encode(before_tokens);
    auto ea = enc.encode(after_tokens);
    CHECK(assd == cosine_distance(ev, ea));
}

TEST_CASE("sentence windows clip at the document edges") {
    Vocabulary vocab;
    EmbeddingTable table;
    table.dim = 4;
    for (std::size_t i = 0; i < 4; ++i) {
        std::string w(1, static_cast<char>('a' + i));
        w += "word";
        vocab.add(w);
        table.vectors[w] = basis(4, i);
    }
    Document victim = make_document("v", {"aword", "bword", "cword"}, vocab);
    Document adversarial = make_document("v", {"dword", "bword", "cword"}, vocab);
    AttackStrategy strategy;
    strategy.pairs.push_back({0, 0, 3, 0.0});

    MeanEmbeddingEncoder enc(table);
    std::int32_t skipped = -1;
    double assd = avg_sentence_distance(victim, adversarial, strategy, enc, 2, &skipped);
    // window [0, 2]: means (e0+e1+e2)/3 vs (e3+e1+e2)/3, cosine 2/3
    CHECK(assd == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(skipped == 0);
}

TEST_CASE("identical windows yield exactly zero sentence distance") {
    Vocabulary vocab;
    vocab.add("one");
    vocab.add("two");
    EmbeddingTable table;
    table.dim = 2;
    table.vectors["one"] = {0.6, 0.8};
    table.vectors["two"] = {0.6, 0.8};  // same vector, different word
    Document victim = make_document("v", {"one", "one", "one"}, vocab);
    Document adversarial = make_document("v", {"one", "two", "one"}, vocab);
    AttackStrategy strategy;
    strategy.pairs.push_back({1, 0, 1, 0.0});
    MeanEmbeddingEncoder enc(table);
    CHECK(avg_sentence_distance(victim, adversarial, strategy, enc) == 0.0);
}

TEST_CASE("unencodable windows are skipped and counted") {
    Vocabulary vocab;
    vocab.add("ghost");
    vocab.add("spook");
    EmbeddingTable table;  // nothing embedded
    Document victim = make_document("v", {"ghost", "ghost"}, vocab);
    Document adversarial = make_document("v", {"spook", "ghost"}, vocab);
    AttackStrategy strategy;
    strategy.pairs.push_back({0, 0, 1, 0.0});
    MeanEmbeddingEncoder enc(table);
    std::int32_t skipped = -1;
    CHECK(avg_sentence_distance(victim, adversarial, strategy, enc, 5, &skipped) == 0.0);
    CHECK(skipped == 1);

    Document longer = make_document("v", {"ghost", "ghost", "ghost"}, vocab);
    CHECK_THROWS_AS(avg_sentence_distance(victim, longer, strategy, enc), ConfigError);
}

TEST_CASE("metric bundle wires the pieces together") {
    Vocabulary vocab;
    for (const char* w : {"alpha", "bravo", "carol"}) vocab.add(w);
    EmbeddingTable table;
    table.dim = 2;
    table.vectors["alpha"] = {1.0, 0.0};
    table.vectors["bravo"] = {0.0, 1.0};
    table.vectors["carol"] = {1.0, 0.0};

    Document victim = make_document("v", {"alpha", "bravo", "alpha"}, vocab);
    AttackOutcome outcome;
    outcome.adversarial = make_document("v", {"carol", "bravo", "alpha"}, vocab);
    outcome.strategy.pairs.push_back({0, 0, 2, 0.0});
    outcome.budget = 1;
    outcome.theta_vic = dist({0.6, 0.4});
    outcome.theta_adv = dist({0.3, 0.7});

    MeanEmbeddingEncoder enc(table);
    MetricReport report = compute_metrics(outcome, victim, 0, table, vocab, enc);
    CHECK(report.cor == 1.0);  // rank 1 -> 2
    CHECK(report.cops == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(report.awd == 0.0);  // alpha and carol share a vector
    CHECK(report.assd == 0.0);
    CHECK(report.n_pairs == 1);
    CHECK(report.awd_excluded == 0);
    CHECK(report.assd_skipped == 0);

    AttackOutcome untouched;
    untouched.adversarial = victim;
    untouched.theta_vic = dist({0.6, 0.4});
    untouched.theta_adv = dist({0.6, 0.4});
    MetricReport zero = compute_metrics(untouched, victim, 1, table, vocab, enc);
    CHECK(zero.cor == 0.0);
    CHECK(zero.cops == 0.0);
    CHECK(zero.awd == 0.0);
    CHECK(zero.assd == 0.0);
    CHECK(zero.n_pairs == 0);
}

TEST_CASE("summaries use the sample standard error") {
    MetricSummary none = summarize({});
    CHECK(none.mean == 0.0);
    CHECK(none.ci95 == 0.0);
    CHECK(none.count == 0);

    MetricSummary one = summarize({3.5});
    CHECK(one.mean == 3.5);
    CHECK(one.ci95 == 0.0);
    CHECK(one.count == 1);

    MetricSummary four = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(four.mean == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(four.ci95 == doctest::Approx(1.96 * std::sqrt(5.0 / 3.0) / 2.0).epsilon(1e-12));
    CHECK(four.count == 4);

    MetricSummary flat = summarize({2.0, 2.0, 2.0});
    CHECK(flat.mean == 2.0);
    CHECK(flat.ci95 == 0.0);
}

TEST_CASE("target selection prefers the exact rank then the nearest one") {
    TopicDistribution theta = dist({0.5, 0.3, 0.2});
    CHECK(select_target_topic(theta, 1) == 0);
    CHECK(select_target_topic(theta, 2) == 1);
    CHECK(select_target_topic(theta, 3) == 2);
    CHECK(select_target_topic(theta, 7) == 2);  // nearest available rank is 3
    CHECK(select_target_topic(dist({1.0}), 10) == 0);
}

TEST_CASE("experiment grids validate their inputs") {
    SyntheticData data = generate_synthetic(3, 30, 6, 40, 0.2, 0.1, 91);
    EmbeddingTable table = synthetic_embeddings(data.model, 4, 0.2, 8);
    SynonymTable synonyms;
    StopwordSet stopwords;
    LexiconRefs lexicon{table, synonyms, stopwords};

    ExperimentGrid grid;
    grid.methods = {"zz"};
    CHECK_THROWS_AS(run_experiment(data.model, data.corpus.documents, grid, lexicon), ConfigError);
    grid.methods = {"evalda"};
    grid.samples = 0;
    CHECK_THROWS_AS(run_experiment(data.model, data.corpus.documents, grid, lexicon), ConfigError);
    grid = ExperimentGrid{};
    grid.kappas = {};
    CHECK_THROWS_AS(run_experiment(data.model, data.corpus.documents, grid, lexicon), ConfigError);
    grid = ExperimentGrid{};
    CHECK_THROWS_AS(run_experiment(data.model, {}, grid, lexicon), ConfigError);
}

TEST_CASE("experiments are deterministic and indifferent to thread count") {
    SyntheticData data = generate_synthetic(3, 40, 12, 50, 0.2, 0.1, 92);
    EmbeddingTable table = synthetic_embeddings(data.model, 4, 0.2, 9);
    SynonymTable synonyms;
    StopwordSet stopwords;
    LexiconRefs lexicon{table, synonyms, stopwords};

    ExperimentGrid grid;
    grid.methods = {"evalda", "b1"};
    grid.levels = {2};
    grid.kappas = {0.05};
    grid.ranks = {1};
    grid.strategies = {SubstitutionStrategy::embedding};
    grid.samples = 5;
    grid.sigma = 1.2;
    grid.infer_iterations = 120;
    grid.infer_burn_in = 20;
    grid.seed = 77;

    grid.threads = 1;
    auto serial = run_experiment(data.model, data.corpus.documents, grid, lexicon);
    grid.threads = 3;
    auto threaded = run_experiment(data.model, data.corpus.documents, grid, lexicon);

    REQUIRE(serial.size() == 2);
    CHECK(serial[0].method == "evalda");
    CHECK(serial[1].method == "b1");
    for (const auto& cell : serial) REQUIRE(cell.samples.size() == 5);

    write_summary_csv(serial, "eval_summary_a.csv");
    write_summary_csv(threaded, "eval_summary_b.csv");
    write_samples_csv(serial, "eval_samples_a.csv");
    write_samples_csv(threaded, "eval_samples_b.csv");
    CHECK(read_text_file("eval_summary_a.csv") == read_text_file("eval_summary_b.csv"));
    CHECK(read_text_file("eval_samples_a.csv") == read_text_file("eval_samples_b.csv"));

    // cell aggregates are plain means of the per-sample rows
    for (const auto& cell : serial) {
        std::vector<double> cor, cops;
        for (const auto& r : cell.samples) {
            cor.push_back(r.metrics.cor);
            cops.push_back(r.metrics.cops);
        }
        MetricSummary mc = summarize(cor);
        CHECK(cell.cor.mean == mc.mean);
        CHECK(cell.cor.ci95 == mc.ci95);
        CHECK(cell.cops.mean == summarize(cops).mean);
    }

    // every cell attacks the same victim documents in the same order
    for (std::size_t si = 0; si < serial[0].samples.size(); ++si) {
        CHECK(serial[0].samples[si].doc_id == serial[1].samples[si].doc_id);
        CHECK(serial[0].samples[si].doc_index == serial[1].samples[si].doc_index);
    }

    // per-sample invariants
    for (const auto& cell : serial) {
        for (const auto& r : cell.samples) {
            CHECK(r.positions_used <= r.budget);
            CHECK(r.budget == static_cast<std::int32_t>(std::floor(50 * 0.05)));
            CHECK(r.rank_before >= 1);
            CHECK(r.rank_before <= 3);
            CHECK(r.metrics.cor == std::abs(r.rank_after - r.rank_before));
            CHECK(r.metrics.cops ==
                  doctest::Approx(std::abs(r.theta_after - r.theta_before)).epsilon(1e-12));
        }
    }

    std::remove("eval_summary_a.csv");
    std::remove("eval_summary_b.csv");
    std::remove("eval_samples_a.csv");
    std::remove("eval_samples_b.csv");
}

TEST_CASE("csv writers emit the documented headers and stable bytes") {
    std::vector<ExperimentCell> cells(1);
    cells[0].method = "evalda";
    cells[0].level = 4;
    cells[0].kappa = 0.01;
    cells[0].rank = 10;
    cells[0].strategy = SubstitutionStrategy::mixture;
    cells[0].type = AttackType::promote;
    SampleResult r;
    r.doc_index = 3;
    r.doc_id = "doc003";
    r.target_topic = 2;
    r.rank_before = 4;
    r.rank_after = 2;
    r.theta_before = 0.125;
    r.theta_after = 0.25;
    r.metrics.cor = 2.0;
    r.metrics.cops = 0.125;
    r.metrics.awd = 0.5;
    r.metrics.assd = 0.0625;
    r.budget = 3;
    r.positions_used = 2;
    cells[0].samples.push_back(r);
    cells[0].cor = summarize({2.0});
    cells[0].cops = summarize({0.125});
    cells[0].awd = summarize({0.5});
    cells[0].assd = summarize({0.0625});

    write_summary_csv(cells, "eval_header_summary.csv");
    write_samples_csv(cells, "eval_header_samples.csv");
    std::string summary = read_text_file("eval_header_summary.csv");
    std::string samples = read_text_file("eval_header_samples.csv");

    CHECK(summary ==
          "method,type,level,kappa,rank,strategy,samples,"
          "cor_mean,cor_ci,cops_mean,cops_ci,awd_mean,awd_ci,assd_mean,assd_ci\n"
          "evalda,promote,4,0.01,10,mixture,1,2,0,0.125,0,0.5,0,0.0625,0\n");
    CHECK(samples ==
          "method,type,level,kappa,rank,strategy,doc_index,doc_id,target_topic,"
          "rank_before,rank_after,theta_before,theta_after,cor,cops,awd,assd,"
          "budget,positions_used\n"
          "evalda,promote,4,0.01,10,mixture,3,doc003,2,4,2,0.125,0.25,2,0.125,0.5,0.0625,3,2\n");

    std::remove("eval_header_summary.csv");
    std::remove("eval_header_samples.csv");
}

TEST_CASE("method and enum names match the file formats") {
    CHECK(std::string(method_name(BaselineVariant::random_random)) == "b1");
    CHECK(std::string(method_name(BaselineVariant::random_nearest)) == "b2");
    CHECK(std::string(method_name(BaselineVariant::frequent_random)) == "b3");
    CHECK(std::string(method_name(BaselineVariant::frequent_nearest)) == "b4");
    CHECK(std::string(attack_type_name(AttackType::promote)) == "promote");
    CHECK(std::string(attack_type_name(AttackType::demote)) == "demote");
    CHECK(std::string(strategy_name(SubstitutionStrategy::embedding)) == "embedding");
    CHECK(std::string(strategy_name(SubstitutionStrategy::synonym)) == "synonym");
    CHECK(std::string(strategy_name(SubstitutionStrategy::mixture)) == "mixture");
}
