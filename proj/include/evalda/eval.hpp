#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "evalda/attack.hpp"
#include "evalda/corpus.hpp"
#include "evalda/lda.hpp"
#include "evalda/lexicon.hpp"

namespace evalda {

// Absolute displacement of the target topic's rank (1 = dominant).
std::int32_t change_of_rank(const TopicDistribution& victim, const TopicDistribution& adversarial,
                            std::int32_t k);

// Absolute change of the target topic's probability.
double change_of_prob(const TopicDistribution& victim, const TopicDistribution& adversarial,
                      std::int32_t k);

// Mean cosine distance over the unique (victim word, adversarial word)
// pairs of a strategy. Pairs where either side lacks a vector are left out
// of the mean; their count lands in *excluded. 0 when nothing qualifies.
double avg_word_distance(const EmbeddingTable& table, const Vocabulary& vocab,
                         const AttackStrategy& strategy, std::int32_t* excluded = nullptr);

// Maps a token window to a dense vector; mean-of-word-vectors by default.
struct SentenceEncoder {
    virtual ~SentenceEncoder() = default;
    virtual std::vector<double> encode(const std::vector<std::string>& tokens) const = 0;
};

// Mean of the available word vectors; empty vector when none of the tokens
// is embedded.
struct MeanEmbeddingEncoder : SentenceEncoder {
    const EmbeddingTable* table;
    explicit MeanEmbeddingEncoder(const EmbeddingTable& t) : table(&t) {}
    std::vector<double> encode(const std::vector<std::string>& tokens) const override;
};

// Mean cosine distance between encodings of the window of +-window tokens
// (clipped at document edges) around each replaced position, victim vs
// adversarial. Windows where either side encodes to nothing are skipped and
// counted in *skipped. 0 when no window contributes.
double avg_sentence_distance(const Document& victim, const Document& adversarial,
                             const AttackStrategy& strategy, const SentenceEncoder& encoder,
                             std::int32_t window = 5, std::int32_t* skipped = nullptr);

struct MetricReport {
    double cor = 0.0;
    double cops = 0.0;
    double awd = 0.0;
    double assd = 0.0;
    std::int32_t n_pairs = 0;             // replaced positions
    std::int32_t awd_excluded = 0;        // vectorless unique pairs left out of awd
    std::int32_t assd_skipped = 0;        // windows with no encodable side
};

MetricReport compute_metrics(const AttackOutcome& outcome, const Document& victim,
                             std::int32_t target_topic, const EmbeddingTable& table,
                             const Vocabulary& vocab, const SentenceEncoder& encoder,
                             std::int32_t window = 5);

struct MetricSummary {
    double mean = 0.0;
    double ci95 = 0.0;  // 1.96 * sample standard error
    std::int32_t count = 0;
};

MetricSummary summarize(const std::vector<double>& values);

struct SampleResult {
    std::int32_t doc_index = 0;  // position in the corpus document list
    std::string doc_id;
    std::int32_t target_topic = 0;
    std::int32_t rank_before = 0;
    std::int32_t rank_after = 0;
    double theta_before = 0.0;
    double theta_after = 0.0;
    MetricReport metrics;
    std::int32_t budget = 0;
    std::int32_t positions_used = 0;
};

// One (method, level, kappa, rank, strategy) grid cell.
struct ExperimentCell {
    std::string method;  // "evalda", "b1".."b4"
    std::int32_t level = 4;
    double kappa = 0.01;
    std::int32_t rank = 10;  // wanted victim rank of the target topic
    SubstitutionStrategy strategy = SubstitutionStrategy::mixture;
    AttackType type = AttackType::promote;
    std::vector<SampleResult> samples;
    MetricSummary cor, cops, awd, assd;
};

struct ExperimentGrid {
    std::vector<std::string> methods = {"evalda", "b1", "b2", "b3", "b4"};
    std::vector<std::int32_t> levels = {4};
    std::vector<double> kappas = {0.01};
    std::vector<std::int32_t> ranks = {10};
    std::vector<SubstitutionStrategy> strategies = {SubstitutionStrategy::mixture};
    AttackType type = AttackType::promote;
    std::int32_t samples = 50;
    double sigma = 0.6;
    std::int32_t infer_iterations = 500;
    std::int32_t infer_burn_in = 100;
    std::uint64_t seed = 0;
    std::int32_t threads = 0;  // 0 = hardware concurrency
};

// Topic whose victim rank is nearest wanted_rank (exact when available,
// ties toward the lower topic id). Ranks are distinct, so exact matches are
// unique when wanted_rank <= K.
std::int32_t select_target_topic(const TopicDistribution& victim, std::int32_t wanted_rank);

using ProgressFn = std::function<void(const std::string&)>;

// Runs every grid cell over a seeded random subset of `docs` (the same
// victims for every cell; fewer eligible documents than grid.samples is a
// warning, not an error). Victim and adversarial theta both come from full
// Gibbs inference. Per-sample RNG streams are derived from (grid.seed, cell
// index, sample index), so thread count never changes results.
std::vector<ExperimentCell> run_experiment(const TopicModel& model,
                                           const std::vector<Document>& docs,
                                           const ExperimentGrid& grid, const LexiconRefs& lexicon,
                                           const ProgressFn& progress = nullptr);

// summary.csv: one row per cell with mean and 95% CI half-width per metric.
// samples.csv: one row per (cell, victim document).
void write_summary_csv(const std::vector<ExperimentCell>& cells, const std::string& path);
void write_samples_csv(const std::vector<ExperimentCell>& cells, const std::string& path);

const char* method_name(BaselineVariant v);
const char* attack_type_name(AttackType t);
const char* strategy_name(SubstitutionStrategy s);

}  // namespace evalda
