#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "evalda/corpus.hpp"
#include "evalda/rng.hpp"

namespace evalda {

// Trained topic model: fixed K x V topic-word matrix plus hyperparameters.
struct TopicModel {
    std::int32_t num_topics = 0;
    double alpha = 0.1;
    double beta = 0.01;
    std::int32_t train_iterations = 0;
    std::uint64_t seed = 0;
    Vocabulary vocabulary;
    std::vector<double> phi;  // row-major K x V, each row sums to 1

    std::int32_t vocab_size() const { return vocabulary.size(); }

    double phi_at(std::int32_t k, std::int32_t v) const {
        return phi[static_cast<std::size_t>(k) * vocabulary.size() + static_cast<std::size_t>(v)];
    }

    std::span<const double> topic_row(std::int32_t k) const {
        return {phi.data() + static_cast<std::size_t>(k) * vocabulary.size(),
                static_cast<std::size_t>(vocabulary.size())};
    }
};

struct TopicDistribution {
    std::vector<double> theta;

    std::int32_t num_topics() const { return static_cast<std::int32_t>(theta.size()); }
};

// Gibbs chain state for one document during inference.
struct SamplerState {
    std::vector<std::int32_t> assignments;   // per in-vocabulary position
    std::vector<std::int32_t> topic_counts;  // N_mk, sums to |assignments|
    Rng rng;
};

struct InferStats {
    std::int32_t oov_skipped = 0;
};

struct SyntheticData {
    Corpus corpus;
    TopicModel model;                                     // ground truth
    std::vector<std::vector<double>> doc_topic_probs;     // latent theta per document
    std::vector<std::vector<std::int32_t>> doc_topic_counts;  // sampled topic tally per document
};

// Collapsed Gibbs training. Initial assignments are uniform draws from the
// seed stream; each sweep resamples positions in document then position
// order from p(z=k) ~ (C_kv + beta)/(C_k + V beta) * (N_mk + alpha), with the
// current position excluded from all counts (the constant document-side
// denominator is dropped). phi_kv = (C_kv + beta)/(C_k + V beta) from the
// final sweep's counts. Deterministic for a fixed seed.
TopicModel train(const Corpus& corpus, std::int32_t num_topics, double alpha, double beta,
                 std::int32_t iterations, std::uint64_t seed);

// Collapsed Gibbs inference with phi fixed. Out-of-vocabulary tokens are
// skipped (counted in stats). theta is the average of
// (N_mk + alpha)/(N + K alpha) over the post-burn-in iterations.
TopicDistribution infer(const TopicModel& model, const Document& doc, std::int32_t iterations,
                        std::int32_t burn_in, std::uint64_t seed, InferStats* stats = nullptr);

// Samples a corpus from the generative process: phi_k ~ Dir(beta),
// theta_m ~ Dir(alpha), then per position k ~ theta_m, w ~ phi_k.
// Returns the corpus together with the ground-truth model and per-document
// latent topic information.
SyntheticData generate_synthetic(std::int32_t num_topics, std::int32_t vocab_size,
                                 std::int32_t num_docs, std::int32_t doc_len, double alpha,
                                 double beta, std::uint64_t seed);

// 1-based rank of topic k: 1 + count of strictly greater entries; ties are
// broken toward the lower topic id.
std::int32_t rank_of_topic(const TopicDistribution& dist, std::int32_t k);

// Model directory layout: meta (key=value lines K, V, alpha, beta,
// train_iterations, seed), vocab.txt (line number = id), phi.tsv (K rows of
// V tab-separated values, 17 significant digits so loading reproduces phi
// exactly).
void save_model(const TopicModel& model, const std::filesystem::path& dir);
TopicModel load_model(const std::filesystem::path& dir);

}  // namespace evalda
