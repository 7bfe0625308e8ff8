#include "evalda/lda.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "evalda/errors.hpp"
#include "evalda/util.hpp"

namespace evalda {

namespace {

// Draws an index proportional to weights[0..n); weights need not normalize.
std::int32_t sample_index(Rng& rng, const double* weights, std::int32_t n) {
    double total = 0.0;
    for (std::int32_t i = 0; i < n; ++i) total += weights[i];
    double r = rng.uniform() * total;
    double acc = 0.0;
    for (std::int32_t i = 0; i < n; ++i) {
        acc += weights[i];
        if (r < acc) return i;
    }
    return n - 1;
}

}  // namespace

TopicModel train(const Corpus& corpus, std::int32_t num_topics, double alpha, double beta,
                 std::int32_t iterations, std::uint64_t seed) {
    const std::int32_t k_count = num_topics;
    const std::int32_t v_count = corpus.vocabulary.size();
    if (k_count < 2) throw ConfigError("need at least 2 topics");
    if (k_count > v_count) throw ConfigError("more topics than vocabulary words");
    if (iterations < 1) throw ConfigError("need at least 1 training iteration");
    if (alpha <= 0 || beta <= 0) throw ConfigError("alpha and beta must be positive");
    if (corpus.documents.empty()) throw ConfigError("empty corpus");

    const std::size_t kV = static_cast<std::size_t>(k_count) * v_count;
    std::vector<std::int64_t> c_kv(kV, 0);
    std::vector<std::int64_t> c_k(k_count, 0);
    std::vector<std::vector<std::int32_t>> z(corpus.documents.size());
    std::vector<std::vector<std::int32_t>> n_mk(corpus.documents.size(),
                                                std::vector<std::int32_t>(k_count, 0));

    Rng rng(seed);
    for (std::size_t m = 0; m < corpus.documents.size(); ++m) {
        const auto& doc = corpus.documents[m];
        z[m].resize(doc.tokens.size(), -1);
        for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
            std::int32_t v = doc.tokens[i];
            if (v == kOovId) continue;
            std::int32_t k = static_cast<std::int32_t>(rng.below(static_cast<std::uint64_t>(k_count)));
            z[m][i] = k;
            ++c_kv[static_cast<std::size_t>(k) * v_count + v];
            ++c_k[k];
            ++n_mk[m][k];
        }
    }

    const double v_beta = v_count * beta;
    std::vector<double> weights(k_count);
    for (std::int32_t it = 0; it < iterations; ++it) {
        for (std::size_t m = 0; m < corpus.documents.size(); ++m) {
            const auto& doc = corpus.documents[m];
            for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
                std::int32_t v = doc.tokens[i];
                if (v == kOovId) continue;
                std::int32_t old_k = z[m][i];
                --c_kv[static_cast<std::size_t>(old_k) * v_count + v];
                --c_k[old_k];
                --n_mk[m][old_k];

                for (std::int32_t k = 0; k < k_count; ++k) {
                    double word_part = (c_kv[static_cast<std::size_t>(k) * v_count + v] + beta) /
                                       (c_k[k] + v_beta);
                    weights[k] = word_part * (n_mk[m][k] + alpha);
                }
                std::int32_t new_k = sample_index(rng, weights.data(), k_count);

                z[m][i] = new_k;
                ++c_kv[static_cast<std::size_t>(new_k) * v_count + v];
                ++c_k[new_k];
                ++n_mk[m][new_k];
            }
        }
    }

    TopicModel model;
    model.num_topics = k_count;
    model.alpha = alpha;
    model.beta = beta;
    model.train_iterations = iterations;
    model.seed = seed;
    model.vocabulary = corpus.vocabulary;
    model.phi.resize(kV);
    for (std::int32_t k = 0; k < k_count; ++k) {
        double denom = c_k[k] + v_beta;
        for (std::int32_t v = 0; v < v_count; ++v)
            model.phi[static_cast<std::size_t>(k) * v_count + v] =
                (c_kv[static_cast<std::size_t>(k) * v_count + v] + beta) / denom;
    }
    return model;
}

TopicDistribution infer(const TopicModel& model, const Document& doc, std::int32_t iterations,
                        std::int32_t burn_in, std::uint64_t seed, InferStats* stats) {
    const std::int32_t k_count = model.num_topics;
    if (iterations < 1) throw ConfigError("need at least 1 inference iteration");
    if (burn_in < 0 || burn_in >= iterations) throw ConfigError("burn-in must be below iterations");

    std::vector<std::int32_t> positions;
    std::int32_t oov = 0;
    for (std::int32_t v : doc.tokens) {
        if (v == kOovId || v >= model.vocab_size()) {
            ++oov;
            continue;
        }
        positions.push_back(v);
    }
    if (stats) stats->oov_skipped = oov;
    if (positions.empty())
        throw InferenceError("document '" + doc.id + "' has no in-vocabulary tokens");

    SamplerState state{{}, {}, Rng(seed)};
    state.assignments.resize(positions.size());
    state.topic_counts.assign(k_count, 0);
    for (std::size_t i = 0; i < positions.size(); ++i) {
        std::int32_t k = static_cast<std::int32_t>(state.rng.below(static_cast<std::uint32_t>(k_count)));
        state.assignments[i] = k;
        ++state.topic_counts[k];
    }

    const double n_total = static_cast<double>(positions.size());
    const double k_alpha = k_count * model.alpha;
    std::vector<double> weights(k_count);
    std::vector<double> theta_acc(k_count, 0.0);
    std::int32_t kept = 0;

    for (std::int32_t it = 1; it <= iterations; ++it) {
        for (std::size_t i = 0; i < positions.size(); ++i) {
            std::int32_t v = positions[i];
            std::int32_t old_k = state.assignments[i];
            --state.topic_counts[old_k];

            for (std::int32_t k = 0; k < k_count; ++k)
                weights[k] = model.phi_at(k, v) * (state.topic_counts[k] + model.alpha);
            std::int32_t new_k = sample_index(state.rng, weights.data(), k_count);

            state.assignments[i] = new_k;
            ++state.topic_counts[new_k];
        }
        if (it > burn_in) {
            for (std::int32_t k = 0; k < k_count; ++k)
                theta_acc[k] += (state.topic_counts[k] + model.alpha) / (n_total + k_alpha);
            ++kept;
        }
    }

    TopicDistribution dist;
    dist.theta.resize(k_count);
    for (std::int32_t k = 0; k < k_count; ++k) dist.theta[k] = theta_acc[k] / kept;
    return dist;
}

SyntheticData generate_synthetic(std::int32_t num_topics, std::int32_t vocab_size,
                                 std::int32_t num_docs, std::int32_t doc_len, double alpha,
                                 double beta, std::uint64_t seed) {
    if (num_topics < 1) throw ConfigError("need at least 1 topic");
    if (vocab_size < num_topics) throw ConfigError("vocabulary smaller than topic count");
    if (num_docs < 1 || doc_len < 1) throw ConfigError("need at least 1 document and 1 token");
    if (alpha <= 0 || beta <= 0) throw ConfigError("alpha and beta must be positive");

    SyntheticData data;
    auto pad = [](std::int32_t value, std::size_t width) {
        std::string s = std::to_string(value);
        while (s.size() < width) s.insert(s.begin(), '0');
        return s;
    };
    // Letters only so the words survive tokenization when documents are
    // round-tripped through text files. Fixed width keeps lexicographic
    // order equal to id order; no stopword starts with 'q'.
    std::size_t word_width = 3;
    for (std::int64_t span = 26 * 26 * 26; span < vocab_size; span *= 26) ++word_width;
    auto letters = [&](std::int32_t value) {
        std::string s(word_width, 'a');
        for (std::size_t i = word_width; value > 0 && i-- > 0; value /= 26)
            s[i] = static_cast<char>('a' + value % 26);
        return s;
    };
    for (std::int32_t v = 0; v < vocab_size; ++v)
        data.corpus.vocabulary.add("q" + letters(v));
    data.corpus.name = "synthetic";

    Rng rng(seed);
    data.model.num_topics = num_topics;
    data.model.alpha = alpha;
    data.model.beta = beta;
    data.model.train_iterations = 0;
    data.model.seed = seed;
    data.model.vocabulary = data.corpus.vocabulary;
    data.model.phi.resize(static_cast<std::size_t>(num_topics) * vocab_size);
    for (std::int32_t k = 0; k < num_topics; ++k) {
        auto row = rng.dirichlet(beta, vocab_size);
        std::copy(row.begin(), row.end(),
                  data.model.phi.begin() + static_cast<std::size_t>(k) * vocab_size);
    }

    const std::size_t doc_width = std::to_string(num_docs - 1).size();
    for (std::int32_t m = 0; m < num_docs; ++m) {
        auto theta = rng.dirichlet(alpha, num_topics);
        Document doc;
        doc.id = "doc" + pad(m, doc_width);
        doc.tokens.reserve(doc_len);
        doc.raw_tokens.reserve(doc_len);
        std::vector<std::int32_t> topic_tally(num_topics, 0);
        for (std::int32_t i = 0; i < doc_len; ++i) {
            std::int32_t k = sample_index(rng, theta.data(), num_topics);
            std::int32_t v = sample_index(
                rng, data.model.phi.data() + static_cast<std::size_t>(k) * vocab_size, vocab_size);
            ++topic_tally[k];
            doc.tokens.push_back(v);
            doc.raw_tokens.push_back(data.corpus.vocabulary.word(v));
        }
        data.corpus.documents.push_back(std::move(doc));
        data.doc_topic_probs.push_back(std::move(theta));
        data.doc_topic_counts.push_back(std::move(topic_tally));
    }
    return data;
}

std::int32_t rank_of_topic(const TopicDistribution& dist, std::int32_t k) {
    if (k < 0 || k >= dist.num_topics()) throw ConfigError("topic id out of range");
    std::int32_t rank = 1;
    double p = dist.theta[static_cast<std::size_t>(k)];
    for (std::int32_t j = 0; j < dist.num_topics(); ++j) {
        double q = dist.theta[static_cast<std::size_t>(j)];
        if (q > p || (q == p && j < k)) ++rank;
    }
    return rank;
}

namespace {

std::string format_phi(double value) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

}  // namespace

void save_model(const TopicModel& model, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);

    std::ostringstream meta;
    meta << "K=" << model.num_topics << "\n";
    meta << "V=" << model.vocab_size() << "\n";
    meta << "alpha=" << format_double(model.alpha) << "\n";
    meta << "beta=" << format_double(model.beta) << "\n";
    meta << "train_iterations=" << model.train_iterations << "\n";
    meta << "seed=" << model.seed << "\n";
    write_text_file((dir / "meta").string(), meta.str());

    std::ostringstream vocab;
    for (const auto& w : model.vocabulary.words) vocab << w << "\n";
    write_text_file((dir / "vocab.txt").string(), vocab.str());

    std::ostringstream phi;
    for (std::int32_t k = 0; k < model.num_topics; ++k) {
        for (std::int32_t v = 0; v < model.vocab_size(); ++v) {
            if (v) phi << '\t';
            phi << format_phi(model.phi_at(k, v));
        }
        phi << '\n';
    }
    write_text_file((dir / "phi.tsv").string(), phi.str());
}

TopicModel load_model(const std::filesystem::path& dir) {
    std::unordered_map<std::string, std::string> meta;
    {
        std::istringstream in(read_text_file((dir / "meta").string()));
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty()) continue;
            auto eq = line.find('=');
            if (eq == std::string::npos) throw ParseError("bad meta line: " + line);
            meta[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
        }
    }
    for (const char* key : {"K", "V", "alpha", "beta", "train_iterations", "seed"})
        if (!meta.count(key)) throw ParseError(std::string("meta missing key: ") + key);

    TopicModel model;
    model.num_topics = std::stoi(meta["K"]);
    std::int32_t v_count = std::stoi(meta["V"]);
    model.alpha = std::stod(meta["alpha"]);
    model.beta = std::stod(meta["beta"]);
    model.train_iterations = std::stoi(meta["train_iterations"]);
    model.seed = std::stoull(meta["seed"]);

    {
        std::istringstream in(read_text_file((dir / "vocab.txt").string()));
        std::string line;
        std::int32_t n = 0;
        while (std::getline(in, line)) {
            line = trim(line);
            if (line.empty()) continue;
            if (model.vocabulary.add(line) != n)
                throw ParseError("duplicate word in vocab.txt: " + line);
            ++n;
        }
        if (n != v_count) throw ParseError("vocab.txt size does not match meta V");
    }

    model.phi.reserve(static_cast<std::size_t>(model.num_topics) * v_count);
    {
        std::istringstream in(read_text_file((dir / "phi.tsv").string()));
        std::string line;
        std::int32_t rows = 0;
        while (std::getline(in, line)) {
            if (trim(line).empty()) continue;
            auto cells = split(line, '\t');
            if (static_cast<std::int32_t>(cells.size()) != v_count)
                throw ParseError("phi.tsv row " + std::to_string(rows) + " has wrong arity");
            for (const auto& cell : cells) {
                double value = 0.0;
                auto res = std::from_chars(cell.data(), cell.data() + cell.size(), value);
                if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
                    throw ParseError("bad phi value: " + cell);
                model.phi.push_back(value);
            }
            ++rows;
        }
        if (rows != model.num_topics) throw ParseError("phi.tsv row count does not match meta K");
    }

    for (std::int32_t k = 0; k < model.num_topics; ++k) {
        double sum = 0.0;
        for (std::int32_t v = 0; v < v_count; ++v) {
            double p = model.phi_at(k, v);
            if (p < 0) throw ParseError("negative phi entry");
            sum += p;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw ParseError("phi row " + std::to_string(k) + " does not sum to 1");
    }
    return model;
}

}  // namespace evalda
