#include "evalda/lexicon.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "evalda/errors.hpp"
#include "evalda/util.hpp"

namespace evalda {

double cosine_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw ConfigError("vector dimension mismatch");
    if (a.empty()) throw ConfigError("empty vector");
    if (a == b) return 0.0;
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0.0 || nb == 0.0) throw ConfigError("cosine of a zero vector is undefined");
    double cos = dot / (std::sqrt(na) * std::sqrt(nb));
    if (cos > 1.0) cos = 1.0;
    if (cos < -1.0) cos = -1.0;
    return 1.0 - cos;
}

double word_distance(const EmbeddingTable& table, const std::string& a, const std::string& b) {
    const auto* va = table.find(a);
    if (!va) throw WordLookupError("no embedding for word: " + a);
    const auto* vb = table.find(b);
    if (!vb) throw WordLookupError("no embedding for word: " + b);
    return cosine_distance(*va, *vb);
}

std::vector<std::int32_t> candidates(const std::string& word, const Vocabulary& vocab,
                                     const EmbeddingTable& table, const SynonymTable& synonyms,
                                     SubstitutionStrategy strategy, double sigma) {
    std::vector<std::int32_t> result;

    if (strategy == SubstitutionStrategy::embedding || strategy == SubstitutionStrategy::mixture) {
        if (const auto* wv = table.find(word)) {
            for (std::int32_t id = 0; id < vocab.size(); ++id) {
                const std::string& other = vocab.word(id);
                if (other == word) continue;
                const auto* ov = table.find(other);
                if (!ov) continue;
                if (cosine_distance(*wv, *ov) <= sigma) result.push_back(id);
            }
        }
    }

    if (strategy == SubstitutionStrategy::synonym || strategy == SubstitutionStrategy::mixture) {
        auto it = synonyms.find(word);
        if (it != synonyms.end()) {
            const auto* wv = table.find(word);
            for (const auto& syn : it->second) {
                if (syn == word) continue;
                auto id = vocab.id_of(syn);
                if (!id) continue;
                if (wv) {
                    if (const auto* sv = table.find(syn)) {
                        if (cosine_distance(*wv, *sv) > sigma) continue;
                    }
                }
                result.push_back(*id);
            }
        }
    }

    std::sort(result.begin(), result.end());
    result.erase(std::unique(result.begin(), result.end()), result.end());
    return result;
}

std::int32_t nearest_neighbor(const std::string& word, const Vocabulary& vocab,
                              const EmbeddingTable& table) {
    const auto* wv = table.find(word);
    if (!wv) return kOovId;
    std::int32_t best = kOovId;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::int32_t id = 0; id < vocab.size(); ++id) {
        const std::string& other = vocab.word(id);
        if (other == word) continue;
        const auto* ov = table.find(other);
        if (!ov) continue;
        double d = cosine_distance(*wv, *ov);
        if (d < best_d) {
            best_d = d;
            best = id;
        }
    }
    return best;
}

EmbeddingTable load_embeddings(const std::string& path, const Vocabulary* vocab) {
    EmbeddingTable table;
    std::istringstream in(read_text_file(path));
    std::string line;
    std::int64_t line_no = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;

        std::istringstream cells(line);
        std::vector<std::string> parts;
        std::string part;
        while (cells >> part) parts.push_back(part);

        if (first) {
            first = false;
            if (parts.size() == 2) {
                // "count dim" header
                try {
                    std::size_t used = 0;
                    long dim = std::stol(parts[1], &used);
                    std::size_t used0 = 0;
                    (void)std::stol(parts[0], &used0);
                    if (used == parts[1].size() && used0 == parts[0].size() && dim > 0) {
                        table.dim = static_cast<std::int32_t>(dim);
                        continue;
                    }
                } catch (const std::exception&) {
                    // fall through: a two-column data line
                }
            }
        }

        if (parts.size() < 2)
            throw ParseError("embedding line " + std::to_string(line_no) + " has no values");
        std::int32_t dim = static_cast<std::int32_t>(parts.size()) - 1;
        if (table.dim == 0) table.dim = dim;
        if (dim != table.dim)
            throw ParseError("embedding line " + std::to_string(line_no) +
                             " has wrong dimension (" + std::to_string(dim) + " vs " +
                             std::to_string(table.dim) + ")");

        if (vocab && !vocab->contains(parts[0])) continue;

        std::vector<double> vec(static_cast<std::size_t>(dim));
        double norm = 0.0;
        for (std::int32_t i = 0; i < dim; ++i) {
            try {
                vec[static_cast<std::size_t>(i)] = std::stod(parts[static_cast<std::size_t>(i) + 1]);
            } catch (const std::exception&) {
                throw ParseError("bad number on embedding line " + std::to_string(line_no));
            }
            norm += vec[static_cast<std::size_t>(i)] * vec[static_cast<std::size_t>(i)];
        }
        if (norm == 0.0)
            throw ParseError("zero vector on embedding line " + std::to_string(line_no));
        table.vectors[parts[0]] = std::move(vec);
    }
    return table;
}

void save_embeddings(const EmbeddingTable& table, const std::string& path) {
    std::vector<std::string> words;
    words.reserve(table.vectors.size());
    for (const auto& [w, v] : table.vectors) words.push_back(w);
    std::sort(words.begin(), words.end());

    std::ostringstream out;
    out << words.size() << ' ' << table.dim << '\n';
    for (const auto& w : words) {
        out << w;
        for (double x : table.vectors.at(w)) out << ' ' << format_double(x);
        out << '\n';
    }
    write_text_file(path, out.str());
}

SynonymTable load_synonyms(const std::string& path) {
    SynonymTable table;
    std::istringstream in(read_text_file(path));
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 2)
            throw ParseError("synonym line " + std::to_string(line_no) +
                             " is not word<TAB>list");
        std::string word = trim(fields[0]);
        if (word.empty())
            throw ParseError("empty word on synonym line " + std::to_string(line_no));
        for (const auto& raw : split(fields[1], ',')) {
            std::string syn = trim(raw);
            if (syn.empty() || syn == word) continue;
            table[word].insert(syn);
            table[syn].insert(word);
        }
    }
    return table;
}

void save_synonyms(const SynonymTable& table, const std::string& path) {
    std::ostringstream out;
    for (const auto& [word, syns] : table) {
        if (syns.empty()) continue;
        out << word << '\t';
        bool first = true;
        for (const auto& s : syns) {
            if (!first) out << ',';
            out << s;
            first = false;
        }
        out << '\n';
    }
    write_text_file(path, out.str());
}

EmbeddingTable synthetic_embeddings(const TopicModel& model, std::int32_t noise_dims,
                                    double noise_scale, std::uint64_t seed) {
    if (noise_dims < 0) throw ConfigError("noise dimension must be nonnegative");
    EmbeddingTable table;
    table.dim = model.num_topics + noise_dims;
    Rng rng(seed);

    for (std::int32_t v = 0; v < model.vocab_size(); ++v) {
        std::vector<double> vec(static_cast<std::size_t>(table.dim), 0.0);
        double col_sum = 0.0;
        for (std::int32_t k = 0; k < model.num_topics; ++k) col_sum += model.phi_at(k, v);
        for (std::int32_t k = 0; k < model.num_topics; ++k) {
            double share = col_sum > 0.0 ? model.phi_at(k, v) / col_sum : 1.0 / model.num_topics;
            vec[static_cast<std::size_t>(k)] = std::sqrt(share);
        }
        for (std::int32_t d = 0; d < noise_dims; ++d)
            vec[static_cast<std::size_t>(model.num_topics + d)] = noise_scale * rng.normal();

        double norm = 0.0;
        for (double x : vec) norm += x * x;
        norm = std::sqrt(norm);
        for (double& x : vec) x /= norm;
        table.vectors[model.vocabulary.word(v)] = std::move(vec);
    }
    return table;
}

}  // namespace evalda
