#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "evalda/corpus.hpp"
#include "evalda/lda.hpp"
#include "evalda/rng.hpp"

namespace evalda {

// Dense word vectors. Lookup is by surface string; vectors all share `dim`.
struct EmbeddingTable {
    std::int32_t dim = 0;
    std::unordered_map<std::string, std::vector<double>> vectors;

    bool contains(const std::string& w) const { return vectors.count(w) != 0; }
    const std::vector<double>* find(const std::string& w) const {
        auto it = vectors.find(w);
        return it == vectors.end() ? nullptr : &it->second;
    }
    std::size_t size() const { return vectors.size(); }
};

// Curated synonym lists. Ordered containers so iteration order is stable.
using SynonymTable = std::map<std::string, std::set<std::string>>;

enum class SubstitutionStrategy { embedding, synonym, mixture };

// Cosine distance 1 - cos(a, b). Throws WordLookupError if either word has
// no vector, ConfigError on dimension mismatch or zero-norm vector.
double word_distance(const EmbeddingTable& table, const std::string& a, const std::string& b);

double cosine_distance(const std::vector<double>& a, const std::vector<double>& b);

// Replacement candidates for `word`, ordered by ascending vocabulary id.
// embedding: model-vocab words within cosine distance sigma (word itself
// excluded; empty when word has no vector). synonym: curated synonyms that
// are in the model vocab, sigma applied only when both vectors exist.
// mixture: union of the two.
std::vector<std::int32_t> candidates(const std::string& word, const Vocabulary& vocab,
                                     const EmbeddingTable& table, const SynonymTable& synonyms,
                                     SubstitutionStrategy strategy, double sigma);

// Nearest in-vocab word by cosine distance, excluding `word` itself.
// Ties by lower vocabulary id. Returns kOovId when nothing qualifies.
std::int32_t nearest_neighbor(const std::string& word, const Vocabulary& vocab,
                              const EmbeddingTable& table);

// Text format: optional "count dim" header line, then one word per line
// followed by dim floats, space separated. When vocab is given, words
// outside it are dropped while loading (keeps big vector files cheap).
EmbeddingTable load_embeddings(const std::string& path, const Vocabulary* vocab = nullptr);
void save_embeddings(const EmbeddingTable& table, const std::string& path);

// TSV, one line per word: word<TAB>syn1,syn2,... with the symmetric
// closure applied on load (a listing b implies b listing a).
SynonymTable load_synonyms(const std::string& path);
void save_synonyms(const SynonymTable& table, const std::string& path);

// Embeddings derived from a topic-word matrix: per-word column profile
// (sqrt of the normalized column) plus a small random tail, unit-normalized.
// Words with topically similar profiles land close in cosine distance.
EmbeddingTable synthetic_embeddings(const TopicModel& model, std::int32_t noise_dims,
                                    double noise_scale, std::uint64_t seed);

}  // namespace evalda
