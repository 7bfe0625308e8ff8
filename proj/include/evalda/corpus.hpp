#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace evalda {

// Token id used for words that are not in the governing vocabulary.
// Corpus loading never emits it; documents built against a model vocabulary
// (make_document) may carry it, and inference/attack code skips it.
inline constexpr std::int32_t kOovId = -1;

// Bidirectional word <-> dense 0-based id map. Ids follow insertion order.
struct Vocabulary {
    std::vector<std::string> words;
    std::unordered_map<std::string, std::int32_t> index;

    std::int32_t size() const { return static_cast<std::int32_t>(words.size()); }

    // Inserts if absent; returns the word's id.
    std::int32_t add(const std::string& word);

    std::optional<std::int32_t> id_of(const std::string& word) const {
        auto it = index.find(word);
        if (it == index.end()) return std::nullopt;
        return it->second;
    }

    bool contains(const std::string& word) const { return index.count(word) != 0; }
    const std::string& word(std::int32_t id) const { return words.at(static_cast<std::size_t>(id)); }
};

struct Document {
    std::string id;
    std::vector<std::int32_t> tokens;      // word ids, kOovId for out-of-vocabulary
    std::vector<std::string> raw_tokens;   // surface strings, same length as tokens

    std::int32_t length() const { return static_cast<std::int32_t>(tokens.size()); }
};

struct Corpus {
    std::string name;
    Vocabulary vocabulary;
    std::vector<Document> documents;

    std::int32_t num_documents() const { return static_cast<std::int32_t>(documents.size()); }
};

// Per-document multiset of word occurrences, sorted by word id.
// Counts cover in-vocabulary tokens only; total is their sum.
struct WordCounts {
    std::vector<std::pair<std::int32_t, std::int32_t>> counts;  // (word id, n_v)
    std::int32_t total = 0;

    std::int32_t count_of(std::int32_t word) const;
};

using StopwordSet = std::unordered_set<std::string>;

enum class CorpusFormat { dir_of_txt, bag_of_words };

// Lowercased alphabetic tokens; punctuation and digits split words; tokens
// shorter than 2 characters are dropped. Empty input gives an empty vector.
std::vector<std::string> tokenize(std::string_view text);

// Builds a document against an existing (model) vocabulary; unknown tokens
// get kOovId so surface text and positions are preserved.
Document make_document(std::string id, const std::vector<std::string>& token_strings,
                       const Vocabulary& vocab);

// Loads a corpus. dir_of_txt: every *.txt directly under `path` is one
// document (id = filename stem, documents ordered by filename).
// bag_of_words: `path` is a docword file (header lines M, V, NNZ then
// "docId wordId count" with 1-based ids) or a directory containing
// docword.txt; the companion vocabulary is vocab.txt next to it. Position
// order is synthesized by repeating each word its count times in word-id
// order, which loses the original ordering.
// Words in fewer than min_doc_freq documents are dropped from both the
// vocabulary and the token streams; documents left empty are skipped.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   std::int32_t min_doc_freq = 2);

WordCounts word_counts(const Document& doc);

// Positions eligible as attack targets: in-vocabulary token, surface length
// >= 3, and not a stopword. Sorted ascending.
std::vector<std::int32_t> feasible_targets(const Document& doc, const StopwordSet& stopwords,
                                           const Vocabulary& model_vocab);

// One lowercase word per line; '#' starts a comment.
StopwordSet load_stopwords(const std::filesystem::path& path);

// Built-in English stopword list (same content as data/stopwords.txt).
const StopwordSet& default_stopwords();

}  // namespace evalda
