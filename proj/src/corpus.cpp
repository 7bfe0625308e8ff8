#include "evalda/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "evalda/errors.hpp"
#include "evalda/util.hpp"

namespace evalda {

std::int32_t Vocabulary::add(const std::string& word) {
    auto it = index.find(word);
    if (it != index.end()) return it->second;
    std::int32_t id = static_cast<std::int32_t>(words.size());
    words.push_back(word);
    index.emplace(word, id);
    return id;
}

std::int32_t WordCounts::count_of(std::int32_t word) const {
    auto it = std::lower_bound(counts.begin(), counts.end(), word,
                               [](const auto& p, std::int32_t w) { return p.first < w; });
    if (it == counts.end() || it->first != word) return 0;
    return it->second;
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (current.size() >= 2) tokens.push_back(current);
        current.clear();
    };
    for (char c : text) {
        unsigned char uc = static_cast<unsigned char>(c);
        if (uc < 0x80 && std::isalpha(uc)) {
            current.push_back(static_cast<char>(std::tolower(uc)));
        } else {
            flush();
        }
    }
    flush();
    return tokens;
}

Document make_document(std::string id, const std::vector<std::string>& token_strings,
                       const Vocabulary& vocab) {
    Document doc;
    doc.id = std::move(id);
    doc.raw_tokens = token_strings;
    doc.tokens.reserve(token_strings.size());
    for (const auto& t : token_strings) {
        auto wid = vocab.id_of(t);
        doc.tokens.push_back(wid ? *wid : kOovId);
    }
    return doc;
}

namespace {

// (document id, token strings) pairs in final corpus order.
using RawDocs = std::vector<std::pair<std::string, std::vector<std::string>>>;

RawDocs load_dir_of_txt(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    if (!fs::exists(path) || !fs::is_directory(path))
        throw IngestError("corpus directory not found: " + path.string());

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

    RawDocs docs;
    docs.reserve(files.size());
    for (const auto& f : files) {
        std::string text = read_text_file(f.string());
        docs.emplace_back(f.stem().string(), tokenize(text));
    }
    return docs;
}

RawDocs load_bag_of_words(const std::filesystem::path& path) {
    namespace fs = std::filesystem;
    fs::path docword = path, vocab_path;
    if (fs::is_directory(path)) {
        docword = path / "docword.txt";
        vocab_path = path / "vocab.txt";
    } else {
        vocab_path = path.parent_path() / "vocab.txt";
    }
    if (!fs::exists(docword)) throw IngestError("docword file not found: " + docword.string());
    if (!fs::exists(vocab_path)) throw IngestError("vocab file not found: " + vocab_path.string());

    std::vector<std::string> surface;
    {
        std::istringstream in(read_text_file(vocab_path.string()));
        std::string line;
        while (std::getline(in, line)) {
            line = trim(line);
            if (!line.empty()) surface.push_back(line);
        }
    }

    std::istringstream in(read_text_file(docword.string()));
    std::int64_t m = 0, v = 0, nnz = 0;
    if (!(in >> m >> v >> nnz)) throw ParseError("bad docword header: " + docword.string());
    if (v != static_cast<std::int64_t>(surface.size()))
        throw ParseError("vocab size mismatch between docword header and " + vocab_path.string());

    // docId -> (wordId -> count), both keys kept sorted for stable synthesis
    std::map<std::int64_t, std::map<std::int64_t, std::int64_t>> by_doc;
    for (std::int64_t i = 0; i < nnz; ++i) {
        std::int64_t d = 0, w = 0, c = 0;
        if (!(in >> d >> w >> c)) throw ParseError("truncated docword file: " + docword.string());
        if (d < 1 || d > m || w < 1 || w > v || c < 1)
            throw ParseError("out-of-range docword entry in " + docword.string());
        by_doc[d][w] += c;
    }

    RawDocs docs;
    docs.reserve(by_doc.size());
    for (const auto& [doc_id, words] : by_doc) {
        std::vector<std::string> tokens;
        for (const auto& [word_id, count] : words) {
            const std::string& s = surface[static_cast<std::size_t>(word_id - 1)];
            for (std::int64_t r = 0; r < count; ++r) tokens.push_back(s);
        }
        docs.emplace_back(std::to_string(doc_id), std::move(tokens));
    }
    return docs;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   std::int32_t min_doc_freq) {
    RawDocs raw = format == CorpusFormat::dir_of_txt ? load_dir_of_txt(path)
                                                     : load_bag_of_words(path);
    if (raw.empty()) throw IngestError("empty corpus: " + path.string());

    // document frequency over surface strings
    std::unordered_map<std::string, std::int32_t> doc_freq;
    for (const auto& [id, tokens] : raw) {
        std::unordered_set<std::string> seen;
        for (const auto& t : tokens) seen.insert(t);
        for (const auto& t : seen) ++doc_freq[t];
    }

    Corpus corpus;
    corpus.name = path.stem().string();
    for (auto& [id, tokens] : raw) {
        Document doc;
        doc.id = id;
        for (auto& t : tokens) {
            if (doc_freq[t] < min_doc_freq) continue;
            doc.tokens.push_back(corpus.vocabulary.add(t));
            doc.raw_tokens.push_back(t);
        }
        if (!doc.tokens.empty()) corpus.documents.push_back(std::move(doc));
    }
    if (corpus.documents.empty())
        throw IngestError("no documents survive vocabulary filtering: " + path.string());
    return corpus;
}

WordCounts word_counts(const Document& doc) {
    std::map<std::int32_t, std::int32_t> tally;
    std::int32_t total = 0;
    for (std::int32_t t : doc.tokens) {
        if (t == kOovId) continue;
        ++tally[t];
        ++total;
    }
    WordCounts counts;
    counts.counts.assign(tally.begin(), tally.end());
    counts.total = total;
    return counts;
}

std::vector<std::int32_t> feasible_targets(const Document& doc, const StopwordSet& stopwords,
                                           const Vocabulary& model_vocab) {
    std::vector<std::int32_t> positions;
    for (std::int32_t i = 0; i < doc.length(); ++i) {
        const std::string& surface = doc.raw_tokens[static_cast<std::size_t>(i)];
        if (surface.size() < 3) continue;
        if (stopwords.count(surface)) continue;
        if (!model_vocab.contains(surface)) continue;
        positions.push_back(i);
    }
    return positions;
}

StopwordSet load_stopwords(const std::filesystem::path& path) {
    StopwordSet set;
    std::istringstream in(read_text_file(path.string()));
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (!line.empty()) set.insert(line);
    }
    return set;
}

const StopwordSet& default_stopwords() {
    static const StopwordSet set = [] {
        static const char* words[] = {
            "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
            "any", "are", "aren", "as", "at", "be", "because", "been", "before", "being",
            "below", "between", "both", "but", "by", "can", "cannot", "could", "couldn",
            "did", "didn", "do", "does", "doesn", "doing", "don", "down", "during", "each",
            "few", "for", "from", "further", "had", "hadn", "has", "hasn", "have", "haven",
            "having", "he", "her", "here", "hers", "herself", "him", "himself", "his",
            "how", "i", "if", "in", "into", "is", "isn", "it", "its", "itself", "just",
            "let", "me", "more", "most", "mustn", "my", "myself", "no", "nor", "not",
            "now", "of", "off", "on", "once", "only", "or", "other", "ought", "our",
            "ours", "ourselves", "out", "over", "own", "same", "shan", "she", "should",
            "shouldn", "so", "some", "such", "than", "that", "the", "their", "theirs",
            "them", "themselves", "then", "there", "these", "they", "this", "those",
            "through", "to", "too", "under", "until", "up", "very", "was", "wasn", "we",
            "were", "weren", "what", "when", "where", "which", "while", "who", "whom",
            "why", "will", "with", "won", "would", "wouldn", "you", "your", "yours",
            "yourself", "yourselves",
        };
        StopwordSet s;
        for (const char* w : words) s.insert(w);
        return s;
    }();
    return set;
}

}  // namespace evalda
