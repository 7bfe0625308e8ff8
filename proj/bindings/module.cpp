#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "evalda/attack.hpp"
#include "evalda/corpus.hpp"
#include "evalda/errors.hpp"
#include "evalda/eval.hpp"
#include "evalda/lda.hpp"
#include "evalda/lexicon.hpp"
#include "evalda/surrogate.hpp"

namespace py = pybind11;
using namespace evalda;

namespace {

std::vector<std::vector<double>> phi_rows(const TopicModel& m) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.num_topics));
    for (std::int32_t k = 0; k < m.num_topics; ++k) {
        auto row = m.topic_row(k);
        rows[static_cast<std::size_t>(k)].assign(row.begin(), row.end());
    }
    return rows;
}

}  // namespace

PYBIND11_MODULE(_evalda, m) {
    m.doc() = "Topic-model evasion attack toolkit (LDA training/inference, "
              "closed-form topic estimates, greedy word-replacement attacks, metrics)";

    py::register_exception<Error>(m, "EvaldaError", PyExc_RuntimeError);

    py::enum_<CorpusFormat>(m, "CorpusFormat")
        .value("dir_of_txt", CorpusFormat::dir_of_txt)
        .value("bag_of_words", CorpusFormat::bag_of_words);
    py::enum_<AttackType>(m, "AttackType")
        .value("promote", AttackType::promote)
        .value("demote", AttackType::demote);
    py::enum_<SubstitutionStrategy>(m, "SubstitutionStrategy")
        .value("embedding", SubstitutionStrategy::embedding)
        .value("synonym", SubstitutionStrategy::synonym)
        .value("mixture", SubstitutionStrategy::mixture);
    py::enum_<BaselineVariant>(m, "BaselineVariant")
        .value("random_random", BaselineVariant::random_random)
        .value("random_nearest", BaselineVariant::random_nearest)
        .value("frequent_random", BaselineVariant::frequent_random)
        .value("frequent_nearest", BaselineVariant::frequent_nearest);
    py::enum_<OracleScoring>(m, "OracleScoring")
        .value("gibbs", OracleScoring::gibbs)
        .value("surrogate", OracleScoring::surrogate);

    py::class_<Vocabulary>(m, "Vocabulary")
        .def(py::init<>())
        .def("__len__", &Vocabulary::size)
        .def("add", &Vocabulary::add)
        .def("id_of", [](const Vocabulary& v, const std::string& w) -> py::object {
            auto id = v.id_of(w);
            return id ? py::cast(*id) : py::none();
        })
        .def("word", &Vocabulary::word)
        .def("__contains__", &Vocabulary::contains)
        .def_readonly("words", &Vocabulary::words);

    py::class_<Document>(m, "Document")
        .def(py::init<>())
        .def_readwrite("id", &Document::id)
        .def_readwrite("tokens", &Document::tokens)
        .def_readwrite("raw_tokens", &Document::raw_tokens)
        .def("__len__", &Document::length);

    py::class_<Corpus>(m, "Corpus")
        .def(py::init<>())
        .def_readwrite("name", &Corpus::name)
        .def_readonly("vocabulary", &Corpus::vocabulary)
        .def_readonly("documents", &Corpus::documents);

    py::class_<WordCounts>(m, "WordCounts")
        .def_readonly("counts", &WordCounts::counts)
        .def_readonly("total", &WordCounts::total)
        .def("count_of", &WordCounts::count_of);

    py::class_<TopicModel>(m, "TopicModel")
        .def(py::init<>())
        .def_readonly("num_topics", &TopicModel::num_topics)
        .def_readonly("alpha", &TopicModel::alpha)
        .def_readonly("beta", &TopicModel::beta)
        .def_readonly("train_iterations", &TopicModel::train_iterations)
        .def_readonly("seed", &TopicModel::seed)
        .def_readonly("vocabulary", &TopicModel::vocabulary)
        .def("vocab_size", &TopicModel::vocab_size)
        .def("phi_at", &TopicModel::phi_at)
        .def("phi", &phi_rows);

    py::class_<TopicDistribution>(m, "TopicDistribution")
        .def_readonly("theta", &TopicDistribution::theta)
        .def("__len__", &TopicDistribution::num_topics);

    py::class_<SyntheticData>(m, "SyntheticData")
        .def_readonly("corpus", &SyntheticData::corpus)
        .def_readonly("model", &SyntheticData::model)
        .def_readonly("doc_topic_probs", &SyntheticData::doc_topic_probs)
        .def_readonly("doc_topic_counts", &SyntheticData::doc_topic_counts);

    py::class_<EmbeddingTable>(m, "EmbeddingTable")
        .def(py::init<>())
        .def_readwrite("dim", &EmbeddingTable::dim)
        .def("__len__", &EmbeddingTable::size)
        .def("__contains__", &EmbeddingTable::contains)
        .def("vector", [](const EmbeddingTable& t, const std::string& w) -> py::object {
            const auto* v = t.find(w);
            return v ? py::cast(*v) : py::none();
        })
        .def("set", [](EmbeddingTable& t, const std::string& w, std::vector<double> v) {
            if (t.dim == 0) t.dim = static_cast<std::int32_t>(v.size());
            t.vectors[w] = std::move(v);
        });

    py::class_<ApproximationLevel>(m, "ApproximationLevel")
        .def(py::init<>())
        .def(py::init([](std::int32_t t) { return ApproximationLevel{t}; }))
        .def_readwrite("t", &ApproximationLevel::t);

    py::class_<AttackConfig>(m, "AttackConfig")
        .def(py::init<>())
        .def_readwrite("type", &AttackConfig::type)
        .def_readwrite("target_topic", &AttackConfig::target_topic)
        .def_readwrite("level", &AttackConfig::level)
        .def_readwrite("sigma", &AttackConfig::sigma)
        .def_readwrite("kappa", &AttackConfig::kappa)
        .def_readwrite("strategy", &AttackConfig::strategy)
        .def_readwrite("seed", &AttackConfig::seed)
        .def_readwrite("infer_iterations", &AttackConfig::infer_iterations)
        .def_readwrite("infer_burn_in", &AttackConfig::infer_burn_in);

    py::class_<ReplacementPair>(m, "ReplacementPair")
        .def_readonly("position", &ReplacementPair::position)
        .def_readonly("victim_word", &ReplacementPair::victim_word)
        .def_readonly("adversarial_word", &ReplacementPair::adversarial_word)
        .def_readonly("gain", &ReplacementPair::gain);

    py::class_<AttackStrategy>(m, "AttackStrategy")
        .def_readonly("victim_id", &AttackStrategy::victim_id)
        .def_readonly("pairs", &AttackStrategy::pairs)
        .def("positions_used", &AttackStrategy::positions_used);

    py::class_<AttackOutcome>(m, "AttackOutcome")
        .def_readonly("adversarial", &AttackOutcome::adversarial)
        .def_readonly("strategy", &AttackOutcome::strategy)
        .def_readonly("budget", &AttackOutcome::budget)
        .def_readonly("theta_vic", &AttackOutcome::theta_vic)
        .def_readonly("theta_adv", &AttackOutcome::theta_adv)
        .def_readonly("theta_vic_est", &AttackOutcome::theta_vic_est)
        .def_readonly("theta_adv_est", &AttackOutcome::theta_adv_est);

    py::class_<MetricReport>(m, "MetricReport")
        .def_readonly("cor", &MetricReport::cor)
        .def_readonly("cops", &MetricReport::cops)
        .def_readonly("awd", &MetricReport::awd)
        .def_readonly("assd", &MetricReport::assd)
        .def_readonly("n_pairs", &MetricReport::n_pairs)
        .def_readonly("awd_excluded", &MetricReport::awd_excluded)
        .def_readonly("assd_skipped", &MetricReport::assd_skipped);

    py::class_<MetricSummary>(m, "MetricSummary")
        .def_readonly("mean", &MetricSummary::mean)
        .def_readonly("ci95", &MetricSummary::ci95)
        .def_readonly("count", &MetricSummary::count);

    py::class_<SampleResult>(m, "SampleResult")
        .def_readonly("doc_index", &SampleResult::doc_index)
        .def_readonly("doc_id", &SampleResult::doc_id)
        .def_readonly("target_topic", &SampleResult::target_topic)
        .def_readonly("rank_before", &SampleResult::rank_before)
        .def_readonly("rank_after", &SampleResult::rank_after)
        .def_readonly("theta_before", &SampleResult::theta_before)
        .def_readonly("theta_after", &SampleResult::theta_after)
        .def_readonly("metrics", &SampleResult::metrics)
        .def_readonly("budget", &SampleResult::budget)
        .def_readonly("positions_used", &SampleResult::positions_used);

    py::class_<ExperimentCell>(m, "ExperimentCell")
        .def_readonly("method", &ExperimentCell::method)
        .def_readonly("level", &ExperimentCell::level)
        .def_readonly("kappa", &ExperimentCell::kappa)
        .def_readonly("rank", &ExperimentCell::rank)
        .def_readonly("strategy", &ExperimentCell::strategy)
        .def_readonly("type", &ExperimentCell::type)
        .def_readonly("samples", &ExperimentCell::samples)
        .def_readonly("cor", &ExperimentCell::cor)
        .def_readonly("cops", &ExperimentCell::cops)
        .def_readonly("awd", &ExperimentCell::awd)
        .def_readonly("assd", &ExperimentCell::assd);

    py::class_<ExperimentGrid>(m, "ExperimentGrid")
        .def(py::init<>())
        .def_readwrite("methods", &ExperimentGrid::methods)
        .def_readwrite("levels", &ExperimentGrid::levels)
        .def_readwrite("kappas", &ExperimentGrid::kappas)
        .def_readwrite("ranks", &ExperimentGrid::ranks)
        .def_readwrite("strategies", &ExperimentGrid::strategies)
        .def_readwrite("type", &ExperimentGrid::type)
        .def_readwrite("samples", &ExperimentGrid::samples)
        .def_readwrite("sigma", &ExperimentGrid::sigma)
        .def_readwrite("infer_iterations", &ExperimentGrid::infer_iterations)
        .def_readwrite("infer_burn_in", &ExperimentGrid::infer_burn_in)
        .def_readwrite("seed", &ExperimentGrid::seed)
        .def_readwrite("threads", &ExperimentGrid::threads);

    m.def("tokenize", [](const std::string& text) { return tokenize(text); });
    m.def("make_document", &make_document);
    m.def("load_corpus", &load_corpus, py::arg("path"), py::arg("format"),
          py::arg("min_doc_freq") = 2);
    m.def("word_counts", &word_counts);
    m.def("feasible_targets",
          [](const Document& doc, const std::set<std::string>& stopwords, const Vocabulary& vocab) {
              StopwordSet set(stopwords.begin(), stopwords.end());
              return feasible_targets(doc, set, vocab);
          });
    m.def("load_stopwords", &load_stopwords);
    m.def("default_stopwords", [] {
        const auto& s = default_stopwords();
        return std::set<std::string>(s.begin(), s.end());
    });

    m.def("train", &train, py::arg("corpus"), py::arg("num_topics"), py::arg("alpha") = 0.1,
          py::arg("beta") = 0.01, py::arg("iterations") = 1000, py::arg("seed") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("infer",
          [](const TopicModel& model, const Document& doc, std::int32_t iterations,
             std::int32_t burn_in, std::uint64_t seed) {
              py::gil_scoped_release release;
              return infer(model, doc, iterations, burn_in, seed);
          },
          py::arg("model"), py::arg("doc"), py::arg("iterations") = 500,
          py::arg("burn_in") = 100, py::arg("seed") = 0);
    m.def("generate_synthetic", &generate_synthetic, py::arg("num_topics"), py::arg("vocab_size"),
          py::arg("num_docs"), py::arg("doc_len"), py::arg("alpha") = 0.1, py::arg("beta") = 0.01,
          py::arg("seed") = 0);
    m.def("rank_of_topic", &rank_of_topic);
    m.def("save_model", &save_model);
    m.def("load_model", &load_model);

    m.def("topic_score", &topic_score);
    m.def("estimate_theta",
          [](const TopicModel& model, const WordCounts& counts, std::int32_t t) {
              return estimate_theta(model, counts, ApproximationLevel{t});
          },
          py::arg("model"), py::arg("counts"), py::arg("t") = 4);
    m.def("estimate_theta_recursive",
          [](const TopicModel& model, const WordCounts& counts, std::int32_t t) {
              return estimate_theta_recursive(model, counts, ApproximationLevel{t});
          },
          py::arg("model"), py::arg("counts"), py::arg("t") = 4);
    m.def("marginal_q",
          [](const TopicModel& model, const WordCounts& counts, std::int32_t k, std::int32_t w,
             std::int32_t w_new, std::int32_t t, AttackType type) {
              return marginal_q(model, counts, k, w, w_new, ApproximationLevel{t}, type);
          },
          py::arg("model"), py::arg("counts"), py::arg("k"), py::arg("w"), py::arg("w_new"),
          py::arg("t") = 4, py::arg("type") = AttackType::promote);

    m.def("word_distance", &word_distance);
    m.def("cosine_distance", &cosine_distance);
    m.def("candidates", &candidates);
    m.def("nearest_neighbor", &nearest_neighbor);
    m.def("load_embeddings", &load_embeddings, py::arg("path"), py::arg("vocab") = nullptr);
    m.def("save_embeddings", &save_embeddings);
    m.def("load_synonyms", &load_synonyms);
    m.def("save_synonyms", &save_synonyms);
    m.def("synthetic_embeddings", &synthetic_embeddings, py::arg("model"),
          py::arg("noise_dims") = 6, py::arg("noise_scale") = 0.15, py::arg("seed") = 0);

    m.def("evalda_attack",
          [](const TopicModel& model, const Document& victim, const AttackConfig& cfg,
             const EmbeddingTable& emb, const SynonymTable& syn,
             const std::set<std::string>& stopwords) {
              StopwordSet stop(stopwords.begin(), stopwords.end());
              LexiconRefs lexicon{emb, syn, stop};
              py::gil_scoped_release release;
              return evalda_attack(model, victim, cfg, lexicon);
          },
          py::arg("model"), py::arg("victim"), py::arg("config"), py::arg("embeddings"),
          py::arg("synonyms") = SynonymTable{}, py::arg("stopwords") = std::set<std::string>{});
    m.def("baseline_attack",
          [](const TopicModel& model, const Document& victim, const AttackConfig& cfg,
             const EmbeddingTable& emb, const SynonymTable& syn,
             const std::set<std::string>& stopwords, BaselineVariant variant) {
              StopwordSet stop(stopwords.begin(), stopwords.end());
              LexiconRefs lexicon{emb, syn, stop};
              py::gil_scoped_release release;
              return baseline_attack(model, victim, cfg, lexicon, variant);
          },
          py::arg("model"), py::arg("victim"), py::arg("config"), py::arg("embeddings"),
          py::arg("synonyms"), py::arg("stopwords"), py::arg("variant"));

    m.def("change_of_rank", &change_of_rank);
    m.def("change_of_prob", &change_of_prob);
    m.def("avg_word_distance",
          [](const EmbeddingTable& table, const Vocabulary& vocab, const AttackStrategy& s) {
              return avg_word_distance(table, vocab, s);
          });
    m.def("compute_metrics",
          [](const AttackOutcome& outcome, const Document& victim, std::int32_t target,
             const EmbeddingTable& table, const Vocabulary& vocab, std::int32_t window) {
              MeanEmbeddingEncoder encoder(table);
              return compute_metrics(outcome, victim, target, table, vocab, encoder, window);
          },
          py::arg("outcome"), py::arg("victim"), py::arg("target_topic"), py::arg("embeddings"),
          py::arg("vocab"), py::arg("window") = 5);

    m.def("run_experiment",
          [](const TopicModel& model, const std::vector<Document>& docs,
             const ExperimentGrid& grid, const EmbeddingTable& emb, const SynonymTable& syn,
             const std::set<std::string>& stopwords) {
              StopwordSet stop(stopwords.begin(), stopwords.end());
              LexiconRefs lexicon{emb, syn, stop};
              py::gil_scoped_release release;
              return run_experiment(model, docs, grid, lexicon, nullptr);
          },
          py::arg("model"), py::arg("docs"), py::arg("grid"), py::arg("embeddings"),
          py::arg("synonyms") = SynonymTable{}, py::arg("stopwords") = std::set<std::string>{});
    m.def("write_summary_csv", &write_summary_csv);
    m.def("write_samples_csv", &write_samples_csv);
}
