// Command-line front end: train / infer / attack / experiment / synth.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "evalda/attack.hpp"
#include "evalda/corpus.hpp"
#include "evalda/errors.hpp"
#include "evalda/eval.hpp"
#include "evalda/lda.hpp"
#include "evalda/lexicon.hpp"
#include "evalda/surrogate.hpp"
#include "evalda/util.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace evalda;

namespace {

// Turns "--config file" settings into extra command-line tokens appended
// after the user's own, skipping any key the user already passed. Boolean
// keys use true/false; true injects the bare flag.
std::vector<std::string> inject_config(const std::vector<std::string>& args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;

    std::set<std::string> present;
    for (const auto& a : args) {
        if (a.rfind("--", 0) != 0) continue;
        auto eq = a.find('=');
        present.insert(eq == std::string::npos ? a : a.substr(0, eq));
    }

    std::ifstream in(config_path);
    if (!in) throw ConfigError("cannot open config file: " + config_path);
    std::vector<std::string> out = args;
    std::string line;
    std::int32_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        std::string flag = "--" + key;
        if (present.count(flag)) continue;  // explicit flags win
        if (value == "true") {
            out.push_back(flag);
        } else if (value == "false") {
            continue;
        } else {
            out.push_back(flag);
            out.push_back(value);
        }
    }
    return out;
}

CorpusFormat parse_format(const std::string& s) {
    if (s == "dir_of_txt") return CorpusFormat::dir_of_txt;
    if (s == "bag_of_words") return CorpusFormat::bag_of_words;
    throw ConfigError("unknown corpus format: " + s);
}

SubstitutionStrategy parse_strategy(const std::string& s) {
    if (s == "embedding") return SubstitutionStrategy::embedding;
    if (s == "synonym") return SubstitutionStrategy::synonym;
    if (s == "mixture") return SubstitutionStrategy::mixture;
    throw ConfigError("unknown substitution strategy: " + s);
}

AttackType parse_type(const std::string& s) {
    if (s == "promote") return AttackType::promote;
    if (s == "demote") return AttackType::demote;
    throw ConfigError("unknown attack type: " + s);
}

Document load_doc_file(const std::string& path, const Vocabulary& vocab) {
    std::string text = read_text_file(path);
    auto tokens = tokenize(text);
    if (tokens.empty()) throw IngestError("document has no tokens: " + path);
    return make_document(fs::path(path).stem().string(), tokens, vocab);
}

StopwordSet resolve_stopwords(const std::string& path) {
    return path.empty() ? default_stopwords() : load_stopwords(path);
}

// Shared flags for the attack/experiment lexicon side inputs.
struct LexiconOpts {
    std::string embeddings_path, synonyms_path, stopwords_path;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--embeddings", embeddings_path, "word embedding file (word v1 v2 ...)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--synonyms", synonyms_path, "synonym file (word<TAB>syn1,syn2,...)")
            ->check(CLI::ExistingFile);
        cmd->add_option("--stopwords", stopwords_path, "stopword file, one word per line")
            ->check(CLI::ExistingFile);
    }
};

struct LoadedLexicon {
    EmbeddingTable embeddings;
    SynonymTable synonyms;
    StopwordSet stopwords;

    LexiconRefs refs() const { return LexiconRefs{embeddings, synonyms, stopwords}; }
};

LoadedLexicon load_lexicon(const LexiconOpts& opts, const Vocabulary& model_vocab) {
    LoadedLexicon lex;
    if (!opts.embeddings_path.empty())
        lex.embeddings = load_embeddings(opts.embeddings_path, &model_vocab);
    if (!opts.synonyms_path.empty()) lex.synonyms = load_synonyms(opts.synonyms_path);
    lex.stopwords = resolve_stopwords(opts.stopwords_path);
    return lex;
}

std::string describe_or(const std::string& path, const std::string& fallback) {
    return path.empty() ? fallback : path;
}

void check_kappa(double kappa) {
    if (!(kappa > 0.0 && kappa <= 1.0)) throw ConfigError("kappa must be in (0, 1]");
}

// ---- train ----------------------------------------------------------------

struct TrainOpts {
    std::string corpus_path, format = "dir_of_txt", out = "model";
    std::int32_t min_doc_freq = 2, k = 0, iterations = 1000;
    double alpha = 0.1, beta = 0.01;
    std::uint64_t seed = 0;
};

int run_train(const TrainOpts& o) {
    Corpus corpus = load_corpus(o.corpus_path, parse_format(o.format), o.min_doc_freq);
    std::cout << "corpus: " << corpus.documents.size() << " documents, "
              << corpus.vocabulary.size() << " words\n";
    TopicModel model = train(corpus, o.k, o.alpha, o.beta, o.iterations, o.seed);
    save_model(model, o.out);
    std::cout << "model written to " << o.out << "\n";
    return 0;
}

// ---- infer ----------------------------------------------------------------

struct InferOpts {
    std::string model_dir, doc_path, out;
    std::int32_t iterations = 500, burn_in = 100;
    std::uint64_t seed = 0;
};

int run_infer(const InferOpts& o) {
    TopicModel model = load_model(o.model_dir);
    Document doc = load_doc_file(o.doc_path, model.vocabulary);
    InferStats stats;
    TopicDistribution theta = infer(model, doc, o.iterations, o.burn_in, o.seed, &stats);
    if (stats.oov_skipped > 0)
        std::cerr << "warning: skipped " << stats.oov_skipped << " out-of-vocabulary tokens\n";
    std::string csv = "topic,theta,rank\n";
    for (std::int32_t k = 0; k < model.num_topics; ++k) {
        csv += std::to_string(k) + "," + format_double(theta.theta[static_cast<std::size_t>(k)]) +
               "," + std::to_string(rank_of_topic(theta, k)) + "\n";
    }
    std::cout << csv;
    if (!o.out.empty()) {
        write_text_file(o.out, csv);
        std::cout << "written to " << o.out << "\n";
    }
    return 0;
}

// ---- attack ---------------------------------------------------------------

struct AttackOpts {
    std::string model_dir, doc_path, out, method = "evalda", strategy = "mixture";
    LexiconOpts lexicon;
    std::int32_t topic = -1, level = 4, iterations = 500, burn_in = 100;
    double sigma = 0.6, kappa = 0.01;
    bool promote = false, demote = false;
    std::uint64_t seed = 0;
};

BaselineVariant baseline_variant(const std::string& method) {
    if (method == "b1") return BaselineVariant::random_random;
    if (method == "b2") return BaselineVariant::random_nearest;
    if (method == "b3") return BaselineVariant::frequent_random;
    if (method == "b4") return BaselineVariant::frequent_nearest;
    throw ConfigError("unknown attack method: " + method);
}

int run_attack(const AttackOpts& o) {
    check_kappa(o.kappa);
    TopicModel model = load_model(o.model_dir);
    Document victim = load_doc_file(o.doc_path, model.vocabulary);
    LoadedLexicon lex = load_lexicon(o.lexicon, model.vocabulary);

    AttackConfig cfg;
    cfg.type = o.demote ? AttackType::demote : AttackType::promote;
    cfg.target_topic = o.topic;
    cfg.level = ApproximationLevel{o.level};
    cfg.sigma = o.sigma;
    cfg.kappa = o.kappa;
    cfg.strategy = parse_strategy(o.strategy);
    cfg.seed = o.seed;
    cfg.infer_iterations = o.iterations;
    cfg.infer_burn_in = o.burn_in;

    // Full effective configuration first, so a run is reproducible from its
    // own output.
    std::cout << "command: attack\n"
              << "model: " << o.model_dir << "\n"
              << "doc: " << o.doc_path << " (" << victim.length() << " tokens)\n"
              << "method: " << o.method << "\n"
              << "type: " << attack_type_name(cfg.type) << "\n"
              << "topic: " << cfg.target_topic << "\n"
              << "level: " << cfg.level.t << "\n"
              << "sigma: " << format_double(cfg.sigma) << "\n"
              << "kappa: " << format_double(cfg.kappa) << "\n"
              << "strategy: " << strategy_name(cfg.strategy) << "\n"
              << "embeddings: " << describe_or(o.lexicon.embeddings_path, "none") << "\n"
              << "synonyms: " << describe_or(o.lexicon.synonyms_path, "none") << "\n"
              << "stopwords: " << describe_or(o.lexicon.stopwords_path, "builtin") << "\n"
              << "iterations: " << o.iterations << "\n"
              << "burn-in: " << o.burn_in << "\n"
              << "seed: " << o.seed << "\n"
              << "out: " << describe_or(o.out, "none") << "\n";

    AttackOutcome outcome =
        o.method == "evalda"
            ? evalda_attack(model, victim, cfg, lex.refs())
            : baseline_attack(model, victim, cfg, lex.refs(), baseline_variant(o.method));

    MeanEmbeddingEncoder encoder(lex.embeddings);
    MetricReport metrics =
        compute_metrics(outcome, victim, cfg.target_topic, lex.embeddings, model.vocabulary,
                        encoder);

    std::cout << "replacements: " << outcome.strategy.positions_used() << " of budget "
              << outcome.budget << "\n";
    for (const auto& pair : outcome.strategy.pairs) {
        std::cout << "  [pos " << pair.position << "] "
                  << model.vocabulary.word(pair.victim_word) << " -> "
                  << model.vocabulary.word(pair.adversarial_word) << "  gain "
                  << format_double(pair.gain) << "\n";
    }
    auto k = static_cast<std::size_t>(cfg.target_topic);
    std::cout << "target topic " << cfg.target_topic << ": rank "
              << rank_of_topic(outcome.theta_vic, cfg.target_topic) << " -> "
              << rank_of_topic(outcome.theta_adv, cfg.target_topic) << ", theta "
              << format_double(outcome.theta_vic.theta[k]) << " -> "
              << format_double(outcome.theta_adv.theta[k]) << "\n"
              << "surrogate estimate: theta " << format_double(outcome.theta_vic_est.theta[k])
              << " -> " << format_double(outcome.theta_adv_est.theta[k]) << "\n"
              << "metrics: cor=" << format_double(metrics.cor)
              << " cops=" << format_double(metrics.cops) << " awd=" << format_double(metrics.awd)
              << " (" << metrics.awd_excluded << " pairs without vectors)"
              << " assd=" << format_double(metrics.assd) << " (" << metrics.assd_skipped
              << " windows skipped)\n";

    if (!o.out.empty()) {
        fs::create_directories(o.out);
        ordered_json report;
        report["command"] = "attack";
        report["model"] = o.model_dir;
        report["doc"] = o.doc_path;
        report["method"] = o.method;
        report["type"] = attack_type_name(cfg.type);
        report["topic"] = cfg.target_topic;
        report["level"] = cfg.level.t;
        report["sigma"] = cfg.sigma;
        report["kappa"] = cfg.kappa;
        report["strategy"] = strategy_name(cfg.strategy);
        report["iterations"] = o.iterations;
        report["burn_in"] = o.burn_in;
        report["seed"] = o.seed;
        report["document_length"] = victim.length();
        report["budget"] = outcome.budget;
        report["replacements"] = ordered_json::array();
        for (const auto& pair : outcome.strategy.pairs) {
            report["replacements"].push_back(
                {{"position", pair.position},
                 {"victim", model.vocabulary.word(pair.victim_word)},
                 {"adversarial", model.vocabulary.word(pair.adversarial_word)},
                 {"gain", pair.gain}});
        }
        report["rank_before"] = rank_of_topic(outcome.theta_vic, cfg.target_topic);
        report["rank_after"] = rank_of_topic(outcome.theta_adv, cfg.target_topic);
        report["theta_before"] = outcome.theta_vic.theta[k];
        report["theta_after"] = outcome.theta_adv.theta[k];
        report["theta_before_estimate"] = outcome.theta_vic_est.theta[k];
        report["theta_after_estimate"] = outcome.theta_adv_est.theta[k];
        report["metrics"] = {{"cor", metrics.cor},
                             {"cops", metrics.cops},
                             {"awd", metrics.awd},
                             {"awd_excluded", metrics.awd_excluded},
                             {"assd", metrics.assd},
                             {"assd_skipped", metrics.assd_skipped},
                             {"n_pairs", metrics.n_pairs}};
        write_text_file((fs::path(o.out) / "report.json").string(), report.dump(2) + "\n");

        std::string adv_text;
        for (std::size_t i = 0; i < outcome.adversarial.raw_tokens.size(); ++i) {
            if (i) adv_text += ' ';
            adv_text += outcome.adversarial.raw_tokens[i];
        }
        adv_text += '\n';
        write_text_file((fs::path(o.out) / "adversarial.txt").string(), adv_text);
        std::cout << "report written to " << o.out << "\n";
    }
    return 0;
}

// ---- experiment -----------------------------------------------------------

struct ExperimentOpts {
    std::string model_dir, corpus_path, format = "dir_of_txt", out = "experiment";
    std::string type = "promote";
    LexiconOpts lexicon;
    std::vector<std::string> methods = {"evalda", "b1", "b2", "b3", "b4"};
    std::vector<std::int32_t> levels = {4};
    std::vector<double> kappas = {0.01};
    std::vector<std::int32_t> ranks = {10};
    std::vector<std::string> strategies = {"mixture"};
    std::int32_t min_doc_freq = 2, samples = 50, iterations = 500, burn_in = 100, threads = 0;
    double sigma = 0.6;
    std::uint64_t seed = 0;
};

int run_experiment_cmd(const ExperimentOpts& o) {
    for (double kappa : o.kappas) check_kappa(kappa);
    TopicModel model = load_model(o.model_dir);
    Corpus corpus = load_corpus(o.corpus_path, parse_format(o.format), o.min_doc_freq);
    LoadedLexicon lex = load_lexicon(o.lexicon, model.vocabulary);

    ExperimentGrid grid;
    grid.methods = o.methods;
    grid.levels = o.levels;
    grid.kappas = o.kappas;
    grid.ranks = o.ranks;
    grid.strategies.clear();
    for (const auto& s : o.strategies) grid.strategies.push_back(parse_strategy(s));
    grid.type = parse_type(o.type);
    grid.samples = o.samples;
    grid.sigma = o.sigma;
    grid.infer_iterations = o.iterations;
    grid.infer_burn_in = o.burn_in;
    grid.seed = o.seed;
    grid.threads = o.threads;

    auto cells = run_experiment(model, corpus.documents, grid, lex.refs(),
                                [](const std::string& line) { std::cout << line << "\n"; });

    fs::create_directories(o.out);
    std::string summary_path = (fs::path(o.out) / "summary.csv").string();
    std::string samples_path = (fs::path(o.out) / "samples.csv").string();
    write_summary_csv(cells, summary_path);
    write_samples_csv(cells, samples_path);
    std::cout << "written " << summary_path << " and " << samples_path << "\n";
    return 0;
}

// ---- synth ----------------------------------------------------------------

struct SynthOpts {
    std::string out;
    std::int32_t k = 0, v = 0, m = 0, len = 0, noise_dims = 6;
    double alpha = 0.1, beta = 0.01, noise_scale = 0.15;
    std::uint64_t seed = 0;
};

int run_synth(const SynthOpts& o) {
    SyntheticData data =
        generate_synthetic(o.k, o.v, o.m, o.len, o.alpha, o.beta, o.seed);

    fs::create_directories(o.out);
    for (const auto& doc : data.corpus.documents) {
        std::string text;
        for (std::size_t i = 0; i < doc.raw_tokens.size(); ++i) {
            if (i) text += ' ';
            text += doc.raw_tokens[i];
        }
        text += '\n';
        write_text_file((fs::path(o.out) / (doc.id + ".txt")).string(), text);
    }
    save_model(data.model, fs::path(o.out) / "truth");

    EmbeddingTable table =
        synthetic_embeddings(data.model, o.noise_dims, o.noise_scale, o.seed);
    save_embeddings(table, (fs::path(o.out) / "embeddings.vec").string());

    // Nearest neighbor per word doubles as a small synonym table.
    SynonymTable synonyms;
    const Vocabulary& vocab = data.model.vocabulary;
    for (std::int32_t id = 0; id < vocab.size(); ++id) {
        const std::string& w = vocab.word(id);
        std::int32_t nn = nearest_neighbor(w, vocab, table);
        if (nn != kOovId) synonyms[w].insert(vocab.word(nn));
    }
    save_synonyms(synonyms, (fs::path(o.out) / "synonyms.tsv").string());

    std::cout << "synthetic corpus: " << data.corpus.documents.size() << " documents, "
              << vocab.size() << " words, written to " << o.out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"evasion attacks on collapsed-Gibbs LDA topic models"};
    app.require_subcommand(1);

    TrainOpts train_opts;
    InferOpts infer_opts;
    AttackOpts attack_opts;
    ExperimentOpts exp_opts;
    SynthOpts synth_opts;
    std::string config_path;  // consumed by inject_config; registered so parsing accepts it

    auto add_config_flag = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key=value file; explicit flags override");
    };

    auto* t = app.add_subcommand("train", "train a topic model on a corpus");
    t->add_option("--corpus", train_opts.corpus_path, "corpus path")->required();
    t->add_option("--format", train_opts.format, "corpus format")
        ->check(CLI::IsMember({"dir_of_txt", "bag_of_words"}));
    t->add_option("--min-doc-freq", train_opts.min_doc_freq, "min document frequency")
        ->check(CLI::PositiveNumber);
    t->add_option("--k", train_opts.k, "number of topics")->required()
        ->check(CLI::Range(2, 1 << 20));
    t->add_option("--alpha", train_opts.alpha, "document Dirichlet concentration")
        ->check(CLI::PositiveNumber);
    t->add_option("--beta", train_opts.beta, "topic Dirichlet concentration")
        ->check(CLI::PositiveNumber);
    t->add_option("--iterations", train_opts.iterations, "Gibbs sweeps")
        ->check(CLI::PositiveNumber);
    t->add_option("--seed", train_opts.seed, "random seed");
    t->add_option("--out", train_opts.out, "model output directory");
    add_config_flag(t);

    auto* i = app.add_subcommand("infer", "infer the topic distribution of a document");
    i->add_option("--model", infer_opts.model_dir, "model directory")->required();
    i->add_option("--doc", infer_opts.doc_path, "document text file")->required()
        ->check(CLI::ExistingFile);
    i->add_option("--iterations", infer_opts.iterations, "Gibbs sweeps")
        ->check(CLI::PositiveNumber);
    i->add_option("--burn-in", infer_opts.burn_in, "discarded initial sweeps")
        ->check(CLI::NonNegativeNumber);
    i->add_option("--seed", infer_opts.seed, "random seed");
    i->add_option("--out", infer_opts.out, "optional CSV output file");
    add_config_flag(i);

    auto* a = app.add_subcommand("attack", "rewrite one document against a target topic");
    a->add_option("--model", attack_opts.model_dir, "model directory")->required();
    a->add_option("--doc", attack_opts.doc_path, "victim document text file")->required()
        ->check(CLI::ExistingFile);
    a->add_option("--topic", attack_opts.topic, "target topic id")->required()
        ->check(CLI::NonNegativeNumber);
    auto* promote = a->add_flag("--promote", attack_opts.promote, "raise the target topic");
    auto* demote = a->add_flag("--demote", attack_opts.demote, "lower the target topic");
    promote->excludes(demote);
    demote->excludes(promote);
    a->add_option("--method", attack_opts.method, "evalda or baseline b1..b4")
        ->check(CLI::IsMember({"evalda", "b1", "b2", "b3", "b4"}));
    a->add_option("--level", attack_opts.level, "approximation level t")
        ->check(CLI::NonNegativeNumber);
    a->add_option("--sigma", attack_opts.sigma, "max replacement cosine distance")
        ->check(CLI::PositiveNumber);
    a->add_option("--kappa", attack_opts.kappa, "max fraction of positions replaced");
    a->add_option("--strategy", attack_opts.strategy, "candidate source")
        ->check(CLI::IsMember({"embedding", "synonym", "mixture"}));
    attack_opts.lexicon.add_flags(a);
    a->add_option("--iterations", attack_opts.iterations, "inference Gibbs sweeps")
        ->check(CLI::PositiveNumber);
    a->add_option("--burn-in", attack_opts.burn_in, "discarded initial sweeps")
        ->check(CLI::NonNegativeNumber);
    a->add_option("--seed", attack_opts.seed, "random seed");
    a->add_option("--out", attack_opts.out, "report output directory");
    add_config_flag(a);

    auto* e = app.add_subcommand("experiment", "run an attack grid and write CSV tables");
    e->add_option("--model", exp_opts.model_dir, "model directory")->required();
    e->add_option("--corpus", exp_opts.corpus_path, "victim document pool")->required();
    e->add_option("--format", exp_opts.format, "corpus format")
        ->check(CLI::IsMember({"dir_of_txt", "bag_of_words"}));
    e->add_option("--min-doc-freq", exp_opts.min_doc_freq, "min document frequency")
        ->check(CLI::PositiveNumber);
    e->add_option("--methods", exp_opts.methods, "comma-separated methods")->delimiter(',');
    e->add_option("--levels", exp_opts.levels, "approximation levels")->delimiter(',');
    e->add_option("--kappas", exp_opts.kappas, "position budgets")->delimiter(',');
    e->add_option("--ranks", exp_opts.ranks, "wanted victim ranks")->delimiter(',');
    e->add_option("--strategies", exp_opts.strategies, "candidate sources")->delimiter(',');
    e->add_option("--type", exp_opts.type, "promote or demote")
        ->check(CLI::IsMember({"promote", "demote"}));
    e->add_option("--samples", exp_opts.samples, "victim documents per cell")
        ->check(CLI::PositiveNumber);
    e->add_option("--sigma", exp_opts.sigma, "max replacement cosine distance")
        ->check(CLI::PositiveNumber);
    exp_opts.lexicon.add_flags(e);
    e->add_option("--iterations", exp_opts.iterations, "inference Gibbs sweeps")
        ->check(CLI::PositiveNumber);
    e->add_option("--burn-in", exp_opts.burn_in, "discarded initial sweeps")
        ->check(CLI::NonNegativeNumber);
    e->add_option("--seed", exp_opts.seed, "random seed");
    e->add_option("--threads", exp_opts.threads, "worker threads, 0 = all cores")
        ->check(CLI::NonNegativeNumber);
    e->add_option("--out", exp_opts.out, "output directory");
    add_config_flag(e);

    auto* s = app.add_subcommand("synth", "generate a synthetic corpus with ground truth");
    s->add_option("--k", synth_opts.k, "number of topics")->required()
        ->check(CLI::PositiveNumber);
    s->add_option("--v", synth_opts.v, "vocabulary size")->required()
        ->check(CLI::PositiveNumber);
    s->add_option("--m", synth_opts.m, "number of documents")->required()
        ->check(CLI::PositiveNumber);
    s->add_option("--len", synth_opts.len, "tokens per document")->required()
        ->check(CLI::PositiveNumber);
    s->add_option("--alpha", synth_opts.alpha, "document Dirichlet concentration")
        ->check(CLI::PositiveNumber);
    s->add_option("--beta", synth_opts.beta, "topic Dirichlet concentration")
        ->check(CLI::PositiveNumber);
    s->add_option("--noise-dims", synth_opts.noise_dims, "extra embedding noise dimensions")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--noise-scale", synth_opts.noise_scale, "embedding noise scale")
        ->check(CLI::NonNegativeNumber);
    s->add_option("--seed", synth_opts.seed, "random seed");
    s->add_option("--out", synth_opts.out, "output directory")->required();
    add_config_flag(s);

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = inject_config(args);
        // CLI11 parses token vectors back to front.
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp& help) {
        return app.exit(help);
    } catch (const CLI::ParseError& err) {
        app.exit(err);
        return 2;
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }

    try {
        if (t->parsed()) return run_train(train_opts);
        if (i->parsed()) return run_infer(infer_opts);
        if (a->parsed()) return run_attack(attack_opts);
        if (e->parsed()) return run_experiment_cmd(exp_opts);
        if (s->parsed()) return run_synth(synth_opts);
    } catch (const ConfigError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    } catch (const Error& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
