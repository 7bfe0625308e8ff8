#include "evalda/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <set>
#include <sstream>

#include "evalda/errors.hpp"
#include "evalda/util.hpp"

namespace evalda {

std::int32_t change_of_rank(const TopicDistribution& victim, const TopicDistribution& adversarial,
                            std::int32_t k) {
    return std::abs(rank_of_topic(adversarial, k) - rank_of_topic(victim, k));
}

double change_of_prob(const TopicDistribution& victim, const TopicDistribution& adversarial,
                      std::int32_t k) {
    if (k < 0 || k >= victim.num_topics() || victim.num_topics() != adversarial.num_topics())
        throw ConfigError("topic id out of range");
    return std::abs(victim.theta[static_cast<std::size_t>(k)] -
                    adversarial.theta[static_cast<std::size_t>(k)]);
}

double avg_word_distance(const EmbeddingTable& table, const Vocabulary& vocab,
                         const AttackStrategy& strategy, std::int32_t* excluded) {
    std::set<std::pair<std::int32_t, std::int32_t>> unique_pairs;
    for (const auto& pair : strategy.pairs)
        unique_pairs.insert({pair.victim_word, pair.adversarial_word});

    double sum = 0.0;
    std::int32_t counted = 0, left_out = 0;
    for (const auto& [w, w_new] : unique_pairs) {
        const auto* a = table.find(vocab.word(w));
        const auto* b = table.find(vocab.word(w_new));
        if (!a || !b) {
            ++left_out;
            continue;
        }
        sum += cosine_distance(*a, *b);
        ++counted;
    }
    if (excluded) *excluded = left_out;
    return counted ? sum / counted : 0.0;
}

std::vector<double> MeanEmbeddingEncoder::encode(const std::vector<std::string>& tokens) const {
    std::vector<double> acc;
    std::int32_t found = 0;
    for (const auto& t : tokens) {
        const auto* v = table->find(t);
        if (!v) continue;
        if (acc.empty()) acc.assign(v->size(), 0.0);
        for (std::size_t i = 0; i < v->size(); ++i) acc[i] += (*v)[i];
        ++found;
    }
    if (!found) return {};
    for (double& x : acc) x /= found;
    return acc;
}

namespace {

double squared_norm(const std::vector<double>& v) {
    double n = 0.0;
    for (double x : v) n += x * x;
    return n;
}

}  // namespace

double avg_sentence_distance(const Document& victim, const Document& adversarial,
                             const AttackStrategy& strategy, const SentenceEncoder& encoder,
                             std::int32_t window, std::int32_t* skipped) {
    if (victim.length() != adversarial.length())
        throw ConfigError("documents differ in length");

    double sum = 0.0;
    std::int32_t counted = 0, dropped = 0;
    for (const auto& pair : strategy.pairs) {
        std::int32_t lo = std::max(0, pair.position - window);
        std::int32_t hi = std::min(victim.length() - 1, pair.position + window);
        std::vector<std::string> before(victim.raw_tokens.begin() + lo,
                                        victim.raw_tokens.begin() + hi + 1);
        std::vector<std::string> after(adversarial.raw_tokens.begin() + lo,
                                       adversarial.raw_tokens.begin() + hi + 1);
        auto ev = encoder.encode(before);
        auto ea = encoder.encode(after);
        if (ev.empty() || ea.empty() || squared_norm(ev) == 0.0 || squared_norm(ea) == 0.0) {
            ++dropped;
            continue;
        }
        sum += cosine_distance(ev, ea);
        ++counted;
    }
    if (skipped) *skipped = dropped;
    return counted ? sum / counted : 0.0;
}

MetricReport compute_metrics(const AttackOutcome& outcome, const Document& victim,
                             std::int32_t target_topic, const EmbeddingTable& table,
                             const Vocabulary& vocab, const SentenceEncoder& encoder,
                             std::int32_t window) {
    MetricReport report;
    report.cor = change_of_rank(outcome.theta_vic, outcome.theta_adv, target_topic);
    report.cops = change_of_prob(outcome.theta_vic, outcome.theta_adv, target_topic);
    report.awd = avg_word_distance(table, vocab, outcome.strategy, &report.awd_excluded);
    report.assd = avg_sentence_distance(victim, outcome.adversarial, outcome.strategy, encoder,
                                        window, &report.assd_skipped);
    report.n_pairs = outcome.strategy.positions_used();
    return report;
}

MetricSummary summarize(const std::vector<double>& values) {
    MetricSummary s;
    s.count = static_cast<std::int32_t>(values.size());
    if (!s.count) return s;
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / s.count;
    if (s.count < 2) return s;
    double sq = 0.0;
    for (double v : values) sq += (v - s.mean) * (v - s.mean);
    double sd = std::sqrt(sq / (s.count - 1));
    s.ci95 = 1.96 * sd / std::sqrt(static_cast<double>(s.count));
    return s;
}

std::int32_t select_target_topic(const TopicDistribution& victim, std::int32_t wanted_rank) {
    std::int32_t best_topic = 0;
    std::int32_t best_gap = std::numeric_limits<std::int32_t>::max();
    for (std::int32_t k = 0; k < victim.num_topics(); ++k) {
        std::int32_t gap = std::abs(rank_of_topic(victim, k) - wanted_rank);
        if (gap < best_gap) {
            best_gap = gap;
            best_topic = k;
        }
    }
    return best_topic;
}

const char* method_name(BaselineVariant v) {
    switch (v) {
        case BaselineVariant::random_random: return "b1";
        case BaselineVariant::random_nearest: return "b2";
        case BaselineVariant::frequent_random: return "b3";
        case BaselineVariant::frequent_nearest: return "b4";
    }
    return "?";
}

const char* attack_type_name(AttackType t) {
    return t == AttackType::promote ? "promote" : "demote";
}

const char* strategy_name(SubstitutionStrategy s) {
    switch (s) {
        case SubstitutionStrategy::embedding: return "embedding";
        case SubstitutionStrategy::synonym: return "synonym";
        case SubstitutionStrategy::mixture: return "mixture";
    }
    return "?";
}

namespace {

BaselineVariant variant_from_method(const std::string& method) {
    if (method == "b1") return BaselineVariant::random_random;
    if (method == "b2") return BaselineVariant::random_nearest;
    if (method == "b3") return BaselineVariant::frequent_random;
    if (method == "b4") return BaselineVariant::frequent_nearest;
    throw ConfigError("unknown method: " + method);
}

}  // namespace

std::vector<ExperimentCell> run_experiment(const TopicModel& model,
                                           const std::vector<Document>& docs,
                                           const ExperimentGrid& grid, const LexiconRefs& lexicon,
                                           const ProgressFn& progress) {
    if (grid.samples < 1) throw ConfigError("need at least 1 sample");
    if (grid.methods.empty() || grid.levels.empty() || grid.kappas.empty() ||
        grid.ranks.empty() || grid.strategies.empty())
        throw ConfigError("empty experiment grid");
    for (const auto& m : grid.methods)
        if (m != "evalda") (void)variant_from_method(m);

    std::mutex progress_mutex;
    auto log = [&](const std::string& msg) {
        if (!progress) return;
        std::lock_guard<std::mutex> lock(progress_mutex);
        progress(msg);
    };

    // re-index against the model so any corpus can supply victims
    std::vector<Document> victims_all;
    std::vector<std::int32_t> victim_index;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        Document doc = make_document(docs[i].id, docs[i].raw_tokens, model.vocabulary);
        bool eligible = false;
        for (std::int32_t t : doc.tokens)
            if (t != kOovId) {
                eligible = true;
                break;
            }
        if (!eligible) continue;
        victims_all.push_back(std::move(doc));
        victim_index.push_back(static_cast<std::int32_t>(i));
    }
    if (victims_all.empty()) throw ConfigError("no eligible victim documents");

    // seeded sample of victims, shared by every cell
    {
        Rng rng(derive_seed(grid.seed, 0, 0));
        for (std::size_t i = victims_all.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(rng.below(i));
            std::swap(victims_all[i - 1], victims_all[j]);
            std::swap(victim_index[i - 1], victim_index[j]);
        }
    }
    std::size_t n_samples = std::min<std::size_t>(victims_all.size(),
                                                  static_cast<std::size_t>(grid.samples));
    if (n_samples < static_cast<std::size_t>(grid.samples))
        log("only " + std::to_string(n_samples) + " eligible victims of requested " +
            std::to_string(grid.samples));
    victims_all.resize(n_samples);
    victim_index.resize(n_samples);

    std::vector<ExperimentCell> cells;
    for (const auto& method : grid.methods)
        for (std::int32_t level : grid.levels)
            for (double kappa : grid.kappas)
                for (std::int32_t rank : grid.ranks)
                    for (SubstitutionStrategy strategy : grid.strategies) {
                        ExperimentCell cell;
                        cell.method = method;
                        cell.level = level;
                        cell.kappa = kappa;
                        cell.rank = rank;
                        cell.strategy = strategy;
                        cell.type = grid.type;
                        cell.samples.resize(n_samples);
                        cells.push_back(std::move(cell));
                    }

    MeanEmbeddingEncoder encoder(lexicon.embeddings);
    const std::int64_t jobs = static_cast<std::int64_t>(cells.size()) *
                              static_cast<std::int64_t>(n_samples);

    parallel_for(jobs, grid.threads, [&](std::int64_t job) {
        std::size_t ci = static_cast<std::size_t>(job) / n_samples;
        std::size_t si = static_cast<std::size_t>(job) % n_samples;
        ExperimentCell& cell = cells[ci];
        const Document& victim = victims_all[si];
        std::uint64_t seed = derive_seed(grid.seed, static_cast<std::uint64_t>(ci) + 1,
                                         static_cast<std::uint64_t>(si));

        TopicDistribution theta_vic =
            infer(model, victim, grid.infer_iterations, grid.infer_burn_in, seed);
        std::int32_t target = select_target_topic(theta_vic, cell.rank);

        AttackConfig cfg;
        cfg.type = cell.type;
        cfg.target_topic = target;
        cfg.level.t = cell.level;
        cfg.sigma = grid.sigma;
        cfg.kappa = cell.kappa;
        cfg.strategy = cell.strategy;
        cfg.seed = seed;
        cfg.infer_iterations = grid.infer_iterations;
        cfg.infer_burn_in = grid.infer_burn_in;

        AttackPlan plan = cell.method == "evalda"
                              ? plan_greedy(model, victim, cfg, lexicon)
                              : plan_baseline(model, victim, cfg, lexicon,
                                              variant_from_method(cell.method));

        AttackOutcome outcome;
        outcome.adversarial = std::move(plan.adversarial);
        outcome.strategy = std::move(plan.strategy);
        outcome.budget = plan.budget;
        outcome.theta_vic = std::move(theta_vic);
        outcome.theta_adv =
            infer(model, outcome.adversarial, grid.infer_iterations, grid.infer_burn_in, seed);
        outcome.theta_vic_est = std::move(plan.theta_vic_est);
        outcome.theta_adv_est = std::move(plan.theta_adv_est);

        SampleResult& r = cell.samples[si];
        r.doc_index = victim_index[si];
        r.doc_id = victim.id;
        r.target_topic = target;
        r.rank_before = rank_of_topic(outcome.theta_vic, target);
        r.rank_after = rank_of_topic(outcome.theta_adv, target);
        r.theta_before = outcome.theta_vic.theta[static_cast<std::size_t>(target)];
        r.theta_after = outcome.theta_adv.theta[static_cast<std::size_t>(target)];
        r.metrics = compute_metrics(outcome, victim, target, lexicon.embeddings,
                                    model.vocabulary, encoder);
        r.budget = outcome.budget;
        r.positions_used = outcome.strategy.positions_used();
    });

    for (auto& cell : cells) {
        std::vector<double> cor, cops, awd, assd;
        std::int32_t off_rank = 0;
        for (const auto& r : cell.samples) {
            cor.push_back(r.metrics.cor);
            cops.push_back(r.metrics.cops);
            awd.push_back(r.metrics.awd);
            assd.push_back(r.metrics.assd);
            if (r.rank_before != cell.rank) ++off_rank;
        }
        cell.cor = summarize(cor);
        cell.cops = summarize(cops);
        cell.awd = summarize(awd);
        cell.assd = summarize(assd);
        log("cell method=" + cell.method + " level=" + std::to_string(cell.level) +
            " kappa=" + format_double(cell.kappa) + " rank=" + std::to_string(cell.rank) +
            " strategy=" + strategy_name(cell.strategy) + " type=" + attack_type_name(cell.type) +
            ": " + std::to_string(cell.samples.size()) + " samples" +
            (off_rank ? ", " + std::to_string(off_rank) + " with nearest-rank targets" : ""));
    }
    return cells;
}

namespace {

void append_cell_params(std::ostringstream& out, const ExperimentCell& cell) {
    out << cell.method << ',' << attack_type_name(cell.type) << ',' << cell.level << ','
        << format_double(cell.kappa) << ',' << cell.rank << ',' << strategy_name(cell.strategy);
}

}  // namespace

void write_summary_csv(const std::vector<ExperimentCell>& cells, const std::string& path) {
    std::ostringstream out;
    out << "method,type,level,kappa,rank,strategy,samples,"
           "cor_mean,cor_ci,cops_mean,cops_ci,awd_mean,awd_ci,assd_mean,assd_ci\n";
    for (const auto& cell : cells) {
        append_cell_params(out, cell);
        out << ',' << cell.cor.count;
        for (const auto* m : {&cell.cor, &cell.cops, &cell.awd, &cell.assd})
            out << ',' << format_double(m->mean) << ',' << format_double(m->ci95);
        out << '\n';
    }
    write_text_file(path, out.str());
}

void write_samples_csv(const std::vector<ExperimentCell>& cells, const std::string& path) {
    std::ostringstream out;
    out << "method,type,level,kappa,rank,strategy,doc_index,doc_id,target_topic,"
           "rank_before,rank_after,theta_before,theta_after,cor,cops,awd,assd,"
           "budget,positions_used\n";
    for (const auto& cell : cells) {
        for (const auto& r : cell.samples) {
            append_cell_params(out, cell);
            out << ',' << r.doc_index << ',' << r.doc_id << ',' << r.target_topic << ','
                << r.rank_before << ',' << r.rank_after << ',' << format_double(r.theta_before)
                << ',' << format_double(r.theta_after) << ',' << format_double(r.metrics.cor)
                << ',' << format_double(r.metrics.cops) << ',' << format_double(r.metrics.awd)
                << ',' << format_double(r.metrics.assd) << ',' << r.budget << ','
                << r.positions_used << '\n';
        }
    }
    write_text_file(path, out.str());
}

}  // namespace evalda
