#include "chanalyze/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "chanalyze/clone.hpp"
#include "chanalyze/community.hpp"
#include "chanalyze/coordination.hpp"
#include "chanalyze/data_model.hpp"
#include "chanalyze/fake.hpp"
#include "chanalyze/graph.hpp"
#include "chanalyze/report.hpp"
#include "chanalyze/simd/kernels.hpp"
#include "chanalyze/synth.hpp"
#include "chanalyze/text/fingerprint.hpp"
#include "chanalyze/topic.hpp"
#include "chanalyze/util/threading.hpp"

namespace chanalyze::cli {

namespace {

using Row = ReportWriter::Row;

struct CommonOpts {
    std::string channels_path;
    std::string messages_path;
    std::string out_dir = "out";
    std::uint64_t seed = 42;
    double threshold = 0.30;
    std::int64_t ref_time = -1;  // -1: dataset default
    unsigned threads = default_thread_count();
};

void add_archive_options(CLI::App* cmd, CommonOpts& opts, bool required = true) {
    auto* c = cmd->add_option("--channels", opts.channels_path, "Channels archive (JSONL)");
    auto* m = cmd->add_option("--messages", opts.messages_path, "Messages archive (JSONL)");
    if (required) {
        c->required();
        m->required();
    }
}

void add_run_options(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--out", opts.out_dir, "Output directory for reports")->capture_default_str();
    cmd->add_option("--seed", opts.seed, "Deterministic seed")->capture_default_str();
    cmd->add_option("--threads", opts.threads,
                    "Worker cap (default: CHANALYZE_THREADS or hardware); never changes results")
        ->capture_default_str();
    cmd->add_option("--ref-time", opts.ref_time,
                    "Reference time override (epoch seconds; default: max message date)");
}

// The resolved configuration, recorded in every run directory. The digest
// skips the thread count, which by contract cannot change results.
struct RunConfig {
    std::vector<std::pair<std::string, std::string>> entries;

    void add(const std::string& key, const std::string& value) { entries.emplace_back(key, value); }
    void add_common(const std::string& subcommand, const CommonOpts& o) {
        add("subcommand", subcommand);
        if (!o.channels_path.empty()) add("channels", o.channels_path);
        if (!o.messages_path.empty()) add("messages", o.messages_path);
        add("out", o.out_dir);
        add("seed", std::to_string(o.seed));
        add("ref_time", std::to_string(o.ref_time));
        add("simd_backend", simd::backend_name());
    }

    std::string digest() const {
        std::string blob;
        for (const auto& [k, v] : entries) blob += k + "=" + v + "\n";
        return text::fingerprint(blob).hex();
    }

    std::string render(unsigned threads) const {
        std::string out;
        for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
        out += "threads = " + std::to_string(threads) + "\n";
        return out;
    }
};

ReportWriter open_writer(const CommonOpts& opts, const RunConfig& config) {
    ReportWriter writer(opts.out_dir, config.digest());
    writer.write_text("config.txt", config.render(opts.threads));
    return writer;
}

Dataset load_dataset(const CommonOpts& opts) {
    return parse_dataset(opts.channels_path, opts.messages_path);
}

std::int64_t resolve_ref_time(const CommonOpts& opts, const Dataset& ds) {
    return opts.ref_time >= 0 ? opts.ref_time : ds.reference_time();
}

std::vector<std::int64_t> parse_id_list(const std::string& spec) {
    std::vector<std::int64_t> ids;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) ids.push_back(std::stoll(item));
    }
    return ids;
}

std::vector<std::int64_t> read_id_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open id list " + path);
    std::vector<std::int64_t> ids;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        ids.push_back(std::stoll(line));
    }
    return ids;
}

const char* class_name(ChannelClass c) {
    switch (c) {
        case ChannelClass::verified: return "verified";
        case ChannelClass::scam: return "scam";
        default: return "standard";
    }
}

// ---------------------------------------------------------------------------

void run_ingest_check(const CommonOpts& opts) {
    RunConfig config;
    config.add_common("ingest-check", opts);
    const Dataset ds = load_dataset(opts);
    ReportWriter writer = open_writer(opts, config);

    const ChannelStatsReport stats = channel_stats(ds);
    std::vector<Row> rows = {
        {"channels", std::to_string(ds.channel_count())},
        {"messages", std::to_string(ds.total_messages())},
        {"verified", std::to_string(stats.verified.count)},
        {"scam", std::to_string(stats.scam.count)},
        {"standard", std::to_string(stats.standard.count)},
        {"reference_time", std::to_string(ds.reference_time())},
    };
    writer.write_csv("summary.csv", {"metric", "value"}, rows);
    writer.finish();
    for (const Row& r : rows) std::cout << r[0] << ": " << r[1] << "\n";
}

void run_graph_stats(const CommonOpts& opts) {
    RunConfig config;
    config.add_common("graph-stats", opts);
    const Dataset ds = load_dataset(opts);
    ReportWriter writer = open_writer(opts, config);

    const ChannelStatsReport stats = channel_stats(ds);
    {
        std::vector<Row> rows;
        const auto emit = [&](const char* metric, const char* cls, const Cdf& cdf) {
            for (const auto& [value, cum] : cdf.points) {
                rows.push_back({metric, cls, format_double(value), format_double(cum)});
            }
        };
        for (const ChannelClass cls :
             {ChannelClass::verified, ChannelClass::scam, ChannelClass::standard}) {
            const ClassStats& cs = stats.of(cls);
            emit("subscribers", class_name(cls), cs.subscribers);
            emit("text_messages", class_name(cls), cs.text_messages);
            emit("media_messages", class_name(cls), cs.media_messages);
            emit("forwarded_ratio", class_name(cls), cs.forwarded_ratio);
        }
        writer.write_csv("class_cdfs.csv", {"metric", "class", "value", "cum_fraction"}, rows);

        std::vector<Row> means;
        for (const ChannelClass cls :
             {ChannelClass::verified, ChannelClass::scam, ChannelClass::standard}) {
            const ClassStats& cs = stats.of(cls);
            means.push_back({class_name(cls), std::to_string(cs.count),
                             format_double(cs.mean_subscribers), format_double(cs.mean_text),
                             format_double(cs.mean_media), format_double(cs.mean_forwarded_ratio)});
        }
        writer.write_csv("class_means.csv",
                         {"class", "count", "mean_subscribers", "mean_text_messages",
                          "mean_media_messages", "mean_forwarded_ratio"},
                         means);
    }

    const GraphBuildResult built = build_forward_graph(ds);
    const ForwardGraph& g = built.graph;
    {
        std::vector<Row> rows;
        for (std::size_t u = 0; u < g.size(); ++u) {
            for (const auto& e : g.out_edges(u)) {
                rows.push_back({std::to_string(g.node_id(u)), std::to_string(g.node_id(e.to)),
                                std::to_string(e.weight)});
            }
        }
        writer.write_csv("edges.csv", {"src", "dst", "weight"}, rows);
    }

    const Condensation cond = strongly_connected_components(g);
    {
        std::vector<Row> rows = {
            {"nodes", std::to_string(g.size())},
            {"edges", std::to_string(g.edge_count())},
            {"total_forward_weight", std::to_string(g.total_weight())},
            {"external_origin_forwards", std::to_string(built.external_origin_forwards)},
            {"self_forwards", std::to_string(built.self_forwards)},
            {"scc_count", std::to_string(cond.scc_count)},
            {"largest_scc", std::to_string(cond.largest_scc)},
            {"components_ge2", std::to_string(cond.components_ge2)},
            {"singleton_sccs", std::to_string(cond.singleton_sccs)},
            {"degree_zero_nodes", std::to_string(cond.degree_zero_nodes)},
        };
        if (g.size() > 0) {
            const DegreeExtremes ex = degree_extremes(g);
            rows.push_back({"max_out_degree", std::to_string(ex.max_out_degree)});
            rows.push_back({"max_out_channel", std::to_string(ex.max_out_channel)});
            rows.push_back({"max_in_degree", std::to_string(ex.max_in_degree)});
            rows.push_back({"max_in_channel", std::to_string(ex.max_in_channel)});
        }
        writer.write_csv("graph_summary.csv", {"metric", "value"}, rows);
    }

    if (g.size() > 0) {
        const std::vector<double> scores = pagerank(g);
        std::vector<Row> rows;
        for (std::size_t u = 0; u < g.size(); ++u) {
            rows.push_back({std::to_string(g.node_id(u)), format_double(scores[u])});
        }
        writer.write_csv("pagerank.csv", {"channel_id", "score"}, rows);

        std::vector<Row> cdf_rows;
        for (const ChannelClass cls :
             {ChannelClass::verified, ChannelClass::scam, ChannelClass::standard}) {
            std::vector<double> values;
            for (std::size_t u = 0; u < g.size(); ++u) {
                const auto idx = ds.index_of(g.node_id(u));
                if (idx && classify_channel(ds.channel(*idx)) == cls) values.push_back(scores[u]);
            }
            for (const auto& [value, cum] : empirical_cdf(std::move(values)).points) {
                cdf_rows.push_back({class_name(cls), format_double(value), format_double(cum)});
            }
        }
        writer.write_csv("pagerank_cdfs.csv", {"class", "value", "cum_fraction"}, cdf_rows);
    }
    writer.finish();
    std::cout << "graph-stats: " << g.size() << " nodes, " << g.edge_count() << " edges\n";
}

void run_clones(const CommonOpts& opts) {
    RunConfig config;
    config.add_common("clones", opts);
    config.add("threshold", format_double(opts.threshold));
    const Dataset ds = load_dataset(opts);
    ReportWriter writer = open_writer(opts, config);

    const CloneReport report = find_clones(ds, opts.threshold, opts.threads);
    std::vector<Row> rows;
    for (const CloneEntry& e : report.entries) {
        rows.push_back({std::to_string(e.original_id), std::to_string(e.clone_id),
                        std::to_string(e.shared), std::to_string(e.eligible),
                        format_double(e.ratio), to_string(e.kind)});
    }
    writer.write_csv("clones.csv", {"original_id", "clone_id", "shared", "eligible", "ratio", "kind"},
                     rows);

    const CopiedRatioCdf cdf = copied_ratio_cdf(ds, opts.threads);
    std::vector<Row> cdf_rows;
    for (const auto& [ratio, cum] : cdf.cdf.points) {
        cdf_rows.push_back({format_double(ratio), format_double(cum)});
    }
    writer.write_csv("copied_ratio_cdf.csv", {"ratio", "cum_fraction"}, cdf_rows);
    writer.finish();
    std::cout << "clones: " << report.entries.size() << " clone pairs at threshold "
              << format_double(report.threshold) << "\n";
}

struct TopicOpts {
    std::uint32_t k_min = 10, k_max = 25;
    std::uint32_t min_df = 5;
    std::uint32_t iters = 500;
    std::uint32_t clusters = 0;  // 0: use best K
};

void run_topics(const CommonOpts& opts, const TopicOpts& topts) {
    RunConfig config;
    config.add_common("topics", opts);
    config.add("k_min", std::to_string(topts.k_min));
    config.add("k_max", std::to_string(topts.k_max));
    config.add("min_df", std::to_string(topts.min_df));
    config.add("iters", std::to_string(topts.iters));
    const Dataset ds = load_dataset(opts);
    ReportWriter writer = open_writer(opts, config);

    std::vector<std::size_t> english;
    for (std::size_t i = 0; i < ds.channel_count(); ++i) {
        if (channel_language(ds, i) == "en") english.push_back(i);
    }
    if (english.empty()) throw std::invalid_argument("topics: no English channels in the archive");

    const Corpus corpus = preprocess_corpus(ds, english, topts.min_df);
    const TopicScan scan =
        select_topic_count(corpus, topts.k_min, topts.k_max, opts.seed, topts.iters, opts.threads);

    std::vector<Row> score_rows;
    for (const auto& [k, score] : scan.scores) {
        score_rows.push_back({std::to_string(k), format_double(score)});
    }
    writer.write_csv("topic_scores.csv", {"k", "umass"}, score_rows);

    const auto keywords = top_keywords(scan.best_model, corpus);
    std::vector<Row> kw_rows;
    for (std::uint32_t k = 0; k < scan.best_model.topics; ++k) {
        for (std::size_t r = 0; r < keywords[k].size(); ++r) {
            const std::uint32_t w = corpus.vocab_index.at(keywords[k][r]);
            kw_rows.push_back({std::to_string(k), std::to_string(r + 1), keywords[k][r],
                               format_double(scan.best_model.phi_row(k)[w])});
        }
    }
    writer.write_csv("topic_keywords.csv", {"topic_id", "keyword_rank", "keyword", "phi"}, kw_rows);

    const std::uint32_t clusters = topts.clusters == 0 ? scan.best_k : topts.clusters;
    const KmeansResult km = kmeans_cluster(
        scan.best_model.theta, scan.best_model.topics,
        std::min<std::uint32_t>(clusters, scan.best_model.doc_count), opts.seed);
    std::vector<Row> group_rows;
    for (std::uint32_t d = 0; d < scan.best_model.doc_count; ++d) {
        const double* theta = scan.best_model.theta_row(d);
        std::uint32_t dominant = 0;
        for (std::uint32_t k = 1; k < scan.best_model.topics; ++k) {
            if (theta[k] > theta[dominant]) dominant = k;
        }
        group_rows.push_back({std::to_string(corpus.doc_channel_ids[d]),
                              std::to_string(km.assignment[d]), std::to_string(dominant)});
    }
    writer.write_csv("channel_topics.csv", {"channel_id", "cluster", "dominant_topic"}, group_rows);

    std::vector<Row> dropped;
    for (const std::int64_t id : corpus.dropped_channels) dropped.push_back({std::to_string(id)});
    writer.write_csv("dropped_channels.csv", {"channel_id"}, dropped);
    writer.finish();
    std::cout << "topics: best K = " << scan.best_k << " over " << corpus.doc_count()
              << " channels\n";
}

std::vector<std::pair<std::int64_t, bool>> read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open labels file " + path);
    std::vector<std::pair<std::int64_t, bool>> labels;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        if (lineno == 1 && line.rfind("channel_id", 0) == 0) continue;  // header
        const std::size_t comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(path, lineno, "expected channel_id,label");
        }
        const std::string label = line.substr(comma + 1);
        bool fake;
        if (label == "fake") fake = true;
        else if (label == "official") fake = false;
        else throw ParseError(path, lineno, "label must be official or fake");
        labels.emplace_back(std::stoll(line.substr(0, comma)), fake);
    }
    return labels;
}

struct FakeOpts {
    std::string labels_path;
    std::string model_path = "model.bin";
    std::uint32_t folds = 5;
    std::uint32_t epochs = 50;
    bool all_channels = false;
    std::int64_t shapley_channel = 0;
};

void run_train_fakes(const CommonOpts& opts, const FakeOpts& fopts) {
    RunConfig config;
    config.add_common("train-fakes", opts);
    config.add("labels", fopts.labels_path);
    config.add("folds", std::to_string(fopts.folds));
    config.add("epochs", std::to_string(fopts.epochs));
    const Dataset ds = load_dataset(opts);
    ReportWriter writer = open_writer(opts, config);
    const std::int64_t ref = resolve_ref_time(opts, ds);

    const auto labels = read_labels(fopts.labels_path);
    std::vector<FeatureVector> features(labels.size());
    std::vector<bool> y(labels.size());
    parallel_for(labels.size(), opts.threads, [&](std::size_t i) {
        const auto idx = ds.index_of(labels[i].first);
        if (!idx) {
            throw std::invalid_argument("labels reference unknown channel " +
                                        std::to_string(labels[i].first));
        }
        features[i] = extract_features(ds.channel(*idx), ds.messages(*idx), ref);
        y[i] = labels[i].second;
    });

    TrainOptions topts;
    topts.epochs = fopts.epochs;
    const CvResult cv = cross_validate(features, y, fopts.folds, opts.seed, topts, opts.threads);
    const TrainResult final_train = train_mlp(features, y, opts.seed, topts);
    final_train.model.save(writer.out_dir() + "/" + fopts.model_path);

    std::vector<Row> metric_rows;
    for (std::size_t f = 0; f < cv.folds.size(); ++f) {
        metric_rows.push_back({std::to_string(f), format_double(cv.folds[f].accuracy),
                               format_double(cv.folds[f].weighted_f1),
                               std::to_string(cv.folds[f].test_size)});
    }
    metric_rows.push_back({"pooled", format_double(cv.accuracy), format_double(cv.weighted_f1),
                           std::to_string(features.size())});
    writer.write_csv("metrics.csv", {"fold", "accuracy", "weighted_f1", "test_size"}, metric_rows);

    std::vector<Row> loss_rows;
    for (std::size_t e = 0; e < final_train.epoch_loss.size(); ++e) {
        loss_rows.push_back({std::to_string(e), format_double(final_train.epoch_loss[e])});
    }
    writer.write_csv("loss.csv", {"epoch", "bce"}, loss_rows);

    std::vector<Row> feat_rows;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        Row row = {std::to_string(labels[i].first), labels[i].second ? "fake" : "official"};
        for (const double v : features[i]) row.push_back(format_double(v));
        feat_rows.push_back(std::move(row));
    }
    Row feat_header = {"channel_id", "label"};
    for (const std::string& n : feature_names()) feat_header.push_back(n);
    writer.write_csv("features.csv", feat_header, feat_rows);
    writer.finish();
    std::cout << "train-fakes: CV accuracy " << format_double(cv.accuracy) << ", weighted F1 "
              << format_double(cv.weighted_f1) << "\n";
}

void run_classify(const CommonOpts& opts, const FakeOpts& fopts) {
    RunConfig config;
    config.add_common("classify", opts);
    config.add("model", fopts.model_path);
    config.add("all_channels", fopts.all_channels ? "true" : "false");
    const Dataset ds = load_dataset(opts);
    ReportWriter writer = open_writer(opts, config);
    const std::int64_t ref = resolve_ref_time(opts, ds);
    const MlpModel model = MlpModel::load(fopts.model_path);

    std::vector<std::int64_t> targets;
    if (fopts.all_channels) {
        for (const ChannelRecord& c : ds.channels()) targets.push_back(c.id);
        std::sort(targets.begin(), targets.end());
    } else {
        std::vector<std::string> verified_titles;
        for (const ChannelRecord& c : ds.channels()) {
            if (c.verified) verified_titles.push_back(c.title);
        }
        targets = select_candidates(ds, verified_titles);
    }

    std::vector<Row> rows(targets.size());
    parallel_for(targets.size(), opts.threads, [&](std::size_t i) {
        const auto idx = ds.index_of(targets[i]);
        const FeatureVector f = extract_features(ds.channel(*idx), ds.messages(*idx), ref);
        const double p = model.predict_proba(f);
        rows[i] = {std::to_string(targets[i]), format_double(p), p > 0.5 ? "fake" : "official"};
    });
    writer.write_csv("predictions.csv", {"channel_id", "probability", "label"}, rows);
    writer.finish();
    std::cout << "classify: " << targets.size() << " candidate channels scored\n";
}

void run_shapley(const CommonOpts& opts, const FakeOpts& fopts) {
    RunConfig config;
    config.add_common("shapley", opts);
    config.add("model", fopts.model_path);
    config.add("channel", std::to_string(fopts.shapley_channel));
    const Dataset ds = load_dataset(opts);
    ReportWriter writer = open_writer(opts, config);
    const std::int64_t ref = resolve_ref_time(opts, ds);
    const MlpModel model = MlpModel::load(fopts.model_path);

    const auto idx = ds.index_of(fopts.shapley_channel);
    if (!idx) {
        throw std::invalid_argument("unknown channel " + std::to_string(fopts.shapley_channel));
    }
    const FeatureVector x = extract_features(ds.channel(*idx), ds.messages(*idx), ref);
    const std::vector<double> phi = exact_shapley(model, x);

    std::vector<Row> rows;
    for (std::size_t i = 0; i < kFeatureCount; ++i) {
        const double background = model.feature_mean().empty() ? 0.0 : model.feature_mean()[i];
        rows.push_back({feature_names()[i], format_double(x[i]), format_double(background),
                        format_double(phi[i])});
    }
    writer.write_csv("shapley.csv", {"feature", "value", "background", "attribution"}, rows);
    writer.finish();
    std::cout << "shapley: probability " << format_double(model.predict_proba(x)) << " for channel "
              << fopts.shapley_channel << "\n";
}

struct CommunityOpts {
    double resolution = 1.0;
    std::string anchors;
};

void run_communities(const CommonOpts& opts, const CommunityOpts& copts) {
    RunConfig config;
    config.add_common("communities", opts);
    config.add("resolution", format_double(copts.resolution));
    if (!copts.anchors.empty()) config.add("anchors", copts.anchors);
    const Dataset ds = load_dataset(opts);
    ReportWriter writer = open_writer(opts, config);

    const ForwardGraph g = build_forward_graph(ds).graph;
    const CommunityAssignment assignment = leiden(g, copts.resolution, opts.seed);

    std::vector<Row> rows;
    for (std::size_t u = 0; u < g.size(); ++u) {
        rows.push_back({std::to_string(g.node_id(u)), std::to_string(assignment.community_of[u])});
    }
    writer.write_csv("communities.csv", {"channel_id", "community_id"}, rows);

    std::vector<Row> summary = {
        {"communities", std::to_string(assignment.community_count)},
        {"modularity", format_double(modularity(g, assignment, copts.resolution))},
    };
    if (!copts.anchors.empty()) {
        const CommunitySelection sel = community_of(g, assignment, parse_id_list(copts.anchors));
        std::vector<Row> selection;
        for (const std::int64_t id : sel.channel_ids) selection.push_back({std::to_string(id)});
        writer.write_csv("selection.csv", {"channel_id"}, selection);
        summary.push_back({"anchor_communities", std::to_string(sel.communities.size())});
        summary.push_back({"anchors_span_multiple", sel.spans_multiple ? "true" : "false"});
        if (sel.spans_multiple) {
            std::cerr << "warning: anchors span " << sel.communities.size() << " communities\n";
        }
    }
    writer.write_csv("summary.csv", {"metric", "value"}, summary);
    writer.finish();
    std::cout << "communities: " << assignment.community_count << " communities\n";
}

struct CoordinationOpts {
    std::string set_path;
    double min_in_coverage = 0.5;
    std::size_t top_k = 10;
};

void run_coordination(const CommonOpts& opts, const CoordinationOpts& copts) {
    RunConfig config;
    config.add_common("coordination", opts);
    config.add("set", copts.set_path);
    config.add("min_in_coverage", format_double(copts.min_in_coverage));
    const Dataset ds = load_dataset(opts);
    ReportWriter writer = open_writer(opts, config);

    std::vector<std::int64_t> set_ids;
    if (copts.set_path.empty()) {
        for (const ChannelRecord& c : ds.channels()) set_ids.push_back(c.id);
    } else {
        set_ids = read_id_file(copts.set_path);
    }
    std::vector<std::size_t> indices;
    for (const std::int64_t id : set_ids) {
        const auto idx = ds.index_of(id);
        if (!idx) throw std::invalid_argument("channel set references unknown channel " +
                                              std::to_string(id));
        indices.push_back(*idx);
    }

    const ReuseReport reuse = message_reuse(ds, indices, copts.top_k);
    std::vector<Row> top_rows;
    for (const auto& e : reuse.top) {
        top_rows.push_back({e.fp.hex(), std::to_string(e.count), e.sample});
    }
    writer.write_csv("reuse_top.csv", {"fingerprint", "count", "sample"}, top_rows);

    const DelayProfile delays = forwarding_delays(ds, indices);
    std::vector<Row> cdf_rows;
    const auto emit_cdf = [&](const Cdf& cdf, const char* kind) {
        for (const auto& [value, cum] : cdf.points) {
            cdf_rows.push_back({format_double(value), format_double(cum), kind});
        }
    };
    emit_cdf(delays.first_cdf, "first");
    emit_cdf(delays.mean_cdf, "mean");
    emit_cdf(delays.last_cdf, "last");
    writer.write_csv("delay_cdfs.csv", {"delay_seconds", "cum_fraction", "kind"}, cdf_rows);

    const CoverageReport coverage = network_coverage(ds, indices);
    std::vector<Row> cov_rows;
    for (const auto& r : coverage.rows) {
        cov_rows.push_back({r.fp.hex(), std::to_string(r.channels), format_double(r.coverage),
                            r.never_forwarded ? "true" : "false"});
    }
    writer.write_csv("coverage.csv", {"fingerprint", "channels", "coverage", "never_forwarded"},
                     cov_rows);
    {
        static const char* kBandNames[kCoverageBands] = {"never_forwarded", "(0,20%]", "(20,40%]",
                                                         "(40,60%]", "(60,80%]", "(80,100%]"};
        std::vector<Row> band_rows;
        for (std::size_t bnd = 0; bnd < kCoverageBands; ++bnd) {
            band_rows.push_back({kBandNames[bnd], std::to_string(coverage.bands[bnd])});
        }
        writer.write_csv("coverage_hist.csv", {"band", "count"}, band_rows);
    }

    const ForwardGraph sub = build_forward_graph(ds).graph.restricted_to(set_ids);
    const CoreChannelReport core = find_core_channels(sub, copts.min_in_coverage);
    std::vector<Row> core_rows;
    for (const auto& c : core.core) {
        core_rows.push_back({std::to_string(c.channel_id), std::to_string(c.in_degree),
                             std::to_string(c.out_degree)});
    }
    writer.write_csv("core_channels.csv", {"channel_id", "in_degree", "out_degree"}, core_rows);

    writer.write_csv(
        "summary.csv", {"metric", "value"},
        {{"channels", std::to_string(indices.size())},
         {"total_messages", std::to_string(reuse.total_messages)},
         {"distinct_messages", std::to_string(reuse.distinct)},
         {"frac_first_within_10min", format_double(delays.frac_first_within_10min)},
         {"frac_last_within_24h", format_double(delays.frac_last_within_24h)},
         {"metadata_discrepancies", std::to_string(delays.metadata_discrepancies)},
         {"subgraph_scc_count", std::to_string(core.condensation.scc_count)},
         {"core_channels", std::to_string(core.core.size())}});
    writer.finish();
    std::cout << "coordination: " << reuse.total_messages << " messages, " << reuse.distinct
              << " distinct, " << core.core.size() << " core channel(s)\n";
}

struct SynthOpts {
    std::string spec_path;
};

void run_synth(const CommonOpts& opts, const SynthOpts& sopts) {
    UniverseSpec spec;
    if (!sopts.spec_path.empty()) spec = UniverseSpec::parse_file(sopts.spec_path);
    else spec.seed = opts.seed;

    RunConfig config;
    config.add_common("synth", opts);
    config.add("universe_spec", sopts.spec_path.empty() ? "<defaults>" : sopts.spec_path);
    config.add("universe_seed", std::to_string(spec.seed));
    ReportWriter writer = open_writer(opts, config);

    const Universe universe = generate_universe(spec);
    serialize_dataset(universe.dataset, writer.out_dir() + "/channels.jsonl",
                      writer.out_dir() + "/messages.jsonl");
    universe.truth.save(writer.out_dir() + "/ground_truth.csv");
    {
        std::ofstream out(writer.out_dir() + "/universe_spec.cfg");
        spec.serialize(out);
    }
    writer.write_csv("universe_summary.csv", {"metric", "value"},
                     {{"channels", std::to_string(universe.dataset.channel_count())},
                      {"messages", std::to_string(universe.dataset.total_messages())},
                      {"clone_pairs", std::to_string(universe.truth.clone_pairs.size())},
                      {"conspiracy_members", std::to_string(universe.truth.conspiracy_members.size())}});
    writer.finish();
    std::cout << "synth: " << universe.dataset.channel_count() << " channels, "
              << universe.dataset.total_messages() << " messages\n";
}

struct CrawlOpts {
    std::string seeds;
    std::string seeds_file;
    std::size_t window = 10'000;
    std::size_t max_iterations = 100;
    bool emit_archive = false;
};

void run_crawl_sim(const CommonOpts& opts, const CrawlOpts& copts) {
    RunConfig config;
    config.add_common("crawl-sim", opts);
    config.add("seeds", copts.seeds.empty() ? copts.seeds_file : copts.seeds);
    config.add("window", std::to_string(copts.window));
    config.add("max_iterations", std::to_string(copts.max_iterations));
    const Dataset ds = load_dataset(opts);
    ReportWriter writer = open_writer(opts, config);

    std::vector<std::int64_t> seeds;
    if (!copts.seeds.empty()) seeds = parse_id_list(copts.seeds);
    else if (!copts.seeds_file.empty()) seeds = read_id_file(copts.seeds_file);
    if (seeds.empty()) throw std::invalid_argument("crawl-sim: no seed channels given");

    const CrawlReport report = simulate_crawl(ds, seeds, copts.window, copts.max_iterations);
    std::vector<Row> iter_rows;
    for (std::size_t i = 0; i < report.iterations.size(); ++i) {
        iter_rows.push_back({std::to_string(i + 1),
                             std::to_string(report.iterations[i].new_channels),
                             format_double(report.iterations[i].fully_explored_fraction)});
    }
    writer.write_csv("crawl_iterations.csv", {"iteration", "new_channels", "fully_explored_fraction"},
                     iter_rows);

    std::vector<Row> crawled;
    for (const std::int64_t id : report.crawled_ids) crawled.push_back({std::to_string(id)});
    writer.write_csv("crawled_channels.csv", {"channel_id"}, crawled);

    if (copts.emit_archive) {
        serialize_dataset(report.crawled, writer.out_dir() + "/crawled.channels.jsonl",
                          writer.out_dir() + "/crawled.messages.jsonl");
    }
    writer.finish();
    std::cout << "crawl-sim: " << report.crawled_ids.size() << " channels after "
              << report.iterations.size() << " iteration(s)\n";
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
    CLI::App app{"Messaging-channel archive analytics: forward-graph statistics, clone and fake "
                 "detection, topic modeling, coordination forensics, and a ground-truthed "
                 "universe generator."};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Config file (key = value; [subcommand] sections; flags win on conflict)");
    app.set_version_flag("--version", std::string(kToolVersion));

    CommonOpts ingest_opts, graph_opts, clone_opts, topic_common, fake_common, classify_common,
        shap_common, comm_common, coord_common, synth_common, crawl_common;
    TopicOpts topic_opts;
    FakeOpts train_opts, classify_opts, shap_opts;
    CommunityOpts comm_opts;
    CoordinationOpts coord_opts;
    SynthOpts synth_opts;
    CrawlOpts crawl_opts;

    auto* ingest = app.add_subcommand("ingest-check", "Parse and validate an archive");
    add_archive_options(ingest, ingest_opts);
    add_run_options(ingest, ingest_opts);
    ingest->callback([&] { run_ingest_check(ingest_opts); });

    auto* graph = app.add_subcommand("graph-stats",
                                     "Channel-class CDFs, forward-graph structure, PageRank");
    add_archive_options(graph, graph_opts);
    add_run_options(graph, graph_opts);
    graph->callback([&] { run_graph_stats(graph_opts); });

    auto* clones = app.add_subcommand("clones", "Detect clone channels");
    add_archive_options(clones, clone_opts);
    add_run_options(clones, clone_opts);
    clones->add_option("--threshold", clone_opts.threshold, "Copied-ratio threshold")
        ->capture_default_str();
    clones->callback([&] { run_clones(clone_opts); });

    auto* topics = app.add_subcommand("topics", "LDA topic discovery over English channels");
    add_archive_options(topics, topic_common);
    add_run_options(topics, topic_common);
    topics->add_option("--k-min", topic_opts.k_min, "Smallest topic count")->capture_default_str();
    topics->add_option("--k-max", topic_opts.k_max, "Largest topic count")->capture_default_str();
    topics->add_option("--min-df", topic_opts.min_df, "Vocabulary document-frequency floor")
        ->capture_default_str();
    topics->add_option("--iters", topic_opts.iters, "Gibbs sweeps per model")->capture_default_str();
    topics->add_option("--clusters", topic_opts.clusters, "K-means clusters (default: best K)");
    topics->callback([&] { run_topics(topic_common, topic_opts); });

    auto* train = app.add_subcommand("train-fakes", "Train the fake-channel classifier");
    add_archive_options(train, fake_common);
    add_run_options(train, fake_common);
    train->add_option("--labels", train_opts.labels_path, "CSV of channel_id,label")->required();
    train->add_option("--model-out", train_opts.model_path, "Model filename under --out")
        ->capture_default_str();
    train->add_option("--folds", train_opts.folds, "Cross-validation folds")->capture_default_str();
    train->add_option("--epochs", train_opts.epochs, "Training epochs")->capture_default_str();
    train->callback([&] { run_train_fakes(fake_common, train_opts); });

    auto* classify = app.add_subcommand("classify", "Score candidate channels with a trained model");
    add_archive_options(classify, classify_common);
    add_run_options(classify, classify_common);
    classify->add_option("--model", classify_opts.model_path, "Trained model file")->required();
    classify->add_flag("--all", classify_opts.all_channels,
                       "Score every channel, not just selected candidates");
    classify->callback([&] { run_classify(classify_common, classify_opts); });

    auto* shapley = app.add_subcommand("shapley", "Exact Shapley attribution for one channel");
    add_archive_options(shapley, shap_common);
    add_run_options(shapley, shap_common);
    shapley->add_option("--model", shap_opts.model_path, "Trained model file")->required();
    shapley->add_option("--channel", shap_opts.shapley_channel, "Channel id to explain")->required();
    shapley->callback([&] { run_shapley(shap_common, shap_opts); });

    auto* communities = app.add_subcommand("communities", "Leiden community detection");
    add_archive_options(communities, comm_common);
    add_run_options(communities, comm_common);
    communities->add_option("--resolution", comm_opts.resolution, "Modularity resolution")
        ->capture_default_str();
    communities->add_option("--anchors", comm_opts.anchors,
                            "Comma-separated channel ids; exports their community union");
    communities->callback([&] { run_communities(comm_common, comm_opts); });

    auto* coordination = app.add_subcommand(
        "coordination", "Reuse, forwarding delays, coverage, and core channels of a set");
    add_archive_options(coordination, coord_common);
    add_run_options(coordination, coord_common);
    coordination->add_option("--set", coord_opts.set_path,
                             "File with one channel id per line (default: all channels)");
    coordination->add_option("--min-in-coverage", coord_opts.min_in_coverage,
                             "Core-channel in-degree threshold")
        ->capture_default_str();
    coordination->add_option("--top-k", coord_opts.top_k, "Rows in the reuse table")
        ->capture_default_str();
    coordination->callback([&] { run_coordination(coord_common, coord_opts); });

    auto* synth = app.add_subcommand("synth", "Generate a ground-truthed synthetic universe");
    add_run_options(synth, synth_common);
    synth->add_option("--universe-spec", synth_opts.spec_path,
                      "Universe spec file (key = value); defaults used when omitted");
    synth->callback([&] { run_synth(synth_common, synth_opts); });

    auto* crawl = app.add_subcommand("crawl-sim", "Simulate a snowball crawl over an archive");
    add_archive_options(crawl, crawl_common);
    add_run_options(crawl, crawl_common);
    crawl->add_option("--seeds", crawl_opts.seeds, "Comma-separated seed channel ids");
    crawl->add_option("--seeds-file", crawl_opts.seeds_file, "File with one seed id per line");
    crawl->add_option("--window", crawl_opts.window, "Messages fetched per channel")
        ->capture_default_str();
    crawl->add_option("--max-iterations", crawl_opts.max_iterations, "Iteration cap")
        ->capture_default_str();
    crawl->add_flag("--emit-archive", crawl_opts.emit_archive, "Write the crawled archive too");
    crawl->callback([&] { run_crawl_sim(crawl_common, crawl_opts); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const ParseError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

int dispatch(const std::vector<std::string>& args) {
    std::vector<std::string> full = {"chanalyze"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    argv.reserve(full.size());
    for (const std::string& a : full) argv.push_back(a.c_str());
    return dispatch(static_cast<int>(argv.size()), argv.data());
}

}  // namespace chanalyze::cli
