// relnas: search neural architectures in graph space. Generates relational
// graphs, computes topological features, fits a linear error surrogate,
// selects features by SFS and greedily rewires graphs under surrogate
// guidance, with a toy masked-MLP trainer for end-to-end validation.

#include <CLI11.hpp>
#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "relnas/edgelist.hpp"
#include "relnas/feature_table.hpp"
#include "relnas/generators.hpp"
#include "relnas/manifest.hpp"
#include "relnas/masked_mlp.hpp"
#include "relnas/metrics.hpp"
#include "relnas/parallel.hpp"
#include "relnas/rewire.hpp"
#include "relnas/rng.hpp"
#include "relnas/surrogate.hpp"
#include "relnas/synthetic_data.hpp"

namespace fs = std::filesystem;
using namespace relnas;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 2;
constexpr int kExitConvergedLocal = 3;
constexpr int kExitInternal = 4;

struct GlobalOptions {
    std::string manifest_path;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 0;
    std::string out_dir;
};

struct Context {
    ExperimentManifest manifest;
    int workers = 1;
    fs::path out;
};

Context make_context(const GlobalOptions& opts) {
    Context ctx;
    if (!opts.manifest_path.empty()) {
        ctx.manifest = ExperimentManifest::from_file(opts.manifest_path);
    }
    if (opts.seed_set) ctx.manifest.seed = opts.seed;
    if (!opts.out_dir.empty()) ctx.manifest.out_dir = opts.out_dir;
    ctx.manifest.validate();
    ctx.workers = opts.workers > 0 ? opts.workers : default_workers();
    ctx.out = ctx.manifest.out_dir;
    fs::create_directories(ctx.out);
    return ctx;
}

void write_run_record(const Context& ctx, const std::string& command) {
    nlohmann::json rec;
    rec["command"] = command;
    rec["manifest_hash"] = ctx.manifest.hash_hex();
    rec["seed"] = ctx.manifest.seed;
    write_file_atomic(ctx.out / ("run_" + command + ".json"), rec.dump(2) + "\n");
}

// ---- generate --------------------------------------------------------

int cmd_generate(const Context& ctx) {
    const auto& g = ctx.manifest.generate;
    GraphPool pool = ws_flex_sweep(g.n, g.degree_lo, g.degree_hi, g.degree_steps, g.p_steps,
                                   g.seeds_per_cell, derive_seed(ctx.manifest.seed, "generate"));
    if (g.augment_rounds > 0) {
        pool = heterogeneity_augment(pool, g.augment_rounds, g.augment_rewires,
                                     derive_seed(ctx.manifest.seed, "augment"));
    }
    write_pool(ctx.out / "pool", pool);
    write_run_record(ctx, "generate");

    double het_lo = std::numeric_limits<double>::infinity(), het_hi = 0.0;
    for (const PoolEntry& e : pool.entries) {
        const double h = degree_statistics(e.graph).heterogeneity;
        het_lo = std::min(het_lo, h);
        het_hi = std::max(het_hi, h);
    }
    std::cout << "pool: " << pool.size() << " graphs, heterogeneity range ["
              << format_double(het_lo) << ", " << format_double(het_hi) << "]\n";
    return kExitOk;
}

// ---- featurize -------------------------------------------------------

std::map<std::string, double> read_target_csv(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open targets file " + path.string());
    std::map<std::string, double> targets;
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream is(line);
        std::string id, value;
        std::getline(is, id, ',');
        std::getline(is, value, ',');
        targets[id] = std::stod(value);
    }
    return targets;
}

int cmd_featurize(const Context& ctx, const std::string& pool_dir,
                  const std::string& targets_path, const std::string& out_file) {
    const GraphPool pool = read_pool(pool_dir.empty() ? ctx.out / "pool" : fs::path(pool_dir));
    std::map<std::string, double> targets;
    if (!targets_path.empty()) targets = read_target_csv(targets_path);

    const std::uint64_t feat_seed = derive_seed(ctx.manifest.seed, "featurize");
    std::vector<std::optional<FeatureTableRow>> slots(pool.size());
    parallel_for(pool.size(), ctx.workers, [&](int i) {
        const PoolEntry& e = pool.entries[i];
        if (!is_connected(e.graph)) return;  // logged below, keeps slot empty
        const auto t0 = std::chrono::steady_clock::now();
        FeatureVector fv = featurize(e.graph, derive_seed(feat_seed, e.id));
        const double ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        slots[i] = FeatureTableRow{std::to_string(e.id), fv, std::nullopt, ms};
    });

    std::vector<FeatureTableRow> rows;
    for (int i = 0; i < pool.size(); ++i) {
        if (!slots[i]) {
            std::cerr << "skipping disconnected graph id " << pool.entries[i].id << "\n";
            continue;
        }
        FeatureTableRow row = std::move(*slots[i]);
        if (!targets.empty()) {
            auto it = targets.find(row.graph_id);
            if (it == targets.end()) {
                throw std::invalid_argument("no target for graph_id " + row.graph_id);
            }
            row.target = it->second;
        }
        rows.push_back(std::move(row));
    }

    const fs::path out = out_file.empty() ? ctx.out / "features.csv" : fs::path(out_file);
    write_feature_table(out, rows);
    write_run_record(ctx, "featurize");
    std::cout << "featurized " << rows.size() << " graphs -> " << out.string() << "\n";
    return kExitOk;
}

// ---- fit / sfs -------------------------------------------------------

Dataset dataset_from_table(const Context& ctx, const std::string& features_path) {
    const auto table = read_feature_table(features_path);
    std::vector<DatasetRow> rows;
    for (const FeatureTableRow& r : table) {
        if (!r.target) {
            throw std::invalid_argument("feature table has no top1_error column (" +
                                        features_path + ")");
        }
        rows.push_back({r.graph_id, r.features, *r.target});
    }
    if (rows.empty()) throw std::invalid_argument("feature table is empty");
    return Dataset::with_random_split(std::move(rows), derive_seed(ctx.manifest.seed, "split"),
                                      ctx.manifest.split.test_fraction);
}

int cmd_fit(const Context& ctx, const std::string& features_path,
            const std::vector<std::string>& subset, const std::string& out_file) {
    Dataset data = dataset_from_table(ctx, features_path);
    std::vector<std::string> names = subset;
    if (names.empty()) {
        names.assign(feature_names().begin(), feature_names().end());
    }
    RegressionModel model = fit_ols(data, names);
    const Evaluation ev = evaluate(model, data);
    model.test_mse = ev.mse;
    model.test_pearson = ev.pearson_r;

    const fs::path out = out_file.empty() ? ctx.out / "model.json" : fs::path(out_file);
    save_model(out, model);
    write_run_record(ctx, "fit");
    std::cout << "fit " << names.size() << " features: test_mse=" << format_double(ev.mse)
              << " test_pearson=" << format_double(ev.pearson_r) << "\n";
    return kExitOk;
}

void write_similarity_csv(const fs::path& path, const std::vector<std::vector<double>>& sim) {
    std::ostringstream os;
    os << "feature";
    for (const std::string& name : feature_names()) os << ',' << name;
    os << '\n';
    for (int i = 0; i < static_cast<int>(sim.size()); ++i) {
        os << feature_names()[i];
        for (double v : sim[i]) os << ',' << format_double(v);
        os << '\n';
    }
    write_file_atomic(path, os.str());
}

int cmd_sfs(const Context& ctx, const std::string& features_path, const std::string& fixed_first,
            bool sweep, int k_override) {
    Dataset data = dataset_from_table(ctx, features_path);
    const std::vector<std::string> candidates(feature_names().begin(), feature_names().end());
    const int k = k_override > 0 ? k_override : ctx.manifest.sfs.subset_size;

    auto save_best = [&](const SfsTrace& trace, const fs::path& model_path) {
        const int at = std::min<int>(k, static_cast<int>(trace.steps.size()));
        save_model(model_path, trace.steps[at - 1].model);
    };

    if (sweep) {
        std::vector<SfsTrace> traces(kFeatureCount);
        // Parallelism lives inside each sfs call; traces run serially so
        // memory stays bounded.
        for (int i = 0; i < kFeatureCount; ++i) {
            traces[i] = sfs_fixed_first(data, candidates[i], candidates, ctx.workers);
            write_sfs_trace_csv(ctx.out / ("sfs_first_" + candidates[i] + ".csv"), traces[i]);
        }
        const auto sim = feature_set_similarity(traces, k);
        write_similarity_csv(ctx.out / "similarity.csv", sim);
        std::cout << "sweep: " << kFeatureCount << " fixed-first traces, similarity at k=" << k
                  << "\n";
    } else if (!fixed_first.empty()) {
        SfsTrace trace = sfs_fixed_first(data, fixed_first, candidates, ctx.workers);
        write_sfs_trace_csv(ctx.out / ("sfs_first_" + fixed_first + ".csv"), trace);
        save_best(trace, ctx.out / "model.json");
        std::cout << "sfs fixed-first " << fixed_first << ": final test_mse="
                  << format_double(trace.steps.back().test_mse) << "\n";
    } else {
        SfsTrace trace = sfs(data, candidates, ctx.workers);
        write_sfs_trace_csv(ctx.out / "sfs_trace.csv", trace);
        save_best(trace, ctx.out / "model.json");
        std::cout << "sfs: first feature " << trace.steps.front().feature
                  << ", final test_mse=" << format_double(trace.steps.back().test_mse) << "\n";
    }
    write_run_record(ctx, "sfs");
    return kExitOk;
}

// ---- search ----------------------------------------------------------

ToyDataset make_trainer_dataset(const ExperimentManifest::TrainerCfg& t, std::uint64_t seed) {
    if (t.dataset == "rings") {
        return make_rings(t.samples, t.output_dim, t.input_dim, t.spread, seed);
    }
    return make_blobs(t.samples, t.output_dim, t.input_dim, t.separation, t.spread, seed);
}

MeasureCallback make_toy_validator(const ExperimentManifest& manifest, int n_nodes) {
    const auto& t = manifest.trainer;
    if (t.baseline_width % n_nodes != 0) {
        throw std::invalid_argument("trainer.baseline_width must be divisible by the start "
                                    "graph's node count");
    }
    auto dataset = std::make_shared<ToyDataset>(
        make_trainer_dataset(t, derive_seed(manifest.seed, "data")));
    const FlopBudget reference = count_flops(build_masked_mlp(
        generate(GeneratorSpec::complete(n_nodes)), t.baseline_width, t.n_layers, t.input_dim,
        t.output_dim));
    TrainSchedule schedule;
    schedule.epochs = t.epochs;
    schedule.batch_size = t.batch_size;
    schedule.learning_rate = t.learning_rate;
    schedule.weight_decay = t.weight_decay;
    schedule.momentum = t.momentum;
    schedule.seed = derive_seed(manifest.seed, "training");

    const int n_layers = t.n_layers, in = t.input_dim, out = t.output_dim;
    return [=](const Graph& g) {
        const MaskedMlpSpec spec = match_flop_budget(g, reference, n_layers, in, out);
        return train_toy(spec, *dataset, schedule).top1_error;
    };
}

void write_path_csv(const fs::path& path, const SearchTrace& trace) {
    const bool measured = trace.initial_measured.has_value();
    std::ostringstream os;
    os << "step,predicted" << (measured ? ",measured" : "") << "\n";
    os << 0 << ',' << format_double(trace.initial_predicted);
    if (measured) os << ',' << format_double(*trace.initial_measured);
    os << '\n';
    for (const SearchStep& s : trace.steps) {
        os << s.step << ',' << format_double(s.predicted);
        if (measured) os << ',' << format_double(s.measured.value_or(std::nan("")));
        os << '\n';
    }
    write_file_atomic(path, os.str());
}

void write_cost_csv(const fs::path& path, const SearchTrace& trace) {
    std::ostringstream os;
    os << "step,cumulative_feature_time_ms,rejected_count\n";
    for (const SearchStep& s : trace.steps) {
        os << s.step << ',' << format_double(s.cumulative_feature_ms) << ',' << s.rejected_before
           << '\n';
    }
    write_file_atomic(path, os.str());
}

void write_buckets_csv(const fs::path& path, const std::vector<BucketSummary>& buckets) {
    std::ostringstream os;
    os << "step_lo,step_hi,count,predicted_q1,predicted_median,predicted_q3"
          ",measured_q1,measured_median,measured_q3\n";
    for (const BucketSummary& b : buckets) {
        os << b.step_lo << ',' << b.step_hi << ',' << b.count << ','
           << format_double(b.predicted_q1) << ',' << format_double(b.predicted_median) << ','
           << format_double(b.predicted_q3) << ','
           << (b.measured_q1 ? format_double(*b.measured_q1) : "") << ','
           << (b.measured_median ? format_double(*b.measured_median) : "") << ','
           << (b.measured_q3 ? format_double(*b.measured_q3) : "") << '\n';
    }
    write_file_atomic(path, os.str());
}

int cmd_search(const Context& ctx, const std::string& model_path, const std::string& start_path,
               const std::string& validate, int seeds_override) {
    const RegressionModel model = load_model(model_path);
    const Graph g0 = read_edge_list(start_path);

    SearchConfig config;
    config.epsilon = ctx.manifest.search.epsilon;
    config.max_steps = ctx.manifest.search.max_steps;
    config.max_proposals_per_step = ctx.manifest.search.max_proposals;
    config.mode = ctx.manifest.search.mode == "MAXIMIZE" ? SearchMode::Maximize
                                                         : SearchMode::Minimize;
    config.seed = derive_seed(ctx.manifest.seed, "search");

    MeasureCallback validator;
    if (validate == "toy") {
        validator = make_toy_validator(ctx.manifest, g0.node_count());
    } else if (!validate.empty()) {
        throw std::invalid_argument("unknown --validate mode: " + validate);
    }

    const int seeds = seeds_override > 0 ? seeds_override : ctx.manifest.search.seeds;
    write_run_record(ctx, "search");

    if (seeds > 1) {
        const auto buckets = multi_seed_statistics(g0, model, config, seeds,
                                                   ctx.manifest.search.bucket, validator,
                                                   ctx.workers);
        write_buckets_csv(ctx.out / "buckets.csv", buckets);
        std::cout << "multi-seed: " << seeds << " runs, " << buckets.size()
                  << " non-empty buckets\n";
        return buckets.empty() ? kExitConvergedLocal : kExitOk;
    }

    SearchTrace trace = search(g0, model, config);
    trace.initial_id = fs::path(start_path).stem().string();
    if (validator) trace = validate_trace(trace, validator);
    write_search_trace(ctx.out / "trace.jsonl", trace);
    write_path_csv(ctx.out / "path.csv", trace);
    write_cost_csv(ctx.out / "cost.csv", trace);
    write_edge_list(ctx.out / "final.edges", trace.final_graph());

    std::cout << "search: " << trace.steps.size() << " accepted steps, status "
              << (trace.status == SearchStatus::Completed ? "COMPLETED" : "CONVERGED_LOCAL")
              << "\n";
    return trace.status == SearchStatus::Completed ? kExitOk : kExitConvergedLocal;
}

// ---- train-toy -------------------------------------------------------

int cmd_train_toy(const Context& ctx, const std::string& graph_path,
                  const std::string& pool_dir, const std::string& out_file) {
    const auto& t = ctx.manifest.trainer;
    write_run_record(ctx, "train-toy");

    if (!graph_path.empty()) {
        const Graph g = read_edge_list(graph_path);
        const MaskedMlpSpec spec =
            build_masked_mlp(g, t.baseline_width, t.n_layers, t.input_dim, t.output_dim);
        const ToyDataset data = make_trainer_dataset(t, derive_seed(ctx.manifest.seed, "data"));
        TrainSchedule schedule;
        schedule.epochs = t.epochs;
        schedule.batch_size = t.batch_size;
        schedule.learning_rate = t.learning_rate;
        schedule.weight_decay = t.weight_decay;
        schedule.momentum = t.momentum;
        schedule.seed = derive_seed(ctx.manifest.seed, "training");

        const TrainResult result = train_toy(spec, data, schedule);
        write_epoch_csv(ctx.out / "epochs.csv", result.epochs);
        save_mlp(ctx.out / "mlp.json", spec, result.params);
        std::cout << "top1_error " << format_double(result.top1_error) << "\n";
        return kExitOk;
    }

    if (pool_dir.empty()) {
        throw std::invalid_argument("train-toy: pass --graph <file> or --pool <dir>");
    }
    const GraphPool pool = read_pool(pool_dir);
    const MeasureCallback validator =
        make_toy_validator(ctx.manifest, pool.entries.front().graph.node_count());

    std::vector<double> errors(pool.size());
    parallel_for(pool.size(), ctx.workers, [&](int i) {
        errors[i] = validator(pool.entries[i].graph);
    });

    std::ostringstream os;
    os << "graph_id,top1_error\n";
    for (int i = 0; i < pool.size(); ++i) {
        os << pool.entries[i].id << ',' << format_double(errors[i]) << '\n';
    }
    const fs::path out = out_file.empty() ? ctx.out / "targets.csv" : fs::path(out_file);
    write_file_atomic(out, os.str());
    std::cout << "trained " << pool.size() << " models -> " << out.string() << "\n";
    return kExitOk;
}

// ---- export-plots ----------------------------------------------------

int cmd_export_plots(const Context& ctx, const std::string& features_path,
                     const std::string& artifacts_dir) {
    const fs::path artifacts = artifacts_dir.empty() ? ctx.out : fs::path(artifacts_dir);
    const fs::path out = ctx.out / "plots";
    fs::create_directories(out);

    int emitted = 0;
    if (!features_path.empty() && fs::exists(features_path)) {
        const auto table = read_feature_table(features_path);
        const bool has_targets =
            !table.empty() && std::all_of(table.begin(), table.end(),
                                          [](const auto& r) { return r.target.has_value(); });
        if (has_targets) {
            for (int f = 0; f < kFeatureCount; ++f) {
                std::ostringstream os;
                os << "graph_id," << feature_names()[f] << ",top1_error\n";
                for (const FeatureTableRow& r : table) {
                    os << r.graph_id << ',' << format_double(r.features.at(f)) << ','
                       << format_double(*r.target) << '\n';
                }
                write_file_atomic(out / ("scatter_" + feature_names()[f] + ".csv"), os.str());
                ++emitted;
            }
        }
    }

    if (fs::exists(artifacts)) {
        std::vector<fs::path> entries;
        for (const auto& entry : fs::directory_iterator(artifacts)) {
            entries.push_back(entry.path());
        }
        std::sort(entries.begin(), entries.end());
        for (const fs::path& p : entries) {
            const std::string name = p.filename().string();
            const bool curve = name.rfind("sfs_", 0) == 0 && p.extension() == ".csv";
            const bool matrix = name == "similarity.csv" || name == "buckets.csv" ||
                                name == "path.csv" || name == "cost.csv";
            if (curve || matrix) {
                fs::copy_file(p, out / name, fs::copy_options::overwrite_existing);
                ++emitted;
            }
        }
    }

    write_run_record(ctx, "export-plots");
    std::cout << "exported " << emitted << " plot files -> " << out.string() << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"relnas: graph-space neural architecture search toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions opts;
    app.add_option("--manifest", opts.manifest_path, "experiment manifest (JSON)")
        ->envname("RELNAS_MANIFEST");
    auto* seed_opt =
        app.add_option("--seed", opts.seed, "override manifest seed")->envname("RELNAS_SEED");
    app.add_option("--workers", opts.workers, "worker threads (default: hardware)")
        ->envname("RELNAS_WORKERS");
    app.add_option("--out", opts.out_dir, "output directory")->envname("RELNAS_OUT");

    auto* generate = app.add_subcommand("generate", "generate a WS-flex graph pool");

    std::string pool_dir, targets_path, out_file;
    auto* featurize_cmd = app.add_subcommand("featurize", "compute the 26-feature table");
    featurize_cmd->add_option("--pool", pool_dir, "pool directory");
    featurize_cmd->add_option("--targets", targets_path, "CSV with graph_id,top1_error");
    featurize_cmd->add_option("--out-file", out_file, "output CSV path");

    std::string features_path;
    std::vector<std::string> subset;
    auto* fit = app.add_subcommand("fit", "fit the linear surrogate");
    fit->add_option("--features", features_path, "feature table CSV with targets")->required();
    fit->add_option("--subset", subset, "comma-separated feature names")->delimiter(',');
    fit->add_option("--out-file", out_file, "model JSON path");

    std::string fixed_first;
    bool sweep = false;
    int k_override = 0;
    auto* sfs_cmd = app.add_subcommand("sfs", "sequential forward selection");
    sfs_cmd->add_option("--features", features_path, "feature table CSV with targets")
        ->required();
    sfs_cmd->add_option("--fixed-first", fixed_first, "force the first feature");
    sfs_cmd->add_flag("--sweep", sweep, "run all 26 fixed-first traces + similarity matrix");
    sfs_cmd->add_option("--k", k_override, "subset size for the saved model / similarity");

    std::string model_path, start_path, validate;
    int seeds_override = 0;
    auto* search_cmd = app.add_subcommand("search", "greedy surrogate-guided rewiring");
    search_cmd->add_option("--model", model_path, "surrogate model JSON")->required();
    search_cmd->add_option("--start", start_path, "start graph edge list")->required();
    search_cmd->add_option("--validate", validate, "measure accepted steps ('toy')");
    search_cmd->add_option("--seeds", seeds_override, "run N seeds and emit bucket stats");

    std::string graph_path;
    auto* train_cmd = app.add_subcommand("train-toy", "train masked MLPs on synthetic data");
    train_cmd->add_option("--graph", graph_path, "single graph edge list");
    train_cmd->add_option("--pool", pool_dir, "train one model per pool graph");
    train_cmd->add_option("--out-file", out_file, "targets CSV path (pool mode)");

    std::string artifacts_dir;
    auto* export_cmd = app.add_subcommand("export-plots", "emit per-figure CSV bundle");
    export_cmd->add_option("--features", features_path, "feature table CSV");
    export_cmd->add_option("--artifacts", artifacts_dir, "artifact directory to bundle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidInput;
    }

    try {
        opts.seed_set = seed_opt->count() > 0 || std::getenv("RELNAS_SEED") != nullptr;
        const Context ctx = make_context(opts);
        if (generate->parsed()) return cmd_generate(ctx);
        if (featurize_cmd->parsed()) return cmd_featurize(ctx, pool_dir, targets_path, out_file);
        if (fit->parsed()) return cmd_fit(ctx, features_path, subset, out_file);
        if (sfs_cmd->parsed()) return cmd_sfs(ctx, features_path, fixed_first, sweep, k_override);
        if (search_cmd->parsed()) {
            return cmd_search(ctx, model_path, start_path, validate, seeds_override);
        }
        if (train_cmd->parsed()) return cmd_train_toy(ctx, graph_path, pool_dir, out_file);
        if (export_cmd->parsed()) return cmd_export_plots(ctx, features_path, artifacts_dir);
        return kExitInvalidInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidInput;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}
