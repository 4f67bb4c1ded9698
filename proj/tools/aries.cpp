// Command-line front end: synth, profile, evaluate-baselines, build-store,
// recommend, evaluate, table.

#include "aries/aries.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace aries;

namespace {

/// Output stream that refuses to clobber an existing file without --force.
/// "-" writes to stdout.
class Output {
public:
    Output(const std::string& path, bool force) : path_(path) {
        if (path == "-") {
            return;
        }
        if (fs::exists(path) && !force) {
            throw Error(ErrorCode::Io, "'" + path + "' exists; pass --force to overwrite");
        }
        if (const auto parent = fs::path(path).parent_path(); !parent.empty()) {
            fs::create_directories(parent);
        }
        file_.open(path, std::ios::binary);
        if (!file_) {
            throw Error(ErrorCode::Io, "cannot write '" + path + "'");
        }
    }

    std::ostream& stream() { return path_ == "-" ? std::cout : file_; }

private:
    std::string path_;
    std::ofstream file_;
};

io::CsvLayout parse_layout(const std::string& s) {
    return s == "long" ? io::CsvLayout::Long : io::CsvLayout::Wide;
}

struct SplitFlags {
    double train = 0.7;
    double val = 0.1;
    double test = 0.2;
    std::size_t history = 336;
    std::size_t horizon = 336;
    std::size_t stride = 1;

    void add(CLI::App* app, bool with_stride) {
        app->add_option("--history", history, "History length")->capture_default_str();
        app->add_option("--horizon", horizon, "Forecast horizon")->capture_default_str();
        app->add_option("--train-ratio", train, "Training fraction")->capture_default_str();
        app->add_option("--val-ratio", val, "Validation fraction")->capture_default_str();
        app->add_option("--test-ratio", test, "Test fraction")->capture_default_str();
        if (with_stride) {
            app->add_option("--stride", stride, "Step between evaluation windows")->capture_default_str();
        }
    }

    SplitSpec spec() const {
        SplitSpec s{train, val, test, history, horizon, stride};
        s.validate();
        return s;
    }
};

nlohmann::json split_json(const SplitSpec& s) {
    return {{"train_ratio", s.train_ratio}, {"val_ratio", s.val_ratio}, {"test_ratio", s.test_ratio},
            {"history_len", s.history_len}, {"horizon", s.horizon}};
}

/// Fingerprint of everything that shapes a profile: property settings and
/// the segment that was profiled.
std::string profile_hash(const props::ProfileConfig& cfg, const std::optional<SplitSpec>& seg) {
    nlohmann::json j{{"profile", cfg.to_json()}, {"segment", seg ? split_json(*seg) : nlohmann::json("full")}};
    return io::fnv1a_hex(j.dump());
}

std::vector<std::size_t> parse_ks(const std::string& text) {
    std::vector<std::size_t> ks;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto v = io::parse_double(item);
        if (!v || *v < 1 || *v != static_cast<double>(static_cast<std::size_t>(*v))) {
            throw Error(ErrorCode::InvalidArgument, "invalid k '" + item + "'");
        }
        ks.push_back(static_cast<std::size_t>(*v));
    }
    if (ks.empty()) {
        throw Error(ErrorCode::InvalidArgument, "--k needs at least one value");
    }
    return ks;
}

/// Reads a ranked model list from a report JSON, a performance log CSV
/// (ranked by mean MAE) or a plain list with one model per line.
std::vector<std::string> read_ranking(const std::string& path) {
    auto in = io::open_input(path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (fs::path(path).extension() == ".json") {
        const auto j = nlohmann::json::parse(text);
        std::vector<std::string> out;
        for (const auto& m : j.at("ranked_models")) {
            out.push_back(m.at("model").get<std::string>());
        }
        return out;
    }
    if (text.rfind(store::kLogHeader, 0) == 0) {
        std::istringstream s(text);
        return recommend::model_names(recommend::rank_log(store::read_perf_log(s)));
    }
    std::vector<std::string> out;
    std::istringstream s(text);
    std::string line;
    while (std::getline(s, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            out.push_back(line);
        }
    }
    return out;
}

std::string text_report_path(const std::string& json_path) {
    fs::path p(json_path);
    p.replace_extension(".txt");
    return p.string();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-series property profiling, synthesis and model recommendation"};
    app.require_subcommand(1);
    std::size_t threads = default_thread_count();
    bool force = false;
    app.add_option("--threads", threads, "Worker threads (output does not depend on it)")->check(CLI::PositiveNumber);
    app.add_flag("--force", force, "Overwrite existing outputs");

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Sample series from random GP kernel compositions");
    synth::SynthConfig synth_cfg;
    std::string synth_out;
    std::string synth_prov;
    std::vector<std::string> synth_families;
    bool no_matern = false;
    synth_cmd->add_option("--n", synth_cfg.n_series, "Number of series")->capture_default_str();
    synth_cmd->add_option("--length", synth_cfg.length, "Series length")->capture_default_str();
    synth_cmd->add_option("--seed", synth_cfg.seed, "Master seed")->required();
    synth_cmd->add_option("--jitter", synth_cfg.jitter, "Initial diagonal jitter")->capture_default_str();
    synth_cmd->add_option("--max-kernels", synth_cfg.max_leaves, "Upper bound J on kernels per composite")
        ->capture_default_str();
    synth_cmd->add_option("--families", synth_families, "Restrict the kernel bank (e.g. RBF,DotProduct)")
        ->delimiter(',');
    synth_cmd->add_flag("--no-matern", no_matern, "Leave Matern kernels out of the bank");
    synth_cmd->add_option("--out", synth_out, "Series output (.csv wide or .jsonl)")->required();
    synth_cmd->add_option("--provenance-out", synth_prov, "Kernel provenance JSONL");

    // profile
    auto* profile_cmd = app.add_subcommand("profile", "Compute the property profile of every series");
    std::string profile_data;
    std::string profile_out;
    std::string profile_layout = "wide";
    bool profile_full = false;
    SplitFlags profile_split;
    profile_cmd->add_option("--data", profile_data, "Series file (.csv or .jsonl)")->required();
    profile_cmd->add_option("--out", profile_out, "Profiles JSONL")->required();
    profile_cmd->add_option("--layout", profile_layout, "CSV layout")->check(CLI::IsMember({"wide", "long"}));
    profile_cmd->add_flag("--full", profile_full, "Profile whole series instead of the pre-test history");
    profile_split.add(profile_cmd, false);

    // evaluate-baselines
    auto* evalb_cmd = app.add_subcommand("evaluate-baselines", "Score local forecasters on each series");
    std::string evalb_data;
    std::string evalb_out;
    std::string evalb_layout = "wide";
    std::vector<std::string> evalb_models = {"hi", "naive", "snaive", "ar", "linear"};
    baselines::ModelOptions model_opts;
    SplitFlags evalb_split;
    evalb_cmd->add_option("--data", evalb_data, "Series file")->required();
    evalb_cmd->add_option("--out", evalb_out, "Performance log CSV")->required();
    evalb_cmd->add_option("--layout", evalb_layout, "CSV layout")->check(CLI::IsMember({"wide", "long"}));
    evalb_cmd->add_option("--models", evalb_models, "Models: hi,naive,snaive,ar,linear")->delimiter(',');
    evalb_cmd->add_option("--ar-order", model_opts.ar_order, "AR order")->capture_default_str();
    evalb_cmd->add_option("--window", model_opts.linear_window, "Linear lookback (0 = history)")
        ->capture_default_str();
    evalb_cmd->add_option("--ridge", model_opts.ridge, "Linear ridge penalty")->capture_default_str();
    evalb_split.add(evalb_cmd, true);

    // build-store
    auto* build_cmd = app.add_subcommand("build-store", "Index a performance log by binned profiles");
    std::string build_profiles;
    std::string build_log;
    std::string build_out;
    build_cmd->add_option("--profiles", build_profiles, "Profiles JSONL")->required();
    build_cmd->add_option("--log", build_log, "Performance log CSV")->required();
    build_cmd->add_option("--out", build_out, "Store JSON")->required();

    // recommend
    auto* rec_cmd = app.add_subcommand("recommend", "Recommend models for a dataset");
    std::string rec_store;
    std::string rec_data;
    std::string rec_layout = "wide";
    std::string rec_report;
    std::string rec_truth;
    std::string rec_map;
    std::string rec_ks = "3,5,7,10";
    double tau = 1.0;
    std::uint64_t rec_seed = 0;
    bool rec_full = false;
    SplitFlags rec_split;
    rec_cmd->add_option("--store", rec_store, "Store JSON")->required();
    rec_cmd->add_option("--data", rec_data, "Query series file")->required();
    rec_cmd->add_option("--layout", rec_layout, "CSV layout")->check(CLI::IsMember({"wide", "long"}));
    rec_cmd->add_option("--tau", tau, "Sampling rate in (0, 1]")->capture_default_str();
    rec_cmd->add_option("--seed", rec_seed, "Sampling seed")->required();
    rec_cmd->add_option("--report-out", rec_report, "Report JSON (text goes next to it as .txt)");
    rec_cmd->add_option("--truth", rec_truth, "Performance log of the query series, for validation");
    rec_cmd->add_option("--k", rec_ks, "Cutoffs for validation metrics")->capture_default_str();
    rec_cmd->add_option("--strategy-map", rec_map, "Strategy map JSON (default: built in)");
    rec_cmd->add_flag("--full", rec_full, "Profile whole series instead of the pre-test history");
    rec_split.add(rec_cmd, false);

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Hit Ratio@k and NDCG@k of a ranking against the truth");
    std::string eval_rec;
    std::string eval_truth;
    std::string eval_ks = "3,5,7,10";
    std::string eval_out = "-";
    eval_cmd->add_option("--recommended", eval_rec, "Report JSON, performance log, or one model per line")
        ->required();
    eval_cmd->add_option("--truth", eval_truth, "Report JSON, performance log, or one model per line")->required();
    eval_cmd->add_option("--k", eval_ks, "Cutoffs")->capture_default_str();
    eval_cmd->add_option("--out", eval_out, "Metrics JSON (default stdout)");

    // table
    auto* table_cmd = app.add_subcommand("table", "Mean/median MAE and MSE per property bin");
    std::string table_profiles;
    std::string table_log;
    std::string table_store;
    std::string table_property = "trend";
    std::string table_format = "csv";
    std::string table_out = "-";
    table_cmd->add_option("--profiles", table_profiles, "Profiles JSONL (with --log)");
    table_cmd->add_option("--log", table_log, "Performance log CSV (with --profiles)");
    table_cmd->add_option("--store", table_store, "Store JSON (instead of --profiles/--log)");
    table_cmd->add_option("--property", table_property, "Property to bin by")
        ->check(CLI::IsMember({"stationarity", "trend", "season_strength", "season_count", "volatility", "memory",
                               "scedasticity", "anomaly"}));
    table_cmd->add_option("--format", table_format, "Output format")->check(CLI::IsMember({"csv", "md"}));
    table_cmd->add_option("--out", table_out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        std::cout << (subs.empty() ? app.help() : subs.back()->help());
        return 0;
    } catch (const CLI::Success&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        const auto subs = app.get_subcommands();
        std::cerr << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.back()->help());
        return 2;
    }

    try {
        if (*synth_cmd) {
            synth_cfg.matern_mix = !no_matern;
            for (const auto& f : synth_families) {
                synth_cfg.families.push_back(synth::parse_family(f));
            }
            const auto ds = synth::generate_dataset(synth_cfg, threads);
            Output out(synth_out, force);
            if (io::has_jsonl_extension(synth_out)) {
                io::write_jsonl(out.stream(), ds.series);
            } else {
                io::write_csv_wide(out.stream(), ds.series);
            }
            if (!synth_prov.empty()) {
                Output prov(synth_prov, force);
                synth::write_provenance_jsonl(prov.stream(), ds.provenance);
            }
        } else if (*profile_cmd) {
            const auto set = io::load_series(profile_data, parse_layout(profile_layout));
            props::ProfileConfig cfg;
            props::SegmentSelector seg;
            if (!profile_full) {
                seg.history = profile_split.spec();
            }
            const auto batch = props::profile_set(set, cfg, seg, threads);
            for (const auto& [id, msg] : batch.skipped) {
                std::cerr << "skipped " << id << ": " << msg << '\n';
            }
            Output out(profile_out, force);
            props::write_profiles_jsonl(out.stream(), batch.profiles, profile_hash(cfg, seg.history));
            std::cerr << batch.profiles.size() << " profiled, " << batch.skipped.size() << " skipped\n";
        } else if (*evalb_cmd) {
            const auto set = io::load_series(evalb_data, parse_layout(evalb_layout));
            std::vector<baselines::ModelKind> kinds;
            for (const auto& m : evalb_models) {
                kinds.push_back(baselines::parse_model_key(m));
            }
            const auto res = baselines::evaluate(kinds, set, evalb_split.spec(), model_opts, threads);
            for (const auto& s : res.skipped) {
                std::cerr << "skipped " << s.series_id << ": " << s.reason << '\n';
            }
            for (const auto& r : res.results) {
                if (r.fallback) {
                    std::cerr << "fallback " << r.series_id << ' ' << r.model << '\n';
                }
            }
            Output out(evalb_out, force);
            store::write_perf_log(out.stream(), baselines::to_perf_log(res.results));
            std::cerr << res.results.size() << " rows, " << res.skipped.size() << " series skipped, "
                      << res.fallback_count() << " fallbacks\n";
        } else if (*build_cmd) {
            auto in = io::open_input(build_profiles);
            std::string hash;
            const auto profiles = props::read_profiles_jsonl(in, &hash);
            const auto log = store::read_perf_log(fs::path(build_log));
            const auto st = store::build_store(profiles, log, hash);
            Output out(build_out, force);
            out.stream() << store::to_json(st).dump(1) << '\n';
            std::cerr << st.index.size() << " keys, " << st.bag_count() << " bags, " << st.excluded_stationary
                      << " stationary series excluded\n";
        } else if (*rec_cmd) {
            const auto st = store::load_store(rec_store);
            const auto set = io::load_series(rec_data, parse_layout(rec_layout));
            recommend::RecommendInput in;
            if (!rec_full) {
                in.segment.history = rec_split.spec();
            }
            in.sampling = {tau, rec_seed, threads};
            const std::string hash = profile_hash(in.profile, in.segment.history);
            if (!st.config_hash.empty() && st.config_hash != hash) {
                std::cerr << "warning: store profiles used config " << st.config_hash << ", queries use " << hash
                          << '\n';
            }
            recommend::StrategyMap map = recommend::default_strategy_map();
            if (!rec_map.empty()) {
                auto min = io::open_input(rec_map);
                map = recommend::strategy_map_from_json(nlohmann::json::parse(min));
            }
            auto run = recommend::recommend(st, set, in, map);
            if (!rec_truth.empty()) {
                run.report.validation =
                    recommend::validate(run.report, store::read_perf_log(fs::path(rec_truth)), parse_ks(rec_ks));
            }
            recommend::write_report_text(std::cout, run.report);
            if (!rec_report.empty()) {
                Output json_out(rec_report, force);
                json_out.stream() << recommend::to_json(run.report).dump(1) << '\n';
                Output text_out(text_report_path(rec_report), force);
                recommend::write_report_text(text_out.stream(), run.report);
            }
        } else if (*eval_cmd) {
            const auto rec = read_ranking(eval_rec);
            const auto truth = read_ranking(eval_truth);
            nlohmann::json rows = nlohmann::json::array();
            for (std::size_t k : parse_ks(eval_ks)) {
                rows.push_back({{"k", k},
                                {"hit_ratio", recommend::hit_ratio_at_k(rec, truth, k)},
                                {"ndcg", recommend::ndcg_at_k(rec, truth, k)}});
            }
            Output out(eval_out, force || eval_out == "-");
            out.stream() << nlohmann::json{{"metrics", rows}}.dump(1) << '\n';
        } else if (*table_cmd) {
            const auto prop = store::parse_component(table_property);
            store::AggregateTable t;
            if (!table_store.empty()) {
                t = store::aggregate_table(store::load_store(table_store), prop);
            } else {
                if (table_profiles.empty() || table_log.empty()) {
                    std::cerr << "error: table needs --store or both --profiles and --log\n\n" << table_cmd->help();
                    return 2;
                }
                auto in = io::open_input(table_profiles);
                std::map<std::string, props::PropertyProfile> by_id;
                for (auto& p : props::read_profiles_jsonl(in)) {
                    by_id.emplace(p.id, std::move(p));
                }
                t = store::aggregate_table(by_id, store::read_perf_log(fs::path(table_log)), prop);
            }
            Output out(table_out, force || table_out == "-");
            if (table_format == "md") {
                store::write_table_markdown(out.stream(), t);
            } else {
                store::write_table_csv(out.stream(), t);
            }
        }
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
        return 1;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "error [ParseError]: " << e.what() << '\n';
        return 1;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error [Io]: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
