#include "placid/cli.hpp"

#include "placid/pipeline.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

namespace placid::cli {

namespace fs = std::filesystem;

void RunConfig::validate() const {
    if (inputs.empty()) throw InvalidArgument("no input files given");
    if (y_columns.empty()) throw InvalidArgument("y_columns must name at least one column");
    if (x_columns.empty()) throw InvalidArgument("x_columns must name at least one column");
    std::set<std::string> ys(y_columns.begin(), y_columns.end());
    std::set<std::string> xs(x_columns.begin(), x_columns.end());
    if (ys.size() != y_columns.size()) throw InvalidArgument("y_columns contains duplicates");
    if (xs.size() != x_columns.size()) throw InvalidArgument("x_columns contains duplicates");
    for (const auto& x : xs) {
        if (ys.count(x)) throw InvalidArgument("column '" + x + "' is listed as both X and Y");
    }
    if (x_kinds.size() != x_columns.size()) {
        throw InvalidArgument("x_kinds must provide one kind per X column");
    }
    if (alpha && !(*alpha > 0.0 && *alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
    if (gamma < 1) throw InvalidArgument("gamma must be at least 1");
    if (!(q_star > 0.0 && q_star < 1.0)) throw InvalidArgument("q_star must lie in (0, 1)");
    if (degree < 1) throw InvalidArgument("degree must be at least 1");
    if (max_basis_columns < 1) throw InvalidArgument("max_basis_columns must be at least 1");
}

Json to_json(const RunConfig& c) {
    Json j;
    j["inputs"] = c.inputs;
    j["y_columns"] = c.y_columns;
    j["x_columns"] = c.x_columns;
    Json kinds = Json::array();
    for (auto k : c.x_kinds) kinds.push_back(to_string(k));
    j["x_kinds"] = kinds;
    j["alpha"] = c.alpha ? Json(*c.alpha) : Json(nullptr);
    j["gamma"] = c.gamma;
    j["q_star"] = c.q_star;
    j["omega"] = to_string(c.omega);
    j["degree"] = c.degree;
    j["max_basis_columns"] = c.max_basis_columns;
    j["mean_augmentation"] = c.mean_augmentation;
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    return j;
}

RunConfig run_config_from_json(const Json& j, RunConfig c) {
    if (!j.is_object()) throw InvalidArgument("run config must be a JSON object");
    std::optional<Json> kinds;
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "inputs") c.inputs = v.get<std::vector<std::string>>();
            else if (key == "input") c.inputs = {v.get<std::string>()};
            else if (key == "y_columns") c.y_columns = v.get<std::vector<std::string>>();
            else if (key == "x_columns") c.x_columns = v.get<std::vector<std::string>>();
            else if (key == "x_kinds") kinds = v;
            else if (key == "alpha") c.alpha = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
            else if (key == "gamma") c.gamma = v.get<Index>();
            else if (key == "q_star") c.q_star = v.get<double>();
            else if (key == "omega") c.omega = omega_mode_from_string(v.get<std::string>());
            else if (key == "degree") c.degree = v.get<Index>();
            else if (key == "max_basis_columns") c.max_basis_columns = v.get<Index>();
            else if (key == "mean_augmentation") c.mean_augmentation = v.get<bool>();
            else if (key == "output_dir") c.output_dir = v.get<std::string>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else throw InvalidArgument("unknown run config key '" + key + "'");
        }
        if (kinds) {
            c.x_kinds.clear();
            if (kinds->is_string()) {
                c.x_kinds.assign(c.x_columns.size(), variable_kind_from_string(kinds->get<std::string>()));
            } else if (kinds->is_array()) {
                for (const auto& k : *kinds) c.x_kinds.push_back(variable_kind_from_string(k.get<std::string>()));
            } else if (kinds->is_object()) {
                for (const auto& name : c.x_columns) {
                    if (!kinds->contains(name)) {
                        throw InvalidArgument("x_kinds has no entry for column '" + name + "'");
                    }
                    c.x_kinds.push_back(variable_kind_from_string((*kinds)[name].get<std::string>()));
                }
                if (kinds->size() != c.x_columns.size()) {
                    throw InvalidArgument("x_kinds names a column that is not in x_columns");
                }
            } else {
                throw InvalidArgument("x_kinds must be a string, array or object");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("run config: ") + e.what());
    }
    return c;
}

Dataset load_dataset(const RunConfig& c) {
    c.validate();
    std::map<std::string, std::pair<const Table*, Index>> where;
    std::vector<Table> tables;
    tables.reserve(c.inputs.size());
    for (const auto& path : c.inputs) {
        tables.push_back(read_csv(path));
        if (tables.back().values.rows() != tables.front().values.rows()) {
            throw DataError(path + ": has " + std::to_string(tables.back().values.rows()) +
                            " rows but " + c.inputs.front() + " has " +
                            std::to_string(tables.front().values.rows()));
        }
    }
    for (Index t = 0; t < tables.size(); ++t) {
        for (Index k = 0; k < tables[t].header.size(); ++k) {
            const auto& name = tables[t].header[k];
            if (where.count(name)) throw DataError(c.inputs[t] + ": duplicate column '" + name + "'");
            where[name] = {&tables[t], k};
        }
    }
    auto pick = [&](const std::vector<std::string>& names, Matrix& out) {
        out.resize(tables.front().values.rows(), names.size());
        for (Index k = 0; k < names.size(); ++k) {
            auto it = where.find(names[k]);
            if (it == where.end()) throw DataError("column '" + names[k] + "' not found in the inputs");
            out.col(k) = it->second.first->values.col(it->second.second);
        }
    };
    Dataset d;
    pick(c.y_columns, d.Y);
    pick(c.x_columns, d.X);
    if (d.Y.rows() < 2) throw DataError("at least two data rows are required");
    for (Index k = 0; k < c.x_columns.size(); ++k) {
        for (Eigen::Index i = 0; i < d.X.rows(); ++i) {
            double v = d.X(i, k);
            bool bad = (c.x_kinds[k] == VariableKind::Binary && v != 0.0 && v != 1.0) ||
                       (c.x_kinds[k] == VariableKind::Polytomous && v != std::floor(v));
            if (bad) {
                throw DataError("column '" + c.x_columns[k] + "' is declared " +
                                to_string(c.x_kinds[k]) + " but data row " + std::to_string(i + 1) +
                                " holds " + format_double(v));
            }
        }
    }
    return d;
}

unsigned thread_count() {
    const char* v = std::getenv("PLACID_THREADS");
    if (!v || !*v) return 1;
    char* end = nullptr;
    long n = std::strtol(v, &end, 10);
    if (*end != '\0' || n < 1 || n > 1024) {
        throw InvalidArgument(std::string("PLACID_THREADS must be an integer in [1, 1024], got '") + v + "'");
    }
    return static_cast<unsigned>(n);
}

namespace {

struct Flags {
    std::string config_path;
    std::vector<std::string> data;
    std::vector<std::string> y_cols, x_cols;
    std::string x_kind;
    std::optional<double> alpha;
    std::optional<Index> gamma, degree, max_basis_columns;
    std::optional<double> q_star;
    std::string omega;
    bool no_mean_augmentation = false;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string arg_path;
    // simulation / benchmark
    std::string preset;
    std::optional<Index> reps, n;
    bool dump_replications = false;
};

std::vector<std::string> split_names(const std::vector<std::string>& in) {
    std::vector<std::string> out;
    for (const auto& s : in) {
        std::stringstream ss(s);
        std::string part;
        while (std::getline(ss, part, ',')) {
            if (!part.empty()) out.push_back(part);
        }
    }
    return out;
}

RunConfig resolve_run_config(const Flags& f) {
    RunConfig c;
    if (!f.config_path.empty()) c = run_config_from_json(read_json_file(f.config_path));
    if (!f.data.empty()) c.inputs = f.data;
    if (!f.y_cols.empty()) c.y_columns = split_names(f.y_cols);
    if (!f.x_cols.empty()) {
        c.x_columns = split_names(f.x_cols);
        if (f.x_kind.empty() && c.x_kinds.size() != c.x_columns.size()) c.x_kinds.clear();
    }
    if (!f.x_kind.empty()) c.x_kinds.assign(c.x_columns.size(), variable_kind_from_string(f.x_kind));
    if (c.x_kinds.empty()) c.x_kinds.assign(c.x_columns.size(), VariableKind::Continuous);
    if (f.alpha) c.alpha = f.alpha;
    if (f.gamma) c.gamma = *f.gamma;
    if (f.degree) c.degree = *f.degree;
    if (f.max_basis_columns) c.max_basis_columns = *f.max_basis_columns;
    if (f.q_star) c.q_star = *f.q_star;
    if (!f.omega.empty()) c.omega = omega_mode_from_string(f.omega);
    if (f.no_mean_augmentation) c.mean_augmentation = false;
    if (!f.out.empty()) c.output_dir = f.out;
    if (f.seed) c.seed = *f.seed;
    c.validate();
    return c;
}

SimConfig resolve_sim_config(const Flags& f) {
    if (!f.preset.empty() && !f.config_path.empty()) {
        throw InvalidArgument("give either --preset or --config, not both");
    }
    SimConfig c;
    if (!f.preset.empty()) c = preset(f.preset);
    if (!f.config_path.empty()) c = sim_config_from_json(read_json_file(f.config_path));
    if (f.reps) c.n_reps = *f.reps;
    if (f.n) c.n = *f.n;
    if (f.seed) c.seed = *f.seed;
    if (f.alpha) c.alpha = f.alpha;
    if (f.gamma) c.gamma = *f.gamma;
    if (f.degree) c.degree = *f.degree;
    if (f.q_star) c.q_star = *f.q_star;
    if (!f.omega.empty()) c.omega = omega_mode_from_string(f.omega);
    c.validate();
    return c;
}

EstimateOptions estimate_options(const RunConfig& c) {
    EstimateOptions o;
    o.moments.gamma = c.gamma;
    o.moments.kinds = c.x_kinds;
    o.moments.basis.degree = c.degree;
    o.moments.basis.max_columns = c.max_basis_columns;
    o.omega = c.omega;
    o.q_star = c.q_star;
    o.mean_augmentation = c.mean_augmentation;
    return o;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json artifact(const std::string& command, const Json& config, const Json& result) {
    Json j;
    j["format_version"] = format_version;
    j["command"] = command;
    j["config"] = config;
    j["result"] = result;
    return j;
}

std::string utc_now() {
    std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

class Writer {
public:
    Writer(std::string dir, std::string command, std::ostream& out,
           std::chrono::steady_clock::time_point start)
        : dir_(std::move(dir)), command_(std::move(command)), out_(out), start_(start) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create output directory '" + dir_ + "': " + ec.message());
    }

    void write(const std::string& name, const std::string& contents) {
        std::string path = (fs::path(dir_) / name).string();
        write_file(path, contents);
        files_.push_back(name);
        out_ << "wrote " << path << "\n";
    }

    // Timestamps and timing live here, apart from the reproducible artifacts.
    void finish(const std::vector<std::string>& warnings, unsigned threads) {
        Json m;
        m["format_version"] = format_version;
        m["command"] = command_;
        m["created_utc"] = utc_now();
        m["elapsed_seconds"] =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        m["threads"] = threads;
        m["files"] = files_;
        m["warnings"] = warnings;
        write("metadata.json", dump(m));
    }

private:
    std::string dir_;
    std::string command_;
    std::ostream& out_;
    std::chrono::steady_clock::time_point start_;
    std::vector<std::string> files_;
};

std::vector<std::string> prefixed(const std::string& prefix, Index count) {
    std::vector<std::string> names;
    for (Index i = 1; i <= count; ++i) names.push_back(prefix + std::to_string(i));
    return names;
}

void write_dcor(Writer& w, const Json& cfg, const RunConfig& rc, const DcorMatrices& dc) {
    w.write("dcor.json", dump(artifact("dcor", cfg, to_json(dc))));
    w.write("dcor_c.csv", matrix_to_csv(dc.c, rc.x_columns, rc.y_columns));
    w.write("dcor_r.csv", matrix_to_csv(dc.rejections.cast<double>(), rc.x_columns, rc.y_columns));
}

void write_peeling(Writer& w, const Json& cfg, const PeelingResult& pr) {
    w.write("arg.json", dump(artifact("discover", cfg, to_json(pr))));
    w.write("arg.dot", to_dot(pr.arg));
}

void write_estimate(Writer& w, const Json& cfg, const EstimationResult& er, Index p) {
    w.write("estimate.json", dump(artifact("estimate", cfg, to_json(er))));
    w.write("selected.dot", selected_to_dot(er, p));
}

void warn_all(std::ostream& err, const std::vector<std::string>& ws) {
    for (const auto& w : ws) err << "warning: " << w << "\n";
}

int cmd_dcor(const Flags& f, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig rc = resolve_run_config(f);
    Dataset d = load_dataset(rc);
    unsigned threads = thread_count();
    double alpha = rc.alpha ? *rc.alpha : default_alpha(d.Y.rows());
    DcorMatrices dc = independence_matrices(d.X, d.Y, alpha, threads);
    Writer w(rc.output_dir, "dcor", out, t0);
    write_dcor(w, to_json(rc), rc, dc);
    w.finish({}, threads);
    (void)err;
    return ok;
}

int cmd_discover(const Flags& f, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig rc = resolve_run_config(f);
    Dataset d = load_dataset(rc);
    unsigned threads = thread_count();
    double alpha = rc.alpha ? *rc.alpha : default_alpha(d.Y.rows());
    DcorMatrices dc = independence_matrices(d.X, d.Y, alpha, threads);
    PeelingResult pr = estimate_arg(dc);
    Writer w(rc.output_dir, "discover", out, t0);
    Json cfg = to_json(rc);
    write_dcor(w, cfg, rc, dc);
    write_peeling(w, cfg, pr);
    w.finish(pr.warnings, threads);
    warn_all(err, pr.warnings);
    return pr.stalled ? degenerate : ok;
}

int cmd_estimate(const Flags& f, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig rc = resolve_run_config(f);
    if (f.arg_path.empty()) throw InvalidArgument("estimate needs --arg");
    Json aj = read_json_file(f.arg_path);
    // Accept both a bare ARG and a discover artifact.
    AncestralGraph arg = arg_from_json(aj.contains("result") ? aj["result"] : aj);
    Dataset d = load_dataset(rc);
    if (arg.p != static_cast<Index>(d.Y.cols()) || arg.q != static_cast<Index>(d.X.cols())) {
        throw DataError("ARG dimensions (p=" + std::to_string(arg.p) + ", q=" + std::to_string(arg.q) +
                        ") do not match the selected columns (p=" + std::to_string(d.Y.cols()) +
                        ", q=" + std::to_string(d.X.cols()) + ")");
    }
    EstimationResult er = estimate(d.X, d.Y, arg, estimate_options(rc));
    Writer w(rc.output_dir, "estimate", out, t0);
    Json cfg = to_json(rc);
    cfg["arg"] = f.arg_path;
    write_estimate(w, cfg, er, arg.p);
    w.finish(er.warnings, 1);
    warn_all(err, er.warnings);
    return ok;
}

int cmd_pipeline(const Flags& f, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig rc = resolve_run_config(f);
    Dataset d = load_dataset(rc);
    unsigned threads = thread_count();
    PipelineOptions po;
    po.alpha = rc.alpha;
    po.threads = threads;
    po.estimate = estimate_options(rc);
    double alpha = rc.alpha ? *rc.alpha : default_alpha(d.Y.rows());
    DcorMatrices dc = independence_matrices(d.X, d.Y, alpha, threads);
    PeelingResult pr = estimate_arg(dc);
    Writer w(rc.output_dir, "pipeline", out, t0);
    Json cfg = to_json(rc);
    write_dcor(w, cfg, rc, dc);
    write_peeling(w, cfg, pr);
    EstimationResult er = estimate(d.X, d.Y, pr.arg, po.estimate);
    write_estimate(w, cfg, er, pr.arg.p);
    std::vector<std::string> warnings = pr.warnings;
    warnings.insert(warnings.end(), er.warnings.begin(), er.warnings.end());
    w.finish(warnings, threads);
    warn_all(err, warnings);
    return pr.stalled ? degenerate : ok;
}

int cmd_simulate(const Flags& f, std::ostream& out, std::ostream&) {
    const auto t0 = std::chrono::steady_clock::now();
    SimConfig sc = resolve_sim_config(f);
    Index rep = 0;
    std::mt19937_64 rng(stream_seed(sc.seed, rep));
    SimGraph g = gen_graph(sc, rng);
    SimDataset ds = gen_data(sc, g, rng);

    std::string dir = f.out.empty() ? "." : f.out;
    Writer w(dir, "simulate", out, t0);
    Json cfg = to_json(sc);
    cfg["replication"] = rep;

    auto xs = prefixed("X", sc.q), ys = prefixed("Y", sc.p);
    std::ostringstream csv;
    for (Index l = 0; l < sc.q; ++l) csv << (l ? "," : "") << xs[l];
    for (Index j = 0; j < sc.p; ++j) csv << "," << ys[j];
    csv << "\n";
    for (Index i = 0; i < sc.n; ++i) {
        for (Index l = 0; l < sc.q; ++l) csv << (l ? "," : "") << format_double(ds.X(i, l));
        for (Index j = 0; j < sc.p; ++j) csv << "," << format_double(ds.Y(i, j));
        csv << "\n";
    }
    w.write("data.csv", csv.str());

    Json truth = to_json(g.graph);
    truth["B"] = matrix_to_json(g.B);
    w.write("truth.json", dump(artifact("simulate", cfg, truth)));
    w.write("truth.dot", to_dot(g.graph, "truth"));

    RunConfig rc;
    rc.inputs = {(fs::path(dir) / "data.csv").string()};
    rc.y_columns = ys;
    rc.x_columns = xs;
    rc.x_kinds.assign(sc.q, sc.secondary_kind == SecondaryKind::Discrete ? VariableKind::Binary
                                                                          : VariableKind::Continuous);
    rc.alpha = sc.alpha;
    rc.gamma = sc.gamma;
    rc.q_star = sc.q_star;
    rc.omega = sc.omega;
    rc.degree = sc.degree;
    rc.output_dir = dir;
    rc.seed = sc.seed;
    w.write("run_config.json", dump(to_json(rc)));
    w.finish({}, 1);
    return ok;
}

int cmd_benchmark(const Flags& f, std::ostream& out, std::ostream& err) {
    const auto t0 = std::chrono::steady_clock::now();
    if (f.preset.empty() && f.config_path.empty()) {
        throw InvalidArgument("benchmark needs --preset or --config");
    }
    SimConfig sc = resolve_sim_config(f);
    unsigned threads = thread_count();
    BenchmarkSummary s = run_benchmark(sc, threads);
    std::string dir = f.out.empty() ? "." : f.out;
    Writer w(dir, "benchmark", out, t0);
    Json cfg = to_json(sc);
    if (!f.preset.empty()) cfg["preset"] = f.preset;
    w.write("summary.json", dump(artifact("benchmark", cfg, to_json(s))));
    w.write("summary.csv", summary_to_csv(s));
    if (f.dump_replications) {
        std::string lines;
        for (const auto& r : s.replications) lines += to_json(r).dump() + "\n";
        w.write("replications.jsonl", lines);
    }
    std::vector<std::string> warnings;
    if (s.n_failed > 0) {
        warnings.push_back(std::to_string(s.n_failed) + " of " + std::to_string(sc.n_reps) +
                           " replications failed; see summary.json");
    }
    w.finish(warnings, threads);
    warn_all(err, warnings);
    for (const auto& m : s.metrics) {
        out << std::left << std::setw(6) << m.name << " " << format_double(m.mean) << " ("
            << format_double(m.sd) << ")\n";
    }
    return ok;
}

} // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"placid: causal discovery and effect estimation with possibly invalid instruments"};
    app.require_subcommand(1);
    Flags f;

    auto data_opts = [&](CLI::App* c) {
        c->add_option("--config", f.config_path, "JSON run configuration");
        c->add_option("--data", f.data, "input CSV (repeatable; joined column-wise)");
        c->add_option("--y-cols", f.y_cols, "comma-separated primary columns");
        c->add_option("--x-cols", f.x_cols, "comma-separated secondary columns");
        c->add_option("--x-kind", f.x_kind, "kind of every secondary column")
            ->check(CLI::IsMember({"binary", "polytomous", "continuous"}));
        c->add_option("--alpha", f.alpha, "independence test level (default 1/n^2)");
        c->add_option("--out", f.out, "output directory");
        c->add_option("--seed", f.seed, "seed recorded in the artifacts");
    };
    // The simulation config has no basis cap or augmentation switch.
    auto est_opts = [&](CLI::App* c, bool data_run) {
        c->add_option("--gamma", f.gamma, "assumed minimum number of valid IVs per node");
        c->add_option("--q-star", f.q_star, "FDR level of the BY selection");
        c->add_option("--omega", f.omega, "weighting matrix")
            ->check(CLI::IsMember({"identity", "two-step"}));
        c->add_option("--degree", f.degree, "polynomial degree for continuous IVs");
        if (!data_run) return;
        c->add_option("--max-basis-columns", f.max_basis_columns, "cap on surrogate columns per node");
        c->add_flag("--no-mean-augmentation", f.no_mean_augmentation,
                    "treat basis centering constants as known in the variance");
    };
    auto sim_opts = [&](CLI::App* c) {
        c->add_option("--preset", f.preset, "named configuration, e.g. table2-random-p10");
        c->add_option("--config", f.config_path, "JSON simulation configuration");
        c->add_option("--seed", f.seed, "RNG seed");
        c->add_option("--n", f.n, "sample size");
        c->add_option("--alpha", f.alpha, "independence test level (default 1/n^2)");
        c->add_option("--out", f.out, "output directory");
    };

    auto* dcor = app.add_subcommand("dcor", "distance correlation and rejection matrices");
    data_opts(dcor);
    auto* discover = app.add_subcommand("discover", "recover the ancestral relation graph");
    data_opts(discover);
    auto* est = app.add_subcommand("estimate", "GMM effects and BY edge selection for a given ARG");
    data_opts(est);
    est_opts(est, true);
    est->add_option("--arg", f.arg_path, "ARG JSON (bare or a discover artifact)")->required();
    auto* pipe = app.add_subcommand("pipeline", "discover then estimate");
    data_opts(pipe);
    est_opts(pipe, true);
    auto* sim = app.add_subcommand("simulate", "generate one benchmark dataset");
    sim_opts(sim);
    auto* bench = app.add_subcommand("benchmark", "replicated simulation study");
    sim_opts(bench);
    est_opts(bench, false);
    bench->add_option("--reps", f.reps, "number of replications");
    bench->add_flag("--dump-replications", f.dump_replications, "write replications.jsonl");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return config_error;
    }

    try {
        if (*dcor) return cmd_dcor(f, out, err);
        if (*discover) return cmd_discover(f, out, err);
        if (*est) return cmd_estimate(f, out, err);
        if (*pipe) return cmd_pipeline(f, out, err);
        if (*sim) return cmd_simulate(f, out, err);
        if (*bench) return cmd_benchmark(f, out, err);
        return config_error;
    } catch (const CycleError& e) {
        err << "error: " << e.what() << "\n";
        return data_error;
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << "\n";
        return degenerate;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return data_error;
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return data_error;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return internal_error;
    }
}

} // namespace placid::cli
