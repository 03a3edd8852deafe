#include "placid/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace placid {

namespace {

Json edges_to_json(const std::vector<Edge>& edges) {
    Json a = Json::array();
    for (auto [x, y] : edges) a.push_back({x + 1, y + 1});
    return a;
}

Index one_based(const Json& v, const char* what) {
    if (!v.is_number_integer() || v.get<long long>() < 1) {
        throw InvalidArgument(std::string(what) + ": indices must be positive integers (1-based)");
    }
    return static_cast<Index>(v.get<long long>() - 1);
}

std::vector<Edge> edges_from_json(const Json& a, const char* what) {
    if (!a.is_array()) throw InvalidArgument(std::string(what) + " must be an array of pairs");
    std::vector<Edge> out;
    for (const auto& e : a) {
        if (!e.is_array() || e.size() != 2) {
            throw InvalidArgument(std::string(what) + " entries must be [from, to] pairs");
        }
        out.emplace_back(one_based(e[0], what), one_based(e[1], what));
    }
    return out;
}

Index get_index(const Json& j, const char* key) {
    if (!j.contains(key) || !j[key].is_number_integer() || j[key].get<long long>() < 0) {
        throw InvalidArgument(std::string("missing or invalid non-negative integer '") + key + "'");
    }
    return static_cast<Index>(j[key].get<long long>());
}

Json index_set_to_json(const IndexSet& s) {
    Json a = Json::array();
    for (Index v : s) a.push_back(v + 1);
    return a;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (char ch : line) {
        if (ch == '"') {
            quoted = !quoted;
        } else if (ch == ',' && !quoted) {
            out.push_back(trim(cell));
            cell.clear();
        } else {
            cell += ch;
        }
    }
    out.push_back(trim(cell));
    return out;
}

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        out += ch;
    }
    return out;
}

} // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

Json to_json(const CausalGraph& g) {
    Json j;
    j["p"] = g.p();
    j["q"] = g.q();
    j["edges"] = edges_to_json(g.edges());
    j["interventions"] = edges_to_json(g.interventions());
    return j;
}

CausalGraph causal_graph_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidArgument("causal graph JSON must be an object");
    return CausalGraph(get_index(j, "p"), get_index(j, "q"),
                       edges_from_json(j.value("edges", Json::array()), "edges"),
                       edges_from_json(j.value("interventions", Json::array()), "interventions"));
}

Json to_json(const AncestralGraph& a) {
    Json j;
    j["p"] = a.p;
    j["q"] = a.q;
    j["edges"] = edges_to_json(a.ancestral_edges);
    j["interventions"] = edges_to_json(a.reach_edges);
    Json ca = Json::array();
    for (const auto& s : a.candidate_ivs) ca.push_back(index_set_to_json(s));
    j["candidate_ivs"] = ca;
    return j;
}

AncestralGraph arg_from_json(const Json& j) {
    if (!j.is_object()) throw InvalidArgument("ancestral graph JSON must be an object");
    AncestralGraph a;
    a.p = get_index(j, "p");
    a.q = get_index(j, "q");
    a.ancestral_edges = edges_from_json(j.value("edges", Json::array()), "edges");
    a.reach_edges = edges_from_json(j.value("interventions", Json::array()), "interventions");
    std::sort(a.ancestral_edges.begin(), a.ancestral_edges.end());
    std::sort(a.reach_edges.begin(), a.reach_edges.end());
    if (j.contains("candidate_ivs")) {
        const Json& ca = j["candidate_ivs"];
        if (!ca.is_array() || ca.size() != a.p) {
            throw InvalidArgument("candidate_ivs must hold one array per primary variable");
        }
        for (const auto& s : ca) {
            if (!s.is_array()) throw InvalidArgument("candidate_ivs entries must be arrays");
            IndexSet set;
            for (const auto& v : s) set.push_back(one_based(v, "candidate_ivs"));
            std::sort(set.begin(), set.end());
            a.candidate_ivs.push_back(set);
        }
    } else {
        a.candidate_ivs.assign(a.p, {});
    }
    a.validate();
    if (!j.contains("candidate_ivs")) {
        a.candidate_ivs = candidate_sets_from_arg(a.ancestral_edges, a.reach_edges, a.p, a.q);
    }
    return a;
}

Json to_json(const PeelingResult& r) {
    Json j = to_json(r.arg);
    Json levels = Json::array();
    for (const auto& l : r.levels) levels.push_back(index_set_to_json(l));
    j["levels"] = levels;
    Json ivs = Json::array();
    for (const auto& s : r.leaf_ivs) ivs.push_back(index_set_to_json(s));
    j["leaf_ivs"] = ivs;
    j["stalled"] = r.stalled;
    j["warnings"] = r.warnings;
    return j;
}

Json to_json(const BasisSpec& b) {
    Json j;
    j["node"] = b.node + 1;
    j["candidate_set"] = index_set_to_json(b.candidate_set);
    j["gamma"] = b.gamma;
    Json subsets = Json::array();
    for (const auto& s : b.subsets) subsets.push_back(index_set_to_json(s));
    j["subsets"] = subsets;
    Json coords = Json::array();
    for (const auto& c : b.coordinates) {
        Json cj;
        cj["variable"] = c.variable + 1;
        cj["kind"] = to_string(c.kind);
        cj["levels"] = c.levels;
        cj["shift"] = c.shift;
        cj["scale"] = c.scale;
        cj["degree"] = c.degree;
        cj["centers"] = c.centers;
        coords.push_back(cj);
    }
    j["coordinates"] = coords;
    Json cols = Json::array();
    for (const auto& c : b.columns) cols.push_back({{"coords", c.coords}, {"factors", c.factors}});
    j["columns"] = cols;
    return j;
}

BasisSpec basis_spec_from_json(const Json& j) {
    try {
        BasisSpec b;
        b.node = one_based(j.at("node"), "node");
        for (const auto& v : j.at("candidate_set")) b.candidate_set.push_back(one_based(v, "candidate_set"));
        b.gamma = j.at("gamma").get<Index>();
        for (const auto& s : j.at("subsets")) {
            IndexSet set;
            for (const auto& v : s) set.push_back(one_based(v, "subsets"));
            b.subsets.push_back(set);
        }
        for (const auto& cj : j.at("coordinates")) {
            CoordinateSpec c;
            c.variable = one_based(cj.at("variable"), "variable");
            c.kind = factor_kind_from_string(cj.at("kind").get<std::string>());
            c.levels = cj.at("levels").get<std::vector<double>>();
            c.shift = cj.at("shift").get<double>();
            c.scale = cj.at("scale").get<double>();
            c.degree = cj.at("degree").get<Index>();
            c.centers = cj.at("centers").get<std::vector<double>>();
            if (c.centers.size() != c.factor_count()) {
                throw InvalidArgument("basis spec: centers do not match the factor count");
            }
            b.coordinates.push_back(c);
        }
        for (const auto& cj : j.at("columns")) {
            BasisColumn c;
            c.coords = cj.at("coords").get<std::vector<Index>>();
            c.factors = cj.at("factors").get<std::vector<Index>>();
            if (c.coords.size() != c.factors.size()) {
                throw InvalidArgument("basis spec: column coords/factors size mismatch");
            }
            for (Index a = 0; a < c.coords.size(); ++a) {
                if (c.coords[a] >= b.coordinates.size() ||
                    c.factors[a] >= b.coordinates[c.coords[a]].factor_count()) {
                    throw InvalidArgument("basis spec: column refers to a missing factor");
                }
            }
            b.columns.push_back(c);
        }
        return b;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("basis spec: ") + e.what());
    }
}

Json to_json(const EstimationResult& r) {
    Json j;
    Json edges = Json::array();
    for (Index i = 0; i < r.edge_order.size(); ++i) {
        Json e;
        e["k"] = r.edge_order[i].first + 1;
        e["j"] = r.edge_order[i].second + 1;
        e["beta"] = r.beta(i);
        e["se"] = r.sigma(i);
        e["pvalue"] = r.pvals(i);
        e["selected"] = static_cast<bool>(r.selected[i]);
        e["flagged"] = static_cast<bool>(r.flagged[i]);
        edges.push_back(e);
    }
    j["edges"] = edges;
    j["selected_edges"] = edges_to_json(r.selected_edges);
    j["q_star"] = r.q_star;
    j["warnings"] = r.warnings;
    return j;
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
        rows.push_back(row);
    }
    return rows;
}

Matrix matrix_from_json(const Json& j) {
    if (!j.is_array()) throw InvalidArgument("matrix JSON must be an array of rows");
    const Index rows = j.size();
    const Index cols = rows ? j[0].size() : 0;
    Matrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        if (!j[i].is_array() || j[i].size() != cols) throw InvalidArgument("matrix JSON is ragged");
        for (Index k = 0; k < cols; ++k) {
            if (!j[i][k].is_number()) throw InvalidArgument("matrix JSON holds a non-number");
            m(i, k) = j[i][k].get<double>();
        }
    }
    return m;
}

Json to_json(const DcorMatrices& d) {
    Json j;
    j["alpha"] = d.alpha;
    j["c"] = matrix_to_json(d.c);
    j["r"] = matrix_to_json(d.rejections.cast<double>());
    j["t"] = matrix_to_json(d.t);
    return j;
}

Json to_json(const SimConfig& c) {
    Json j;
    j["graph_kind"] = to_string(c.graph_kind);
    j["p"] = c.p;
    j["q"] = c.q;
    j["r"] = c.r;
    j["n"] = c.n;
    j["secondary_kind"] = to_string(c.secondary_kind);
    j["n_reps"] = c.n_reps;
    j["seed"] = c.seed;
    j["alpha"] = c.alpha ? Json(*c.alpha) : Json(nullptr);
    j["gamma"] = c.gamma;
    j["q_star"] = c.q_star;
    j["omega"] = to_string(c.omega);
    j["degree"] = c.degree;
    j["reference_design"] = c.reference_design;
    return j;
}

SimConfig sim_config_from_json(const Json& j, SimConfig c) {
    if (!j.is_object()) throw InvalidArgument("simulation config must be a JSON object");
    try {
        for (const auto& [key, v] : j.items()) {
            if (key == "graph_kind") c.graph_kind = graph_kind_from_string(v.get<std::string>());
            else if (key == "p") c.p = v.get<Index>();
            else if (key == "q") c.q = v.get<Index>();
            else if (key == "r") c.r = v.get<Index>();
            else if (key == "n") c.n = v.get<Index>();
            else if (key == "secondary_kind") c.secondary_kind = secondary_kind_from_string(v.get<std::string>());
            else if (key == "n_reps") c.n_reps = v.get<Index>();
            else if (key == "seed") c.seed = v.get<std::uint64_t>();
            else if (key == "alpha") c.alpha = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
            else if (key == "gamma") c.gamma = v.get<Index>();
            else if (key == "q_star") c.q_star = v.get<double>();
            else if (key == "omega") c.omega = omega_mode_from_string(v.get<std::string>());
            else if (key == "degree") c.degree = v.get<Index>();
            else if (key == "reference_design") c.reference_design = v.get<bool>();
            else throw InvalidArgument("unknown simulation config key '" + key + "'");
        }
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("simulation config: ") + e.what());
    }
    c.validate();
    return c;
}

Json to_json(const Metrics& m) {
    Json j;
    j["tp"] = m.tp;
    j["re"] = m.re;
    j["fp"] = m.fp;
    j["fn"] = m.fn;
    j["fdp"] = m.fdp;
    j["tpr"] = m.tpr;
    j["shd"] = m.shd;
    j["ji"] = m.ji;
    j["l_inf"] = m.l_inf;
    j["l_1"] = m.l_1;
    j["l_2"] = m.l_2;
    return j;
}

Json to_json(const Replication& r) {
    Json j;
    j["replication"] = r.index;
    j["seed"] = r.seed;
    j["ok"] = r.ok;
    if (r.ok) {
        j["metrics"] = to_json(r.metrics);
        j["true_edges"] = r.true_edges;
        j["selected_edges"] = edges_to_json(r.selected);
        j["warnings"] = r.warnings;
    } else {
        j["error"] = r.error;
    }
    return j;
}

Json to_json(const BenchmarkSummary& s) {
    Json j;
    j["config"] = to_json(s.config);
    Json metrics = Json::array();
    for (const auto& m : s.metrics) metrics.push_back({{"metric", m.name}, {"mean", m.mean}, {"sd", m.sd}});
    j["metrics"] = metrics;
    j["n_ok"] = s.n_ok;
    j["n_failed"] = s.n_failed;
    Json failures = Json::array();
    for (const auto& r : s.replications) {
        if (!r.ok) failures.push_back({{"replication", r.index}, {"error", r.error}});
    }
    j["failures"] = failures;
    return j;
}

std::string to_dot(const CausalGraph& g, const std::string& name) {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (Index j = 0; j < g.p(); ++j) os << "  Y" << j + 1 << " [shape=ellipse];\n";
    for (Index l = 0; l < g.q(); ++l) os << "  X" << l + 1 << " [shape=box];\n";
    for (auto [k, j] : g.edges()) os << "  Y" << k + 1 << " -> Y" << j + 1 << ";\n";
    for (auto [l, j] : g.interventions()) os << "  X" << l + 1 << " -> Y" << j + 1 << ";\n";
    os << "}\n";
    return os.str();
}

std::string to_dot(const AncestralGraph& a, const std::string& name) {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (Index j = 0; j < a.p; ++j) os << "  Y" << j + 1 << " [shape=ellipse];\n";
    for (Index l = 0; l < a.q; ++l) os << "  X" << l + 1 << " [shape=box];\n";
    for (auto [k, j] : a.ancestral_edges) os << "  Y" << k + 1 << " -> Y" << j + 1 << ";\n";
    for (auto [l, j] : a.reach_edges) {
        os << "  X" << l + 1 << " -> Y" << j + 1 << " [style=dashed];\n";
    }
    os << "}\n";
    return os.str();
}

std::string selected_to_dot(const EstimationResult& r, Index p, const std::string& name) {
    std::ostringstream os;
    os << "digraph " << name << " {\n";
    for (Index j = 0; j < p; ++j) os << "  Y" << j + 1 << " [shape=ellipse];\n";
    for (Index i = 0; i < r.edge_order.size(); ++i) {
        if (!r.selected[i]) continue;
        os << "  Y" << r.edge_order[i].first + 1 << " -> Y" << r.edge_order[i].second + 1
           << " [label=\"" << dot_escape(format_double(r.beta(i))) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

Table parse_csv(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    Table t;
    std::vector<std::vector<double>> rows;
    Index line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split_line(line);
        if (!have_header) {
            t.header = cells;
            for (Index c = 0; c < cells.size(); ++c) {
                if (cells[c].empty()) {
                    throw DataError(source + ": line " + std::to_string(line_no) + ": empty header in column " +
                                    std::to_string(c + 1));
                }
            }
            have_header = true;
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw DataError(source + ": line " + std::to_string(line_no) + ": expected " +
                            std::to_string(t.header.size()) + " fields, found " +
                            std::to_string(cells.size()));
        }
        std::vector<double> row(cells.size());
        for (Index c = 0; c < cells.size(); ++c) {
            const std::string& s = cells[c];
            double v = 0.0;
            auto res = std::from_chars(s.data(), s.data() + s.size(), v);
            if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
                throw DataError(source + ": line " + std::to_string(line_no) + ": column " +
                                std::to_string(c + 1) + " ('" + t.header[c] + "'): " +
                                (s.empty() ? std::string("missing value") : "cannot parse '" + s + "'"));
            }
            row[c] = v;
        }
        rows.push_back(std::move(row));
    }
    if (!have_header) throw DataError(source + ": empty file");
    t.values.resize(rows.size(), t.header.size());
    for (Index i = 0; i < rows.size(); ++i) {
        for (Index c = 0; c < rows[i].size(); ++c) t.values(i, c) = rows[i][c];
    }
    return t;
}

Table read_csv(const std::string& path) { return parse_csv(read_file(path), path); }

std::string matrix_to_csv(const Matrix& m, const std::vector<std::string>& row_names,
                          const std::vector<std::string>& col_names) {
    // Without row names the output is a plain numeric table readable by read_csv.
    const bool named = !row_names.empty();
    std::ostringstream os;
    if (named) os << "name";
    for (std::size_t c = 0; c < col_names.size(); ++c) os << (named || c > 0 ? "," : "") << col_names[c];
    os << "\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (named) {
            os << (static_cast<Index>(i) < row_names.size() ? row_names[i] : std::to_string(i + 1));
        }
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            os << (named || k > 0 ? "," : "") << format_double(m(i, k));
        }
        os << "\n";
    }
    return os.str();
}

std::string summary_to_csv(const BenchmarkSummary& s) {
    std::ostringstream os;
    os << "# format_version " << format_version << "\n";
    os << "# config " << to_json(s.config).dump() << "\n";
    os << "metric,mean,sd\n";
    for (const auto& m : s.metrics) {
        os << m.name << "," << format_double(m.mean) << "," << format_double(m.sd) << "\n";
    }
    os << "n_ok," << s.n_ok << ",\n";
    os << "n_failed," << s.n_failed << ",\n";
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << contents;
    if (!out) throw IoError("write failed for '" + path + "'");
}

Json read_json_file(const std::string& path) {
    std::string text = read_file(path);
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument(path + ": invalid JSON: " + e.what());
    }
}

} // namespace placid
