#include "cli.hpp"

#include "spa/acceptance.hpp"
#include "spa/analytics.hpp"
#include "spa/config.hpp"
#include "spa/graph.hpp"
#include "spa/growth.hpp"
#include "spa/local_limit.hpp"
#include "spa/manifest.hpp"
#include "spa/random.hpp"
#include "spa/statistics.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace spa::cli {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Globals {
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
    std::string out_dir = ".";
};

// Output routing and manifest bookkeeping for one invocation.
class Session {
public:
    Session(const Globals& globals, std::vector<std::string> argv, std::ostream& out)
        : globals_(globals), out_(out), started_(Clock::now()) {
        manifest_.command = std::move(argv);
    }

    std::ostream& out() { return out_; }
    RunManifest& manifest() { return manifest_; }

    std::string resolve(const std::string& path) const {
        fs::path p(path);
        if (p.is_relative()) p = fs::path(globals_.out_dir) / p;
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        return p.string();
    }

    /// CSV to `path` (under --out-dir), or to stdout when empty.
    void csv(const std::string& path, const std::function<void(std::ostream&)>& write) {
        if (path.empty()) {
            write(out_);
            return;
        }
        const auto full = resolve(path);
        std::ofstream file(full);
        if (!file) throw std::runtime_error("cannot write " + full);
        write(file);
        record(full);
    }

    /// JSON to `path` (with a pointer to the manifest), or to stdout when empty.
    void json_out(json value, const std::string& path) {
        if (path.empty()) {
            out_ << value.dump(2) << '\n';
            return;
        }
        const auto full = resolve(path);
        record(full);
        value["manifest"] = fs::path(manifest_path_).filename().string();
        std::ofstream file(full);
        if (!file) throw std::runtime_error("cannot write " + full);
        file << value.dump(2) << '\n';
    }

    void record(const std::string& full) {
        if (manifest_path_.empty()) {
            fs::path p(full);
            const auto name = p.filename().string();
            const auto stem = name.substr(0, name.find('.'));
            manifest_path_ = (p.parent_path() / (stem + ".manifest.json")).string();
        }
        manifest_.outputs.push_back(full);
    }

    /// Write the manifest if any file was produced.
    void finish() {
        if (manifest_path_.empty()) return;
        manifest_.wall_clock_seconds = std::chrono::duration<double>(Clock::now() - started_).count();
        manifest_.write(manifest_path_);
    }

    /// Force the manifest name (grow uses its prefix).
    void name_manifest(const std::string& full) { manifest_path_ = full; }

private:
    const Globals& globals_;
    std::ostream& out_;
    Clock::time_point started_;
    RunManifest manifest_;
    std::string manifest_path_;
};

std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            values.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError(std::string("bad number '") + item + "' in " + what);
        }
    }
    if (values.empty()) throw UsageError(std::string(what) + " is empty");
    return values;
}

std::string horizon_text(const Horizon& h) {
    return (h.kind == Horizon::Kind::count ? "count=" : "time=") + format_real(h.value);
}

// ---------------------------------------------------------------------------
// Model loading shared by several commands
// ---------------------------------------------------------------------------

struct ModelOptions {
    std::string config;
    std::optional<std::uint64_t> vertices;
    std::optional<double> time;
};

ModelParams load_model(const ModelOptions& opts, const Globals& globals) {
    ModelParams params = load_config(opts.config);
    if (globals.seed) params.seed = *globals.seed;
    if (opts.vertices && opts.time) throw UsageError("--n and --time are exclusive");
    if (opts.vertices) params.horizon = Horizon::count(*opts.vertices);
    if (opts.time) params.horizon = Horizon::time(*opts.time);
    return params;
}

void snapshot(Session& s, const ModelParams& params) {
    s.manifest().config = format_config(params);
    s.manifest().horizons.push_back(horizon_text(params.horizon));
}

// ---------------------------------------------------------------------------
// grow
// ---------------------------------------------------------------------------

struct GrowOptions {
    ModelOptions model;
    std::string mode = "fast";
    double prune = 1e-12;
    std::string prefix;
};

void add_model_options(CLI::App* app, ModelOptions& opts, bool required) {
    auto* c = app->add_option("--config", opts.config, "model configuration file")->check(CLI::ExistingFile);
    if (required) c->required();
    app->add_option("--n", opts.vertices, "vertex-count horizon (overrides the config)");
    app->add_option("--time", opts.time, "time horizon (overrides the config)");
}

GrowthMode parse_mode(const std::string& mode, double prune) {
    if (mode == "naive") return GrowthMode::naive();
    if (mode == "fast") return GrowthMode::fast(prune);
    throw UsageError("--mode must be fast or naive");
}

json audit_json(const GrowthResult& r) {
    return {{"vertices", r.graph.vertex_count()},
            {"edges", r.graph.edge_count()},
            {"final_time", r.final_time},
            {"pairs_total", r.audit.pairs_total},
            {"pairs_visited", r.audit.pairs_visited},
            {"pairs_skipped", r.audit.pairs_skipped},
            {"prune_threshold", r.audit.prune_threshold},
            {"divergence_bound", r.audit.divergence_bound}};
}

int cmd_grow(Session& s, const Globals& globals, const GrowOptions& opts) {
    const auto params = load_model(opts.model, globals);
    const auto mode = parse_mode(opts.mode, opts.prune);
    snapshot(s, params);
    s.manifest().seeds = {params.seed};
    s.manifest().mode = opts.mode;
    const auto result = grow(params, mode);

    const auto base = s.resolve(opts.prefix);
    s.name_manifest(base + ".manifest.json");
    s.csv(opts.prefix + ".vertices.csv", [&](std::ostream& o) { write_vertices_csv(result.graph, o); });
    s.csv(opts.prefix + ".edges.csv", [&](std::ostream& o) { write_edges_csv(result.graph, o); });
    auto audit = audit_json(result);
    audit["mode"] = opts.mode;
    audit["seed"] = params.seed;
    s.json_out(audit, opts.prefix + ".audit.json");
    s.out() << audit.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// limit
// ---------------------------------------------------------------------------

struct LimitOptions {
    std::string config;
    std::string windows = "5,10,20,40,80";
    std::string t_list = "50,100,200,400";
    std::optional<double> palm_time;
    unsigned replicates = 20;
    std::optional<double> probe_radius;
    std::string out;
};

int cmd_limit(Session& s, const Globals& globals, const LimitOptions& opts) {
    ModelParams params = load_config(opts.config);
    if (globals.seed) params.seed = *globals.seed;
    const auto widths = parse_list(opts.windows, "--window");
    const auto ts = parse_list(opts.t_list, "--t-list");
    if (opts.replicates == 0) throw UsageError("--replicates must be positive");
    const double radius = opts.probe_radius.value_or(0.25 * ts.front());
    s.manifest().config = format_config(params);
    s.manifest().mode = "fast(0)";
    for (double t : ts) s.manifest().horizons.push_back("t=" + format_real(t));
    for (double w : widths) s.manifest().horizons.push_back("W=" + format_real(w));

    struct Row {
        std::string kind;
        double value;
        std::size_t probes = 0, changed = 0;
        double palm_time = 0.0;
        std::uint32_t palm = 0;
    };
    std::vector<std::vector<Row>> rows(opts.replicates);
    acceptance::Budget budget;
    budget.threads = globals.threads;
    acceptance::Context pool(budget);
    pool.parallel(opts.replicates, [&](std::size_t r) {
        const std::uint64_t seed = params.seed + r;
        const StripField field(seed);
        const auto report = couple_across_t(field, ts, central_probes(field, radius), params);
        for (const auto& step : report.steps) rows[r].push_back({"t", step.t_to, step.probes, step.changed});
        const double u = opts.palm_time.value_or(unit_open_closed(mix64(seed ^ 0x70616C6DULL)));
        const auto palm = palm_indegrees(field, widths, u, params);
        for (std::size_t i = 0; i < widths.size(); ++i) rows[r].push_back({"W", widths[i], 0, 0, u, palm[i]});
    });
    for (unsigned r = 0; r < opts.replicates; ++r) s.manifest().seeds.push_back(params.seed + r);

    s.csv(opts.out, [&](std::ostream& o) {
        o << "replicate,seed,kind,value,probes,changed,fraction,palm_time,palm_indegree\n";
        for (unsigned r = 0; r < opts.replicates; ++r)
            for (const auto& row : rows[r]) {
                o << r << ',' << params.seed + r << ',' << row.kind << ',' << format_real(row.value) << ',';
                if (row.kind == "t") {
                    const double frac = row.probes ? double(row.changed) / double(row.probes) : 0.0;
                    o << row.probes << ',' << row.changed << ',' << format_real(frac) << ",,\n";
                } else {
                    o << ",,," << format_real(row.palm_time) << ',' << row.palm << '\n';
                }
            }
    });
    if (!opts.out.empty()) {
        std::vector<double> fractions;
        for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
            std::size_t changed = 0, probes = 0;
            for (const auto& rep : rows) {
                changed += rep[j].changed;
                probes += rep[j].probes;
            }
            fractions.push_back(probes ? double(changed) / double(probes) : 0.0);
        }
        std::size_t monotone = 0;
        for (const auto& rep : rows) {
            bool ok = true;
            for (std::size_t i = ts.size(); i + 1 < rep.size(); ++i) ok = ok && rep[i].palm <= rep[i + 1].palm;
            monotone += ok;
        }
        s.out() << json{{"changed_fractions", fractions}, {"palm_monotone_replicates", monotone},
                        {"replicates", opts.replicates}, {"probe_radius", radius}}
                       .dump(2)
                << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// stats
// ---------------------------------------------------------------------------

struct StatsInput {
    std::string vertices;
    std::string edges;
    std::string grow_inline;
    double torus_length = 1.0;
    std::string out;
    std::string json_path;
};

void add_stats_input(CLI::App* app, StatsInput& in) {
    app->add_option("--vertices", in.vertices, "vertex CSV")->check(CLI::ExistingFile);
    app->add_option("--edges", in.edges, "edge CSV")->check(CLI::ExistingFile);
    app->add_option("--grow-inline", in.grow_inline, "grow from this config instead of reading files")
        ->check(CLI::ExistingFile);
    app->add_option("--torus-length", in.torus_length, "torus length of file input");
    app->add_option("--out", in.out, "CSV output file (default stdout)");
    app->add_option("--json", in.json_path, "JSON summary file (default stdout)");
}

struct Loaded {
    EvolvingGraph graph;
    std::optional<ModelParams> params;
    double final_time = 1.0;
};

Loaded load_input(Session& s, const Globals& globals, const StatsInput& in, std::uint64_t seed_offset = 0) {
    Loaded l;
    if (!in.grow_inline.empty()) {
        if (!in.vertices.empty() || !in.edges.empty()) throw UsageError("--grow-inline excludes --vertices/--edges");
        ModelParams params = load_config(in.grow_inline);
        if (globals.seed) params.seed = *globals.seed;
        params.seed += seed_offset;
        auto r = grow(params);
        l.graph = std::move(r.graph);
        l.final_time = r.final_time;
        if (seed_offset == 0) {
            snapshot(s, params);
            s.manifest().mode = "fast";
        }
        s.manifest().seeds.push_back(params.seed);
        l.params = params;
        return l;
    }
    if (in.vertices.empty() || in.edges.empty()) throw UsageError("need --vertices and --edges, or --grow-inline");
    if (!(in.torus_length > 0.0)) throw UsageError("--torus-length must be positive");
    l.graph = load_graph(in.vertices, in.edges, Geometry{in.torus_length, true});
    l.final_time = l.graph.vertex_count() ? l.graph.vertices().back().birth_time : 1.0;
    return l;
}

json fit_json(const std::function<TailFit()>& fit) {
    try {
        const auto f = fit();
        return {{"slope", f.slope}, {"stderr", f.stderr_}, {"points", f.points}};
    } catch (const std::invalid_argument& e) {
        return {{"error", e.what()}};
    }
}

struct DegreeOptions {
    StatsInput in;
    double fit_lo = 10;
    double fit_hi = 200;
};

int cmd_degrees(Session& s, const Globals& globals, const DegreeOptions& opts) {
    const auto l = load_input(s, globals, opts.in);
    const auto mu = empirical_indegree(l.graph);
    const auto nu = empirical_outdegree(l.graph);
    s.csv(opts.in.out, [&](std::ostream& o) {
        o << "k,indegree,outdegree\n";
        const auto top = static_cast<std::uint64_t>(std::max(mu.max_value(), nu.max_value()));
        for (std::uint64_t k = 0; k <= top; ++k)
            o << k << ',' << format_real(mu.pmf(double(k))) << ',' << format_real(nu.pmf(double(k))) << '\n';
    });
    json j = {{"vertices", l.graph.vertex_count()},
              {"edges", l.graph.edge_count()},
              {"mean_indegree", mu.mean()},
              {"max_indegree", mu.max_value()},
              {"max_outdegree", nu.max_value()},
              {"indegree_tail_fit", fit_json([&] { return tail_exponent_fit(mu, opts.fit_lo, opts.fit_hi); })},
              {"fit_range", {opts.fit_lo, opts.fit_hi}}};
    if (l.params) {
        const auto& f = l.params->f;
        const auto law = mu_weights(f, std::max<std::size_t>(1000, std::size_t(mu.max_value()) + 1));
        const auto d = distance_metrics(mu, law);
        j["analytic"] = {{"total_variation", d.total_variation},
                         {"kolmogorov_smirnov", d.kolmogorov_smirnov},
                         {"mean_indegree", mean_indegree(f)}};
        if (f.gamma() > 0.0 && f.gamma() < 1.0) j["analytic"]["ccdf_slope"] = -(tau(f.gamma()) - 1.0);
    }
    s.json_out(j, opts.in.json_path);
    return 0;
}

int cmd_clustering(Session& s, const Globals& globals, const StatsInput& in) {
    const auto l = load_input(s, globals, in);
    const auto c = clustering(l.graph);
    if (!in.out.empty()) {
        const auto views = degree_views(l.graph);
        s.csv(in.out, [&](std::ostream& o) {
            o << "id,degree,local\n";
            for (std::size_t v = 0; v < c.local.size(); ++v) {
                o << v << ',' << views.degree[v] << ',';
                if (!std::isnan(c.local[v])) o << format_real(c.local[v]);
                o << '\n';
            }
        });
    }
    s.json_out({{"vertices", l.graph.vertex_count()},
                {"c_glob", c.global},
                {"c_av", c.average},
                {"triangles", c.triangles},
                {"open_triangles", c.open_triangles}},
               in.json_path);
    return 0;
}

struct EdgeLengthOptions {
    StatsInput in;
    std::optional<double> rescale;
    double fit_lo = 5;
    double fit_hi = 100;
};

int cmd_edge_lengths(Session& s, const Globals& globals, const EdgeLengthOptions& opts) {
    const auto l = load_input(s, globals, opts.in);
    const double rescale = opts.rescale.value_or(l.final_time);
    if (!(rescale > 0.0)) throw UsageError("--rescale must be positive");
    const auto dist = empirical_edge_lengths(l.graph, rescale);
    s.csv(opts.in.out, [&](std::ostream& o) {
        o << "bin_lo,bin_hi,mass\n";
        const auto edges = dist.bin_edges();
        const auto w = dist.weights();
        for (std::size_t i = 0; i + 1 < edges.size(); ++i)
            o << format_real(edges[i]) << ',' << format_real(edges[i + 1]) << ',' << format_real(w[i]) << '\n';
    });
    json j = {{"edges", l.graph.edge_count()},
              {"rescale", rescale},
              {"first_edge", EmpiricalDistribution::first_edge},
              {"bin_ratio", EmpiricalDistribution::edge_ratio},
              {"mean", dist.mean()},
              {"ccdf_tail_fit", fit_json([&] { return tail_exponent_fit(dist, opts.fit_lo, opts.fit_hi); })},
              {"fit_range", {opts.fit_lo, opts.fit_hi}}};
    if (l.params && l.params->phi.kind() == ProfileFunction::Kind::polynomial && l.params->f.gamma() > 0.0 &&
        l.params->f.gamma() < 1.0)
        j["analytic"] = {{"ccdf_slope", -eta(l.params->f.gamma(), l.params->phi.delta())}};
    s.json_out(j, opts.in.json_path);
    return 0;
}

struct LlnOptions {
    StatsInput in;
    std::string functional = "one";
    std::optional<double> normalizer;
    unsigned replicates = 1;
};

int cmd_lln(Session& s, const Globals& globals, const LlnOptions& opts) {
    VertexFunctional xi;
    std::optional<std::uint32_t> level;
    if (opts.functional == "one") {
        xi = functionals::one();
    } else if (opts.functional == "open-triangles") {
        xi = functionals::oldest_tip_open_triangles();
    } else if (opts.functional.rfind("indegree:", 0) == 0) {
        try {
            level = static_cast<std::uint32_t>(std::stoul(opts.functional.substr(9)));
        } catch (const std::exception&) {
            throw UsageError("bad functional '" + opts.functional + "'");
        }
        xi = functionals::indegree_equals(*level);
    } else {
        throw UsageError("--functional must be one, indegree:J or open-triangles");
    }
    if (opts.replicates == 0) throw UsageError("--replicates must be positive");
    if (opts.replicates > 1 && opts.in.grow_inline.empty()) throw UsageError("--replicates needs --grow-inline");

    ReplicateStats stats;
    std::vector<double> values;
    std::optional<ModelParams> params;
    for (unsigned r = 0; r < opts.replicates; ++r) {
        const auto l = load_input(s, globals, opts.in, r);
        params = l.params;
        const double t = opts.normalizer.value_or(l.final_time);
        if (!(t > 0.0)) throw UsageError("normalizer must be positive");
        values.push_back(lln_average(l.graph, xi, t));
        stats.add(values.back());
    }
    json j = {{"functional", opts.functional},
              {"replicates", opts.replicates},
              {"mean", stats.mean()},
              {"stderr", stats.stderr_()},
              {"values", values}};
    if (opts.functional == "one") j["target"] = 1.0;
    if (level && params) j["target"] = mu_weights(params->f, *level)[*level];
    s.json_out(j, opts.in.json_path);
    return 0;
}

// ---------------------------------------------------------------------------
// analytic
// ---------------------------------------------------------------------------

struct AnalyticOptions {
    std::string config;
    double gamma = 0.5;
    double beta = 1.0;
    double delta = 2.0;
    std::uint64_t kmax = 100;
    double kmin_real = 10;
    double kmax_real = 1000;
    unsigned per_decade = 10;
    double s0 = 0.25;
    double s = 1.0;
    double u = 0.5;
    std::string windows = "1,2,5,10,20";
    std::optional<double> majorant_gamma;
    std::optional<double> majorant_beta;
    std::string out;
};

AttachmentRule attachment_of(const AnalyticOptions& o) {
    return o.config.empty() ? AttachmentRule::affine(o.gamma, o.beta) : load_config(o.config).f;
}

void require_f(const AttachmentRule& f, const ProfileFunction& phi) {
    const auto report = validate(f, phi);
    if (!report.ok()) throw InvalidModel(report);
}

int cmd_mu(Session& s, const AnalyticOptions& o) {
    const auto f = attachment_of(o);
    require_f(f, ProfileFunction::indicator(1.0));
    const auto law = mu_weights(f, o.kmax);
    // Gamma-function form, defined for affine rules with 0 < gamma < 1.
    const bool gamma_form = f.kind() == AttachmentRule::Kind::affine && f.gamma() > 0.0 && f.gamma() < 1.0;
    s.csv(o.out, [&](std::ostream& out) {
        out << "k,mu,ccdf,asymptotic_ratio\n";
        for (std::uint64_t k = 0; k <= o.kmax; ++k) {
            out << k << ',' << format_real(law[k]) << ',' << format_real(law.ccdf(k)) << ',';
            if (gamma_form) out << format_real(mu_affine_asymptotic(f.gamma(), f.beta(), k) / law[k]);
            out << '\n';
        }
    });
    return 0;
}

int cmd_lambda(Session& s, const AnalyticOptions& o) {
    AttachmentRule f = AttachmentRule::affine(o.gamma, o.beta);
    ProfileFunction phi = ProfileFunction::polynomial(o.delta);
    if (!o.config.empty()) {
        const auto params = load_config(o.config);
        f = params.f;
        phi = params.phi;
    }
    require_f(f, phi);
    if (!(o.kmin_real > 0.0 && o.kmax_real > o.kmin_real)) throw UsageError("need 0 < --kmin < --kmax");
    s.csv(o.out, [&](std::ostream& out) {
        out << "K,lambda_tail\n";
        const double decades = std::log10(o.kmax_real / o.kmin_real);
        const auto steps = static_cast<unsigned>(std::ceil(decades * o.per_decade - 1e-9));
        for (unsigned i = 0; i <= steps; ++i) {
            const double K = std::min(o.kmax_real, o.kmin_real * std::pow(10.0, double(i) / o.per_decade));
            out << format_real(K) << ',' << format_real(lambda_tail(K, f, phi)) << '\n';
        }
    });
    return 0;
}

int cmd_bounds(Session& s, const AnalyticOptions& o) {
    s.csv(o.out, [&](std::ostream& out) {
        out << "k,bound\n";
        for (std::uint64_t k = 0; k <= o.kmax; ++k)
            out << k << ',' << format_real(indegree_tail_bound(k, o.s0, o.s, o.gamma, o.beta)) << '\n';
    });
    return 0;
}

int cmd_truncation(Session& s, const AnalyticOptions& o) {
    if (o.config.empty()) throw UsageError("truncation needs --config");
    const auto params = load_config(o.config);
    require_f(params.f, params.phi);
    std::optional<std::pair<double, double>> majorant;
    if (o.majorant_gamma || o.majorant_beta) {
        if (!(o.majorant_gamma && o.majorant_beta)) throw UsageError("give both --majorant-gamma and --majorant-beta");
        majorant = std::pair{*o.majorant_gamma, *o.majorant_beta};
    }
    const auto widths = parse_list(o.windows, "--window");
    s.csv(o.out, [&](std::ostream& out) {
        out << "W,bound\n";
        for (double W : widths)
            out << format_real(W) << ',' << format_real(truncation_error(W, o.u, params.f, params.phi, majorant)) << '\n';
    });
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::string suite;
    std::optional<std::uint64_t> vertices;
    std::optional<std::uint32_t> seeds;
    std::optional<std::uint64_t> samples;
    std::optional<std::uint32_t> replicates;
    std::string json_path;
};

int cmd_verify(Session& s, const Globals& globals, const VerifyOptions& o) {
    const auto& names = acceptance::suite_names();
    if (o.suite != "all" && std::find(names.begin(), names.end(), o.suite) == names.end()) {
        std::string list;
        for (const auto& n : names) list += " " + n;
        throw UsageError("unknown suite '" + o.suite + "'; choose all or one of:" + list);
    }
    acceptance::Budget budget;
    budget.vertices = o.vertices;
    budget.seeds = o.seeds;
    budget.samples = o.samples;
    budget.replicates = o.replicates;
    budget.threads = globals.threads;
    if (globals.seed) budget.base_seed = *globals.seed;
    acceptance::Context ctx(budget);
    s.manifest().mode = "verify:" + o.suite;
    s.manifest().seeds = {budget.base_seed};

    const auto results = o.suite == "all" ? acceptance::run_all(ctx) : acceptance::run_suite(o.suite, ctx);
    bool all_pass = true;
    json report = json::array();
    for (const auto& r : results) {
        s.out() << acceptance::format_line(r) << '\n';
        all_pass = all_pass && r.status == acceptance::Status::pass;
        report.push_back(r.to_json());
    }
    if (!o.json_path.empty()) s.json_out({{"suite", o.suite}, {"results", report}}, o.json_path);
    return all_pass ? 0 : 1;
}

}  // namespace

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Spatial preferential attachment simulator and analytics"};
    app.name("spa");
    app.require_subcommand(1);
    app.fallthrough();

    Globals globals;
    app.add_option("--seed", globals.seed, "master seed (overrides configs)");
    app.add_option("--threads", globals.threads, "worker threads for replicates")->check(CLI::PositiveNumber);
    app.add_option("--out-dir", globals.out_dir, "directory for output files");

    GrowOptions grow_opts;
    auto* grow_cmd = app.add_subcommand("grow", "grow a graph on the unit torus");
    add_model_options(grow_cmd, grow_opts.model, true);
    grow_cmd->add_option("--mode", grow_opts.mode, "fast or naive")->check(CLI::IsMember({"fast", "naive"}));
    grow_cmd->add_option("--prune", grow_opts.prune, "fast-mode prune threshold")->check(CLI::NonNegativeNumber);
    grow_cmd->add_option("--out-prefix", grow_opts.prefix, "prefix of the output files")->required();

    LimitOptions limit_opts;
    auto* limit_cmd = app.add_subcommand("limit", "coupled rescaled graphs and palm-vertex windows");
    limit_cmd->add_option("--config", limit_opts.config, "model configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    limit_cmd->add_option("--window", limit_opts.windows, "comma-separated half-widths W");
    limit_cmd->add_option("--t-list", limit_opts.t_list, "comma-separated increasing torus lengths");
    limit_cmd->add_option("--palm-time", limit_opts.palm_time, "birth time of the palm vertex (default random)")
        ->check(CLI::Range(0.0, 1.0));
    limit_cmd->add_option("--replicates", limit_opts.replicates, "independent fields");
    limit_cmd->add_option("--probe-radius", limit_opts.probe_radius, "probes are points with |x| <= radius");
    limit_cmd->add_option("--out", limit_opts.out, "CSV output file (default stdout)");

    auto* stats_cmd = app.add_subcommand("stats", "empirical statistics of a graph");
    stats_cmd->require_subcommand(1);
    DegreeOptions degree_opts;
    auto* degrees_cmd = stats_cmd->add_subcommand("degrees", "indegree and outdegree distributions");
    add_stats_input(degrees_cmd, degree_opts.in);
    degrees_cmd->add_option("--fit-lo", degree_opts.fit_lo, "tail fit lower end");
    degrees_cmd->add_option("--fit-hi", degree_opts.fit_hi, "tail fit upper end");
    StatsInput clustering_in;
    auto* clustering_cmd = stats_cmd->add_subcommand("clustering", "global, average and local clustering");
    add_stats_input(clustering_cmd, clustering_in);
    EdgeLengthOptions length_opts;
    auto* lengths_cmd = stats_cmd->add_subcommand("edge-lengths", "rescaled edge-length distribution");
    add_stats_input(lengths_cmd, length_opts.in);
    lengths_cmd->add_option("--rescale", length_opts.rescale, "length multiplier (default final time)");
    lengths_cmd->add_option("--fit-lo", length_opts.fit_lo, "tail fit lower end");
    lengths_cmd->add_option("--fit-hi", length_opts.fit_hi, "tail fit upper end");
    LlnOptions lln_opts;
    auto* lln_cmd = stats_cmd->add_subcommand("lln", "vertex-functional averages");
    add_stats_input(lln_cmd, lln_opts.in);
    lln_cmd->add_option("--functional", lln_opts.functional, "one, indegree:J or open-triangles");
    lln_cmd->add_option("--normalizer", lln_opts.normalizer, "divide by this t (default final time)");
    lln_cmd->add_option("--replicates", lln_opts.replicates, "seeds seed..seed+R-1 (with --grow-inline)");

    AnalyticOptions an;
    auto* analytic_cmd = app.add_subcommand("analytic", "limiting laws and bounds");
    analytic_cmd->require_subcommand(1);
    auto common = [&an](CLI::App* c) {
        c->add_option("--gamma", an.gamma, "attachment slope");
        c->add_option("--beta", an.beta, "attachment intercept");
        c->add_option("--out", an.out, "CSV output file (default stdout)");
    };
    auto* mu_cmd = analytic_cmd->add_subcommand("mu", "limiting indegree law");
    common(mu_cmd);
    mu_cmd->add_option("--config", an.config, "take f from a config file")->check(CLI::ExistingFile);
    mu_cmd->add_option("--kmax", an.kmax, "largest k");
    auto* eta_cmd = analytic_cmd->add_subcommand("eta", "edge-length tail exponent");
    eta_cmd->add_option("--gamma", an.gamma)->required();
    eta_cmd->add_option("--delta", an.delta)->required();
    auto* tau_cmd = analytic_cmd->add_subcommand("tau", "degree power-law exponent");
    tau_cmd->add_option("--gamma", an.gamma)->required();
    auto* lambda_cmd = analytic_cmd->add_subcommand("lambda-tail", "limiting edge-length tail");
    common(lambda_cmd);
    lambda_cmd->add_option("--delta", an.delta, "polynomial profile exponent");
    lambda_cmd->add_option("--config", an.config, "take f and phi from a config file")->check(CLI::ExistingFile);
    lambda_cmd->add_option("--kmin", an.kmin_real, "smallest K");
    lambda_cmd->add_option("--kmax", an.kmax_real, "largest K");
    lambda_cmd->add_option("--per-decade", an.per_decade, "points per decade")->check(CLI::PositiveNumber);
    auto* bounds_cmd = analytic_cmd->add_subcommand("bounds", "indegree tail bound");
    common(bounds_cmd);
    bounds_cmd->add_option("--s0", an.s0, "birth time");
    bounds_cmd->add_option("--s", an.s, "observation time");
    bounds_cmd->add_option("--kmax", an.kmax, "largest k");
    auto* trunc_cmd = analytic_cmd->add_subcommand("truncation", "palm-vertex window truncation error");
    trunc_cmd->add_option("--config", an.config, "model configuration file")->check(CLI::ExistingFile);
    trunc_cmd->add_option("--u", an.u, "palm time");
    trunc_cmd->add_option("--window", an.windows, "comma-separated half-widths");
    trunc_cmd->add_option("--majorant-gamma", an.majorant_gamma, "affine majorant slope");
    trunc_cmd->add_option("--majorant-beta", an.majorant_beta, "affine majorant intercept");
    trunc_cmd->add_option("--out", an.out, "CSV output file (default stdout)");

    VerifyOptions verify_opts;
    auto* verify_cmd = app.add_subcommand("verify", "run acceptance suites");
    verify_cmd->add_option("--suite", verify_opts.suite, "suite name or all")->required();
    verify_cmd->add_option("--n", verify_opts.vertices, "vertex count override");
    verify_cmd->add_option("--seeds", verify_opts.seeds, "seed count override");
    verify_cmd->add_option("--samples", verify_opts.samples, "chain sample override");
    verify_cmd->add_option("--replicates", verify_opts.replicates, "replicate override");
    verify_cmd->add_option("--json", verify_opts.json_path, "JSON report file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    std::vector<std::string> args(argv, argv + argc);
    Session session(globals, args, out);
    try {
        int code = 0;
        if (*grow_cmd) code = cmd_grow(session, globals, grow_opts);
        else if (*limit_cmd) code = cmd_limit(session, globals, limit_opts);
        else if (*degrees_cmd) code = cmd_degrees(session, globals, degree_opts);
        else if (*clustering_cmd) code = cmd_clustering(session, globals, clustering_in);
        else if (*lengths_cmd) code = cmd_edge_lengths(session, globals, length_opts);
        else if (*lln_cmd) code = cmd_lln(session, globals, lln_opts);
        else if (*mu_cmd) code = cmd_mu(session, an);
        else if (*eta_cmd) out << json{{"gamma", an.gamma}, {"delta", an.delta}, {"eta", eta(an.gamma, an.delta)}}.dump(2) << '\n';
        else if (*tau_cmd) out << json{{"gamma", an.gamma}, {"tau", tau(an.gamma)}}.dump(2) << '\n';
        else if (*lambda_cmd) code = cmd_lambda(session, an);
        else if (*bounds_cmd) code = cmd_bounds(session, an);
        else if (*trunc_cmd) code = cmd_truncation(session, an);
        else if (*verify_cmd) code = cmd_verify(session, globals, verify_opts);
        session.finish();
        return code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace spa::cli
