// mvrank: validators, the spherical counterexample pipeline, rank probes and
// figure-data export.
//
// Exit codes: 0 all requested checks pass, 1 a check failed, 2 usage or
// configuration error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <yaml-cpp/yaml.h>

#include "mvrank.hpp"
#include "mvrank/io/reports.hpp"
#include "mvrank/io/yaml.hpp"

namespace {

using namespace mvrank;

constexpr int exit_pass = 0;
constexpr int exit_fail = 1;
constexpr int exit_usage = 2;

struct Globals {
    std::uint64_t seed = default_seed;
    std::optional<double> tol;
    std::string out;
    std::string config;
};

/// Config document, or an empty map when no --config was given.
YAML::Node load_config(const Globals& g) {
    if (g.config.empty()) return YAML::Node(YAML::NodeType::Map);
    YAML::Node n = io::load_file(g.config);
    if (n.IsNull()) return YAML::Node(YAML::NodeType::Map);
    if (!n.IsMap()) throw ConfigError("config root must be a map");
    return n;
}

/// The spec node from an inline flag or from config[key].
YAML::Node spec_node(const YAML::Node& cfg, const std::string& inline_text, const char* key) {
    if (!inline_text.empty()) return io::load_text(inline_text);
    if (!cfg[key]) throw ConfigError(std::string("no '") + key + "' given (use --config or --" + key + ")");
    return cfg[key];
}

template <class T>
T setting(const YAML::Node& cfg, const CLI::App& cmd, const char* flag, const char* key, T value) {
    if (cmd.count(flag) == 0 && cfg[key]) {
        try {
            return cfg[key].as<T>();
        } catch (const YAML::Exception&) {
            throw ConfigError(std::string("config key '") + key + "' has the wrong type");
        }
    }
    return value;
}

void emit(const Globals& g, const std::string& text) {
    if (g.out.empty() || g.out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(g.out, std::ios::binary);
    if (!f) throw ConfigError("cannot write output file '" + g.out + "'");
    f << text;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write file '" + path + "'");
    f << text;
}

YAML::Node header(const char* command, const Globals& g, double tol) {
    YAML::Node n;
    n["command"] = command;
    n["seed"] = g.seed;
    n["tol"] = io::real(tol);
    return n;
}

// ---- validate-phi

struct ValidatePhiArgs {
    std::string phi;
    bool require5 = false;
    std::size_t samples = 100000;
};

int cmd_validate_phi(const Globals& g, const CLI::App& cmd, const ValidatePhiArgs& a) {
    const YAML::Node cfg = load_config(g);
    const PhiSpec phi = io::parse_phi(spec_node(cfg, a.phi, "phi"));
    const bool require5 = setting(cfg, cmd, "--require-5", "require_5", a.require5);
    const double tol = g.tol.value_or(1e-9);
    const PhiValidationReport rep = validate_phi(phi, PhiSampler{a.samples, g.seed, tol});

    std::vector<Condition> requested = {Condition::A, Condition::B, Condition::c1,
                                        Condition::c2, Condition::c3, Condition::c4};
    if (require5) requested.push_back(Condition::c5);
    bool ok = true;
    YAML::Node req(YAML::NodeType::Sequence);
    for (Condition c : requested) {
        req.push_back(to_string(c));
        ok = ok && rep[c].passed();
    }
    req.SetStyle(YAML::EmitterStyle::Flow);

    YAML::Node doc = header("validate-phi", g, tol);
    doc["report"] = io::to_node(rep);
    doc["requested"] = req;
    doc["result"] = ok ? "pass" : "fail";
    emit(g, io::to_document(doc));
    return ok ? exit_pass : exit_fail;
}

// ---- check-norm

struct CheckNormArgs {
    std::string norm;
    std::size_t samples = 10000;
    bool require_strict = false;
    bool require_inner = false;
};

int cmd_check_norm(const Globals& g, const CLI::App& cmd, const CheckNormArgs& a) {
    const YAML::Node cfg = load_config(g);
    const NormSpec norm = io::parse_norm(spec_node(cfg, a.norm, "norm"));
    const bool require_strict = setting(cfg, cmd, "--require-strict", "require_strict", a.require_strict);
    const bool require_inner = setting(cfg, cmd, "--require-inner", "require_inner", a.require_inner);
    const double tol = g.tol.value_or(1e-9);
    const SamplingOptions s{a.samples, g.seed, tol};
    const NormAxiomReport ax = check_norm_axioms(norm, s);
    const ConvexityResult cv = check_strict_convexity(norm, s);
    const ParallelogramResult pg = check_parallelogram(norm, s);

    const bool ok = ax.all_ok() && (!require_strict || cv.strictly_convex) && (!require_inner || pg.holds);
    YAML::Node doc = header("check-norm", g, tol);
    doc["norm"] = io::emit_norm(norm);
    doc["axioms"] = io::to_node(ax);
    doc["strict_convexity"] = io::to_node(cv);
    doc["parallelogram"] = io::to_node(pg);
    doc["result"] = ok ? "pass" : "fail";
    emit(g, io::to_document(doc));
    return ok ? exit_pass : exit_fail;
}

// ---- counterexample

struct CounterexampleArgs {
    long long n = 0;
    int planes = 100;
    int circles = 1000;
    int resolution = 2000;
    std::size_t samples = 10000;
    int section_samples = 256;
    int null_points = 1000;
    std::string sections = "sections.csv";
};

int cmd_counterexample(const Globals& g, const CLI::App& cmd, const CounterexampleArgs& a) {
    const YAML::Node cfg = load_config(g);
    const long long n_flag = setting(cfg, cmd, "--n", "n", a.n);
    const int planes = setting(cfg, cmd, "--planes", "planes", a.planes);
    const int circles = setting(cfg, cmd, "--circles", "circles", a.circles);
    const double tol = g.tol.value_or(1e-9);
    const SamplingOptions sampler{a.samples, g.seed, tol};
    if (planes < 1 || circles < 1) throw ConfigError("--planes and --circles must be >= 1");

    YAML::Node doc = header("counterexample", g, tol);
    bool ok = true;
    long long n = n_flag;
    counterexample::ConvexityTrial trial;
    if (n_flag > 0) {
        trial = counterexample::convexity_at(n_flag, sampler);
        doc["n_source"] = "override";
    } else {
        try {
            const auto chosen = counterexample::choose_n({20, sampler});
            n = chosen.n;
            trial = chosen.trials.back();
            YAML::Node tried(YAML::NodeType::Sequence);
            for (const auto& t : chosen.trials) tried.push_back(t.n);
            tried.SetStyle(YAML::EmitterStyle::Flow);
            doc["n_tried"] = tried;
            doc["n_source"] = "choose_n";
        } catch (const SearchExhausted& e) {
            doc["n_source"] = "choose_n";
            doc["error"] = e.what();
            doc["largest_n_tried"] = e.largest_tried();
            doc["result"] = "fail";
            emit(g, io::to_document(doc));
            return exit_fail;
        }
    }
    doc["n"] = n;

    YAML::Node conv;
    conv["norm1"] = io::to_node(trial.norm1);
    conv["norm2"] = io::to_node(trial.norm2);
    conv["pass"] = trial.passes();
    doc["strict_convexity"] = conv;
    ok = ok && trial.passes();

    const NormSpec norm1 = NormSpec::perturbed_spherical(1, n);
    const NormSpec norm2 = NormSpec::perturbed_spherical(2, n);
    const NormAxiomReport ax1 = check_norm_axioms(norm1, sampler);
    const NormAxiomReport ax2 = check_norm_axioms(norm2, sampler);
    YAML::Node axioms;
    axioms["norm1"] = io::to_node(ax1);
    axioms["norm2"] = io::to_node(ax2);
    doc["norm_axioms"] = axioms;
    ok = ok && ax1.all_ok() && ax2.all_ok();

    constexpr double diagonal_tol = 1e-12;
    const auto diag = counterexample::verify_diagonal_euclidean(n, a.samples, g.seed);
    YAML::Node dn;
    dn["samples"] = diag.samples;
    dn["worst_relative_error"] = io::real(diag.worst_relative_error);
    dn["pass"] = diag.worst_relative_error <= diagonal_tol;
    doc["diagonal_euclidean"] = dn;
    ok = ok && diag.worst_relative_error <= diagonal_tol;

    constexpr double null_tol = 1e-14;
    const auto ns = counterexample::null_set_exactness(n, a.null_points);
    YAML::Node nn;
    nn["points"] = ns.points;
    nn["max_deviation_phi1"] = io::real(ns.max_deviation_phi1);
    nn["max_deviation_phi2"] = io::real(ns.max_deviation_phi2);
    const bool null_ok = ns.max_deviation_phi1 <= null_tol && ns.max_deviation_phi2 <= null_tol;
    nn["pass"] = null_ok;
    doc["null_set"] = nn;
    ok = ok && null_ok;

    const auto sweep = counterexample::great_circle_sweep(circles, a.resolution, g.seed, n);
    YAML::Node sw;
    sw["circles"] = sweep.circles;
    sw["resolution"] = a.resolution;
    sw["min_zeros"] = sweep.min_zeros;
    sw["below_eight"] = sweep.below_eight;
    sw["resolution_warnings"] = sweep.resolution_warnings;
    sw["min_max_abs"] = io::real(sweep.min_max_abs);
    const bool sweep_ok = sweep.below_eight == 0 && sweep.min_max_abs > 0.0;
    sw["pass"] = sweep_ok;
    doc["great_circles"] = sw;
    ok = ok && sweep_ok;

    ObstructionOptions oo;
    oo.plane_count = planes;
    oo.samples_per_section = a.section_samples;
    oo.seed = g.seed;
    oo.tol = tol;
    YAML::Node ob;
    for (const auto& [name, norm] : {std::pair{"norm1", norm1}, std::pair{"norm2", norm2}}) {
        const ObstructionReport r = euclidean_flat_obstruction(norm, oo);
        YAML::Node rn = io::to_node(r);
        const bool pass = r.fraction_not_ellipse == 1.0 && r.baseline_ok && r.min_residual >= r.threshold;
        rn["pass"] = pass;
        ob[name] = rn;
        ok = ok && pass;
    }
    doc["flat_obstruction"] = ob;
    // Lines are isometric copies of E^1; the sweep excludes E^2 through 0.
    doc["euclidean_rank_factors"] = ok ? 1 : 0;

    std::ostringstream csv;
    io::write_section_csv(csv, counterexample::section_table(n, a.section_samples));
    write_file(a.sections, csv.str());
    doc["sections_file"] = a.sections;
    doc["result"] = ok ? "pass" : "fail";
    emit(g, io::to_document(doc));
    return ok ? exit_pass : exit_fail;
}

// ---- probe-rank

struct ProbeRankArgs {
    std::string space;
    int k_max = 3;
    int grid_side = 3;
    int restarts = 1;
    int max_sweeps = 200;
    bool obstruction = false;
    int planes = 100;
};

int cmd_probe_rank(const Globals& g, const CLI::App& cmd, const ProbeRankArgs& a) {
    const YAML::Node cfg = load_config(g);
    const SpaceHandle space = io::parse_space(spec_node(cfg, a.space, "space"));
    const int k_max = setting(cfg, cmd, "--k-max", "k_max", a.k_max);
    const bool obstruction = setting(cfg, cmd, "--obstruction", "obstruction", a.obstruction);
    if (k_max < 1) throw ConfigError("--k-max must be >= 1");
    const double tol = g.tol.value_or(1e-6);

    YAML::Node doc = header("probe-rank", g, tol);
    doc["space"] = io::emit_space(space);
    DistortionOptions opts;
    opts.restarts = a.restarts;
    opts.seed = g.seed;
    opts.max_sweeps = a.max_sweeps;
    YAML::Node probes(YAML::NodeType::Sequence);
    YAML::Node warnings(YAML::NodeType::Sequence);
    int estimate = 0;
    bool contiguous = true;
    for (int k = 1; k <= k_max; ++k) {
        const DistortionResult r = distortion_probe(space, k, a.grid_side, opts);
        YAML::Node p = io::to_node(r);
        p["k"] = k;
        probes.push_back(p);
        if (!r.converged) warnings.push_back("k=" + std::to_string(k) + ": best run hit the sweep limit");
        if (contiguous && r.best <= 1.0 + tol)
            estimate = k;
        else
            contiguous = false;
    }
    doc["probes"] = probes;
    doc["rank_estimate"] = estimate;

    if (obstruction) {
        if (!space.is_leaf() || space.point_dim() < 2)
            throw ConfigError("--obstruction needs a leaf space of dimension >= 2");
        const SamplingOptions s{10000, g.seed, 1e-9};
        const ConvexityResult cv = check_strict_convexity(space.norm(), s);
        ObstructionOptions oo;
        oo.plane_count = a.planes;
        oo.seed = g.seed;
        const ObstructionReport r = euclidean_flat_obstruction(space.norm(), oo);
        YAML::Node o = io::to_node(r);
        o["strict_convexity"] = io::to_node(cv);
        if (cv.strictly_convex && r.fraction_not_ellipse == 1.0 && r.baseline_ok)
            o["euclidean_rank_certificate"] = 1;
        else
            warnings.push_back("obstruction sweep did not certify euclidean rank 1");
        doc["obstruction"] = o;
    }
    doc["warnings"] = warnings;
    emit(g, io::to_document(doc));
    return exit_pass;
}

// ---- decompose

struct DecomposeArgs {
    std::string scenario;
};

int cmd_decompose(const Globals& g, const CLI::App& cmd, const DecomposeArgs& a) {
    const YAML::Node cfg = load_config(g);
    const std::string name = setting(cfg, cmd, "--scenario", "scenario", a.scenario);
    const double tol = g.tol.value_or(1e-9);
    const bool generalized = name.rfind("generalized_", 0) == 0;
    Embedding e;
    if (name == "diagonal") e = scenarios::diagonal();
    else if (name == "axis") e = scenarios::axis();
    else if (name == "coordinate_split" || name == "generalized_p2") e = scenarios::coordinate_split();
    else if (name == "shear") e = scenarios::shear();
    else if (name == "generalized_p4") e = scenarios::coordinate_split_lp(3, 4.0);
    else if (name == "generalized_max") e = scenarios::coordinate_split_max();
    else throw ConfigError("unknown scenario '" + name +
                           "' (diagonal, axis, coordinate_split, shear, generalized_p2, generalized_p4, "
                           "generalized_max)");

    YAML::Node doc = header("decompose", g, tol);
    doc["scenario"] = name;
    doc["variant"] = generalized ? "generalized" : "standard";
    doc["target"] = io::emit_space(e.target);
    try {
        const SamplingOptions convexity{10000, g.seed, tol};
        const DecompositionResult r = generalized ? generalized_factor_decomposition(e, {}, tol, convexity)
                                                  : factor_decomposition(e, {}, tol);
        doc["decomposition"] = io::to_node(r);
        doc["result"] = r.ok() ? "pass" : "fail";
        emit(g, io::to_document(doc));
        return r.ok() ? exit_pass : exit_fail;
    } catch (const NotIsometric& ex) {
        doc["refused"] = "not_isometric";
        doc["reason"] = ex.what();
    } catch (const NotStrictlyConvex& ex) {
        doc["refused"] = "not_strictly_convex";
        doc["reason"] = ex.what();
    }
    doc["result"] = "fail";
    emit(g, io::to_document(doc));
    return exit_fail;
}

// ---- length

struct LengthArgs {
    std::string scenario;
    std::string curve;
    std::string space;
    int refinement = 10000;
    int levels = 5;
};

int cmd_length(const Globals& g, const CLI::App& cmd, const LengthArgs& a) {
    const YAML::Node cfg = load_config(g);
    const std::string curve_path = setting(cfg, cmd, "--curve", "curve", a.curve);
    const std::string scenario = setting(cfg, cmd, "--scenario", "scenario", a.scenario);
    const int refinement = setting(cfg, cmd, "--refinement", "refinement", a.refinement);
    const int levels = setting(cfg, cmd, "--levels", "levels", a.levels);
    if (refinement < 1 || levels < 1) throw ConfigError("--refinement and --levels must be >= 1");
    std::vector<int> ns;
    for (int j = levels - 1; j >= 0; --j) ns.push_back(std::max(1, refinement >> j));
    std::ostringstream csv;

    if (!curve_path.empty()) {
        const SpaceHandle space = io::parse_space(spec_node(cfg, a.space, "space"));
        std::ifstream in(curve_path);
        if (!in) throw ConfigError("cannot open curve file '" + curve_path + "'");
        const PolygonalCurve c = read_curve_table(in, space.point_dim());
        csv << "refinement,length\n";
        for (int n : ns) csv << n << ',' << io::format_real(curve_length(space, c, n)) << '\n';
        emit(g, csv.str());
        return exit_pass;
    }

    const SpaceHandle plane = SpaceHandle::leaf(NormSpec::euclidean(2));
    const SpaceHandle line = SpaceHandle::leaf(NormSpec::euclidean(1));
    SpaceHandle prod = standard_product({plane, line});
    std::vector<ComponentCurve> comps;
    if (scenario == "helix" || scenario == "helix_max") {
        if (scenario == "helix_max") prod = SpaceHandle::product({plane, line}, PhiSpec::max_combination(2));
        comps = {CircleCurve::planar(2, 1.0), SegmentCurve{make_vector({0.0}), make_vector({1.0})}};
    } else if (scenario == "segments") {
        prod = standard_product({line, line});
        comps = {SegmentCurve{make_vector({0.0}), make_vector({3.0})},
                 SegmentCurve{make_vector({0.0}), make_vector({4.0})}};
    } else {
        throw ConfigError("length: give --curve with a space, or --scenario helix|helix_max|segments");
    }
    const double tol = g.tol.value_or(1e-3);
    csv << "refinement,length,target,gap\n";
    double prev_gap = std::numeric_limits<double>::infinity();
    bool monotone = true;
    ProductLengthCheck last;
    for (int n : ns) {
        last = product_curve_length_check(prod, comps, n);
        monotone = monotone && last.gap <= prev_gap + 1e-12;
        prev_gap = last.gap;
        csv << n << ',' << io::format_real(last.length) << ',' << io::format_real(last.target) << ','
            << io::format_real(last.gap) << '\n';
    }
    emit(g, csv.str());
    return (monotone && last.gap <= tol * last.target) ? exit_pass : exit_fail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mvrank: Minkowski and Euclidean rank probes for metric products"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    double tol_value = 0.0;
    auto* seed_opt = app.add_option("--seed", g.seed, "Random seed (default 42)");
    auto* tol_opt = app.add_option("--tol", tol_value, "Tolerance override");
    app.add_option("--out", g.out, "Report/table output path (default stdout)");
    app.add_option("--config", g.config, "YAML configuration file");

    ValidatePhiArgs vp;
    auto* c_vp = app.add_subcommand("validate-phi", "Check conditions (A), (B), (1)-(5) for a phi functional");
    c_vp->add_option("--phi", vp.phi, "Inline YAML phi spec, e.g. '{max_combination: {arity: 2}}'");
    c_vp->add_flag("--require-5", vp.require5, "Also require condition (5)");
    c_vp->add_option("--samples", vp.samples, "Samples per condition")->check(CLI::PositiveNumber);

    CheckNormArgs cn;
    auto* c_cn = app.add_subcommand("check-norm", "Sampled norm axioms, strict convexity and parallelogram law");
    c_cn->add_option("--norm", cn.norm, "Inline YAML norm spec");
    c_cn->add_option("--samples", cn.samples, "Sample count")->check(CLI::PositiveNumber);
    c_cn->add_flag("--require-strict", cn.require_strict, "Fail unless the unit ball is strictly convex");
    c_cn->add_flag("--require-inner", cn.require_inner, "Fail unless the parallelogram law holds");

    CounterexampleArgs ce;
    auto* c_ce = app.add_subcommand("counterexample", "Run the spherical counterexample pipeline");
    c_ce->add_option("--n", ce.n, "Scale denominator override (default: choose_n)")->check(CLI::PositiveNumber);
    c_ce->add_option("--planes", ce.planes, "Random planes per obstruction sweep");
    c_ce->add_option("--circles", ce.circles, "Random great circles");
    c_ce->add_option("--resolution", ce.resolution, "Samples per great circle")->check(CLI::Range(1000, 1 << 24));
    c_ce->add_option("--samples", ce.samples, "Samples for sampled checks")->check(CLI::PositiveNumber);
    c_ce->add_option("--section-samples", ce.section_samples, "Samples per plane section")->check(CLI::Range(16, 1 << 20));
    c_ce->add_option("--null-points", ce.null_points, "Points per null circle")->check(CLI::PositiveNumber);
    c_ce->add_option("--sections", ce.sections, "Section table CSV path");

    ProbeRankArgs pr;
    auto* c_pr = app.add_subcommand("probe-rank", "Distortion probes for Euclidean rank");
    c_pr->add_option("--space", pr.space, "Inline YAML space spec");
    c_pr->add_option("--k-max", pr.k_max, "Largest Euclidean dimension probed");
    c_pr->add_option("--grid-side", pr.grid_side, "Lattice points per axis")->check(CLI::Range(3, 64));
    c_pr->add_option("--restarts", pr.restarts, "Random restarts per k")->check(CLI::NonNegativeNumber);
    c_pr->add_option("--max-sweeps", pr.max_sweeps, "Coordinate-descent sweep limit")->check(CLI::PositiveNumber);
    c_pr->add_flag("--obstruction", pr.obstruction, "Run the ellipse-section sweep on a leaf space");
    c_pr->add_option("--planes", pr.planes, "Planes for --obstruction")->check(CLI::PositiveNumber);

    DecomposeArgs de;
    auto* c_de = app.add_subcommand("decompose", "Factor decomposition of a synthetic isometric embedding");
    c_de->add_option("--scenario", de.scenario, "Scenario name");

    LengthArgs le;
    auto* c_le = app.add_subcommand("length", "Curve lengths and the product length law");
    c_le->add_option("--scenario", le.scenario, "helix, helix_max or segments");
    c_le->add_option("--curve", le.curve, "Vertex table file");
    c_le->add_option("--space", le.space, "Inline YAML space spec for --curve");
    c_le->add_option("--refinement", le.refinement, "Finest subdivision N")->check(CLI::PositiveNumber);
    c_le->add_option("--levels", le.levels, "Number of halvings reported")->check(CLI::Range(1, 30));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_usage;
    }
    if (tol_opt->count() > 0) g.tol = tol_value;

    try {
        // A config file may carry the seed; the flag wins.
        if (seed_opt->count() == 0 && !g.config.empty()) {
            const YAML::Node cfg = load_config(g);
            if (cfg["seed"]) {
                try {
                    g.seed = cfg["seed"].as<std::uint64_t>();
                } catch (const YAML::Exception&) {
                    throw ConfigError("config key 'seed' is not an unsigned integer");
                }
            }
        }
        if (c_vp->parsed()) return cmd_validate_phi(g, *c_vp, vp);
        if (c_cn->parsed()) return cmd_check_norm(g, *c_cn, cn);
        if (c_ce->parsed()) return cmd_counterexample(g, *c_ce, ce);
        if (c_pr->parsed()) return cmd_probe_rank(g, *c_pr, pr);
        if (c_de->parsed()) return cmd_decompose(g, *c_de, de);
        if (c_le->parsed()) return cmd_length(g, *c_le, le);
    } catch (const ConfigError& e) {
        std::cerr << "mvrank: configuration error: " << e.what() << "\n";
        return exit_usage;
    } catch (const Error& e) {
        std::cerr << "mvrank: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
