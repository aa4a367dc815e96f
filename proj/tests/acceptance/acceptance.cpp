// Acceptance gate: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "mvrank.hpp"

using namespace mvrank;

namespace {

// Pinned tolerances and budgets.
constexpr std::size_t validator_samples = 100000;
constexpr double validator_tol = 1e-9;
constexpr double validator_budget_s = 10.0;
constexpr double diagonal_tol = 1e-12;
constexpr std::size_t diagonal_samples = 10000;
constexpr double null_set_tol = 1e-14;
constexpr int null_points_per_circle = 1000;
constexpr int sweep_circles = 1000;
constexpr int sweep_resolution = 2000;
constexpr double sweep_budget_s = 30.0;
constexpr int obstruction_planes = 100;
constexpr double obstruction_factor = 100.0;
constexpr double euclidean_control_tol = 1e-9;
constexpr double decomposition_tol = 1e-9;
constexpr double length_rel_tol = 1e-3;
constexpr int length_refinement = 10000;
constexpr double distortion_tol = 1e-6;

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

long long calibrated_n() {
    static const long long n = counterexample::choose_n().n;
    return n;
}

Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    const PhiSampler s{validator_samples, default_seed, validator_tol};
    const auto all_pass = [](const PhiValidationReport& r, bool with5) {
        for (Condition c : all_conditions)
            if (c != Condition::c5 || with5)
                if (!r[c].passed()) return false;
        return true;
    };
    bool ok = true;
    std::string d;
    const auto p2 = validate_phi(PhiSpec::p_combination(2, 2.0), s);
    ok = ok && all_pass(p2, true);
    for (const PhiSpec& phi : {PhiSpec::l1_combination(2), PhiSpec::max_combination(2)}) {
        const auto r = validate_phi(phi, s);
        const bool good = r.norm_conditions_pass() && r[Condition::c5].failed() && !r[Condition::c5].witness.empty();
        ok = ok && good;
        if (!good) d += phi.describe() + " unexpected; ";
    }
    const auto sq = validate_phi(PhiSpec::square_first(), s);
    const bool sq_fail = (sq[Condition::c3].failed() && !sq[Condition::c3].witness.empty()) ||
                         (sq[Condition::B].failed() && !sq[Condition::B].witness.empty());
    ok = ok && sq_fail;
    const double t = seconds_since(t0);
    ok = ok && t < validator_budget_s;
    d += "square_first 3=" + std::string(to_string(sq[Condition::c3].status)) +
         " B=" + to_string(sq[Condition::B].status) + ", runtime " + fmt("%.2f", t) + " s";
    return {ok, d};
}

Outcome criterion2() {
    const PhiSampler s{20000, default_seed, validator_tol};
    const SamplingOptions ns{20000, default_seed, validator_tol};
    int families = 0, norm_disagree = 0, compared5 = 0, five_disagree = 0;
    std::string which;
    for (int arity : {2, 3})
        for (const PhiSpec& phi : builtin_phi_families(arity)) {
            ++families;
            const auto r = validate_phi(phi, s);
            const bool norm = check_norm_axioms(psi_from_phi(phi), ns).all_ok();
            if (norm != r.norm_conditions_pass()) {
                ++norm_disagree;
                which += phi.describe() + " ";
            }
            if (r.norm_conditions_pass()) {
                ++compared5;
                const bool par = check_parallelogram(psi_from_phi(phi), ns).holds;
                if (par != r[Condition::c5].passed()) {
                    ++five_disagree;
                    which += phi.describe() + " ";
                }
            }
        }
    return {norm_disagree == 0 && five_disagree == 0,
            std::to_string(families) + " families, norm disagreements " + std::to_string(norm_disagree) + "; " +
                std::to_string(compared5) + " with (1)-(4), (5)/parallelogram disagreements " +
                std::to_string(five_disagree) + (which.empty() ? "" : " [" + which + "]")};
}

Outcome criterion3() {
    const auto r = counterexample::verify_diagonal_euclidean(calibrated_n(), diagonal_samples);
    return {r.samples >= diagonal_samples && r.worst_relative_error <= diagonal_tol,
            std::to_string(r.samples) + " vectors, worst relative error " + fmt("%.3g", r.worst_relative_error)};
}

Outcome criterion4() {
    const auto r = counterexample::null_set_exactness(calibrated_n(), null_points_per_circle);
    const double worst = std::max(r.max_deviation_phi1, r.max_deviation_phi2);
    return {r.points == 8u * null_points_per_circle && worst <= null_set_tol,
            std::to_string(r.points) + " points, max deviation " + fmt("%.3g", worst)};
}

Outcome criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = counterexample::great_circle_sweep(sweep_circles, sweep_resolution);
    const double t = seconds_since(t0);
    return {r.circles == sweep_circles && r.min_zeros >= 8 && t < sweep_budget_s,
            std::to_string(r.circles) + " circles, min zeros " + std::to_string(r.min_zeros) + ", " +
                std::to_string(r.resolution_warnings) + " refined, runtime " + fmt("%.2f", t) + " s"};
}

Outcome criterion6() {
    ObstructionOptions o;
    o.plane_count = obstruction_planes;
    o.baseline_factor = obstruction_factor;
    bool ok = true;
    std::string d = "n* = " + std::to_string(calibrated_n());
    for (int f : {1, 2}) {
        const auto r = euclidean_flat_obstruction(NormSpec::perturbed_spherical(f, calibrated_n()), o);
        const bool good = r.planes == obstruction_planes && r.not_ellipse == r.planes &&
                          r.min_residual >= obstruction_factor * r.baseline_residual && r.min_residual >= r.threshold;
        ok = ok && good;
        d += ", norm" + std::to_string(f) + " " + std::to_string(r.not_ellipse) + "/" + std::to_string(r.planes) +
             " min residual " + fmt("%.3g", r.min_residual) + " (baseline " + fmt("%.3g", r.baseline_residual) + ")";
    }
    const auto e = euclidean_flat_obstruction(NormSpec::euclidean(3), o);
    const bool control = e.planes == obstruction_planes && e.not_ellipse == 0 && e.max_residual <= euclidean_control_tol;
    ok = ok && control;
    d += ", euclidean max residual " + fmt("%.3g", e.max_residual);
    return {ok, d};
}

Outcome criterion7() {
    auto worst = [](const DecompositionResult& r, bool generalized) {
        double w = std::max({r.lemma1, r.lemma2, r.lemma3, r.lemma4, r.identity, r.isometry});
        if (generalized) w = std::max(w, r.lemma1_prime);
        if (r.analytic) w = std::max(w, *r.analytic);
        return w;
    };
    bool ok = true;
    double w = 0.0;
    for (const Embedding& e : {scenarios::diagonal(), scenarios::axis(), scenarios::coordinate_split()}) {
        const auto r = factor_decomposition(e, {}, decomposition_tol);
        ok = ok && r.ok() && r.analytic.has_value();
        w = std::max(w, worst(r, false));
    }
    const auto g = generalized_factor_decomposition(scenarios::coordinate_split_lp(3, 4.0), {}, decomposition_tol);
    ok = ok && g.ok() && g.analytic.has_value();
    const double wg = worst(g, true);
    bool refused = false;
    try {
        generalized_factor_decomposition(scenarios::coordinate_split_max(), {}, decomposition_tol);
    } catch (const NotStrictlyConvex&) {
        refused = true;
    }
    ok = ok && w <= decomposition_tol && wg <= decomposition_tol && refused;
    return {ok, "standard worst residual " + fmt("%.3g", w) + ", p4 k=3 worst " + fmt("%.3g", wg) +
                    ", max refused " + (refused ? "yes" : "no")};
}

Outcome criterion8() {
    const SpaceHandle prod =
        standard_product({SpaceHandle::leaf(NormSpec::euclidean(2)), SpaceHandle::leaf(NormSpec::euclidean(1))});
    const std::vector<ComponentCurve> c = {CircleCurve::planar(2, 1.0),
                                           SegmentCurve{make_vector({0.0}), make_vector({1.0})}};
    const double target = std::sqrt(4 * std::numbers::pi * std::numbers::pi + 1);
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity(), last = 0.0;
    for (int n = length_refinement / 16; n <= length_refinement; n *= 2) {
        const auto r = product_curve_length_check(prod, c, n);
        monotone = monotone && r.gap <= prev;
        prev = r.gap;
        last = r.gap;
    }
    const double rel = last / target;
    return {monotone && rel <= length_rel_tol,
            "relative gap " + fmt("%.3g", rel) + " at N = 10^4, monotone " + (monotone ? "yes" : "no")};
}

Outcome criterion9() {
    DistortionOptions o;
    o.restarts = 1;
    o.max_sweeps = 200;
    double worst1 = 1.0;
    for (const NormSpec& s : {NormSpec::euclidean(1), NormSpec::euclidean(3), NormSpec::p_norm(2, 1.0),
                              NormSpec::p_norm(2, 3.0), NormSpec::p_norm(3, std::numeric_limits<double>::infinity()),
                              NormSpec::weighted_euclidean({0.3, 2.0}),
                              NormSpec::perturbed_spherical(1, calibrated_n()),
                              NormSpec::perturbed_spherical(2, calibrated_n())})
        worst1 = std::max(worst1, distortion_probe(SpaceHandle::leaf(s), 1, 5, o).best);
    const SpaceHandle line = SpaceHandle::leaf(NormSpec::euclidean(1));
    const double k2 = distortion_probe(standard_product({line, line}), 2, 4, o).best;
    const auto k3 = distortion_probe(counterexample::counterexample_product(calibrated_n()), 3, 3, o);
    double diag = std::numeric_limits<double>::infinity();
    for (const auto& r : k3.runs)
        if (r.start == "diagonal") diag = r.final;
    const double bound = 1 + distortion_tol;
    return {worst1 <= bound && k2 <= bound && diag <= bound,
            "k=1 worst " + fmt("%.17g", worst1) + ", k=2 " + fmt("%.17g", k2) + ", k=3 diagonal " + fmt("%.17g", diag)};
}

std::string run_cli(const std::string& args, int& code) {
    const std::string cmd = std::string(MVRANK_CLI_PATH) + " " + args + " 2>&1";
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) {
        code = -1;
        return out;
    }
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    const int st = pclose(p);
    code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return out;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

Outcome criterion10() {
    const std::vector<std::string> commands = {
        "validate-phi --phi '{p_combination: {arity: 2, p: 2}}' --require-5",
        "check-norm --norm '{perturbed_spherical: {factor: 1, n: 1}}' --require-strict",
        "counterexample --sections acceptance_sections.csv",
        "probe-rank --space '{leaf: {euclidean: {dim: 3}}}' --k-max 3 --restarts 2",
        "decompose --scenario generalized_p4",
        "length --scenario helix",
    };
    int identical = 0;
    std::string diff;
    for (const std::string& c : commands) {
        const std::string args = "--seed 42 " + c;
        int code1 = 0, code2 = 0;
        const std::string a = run_cli(args, code1);
        const std::string fa = slurp("acceptance_sections.csv");
        const std::string b = run_cli(args, code2);
        const std::string fb = slurp("acceptance_sections.csv");
        if (a == b && fa == fb && code1 == code2 && !a.empty())
            ++identical;
        else
            diff += c.substr(0, c.find(' ')) + " ";
    }
    return {identical == static_cast<int>(commands.size()),
            std::to_string(identical) + "/" + std::to_string(commands.size()) + " commands byte-identical" +
                (diff.empty() ? "" : " (differs: " + diff + ")")};
}

} // namespace

int main() {
    const std::vector<std::function<Outcome()>> criteria = {criterion1, criterion2, criterion3, criterion4,
                                                            criterion5, criterion6, criterion7, criterion8,
                                                            criterion9, criterion10};
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("criterion %zu: %s  %s\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
