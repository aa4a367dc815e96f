#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <gtest/gtest.h>
#include <yaml-cpp/yaml.h>

namespace {

struct CliRun {
    int code = -1;
    std::string out;
    YAML::Node doc() const { return YAML::Load(out); }
};

CliRun run(const std::string& args) {
    const std::string cmd = std::string(MVRANK_CLI_PATH) + " " + args + " 2>cli_stderr.txt";
    CliRun r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string config(const char* name) { return std::string(MVRANK_SAMPLE_CONFIGS) + "/" + name; }

} // namespace

TEST(CliValidatePhi, StandardPasses) {
    const CliRun r = run("validate-phi --phi '{p_combination: {arity: 2, p: 2}}' --require-5 --samples 20000");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.doc()["result"].as<std::string>(), "pass");
}

TEST(CliValidatePhi, MaxFailsConditionFiveWithWitness) {
    const CliRun r = run("validate-phi --phi '{max_combination: {arity: 2}}' --require-5 --samples 20000");
    EXPECT_EQ(r.code, 1);
    const YAML::Node five = r.doc()["report"]["conditions"]["5"];
    EXPECT_EQ(five["status"].as<std::string>(), "fail");
    EXPECT_EQ(five["witness"][0][0].as<double>(), 1.0);
    EXPECT_EQ(five["witness"][0][1].as<double>(), 1.0);
}

TEST(CliValidatePhi, L1PassesWithoutRequireFive) {
    const CliRun r = run("validate-phi --phi '{l1_combination: {arity: 2}}' --samples 20000");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.doc()["report"]["conditions"]["5"]["status"].as<std::string>(), "fail");
}

TEST(CliValidatePhi, ConfigFileSuppliesPhi) {
    const CliRun r = run("--config " + config("standard_pair.yaml") + " validate-phi --samples 5000");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.doc()["seed"].as<int>(), 42);
}

TEST(CliValidatePhi, MalformedSpecIsUsageError) {
    EXPECT_EQ(run("validate-phi --phi '{p_combination: {arity: 2'").code, 2);
    EXPECT_EQ(run("validate-phi --phi '{no_such_family: {}}'").code, 2);
    EXPECT_EQ(run("validate-phi").code, 2);
}

TEST(CliErrors, UnknownCommandOrFlag) {
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("counterexample --bogus 3").code, 2);
    EXPECT_EQ(run("--config /nonexistent.yaml validate-phi").code, 2);
}

TEST(CliCheckNorm, TaxicabFailsStrictAndInner) {
    EXPECT_EQ(run("check-norm --norm '{p_norm: {dim: 2, p: 1}}' --require-strict").code, 1);
    EXPECT_EQ(run("check-norm --norm '{p_norm: {dim: 2, p: 1}}' --require-inner").code, 1);
    EXPECT_EQ(run("check-norm --norm '{p_norm: {dim: 2, p: 1}}'").code, 0);
    EXPECT_EQ(run("check-norm --norm '{euclidean: {dim: 3}}' --require-strict --require-inner").code, 0);
}

TEST(CliCounterexample, DefaultPipelinePassesAndWritesSections) {
    const CliRun r = run("counterexample --sections cli_sections.csv");
    EXPECT_EQ(r.code, 0);
    const YAML::Node d = r.doc();
    EXPECT_EQ(d["result"].as<std::string>(), "pass");
    EXPECT_TRUE(d["diagonal_euclidean"]["pass"].as<bool>());
    EXPECT_TRUE(d["null_set"]["pass"].as<bool>());
    EXPECT_GE(d["great_circles"]["min_zeros"].as<int>(), 8);
    EXPECT_EQ(d["flat_obstruction"]["norm1"]["fraction_not_ellipse"].as<double>(), 1.0);
    EXPECT_EQ(d["euclidean_rank_factors"].as<int>(), 1);
    const std::string csv = slurp("cli_sections.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "plane_id,angle,radius_norm1,radius_norm2,radius_euclidean");
}

TEST(CliCounterexample, ExitCodeFollowsConvexityAtOverriddenN) {
    const CliRun r = run("counterexample --n 1 --circles 50 --planes 20 --sections cli_sections_n1.csv");
    const YAML::Node d = r.doc();
    EXPECT_EQ(d["n_source"].as<std::string>(), "override");
    const bool convex = d["strict_convexity"]["pass"].as<bool>();
    EXPECT_EQ(r.code == 0, convex && d["result"].as<std::string>() == "pass");
}

TEST(CliCounterexample, ThousandPlanesAllFail) {
    const CliRun r = run("counterexample --planes 1000 --circles 10 --sections cli_sections_1000.csv");
    EXPECT_EQ(r.code, 0);
    const YAML::Node d = r.doc();
    EXPECT_EQ(d["flat_obstruction"]["norm1"]["planes"].as<int>(), 1000);
    EXPECT_EQ(d["flat_obstruction"]["norm1"]["fraction_not_ellipse"].as<double>(), 1.0);
    EXPECT_EQ(d["flat_obstruction"]["norm2"]["fraction_not_ellipse"].as<double>(), 1.0);
}

TEST(CliProbeRank, EuclideanSpaceReachesThree) {
    const CliRun r = run("probe-rank --space '{leaf: {euclidean: {dim: 3}}}' --k-max 3");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.doc()["rank_estimate"].as<int>(), 3);
}

TEST(CliProbeRank, PerturbedLeafHasObstructionCertificate) {
    const CliRun r = run("probe-rank --space '{leaf: {perturbed_spherical: {factor: 1}}}' --k-max 2 --obstruction");
    EXPECT_EQ(r.code, 0);
    const YAML::Node d = r.doc();
    EXPECT_EQ(d["obstruction"]["euclidean_rank_certificate"].as<int>(), 1);
}

TEST(CliProbeRank, CounterexampleProductFromConfig) {
    const CliRun r = run("--config " + config("counterexample.yaml") + " probe-rank --k-max 3");
    EXPECT_EQ(r.code, 0);
    const YAML::Node d = r.doc();
    EXPECT_EQ(d["rank_estimate"].as<int>(), 3);
}

TEST(CliDecompose, Scenarios) {
    EXPECT_EQ(run("decompose --scenario diagonal").code, 0);
    EXPECT_EQ(run("decompose --scenario coordinate_split").code, 0);
    EXPECT_EQ(run("decompose --scenario generalized_p4").code, 0);
    const CliRun shear = run("decompose --scenario shear");
    EXPECT_EQ(shear.code, 1);
    EXPECT_EQ(shear.doc()["refused"].as<std::string>(), "not_isometric");
    const CliRun mx = run("decompose --scenario generalized_max");
    EXPECT_EQ(mx.code, 1);
    EXPECT_EQ(mx.doc()["refused"].as<std::string>(), "not_strictly_convex");
    EXPECT_EQ(run("decompose --scenario nonsense").code, 2);
}

TEST(CliLength, HelixConverges) {
    const CliRun r = run("length --scenario helix");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "refinement,length,target,gap");
}

TEST(CliLength, CurveFile) {
    {
        std::ofstream f("cli_curve.txt");
        f << "# square path\n0 0\n1 0\n1 1\n";
    }
    const CliRun r = run("length --curve cli_curve.txt --space '{leaf: {p_norm: {dim: 2, p: 1}}}' --refinement 8 --levels 2");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("8,2\n"), std::string::npos) << r.out;
}

TEST(CliOutput, OutFlagWritesFile) {
    const CliRun r = run("--out cli_report.yaml decompose --scenario axis");
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_EQ(YAML::LoadFile("cli_report.yaml")["command"].as<std::string>(), "decompose");
}

TEST(CliDeterminism, SameSeedSameBytes) {
    for (const char* args : {"validate-phi --phi '{p_combination: {arity: 2, p: 3}}' --samples 5000",
                             "--seed 7 check-norm --norm '{p_norm: {dim: 3, p: 1.5}}'",
                             "--seed 7 probe-rank --space '{leaf: {p_norm: {dim: 2, p: 1}}}' --k-max 2 --restarts 2"}) {
        const CliRun a = run(args), b = run(args);
        EXPECT_EQ(a.code, b.code);
        EXPECT_EQ(a.out, b.out) << args;
    }
}
