#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>

#include <gtest/gtest.h>

#include "mvrank.hpp"
#include "mvrank/io/reports.hpp"
#include "mvrank/io/yaml.hpp"
#include "property.hpp"

using namespace mvrank;
using mvrank::testing::for_all;
using mvrank::testing::gen_norm;
using mvrank::testing::gen_product;

TEST(FormatReal, RoundTripsExactly) {
    for_all(40, 1000, [](Rng& r) { return log_uniform(r, 1e-300, 1e300) * (uniform(r, 0, 1) < 0.5 ? -1 : 1); },
            [](double x) {
                const std::string s = io::format_real(x);
                if (std::strtod(s.c_str(), nullptr) == x) return ::testing::AssertionSuccess();
                return ::testing::AssertionFailure() << s;
            });
}

TEST(FormatReal, NonFinite) {
    EXPECT_EQ(io::format_real(std::numeric_limits<double>::infinity()), ".inf");
    EXPECT_EQ(io::format_real(-std::numeric_limits<double>::infinity()), "-.inf");
    EXPECT_EQ(io::format_real(std::nan("")), ".nan");
    EXPECT_EQ(io::format_real(0.5), "0.5");
}

TEST(ParseNorm, Families) {
    EXPECT_EQ(io::parse_norm(io::load_text("{euclidean: {dim: 3}}")), NormSpec::euclidean(3));
    EXPECT_EQ(io::parse_norm(io::load_text("{p_norm: {dim: 2, p: 1}}")), NormSpec::p_norm(2, 1.0));
    EXPECT_EQ(io::parse_norm(io::load_text("{p_norm: {dim: 2, p: inf}}")),
              NormSpec::p_norm(2, std::numeric_limits<double>::infinity()));
    EXPECT_EQ(io::parse_norm(io::load_text("{weighted_euclidean: {weights: [1, 2]}}")),
              NormSpec::weighted_euclidean({1.0, 2.0}));
    EXPECT_EQ(io::parse_norm(io::load_text("{perturbed_spherical: {factor: 2}}")), NormSpec::perturbed_spherical(2, 1));
}

TEST(ParseNorm, ErrorsAreConfigErrors) {
    for (const char* text : {"{taxicab: {dim: 2}}", "{euclidean: {}}", "{euclidean: {dim: two}}",
                             "{euclidean: {dim: 2, p: 1}}", "{p_norm: {dim: 2, p: 0.5}}", "[1, 2]",
                             "{euclidean: {dim: 2}, p_norm: {dim: 2, p: 1}}", "{weighted_euclidean: {weights: 3}}"})
        EXPECT_THROW(io::parse_norm(io::load_text(text)), ConfigError) << text;
}

TEST(LoadText, MalformedYamlIsConfigError) {
    EXPECT_THROW(io::load_text("{euclidean: [dim: 2"), ConfigError);
    EXPECT_THROW(io::load_file("/nonexistent/config.yaml"), ConfigError);
}

TEST(ParsePhi, FamiliesAndDefaults) {
    EXPECT_EQ(io::parse_phi(io::load_text("{p_combination: {p: 2}}")), PhiSpec::p_combination(2, 2.0));
    EXPECT_EQ(io::parse_phi(io::load_text("{max_combination: {arity: 3}}")), PhiSpec::max_combination(3));
    EXPECT_EQ(io::parse_phi(io::load_text("{square_first: {}}")), PhiSpec::square_first(1));
    EXPECT_EQ(io::parse_phi(io::load_text("{indicator_split: ~}")), PhiSpec::indicator_split());
    EXPECT_EQ(io::parse_phi(io::load_text("{constant: {value: 1}}")), PhiSpec::constant(2, 1.0));
}

TEST(ParsePhi, Errors) {
    for (const char* text : {"{p_combination: {}}", "{abs_difference: {arity: 3}}", "{max_combination: {arity: 0}}",
                             "{norm: {}}", "{l1_combination: {weights: [1]}}"})
        EXPECT_THROW(io::parse_phi(io::load_text(text)), ConfigError) << text;
}

TEST(ParseSpace, ProductArityDefaultsToChildCount) {
    const SpaceHandle s = io::parse_space(io::load_text(
        "{product: {phi: {max_combination: {}}, children: [{leaf: {euclidean: {dim: 1}}}, "
        "{leaf: {euclidean: {dim: 1}}}, {leaf: {euclidean: {dim: 2}}}]}}"));
    EXPECT_EQ(s.phi(), PhiSpec::max_combination(3));
    EXPECT_EQ(s.point_dim(), 4);
}

TEST(ParseSpace, StandardProduct) {
    const SpaceHandle s = io::parse_space(io::load_text(
        "{standard_product: {children: [{leaf: {perturbed_spherical: {factor: 1}}}, "
        "{leaf: {perturbed_spherical: {factor: 2}}}]}}"));
    EXPECT_EQ(s.phi(), PhiSpec::p_combination(2, 2.0));
    EXPECT_EQ(s.point_dim(), 6);
}

TEST(ParseSpace, Errors) {
    for (const char* text : {"{product: {children: [{leaf: {euclidean: {dim: 1}}}]}}",
                             "{product: {phi: {l1_combination: {arity: 3}}, children: [{leaf: {euclidean: {dim: 1}}}]}}",
                             "{standard_product: {children: [{leaf: {euclidean: {dim: 1}}}]}}",
                             "{tree: {}}", "{product: {phi: {l1_combination: {}}, children: []}}"})
        EXPECT_THROW(io::parse_space(io::load_text(text)), ConfigError) << text;
}

TEST(Emit, NormRoundTrip) {
    for_all(41, 200, gen_norm, [](const NormSpec& s) {
        const NormSpec back = io::parse_norm(io::load_text(io::to_document(io::emit_norm(s))));
        if (back == s) return ::testing::AssertionSuccess();
        return ::testing::AssertionFailure() << s.describe() << " -> " << back.describe();
    });
}

TEST(Emit, SpaceRoundTrip) {
    for_all(42, 100, gen_product, [](const SpaceHandle& s) {
        const SpaceHandle back = io::parse_space(io::load_text(io::to_document(io::emit_space(s))));
        if (back.describe() == s.describe()) return ::testing::AssertionSuccess();
        return ::testing::AssertionFailure() << s.describe() << " -> " << back.describe();
    });
}

TEST(Emit, PhiRoundTripForBuiltins) {
    for (int arity : {2, 3})
        for (const PhiSpec& p : builtin_phi_families(arity))
            EXPECT_EQ(io::parse_phi(io::load_text(io::to_document(io::emit_phi(p)))), p) << p.describe();
}

TEST(Reports, ValidationReportHasStableFields) {
    const auto rep = validate_phi(PhiSpec::max_combination(2), PhiSampler{1000, 42, 1e-9});
    const YAML::Node n = io::to_node(rep);
    EXPECT_EQ(n["conditions"]["A"]["status"].as<std::string>(), "pass");
    EXPECT_EQ(n["conditions"]["5"]["status"].as<std::string>(), "fail");
    EXPECT_TRUE(n["conditions"]["5"]["witness"].IsSequence());
    EXPECT_TRUE(n["summary"]);
}

TEST(Reports, SectionCsvHeaderAndRows) {
    std::ostringstream os;
    io::write_section_csv(os, counterexample::section_table(1, 16));
    const std::string s = os.str();
    EXPECT_EQ(s.substr(0, s.find('\n')), "plane_id,angle,radius_norm1,radius_norm2,radius_euclidean");
    EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 1 + 4 * 16);
}
