#ifndef MVRANK_IO_REPORTS_HPP
#define MVRANK_IO_REPORTS_HPP

#include <ostream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "mvrank/counterexample.hpp"
#include "mvrank/curves.hpp"
#include "mvrank/decomposition.hpp"
#include "mvrank/distortion.hpp"
#include "mvrank/io/yaml.hpp"
#include "mvrank/norm_checks.hpp"
#include "mvrank/phi_validation.hpp"
#include "mvrank/product_space.hpp"
#include "mvrank/sections.hpp"

/// Stable-field structured text for every report type.
namespace mvrank::io {

inline YAML::Node vectors(const std::vector<Vector>& vs) {
    YAML::Node n(YAML::NodeType::Sequence);
    for (const auto& v : vs) n.push_back(reals(v));
    return n;
}

inline YAML::Node to_node(const NormAxiomReport& r) {
    YAML::Node n;
    n["positivity_ok"] = r.positivity_ok;
    n["homogeneity_ok"] = r.homogeneity_ok;
    n["triangle_ok"] = r.triangle_ok;
    n["symmetry_ok"] = r.symmetry_ok;
    n["worst_violation"] = real(r.worst_violation);
    if (r.witness) {
        n["failed_check"] = r.failed_check;
        n["witness"] = vectors({r.witness->first, r.witness->second});
    }
    return n;
}

inline YAML::Node to_node(const ConvexityResult& r) {
    YAML::Node n;
    n["strictly_convex"] = r.strictly_convex;
    n["margin"] = real(r.margin);
    if (r.witness) n["witness"] = vectors({r.witness->first, r.witness->second});
    return n;
}

inline YAML::Node to_node(const ParallelogramResult& r) {
    YAML::Node n;
    n["holds"] = r.holds;
    n["worst_violation"] = real(r.worst_violation);
    if (r.witness) n["witness"] = vectors({r.witness->first, r.witness->second});
    return n;
}

inline YAML::Node to_node(const ConditionOutcome& o) {
    YAML::Node n;
    n["status"] = to_string(o.status);
    n["samples"] = o.samples;
    n["worst_violation"] = real(o.worst_violation);
    if (o.failed()) {
        n["witness"] = vectors(o.witness);
        if (!o.witness_scalars.empty()) n["witness_scalars"] = reals(o.witness_scalars);
    }
    return n;
}

inline YAML::Node to_node(const PhiValidationReport& r) {
    YAML::Node n;
    n["phi"] = emit_phi(r.phi);
    YAML::Node c;
    for (Condition k : all_conditions) c[to_string(k)] = to_node(r[k]);
    n["conditions"] = c;
    n["worst_violation"] = real(r.worst_violation());
    n["summary"] = r.summary_line();
    return n;
}

inline YAML::Node to_node(const MetricAxiomReport& r) {
    YAML::Node n;
    n["identity_ok"] = r.identity_ok;
    n["symmetry_ok"] = r.symmetry_ok;
    n["triangle_ok"] = r.triangle_ok;
    n["worst_violation"] = real(r.worst_violation);
    n["triples_checked"] = r.triples_checked;
    if (r.witness) {
        n["failed_check"] = r.failed_check;
        n["witness"] = vectors({(*r.witness)[0], (*r.witness)[1], (*r.witness)[2]});
    }
    return n;
}

inline YAML::Node to_node(const ObstructionReport& r) {
    YAML::Node n;
    n["planes"] = r.planes;
    n["not_ellipse"] = r.not_ellipse;
    n["fraction_not_ellipse"] = real(r.fraction_not_ellipse);
    n["min_residual"] = real(r.min_residual);
    n["max_residual"] = real(r.max_residual);
    n["baseline_residual"] = real(r.baseline_residual);
    n["threshold"] = real(r.threshold);
    n["baseline_ok"] = r.baseline_ok;
    n["separation"] = real(r.separation);
    return n;
}

inline YAML::Node to_node(const DecompositionResult& r) {
    YAML::Node n;
    YAML::Node res;
    res["isometry"] = real(r.isometry);
    res["lemma1"] = real(r.lemma1);
    res["lemma2"] = real(r.lemma2);
    res["lemma3"] = real(r.lemma3);
    res["lemma4"] = real(r.lemma4);
    res["identity"] = real(r.identity);
    res["lemma1_prime"] = real(r.lemma1_prime);
    if (r.analytic) res["recovered_vs_analytic"] = real(*r.analytic);
    n["residuals"] = res;
    n["base_points"] = r.base_points.size();
    n["directions"] = r.directions.size();
    n["ok"] = r.ok();
    YAML::Node viol(YAML::NodeType::Sequence);
    for (const auto& v : r.violations) {
        YAML::Node w;
        w["lemma"] = v.lemma;
        w["factor"] = v.factor;
        w["base"] = reals(v.base);
        w["direction"] = reals(v.direction);
        w["residual"] = real(v.residual);
        viol.push_back(w);
    }
    n["violations"] = viol;
    return n;
}

inline YAML::Node to_node(const DistortionResult& r) {
    YAML::Node n;
    n["best"] = real(r.best);
    n["best_start"] = r.best_start;
    n["converged"] = r.converged;
    n["history"] = reals(r.history);
    YAML::Node runs(YAML::NodeType::Sequence);
    for (const auto& x : r.runs) {
        YAML::Node w;
        w["start"] = x.start;
        w["initial"] = real(x.initial);
        w["final"] = real(x.final);
        w["converged"] = x.converged;
        runs.push_back(w);
    }
    n["runs"] = runs;
    return n;
}

inline YAML::Node to_node(const ProductLengthCheck& r) {
    YAML::Node n;
    n["refinement"] = r.refinement;
    n["length"] = real(r.length);
    n["target"] = real(r.target);
    n["gap"] = real(r.gap);
    n["component_lengths"] = reals(r.component_lengths);
    return n;
}

inline void write_section_csv(std::ostream& os, const std::vector<counterexample::SectionRow>& rows) {
    os << "plane_id,angle,radius_norm1,radius_norm2,radius_euclidean\n";
    for (const auto& r : rows)
        os << r.plane_id << ',' << format_real(r.angle) << ',' << format_real(r.radius_norm1) << ','
           << format_real(r.radius_norm2) << ',' << format_real(r.radius_euclidean) << '\n';
}

} // namespace mvrank::io

#endif
