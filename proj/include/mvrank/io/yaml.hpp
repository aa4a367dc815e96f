#ifndef MVRANK_IO_YAML_HPP
#define MVRANK_IO_YAML_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "mvrank/errors.hpp"
#include "mvrank/norms.hpp"
#include "mvrank/phi.hpp"
#include "mvrank/product_space.hpp"
#include "mvrank/vector.hpp"

/**
 * @file yaml.hpp
 *
 * Structured text configuration. A family is a single-key map whose key is
 * the family name and whose value holds the parameters:
 *
 *   norm:  {p_norm: {dim: 2, p: 1}}
 *   phi:   {p_combination: {arity: 2, p: 2}}
 *   space: {product: {phi: {max_combination: {arity: 2}},
 *                     children: [{leaf: {euclidean: {dim: 1}}}, ...]}}
 *
 * Reals are written with 17 significant digits.
 */

namespace mvrank::io {

inline std::string format_real(double x) {
    if (std::isnan(x)) return ".nan";
    if (std::isinf(x)) return x > 0 ? ".inf" : "-.inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline YAML::Node real(double x) { return YAML::Node(format_real(x)); }

inline YAML::Node reals(const Vector& v) {
    YAML::Node n(YAML::NodeType::Sequence);
    for (Eigen::Index i = 0; i < v.size(); ++i) n.push_back(format_real(v[i]));
    n.SetStyle(YAML::EmitterStyle::Flow);
    return n;
}

inline YAML::Node reals(const std::vector<double>& v) {
    YAML::Node n(YAML::NodeType::Sequence);
    for (double x : v) n.push_back(format_real(x));
    n.SetStyle(YAML::EmitterStyle::Flow);
    return n;
}

inline std::string to_document(const YAML::Node& n) {
    YAML::Emitter out;
    out << n;
    return std::string(out.c_str()) + "\n";
}

inline YAML::Node load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return YAML::Load(in);
    } catch (const YAML::Exception& e) {
        throw ConfigError("malformed config '" + path + "': " + e.what());
    }
}

inline YAML::Node load_text(const std::string& text) {
    try {
        return YAML::Load(text);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed config text: ") + e.what());
    }
}

namespace detail {

inline std::pair<std::string, YAML::Node> family_of(const YAML::Node& n, const char* what) {
    if (!n || !n.IsMap() || n.size() != 1)
        throw ConfigError(std::string(what) + ": expected a single-key map {family: {params}}");
    const auto it = n.begin();
    YAML::Node params = it->second;
    if (params.IsNull()) params = YAML::Node(YAML::NodeType::Map);
    if (!params.IsMap()) throw ConfigError(std::string(what) + ": parameters must be a map");
    return {it->first.as<std::string>(), params};
}

inline void only_keys(const YAML::Node& params, std::set<std::string> allowed, const std::string& what) {
    for (const auto& kv : params) {
        const std::string k = kv.first.as<std::string>();
        if (!allowed.count(k)) throw ConfigError(what + ": unknown parameter '" + k + "'");
    }
}

inline double get_real(const YAML::Node& params, const char* key, const std::string& what) {
    const YAML::Node v = params[key];
    if (!v) throw ConfigError(what + ": missing parameter '" + key + "'");
    const std::string s = v.as<std::string>();
    if (s == "inf" || s == ".inf" || s == "infinity" || s == "Infinity") return std::numeric_limits<double>::infinity();
    try {
        return v.as<double>();
    } catch (const YAML::Exception&) {
        throw ConfigError(what + ": parameter '" + key + "' is not a real number");
    }
}

inline long long get_int(const YAML::Node& params, const char* key, const std::string& what,
                         std::optional<long long> fallback = std::nullopt) {
    const YAML::Node v = params[key];
    if (!v) {
        if (fallback) return *fallback;
        throw ConfigError(what + ": missing parameter '" + key + "'");
    }
    try {
        return v.as<long long>();
    } catch (const YAML::Exception&) {
        throw ConfigError(what + ": parameter '" + key + "' is not an integer");
    }
}

inline std::vector<double> get_reals(const YAML::Node& params, const char* key, const std::string& what) {
    const YAML::Node v = params[key];
    if (!v || !v.IsSequence()) throw ConfigError(what + ": parameter '" + key + "' must be a list");
    std::vector<double> out;
    try {
        for (const auto& x : v) out.push_back(x.as<double>());
    } catch (const YAML::Exception&) {
        throw ConfigError(what + ": parameter '" + key + "' must hold real numbers");
    }
    return out;
}

/// Library validation errors surface as configuration errors.
template <class F>
auto guarded(const std::string& what, F&& f) {
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(what + ": " + e.what());
    }
}

} // namespace detail

inline NormSpec parse_norm(const YAML::Node& n) {
    auto [fam, p] = detail::family_of(n, "norm");
    const std::string what = "norm " + fam;
    return detail::guarded(what, [&, &fam = fam, &p = p]() -> NormSpec {
        if (fam == "euclidean") {
            detail::only_keys(p, {"dim"}, what);
            return NormSpec::euclidean(static_cast<int>(detail::get_int(p, "dim", what)));
        }
        if (fam == "p_norm") {
            detail::only_keys(p, {"dim", "p"}, what);
            return NormSpec::p_norm(static_cast<int>(detail::get_int(p, "dim", what)), detail::get_real(p, "p", what));
        }
        if (fam == "weighted_euclidean") {
            detail::only_keys(p, {"weights"}, what);
            return NormSpec::weighted_euclidean(detail::get_reals(p, "weights", what));
        }
        if (fam == "perturbed_spherical") {
            detail::only_keys(p, {"factor", "n"}, what);
            return NormSpec::perturbed_spherical(static_cast<int>(detail::get_int(p, "factor", what)),
                                                 detail::get_int(p, "n", what, 1));
        }
        throw ConfigError("unknown norm family '" + fam + "'");
    });
}

inline PhiSpec parse_phi(const YAML::Node& n) {
    auto [fam, p] = detail::family_of(n, "phi");
    const std::string what = "phi " + fam;
    return detail::guarded(what, [&, &fam = fam, &p = p]() -> PhiSpec {
        auto arity = [&](long long dflt) { return static_cast<int>(detail::get_int(p, "arity", what, dflt)); };
        if (fam == "p_combination") {
            detail::only_keys(p, {"arity", "p"}, what);
            return PhiSpec::p_combination(arity(2), detail::get_real(p, "p", what));
        }
        if (fam == "weighted_euclidean") {
            detail::only_keys(p, {"weights"}, what);
            return PhiSpec::weighted_euclidean(detail::get_reals(p, "weights", what));
        }
        if (fam == "max_combination") {
            detail::only_keys(p, {"arity"}, what);
            return PhiSpec::max_combination(arity(2));
        }
        if (fam == "l1_combination") {
            detail::only_keys(p, {"arity"}, what);
            return PhiSpec::l1_combination(arity(2));
        }
        if (fam == "constant") {
            detail::only_keys(p, {"arity", "value"}, what);
            return PhiSpec::constant(arity(2), detail::get_real(p, "value", what));
        }
        if (fam == "indicator_split") {
            detail::only_keys(p, {"arity"}, what);
            if (arity(2) != 2) throw ConfigError(what + ": arity must be 2");
            return PhiSpec::indicator_split();
        }
        if (fam == "square_first") {
            detail::only_keys(p, {"arity"}, what);
            return PhiSpec::square_first(arity(1));
        }
        if (fam == "sqrt_first") {
            detail::only_keys(p, {"arity"}, what);
            return PhiSpec::sqrt_first(arity(1));
        }
        if (fam == "abs_difference") {
            detail::only_keys(p, {"arity"}, what);
            if (arity(2) != 2) throw ConfigError(what + ": arity must be 2");
            return PhiSpec::abs_difference();
        }
        throw ConfigError("unknown phi family '" + fam + "'");
    });
}

inline SpaceHandle parse_space(const YAML::Node& n) {
    auto [kind, p] = detail::family_of(n, "space");
    if (kind == "leaf") return SpaceHandle::leaf(parse_norm(p));
    if (kind == "product" || kind == "standard_product") {
        const YAML::Node ch = p["children"];
        if (!ch || !ch.IsSequence() || ch.size() == 0)
            throw ConfigError("space " + kind + ": 'children' must be a non-empty list");
        std::vector<SpaceHandle> children;
        for (const auto& c : ch) children.push_back(parse_space(c));
        if (kind == "standard_product") {
            detail::only_keys(p, {"children"}, "space standard_product");
            return detail::guarded("space standard_product", [&] { return standard_product(std::move(children)); });
        }
        detail::only_keys(p, {"children", "phi"}, "space product");
        if (!p["phi"]) throw ConfigError("space product: missing 'phi'");
        YAML::Node phi_node = p["phi"];
        // Arity defaults to the number of children for a product's phi.
        if (phi_node.IsMap() && phi_node.size() == 1) {
            YAML::Node params = phi_node.begin()->second;
            if (params.IsNull() || (params.IsMap() && !params["arity"] && !params["weights"])) {
                YAML::Node copy = YAML::Clone(phi_node);
                YAML::Node cp = copy.begin()->second;
                if (cp.IsNull()) cp = YAML::Node(YAML::NodeType::Map);
                cp["arity"] = children.size();
                copy[copy.begin()->first.as<std::string>()] = cp;
                phi_node = copy;
            }
        }
        const PhiSpec phi = parse_phi(phi_node);
        return detail::guarded("space product", [&] { return SpaceHandle::product(std::move(children), phi); });
    }
    throw ConfigError("unknown space kind '" + kind + "'");
}

inline YAML::Node emit_norm(const NormSpec& s) {
    YAML::Node params(YAML::NodeType::Map);
    switch (s.family()) {
    case NormFamily::euclidean: params["dim"] = s.dim(); break;
    case NormFamily::p_norm:
        params["dim"] = s.dim();
        params["p"] = format_real(s.p());
        break;
    case NormFamily::weighted_euclidean: params["weights"] = reals(s.weights()); break;
    case NormFamily::perturbed_spherical:
        params["factor"] = s.factor();
        params["n"] = s.n();
        break;
    }
    YAML::Node n;
    n[to_string(s.family())] = params;
    return n;
}

inline YAML::Node emit_phi(const PhiSpec& s) {
    YAML::Node params(YAML::NodeType::Map);
    if (s.family() == PhiFamily::weighted_euclidean) {
        params["weights"] = reals(s.weights());
    } else {
        params["arity"] = s.arity();
        if (s.family() == PhiFamily::p_combination) params["p"] = format_real(s.p());
        if (s.family() == PhiFamily::constant) params["value"] = format_real(s.value());
    }
    YAML::Node n;
    n[to_string(s.family())] = params;
    return n;
}

inline YAML::Node emit_space(const SpaceHandle& s) {
    YAML::Node n;
    if (s.is_leaf()) {
        n["leaf"] = emit_norm(s.norm());
        return n;
    }
    YAML::Node p;
    p["phi"] = emit_phi(s.phi());
    YAML::Node ch(YAML::NodeType::Sequence);
    for (const auto& c : s.children()) ch.push_back(emit_space(c));
    p["children"] = ch;
    n["product"] = p;
    return n;
}

} // namespace mvrank::io

#endif
