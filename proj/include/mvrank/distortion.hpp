#ifndef MVRANK_DISTORTION_HPP
#define MVRANK_DISTORTION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "mvrank/errors.hpp"
#include "mvrank/product_space.hpp"
#include "mvrank/random.hpp"
#include "mvrank/vector.hpp"

namespace mvrank {

struct DistortionOptions {
    int restarts = 4;
    std::uint64_t seed = default_seed;
    /// Coordinate descent stops once the step falls below this.
    double min_step = 1e-9;
    int max_sweeps = 400;
    /// Run the analytic diagonal and coordinate-split starts when available.
    bool analytic_init = true;
};

struct DistortionRun {
    std::string start;
    double initial = 0.0;
    double final = 0.0;
    bool converged = false;
};

struct DistortionResult {
    double best = std::numeric_limits<double>::infinity();
    std::string best_start;
    /// Best-so-far after each run, in run order; nonincreasing.
    std::vector<double> history;
    std::vector<DistortionRun> runs;
    /// The run that produced `best` stopped on min_step rather than max_sweeps.
    bool converged = false;
    std::vector<Vector> best_images;
};

/// The grid_side^k lattice {0, 1/(g-1), ..., 1}^k.
inline std::vector<Vector> source_lattice(int k, int grid_side) {
    std::vector<Vector> out;
    std::size_t total = 1;
    for (int i = 0; i < k; ++i) total *= static_cast<std::size_t>(grid_side);
    for (std::size_t idx = 0; idx < total; ++idx) {
        Vector p(k);
        std::size_t r = idx;
        for (int i = 0; i < k; ++i) {
            p[i] = static_cast<double>(r % static_cast<std::size_t>(grid_side)) / (grid_side - 1);
            r /= static_cast<std::size_t>(grid_side);
        }
        out.push_back(p);
    }
    return out;
}

namespace detail {

struct DistortionState {
    const SpaceHandle& space;
    const std::vector<Vector>& src;
    std::vector<Vector> img;
    std::vector<double> src_d;  // upper triangle, row-major
    std::vector<double> ratio;

    std::size_t idx(std::size_t i, std::size_t j) const {
        if (i > j) std::swap(i, j);
        const std::size_t n = src.size();
        return i * n - i * (i + 1) / 2 + (j - i - 1);
    }

    DistortionState(const SpaceHandle& s, const std::vector<Vector>& source, std::vector<Vector> images)
        : space(s), src(source), img(std::move(images)) {
        const std::size_t n = src.size();
        src_d.resize(n * (n - 1) / 2);
        ratio.resize(src_d.size());
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                src_d[idx(i, j)] = (src[j] - src[i]).norm();
                ratio[idx(i, j)] = distance(space, img[i], img[j]) / src_d[idx(i, j)];
            }
    }

    static double of(const std::vector<double>& r) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (double x : r) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        if (!(lo > 0.0)) return std::numeric_limits<double>::infinity();
        return hi / lo;
    }

    double value() const { return of(ratio); }

    /// Distortion after moving point i to p; the updated ratios are left in scratch.
    double trial(std::size_t i, const Vector& p, std::vector<double>& scratch) const {
        scratch = ratio;
        for (std::size_t j = 0; j < src.size(); ++j)
            if (j != i) scratch[idx(i, j)] = distance(space, p, img[j]) / src_d[idx(i, j)];
        return of(scratch);
    }
};

inline DistortionRun descend(DistortionState& st, const std::string& name, const DistortionOptions& opts) {
    DistortionRun run{name, st.value(), st.value(), false};
    double scale = 0.0;
    for (const auto& v : st.img) scale = std::max(scale, v.cwiseAbs().maxCoeff());
    double step = 0.1 * std::max(scale, 1.0);
    std::vector<double> scratch;
    double cur = run.initial;
    int sweeps = 0;
    // Distortion is bounded below by 1, so an exact start needs no descent.
    while (cur > 1.0 && step >= opts.min_step && sweeps < opts.max_sweeps) {
        ++sweeps;
        bool improved = false;
        for (std::size_t i = 0; i < st.img.size(); ++i)
            for (Eigen::Index c = 0; c < st.img[i].size(); ++c)
                for (double sgn : {1.0, -1.0}) {
                    Vector p = st.img[i];
                    p[c] += sgn * step;
                    const double val = st.trial(i, p, scratch);
                    if (val < cur) {
                        cur = val;
                        st.img[i] = p;
                        st.ratio.swap(scratch);
                        improved = true;
                    }
                }
        if (!improved) step *= 0.5;
    }
    run.final = cur;
    run.converged = cur <= 1.0 || step < opts.min_step;
    return run;
}

/// Each leaf of dimension >= k receives p in its first k coordinates.
inline std::optional<std::vector<Vector>> diagonal_images(const SpaceHandle& space, const std::vector<Vector>& src,
                                                          int k) {
    const auto shape = space.shape();
    for (int d : shape)
        if (d < k) return std::nullopt;
    std::vector<Vector> out;
    for (const Vector& p : src) {
        Vector y = Vector::Zero(space.point_dim());
        int off = 0;
        for (int d : shape) {
            y.segment(off, k) = p;
            off += d;
        }
        out.push_back(y);
    }
    return out;
}

/// Coordinates of p distributed over consecutive leaf slots.
inline std::optional<std::vector<Vector>> split_images(const SpaceHandle& space, const std::vector<Vector>& src,
                                                       int k) {
    if (space.point_dim() < k) return std::nullopt;
    std::vector<Vector> out;
    for (const Vector& p : src) {
        Vector y = Vector::Zero(space.point_dim());
        y.head(k) = p;
        out.push_back(y);
    }
    return out;
}

} // namespace detail

/**
 * Heuristic minimum distortion of a grid_side^k lattice of E^k mapped into
 * `space`: the ratio max/min of d(f(p), f(q)) / |p - q| over all lattice
 * pairs, minimized by coordinate descent with step halving over analytic and
 * seeded random starts. The result is evidence of an embedding, never a
 * certificate of its absence.
 */
inline DistortionResult distortion_probe(const SpaceHandle& space, int k, int grid_side,
                                         const DistortionOptions& opts = {}) {
    if (k < 1) throw InvalidSpec("distortion_probe: k must be >= 1");
    if (grid_side < 3) throw InvalidSpec("distortion_probe: grid_side must be >= 3");
    if (opts.restarts < 0) throw InvalidSpec("distortion_probe: restarts must be >= 0");
    const std::vector<Vector> src = source_lattice(k, grid_side);
    DistortionResult res;

    auto run = [&](std::vector<Vector> init, const std::string& name) {
        detail::DistortionState st(space, src, std::move(init));
        const DistortionRun r = detail::descend(st, name, opts);
        res.runs.push_back(r);
        if (r.final < res.best) {
            res.best = r.final;
            res.best_start = name;
            res.converged = r.converged;
            res.best_images = st.img;
        }
        res.history.push_back(res.best);
    };

    if (opts.analytic_init) {
        if (auto d = detail::diagonal_images(space, src, k)) run(std::move(*d), "diagonal");
        if (auto s = detail::split_images(space, src, k)) run(std::move(*s), "coordinate_split");
    }
    for (int r = 0; r < opts.restarts; ++r) {
        Rng rng = substream(opts.seed, 7000 + static_cast<std::uint64_t>(r));
        // A random linear image of the lattice, plus small jitter.
        Matrix lin(space.point_dim(), k);
        for (int c = 0; c < k; ++c) lin.col(c) = gaussian_vector(rng, space.point_dim());
        std::vector<Vector> init;
        for (const Vector& p : src) init.push_back(lin * p + 0.01 * gaussian_vector(rng, space.point_dim()));
        run(std::move(init), "random_" + std::to_string(r));
    }
    if (res.runs.empty()) throw InvalidSpec("distortion_probe: no starts requested");
    return res;
}

} // namespace mvrank

#endif
