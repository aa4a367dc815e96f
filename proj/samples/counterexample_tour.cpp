// Builds the perturbed product, checks that the diagonal carries the
// Euclidean metric, and reports that no flat survives in the factors.
#include <cstdio>

#include "mvrank.hpp"

int main() {
    using namespace mvrank;
    const auto pick = counterexample::choose_n();
    std::printf("n* = %lld  margins %.4g %.4g\n", pick.n, pick.margin1, pick.margin2);

    const auto diag = counterexample::verify_diagonal_euclidean(pick.n, 10000);
    std::printf("diagonal: worst relative error %.3g over %zu vectors\n", diag.worst_relative_error,
                diag.samples);

    for (int factor : {1, 2}) {
        const auto rep = euclidean_flat_obstruction(NormSpec::perturbed_spherical(factor, pick.n));
        std::printf("norm%d: %d/%d sections are not ellipses, min residual %.3g vs threshold %.3g\n", factor,
                    rep.not_ellipse, rep.planes, rep.min_residual, rep.threshold);
    }
    return 0;
}
