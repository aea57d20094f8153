// Residue of the zeta density at alpha = 1 on the Einstein static universe,
// three ways: Hadamard parametrix, mode sum on S^3, and -i R / (96 pi^2).

#include "lz/geometry/benchmarks.hpp"
#include "lz/geometry/curvature.hpp"
#include "lz/hadamard/transport.hpp"
#include "lz/specoracle/mode_sum.hpp"
#include "lz/zeta/density.hpp"

#include <cstdio>

int main() {
    using namespace lz;
    const auto g = benchmarks::einstein_static(1.0);
    const std::vector<double> x = {0.0, 1.0, 1.0, 0.0};
    const double R = curvature(g, x).scalar;

    const auto density = MeromorphicDensity::from_hadamard(transport_solve(g, x, 1), 4, 0.1);
    const auto sphere = SpectralModel::sphere3(1.0, 100.0);

    std::printf("%8s  %-28s  %-28s\n", "eps", "parametrix", "mode sum");
    for (double eps : default_epsilon_ladder()) {
        const cplx p = density.with_epsilon(eps).residue_at(1.0).analytic;
        const cplx m = circle_integral([&](cplx a) { return continue_mode_zeta(sphere, a, eps).value; }, 1.0, 0.05);
        std::printf("%8.0e  %+.6e %+.6ei  %+.6e %+.6ei\n", eps, p.real(), p.imag(), m.real(), m.imag());
    }
    const cplx want = curvature_residue_prediction(4, R);
    std::printf("\nR = %.12g, -i R / (96 pi^2) = %+.6e %+.6ei\n", R, want.real(), want.imag());
}
