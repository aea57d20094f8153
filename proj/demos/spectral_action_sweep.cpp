// Lambda sweep of the spectral action density on R x T^3 and R x S^3 with
// the bump test function; prints the fitted Lambda^4 and Lambda^2 terms.

#include "lz/geometry/benchmarks.hpp"
#include "lz/geometry/curvature.hpp"
#include "lz/zeta/spectral_action.hpp"

#include <cstdio>

int main() {
    using namespace lz;
    const auto f = TestFunction::bump();
    const double R = curvature(benchmarks::einstein_static(), std::vector<double>{0.0, 1.0, 1.0, 0.0}).scalar;
    struct Case {
        const char* name;
        SpectralModel model;
        double R;
    };
    const Case cases[] = {{"R x S^3", SpectralModel::sphere3(1.0, 1e3), R}, {"R x T^3", SpectralModel::torus(3, 2 * kPi, 1e3), 0.0}};
    for (const auto& c : cases) {
        const auto r = cc_expansion_check(c.model, f, default_lambda_grid(), 1e-2, c.R);
        std::printf("%s\n", c.name);
        for (std::size_t i = 0; i < r.lambdas.size(); ++i)
            std::printf("  Lambda %4.1f  %+.8e %+.8ei  (+- %.1e)\n", r.lambdas[i], r.values[i].real(), r.values[i].imag(),
                        r.errors[i]);
        std::printf("  Lambda^4: fitted %+.6e %+.6ei, C0 a0 %+.6e %+.6ei\n", r.fitted[0].real(), r.fitted[0].imag(),
                    r.predicted_leading.real(), r.predicted_leading.imag());
        std::printf("  Lambda^2: fitted %+.6e %+.6ei, C1 a1 %+.6e %+.6ei\n\n", r.fitted[1].real(), r.fitted[1].imag(),
                    r.predicted_subleading.real(), r.predicted_subleading.imag());
    }
}
