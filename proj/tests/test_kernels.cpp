#include "sobex/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace sobex::kernels;

namespace {

struct Fixture {
    std::ptrdiff_t nx, ny, stride;
    std::vector<double> u, maskf, bc, v_a, v_b;

    Fixture(std::ptrdiff_t nx_, std::ptrdiff_t ny_, unsigned seed) : nx(nx_), ny(ny_) {
        stride = nx + 2;
        const size_t padded = static_cast<size_t>(stride) * (ny + 2);
        u.assign(padded, 0.0);
        maskf.assign(padded, 0.0);
        bc.assign(padded, 0.0);
        v_a.assign(padded, 0.0);
        v_b.assign(padded, 0.0);
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> val(0.0, 1.0);
        std::bernoulli_distribution inside(0.8);
        for (std::ptrdiff_t j = 1; j <= ny; ++j)
            for (std::ptrdiff_t i = 1; i <= nx; ++i) {
                const size_t idx = static_cast<size_t>(j) * stride + i;
                if (inside(rng)) {
                    maskf[idx] = 1.0;
                    u[idx] = val(rng);
                }
            }
        for (std::ptrdiff_t j = 1; j <= ny; ++j)
            for (std::ptrdiff_t i = 1; i <= nx; ++i) {
                const size_t idx = static_cast<size_t>(j) * stride + i;
                if (maskf[idx] == 0.0) {
                    u[idx] = 0.0;
                    continue;
                }
                int b = 0;
                b += maskf[idx - 1] == 0.0;
                b += maskf[idx + 1] == 0.0;
                b += maskf[idx - stride] == 0.0;
                b += maskf[idx + stride] == 0.0;
                bc[idx] = b;
            }
    }
};

} // namespace

TEST_CASE("scalar and avx2 backends agree bit for bit") {
    if (!avx2_available()) {
        MESSAGE("AVX2 not available; skipping equivalence test");
        return;
    }
    const Ops& sc = scalar_ops();
    const Ops& ac = active_ops();
    REQUIRE(std::string(ac.name) == "avx2");

    for (std::ptrdiff_t nx : {3, 8, 17, 64, 129}) {
        Fixture fx(nx, 23, static_cast<unsigned>(1000 + nx));
        for (double p : {2.0, 3.0, 2.5}) {
            const auto sa = sc.flow_step(fx.u.data(), fx.maskf.data(), fx.bc.data(), fx.v_a.data(),
                                         fx.nx, fx.ny, fx.stride, 64.0, 1e-4, 5.0, p - 1.0, p);
            const auto sb = ac.flow_step(fx.u.data(), fx.maskf.data(), fx.bc.data(), fx.v_b.data(),
                                         fx.nx, fx.ny, fx.stride, 64.0, 1e-4, 5.0, p - 1.0, p);
            CHECK(sa.energy_u == sb.energy_u);
            CHECK(sa.sumpow_v == sb.sumpow_v);
            CHECK(fx.v_a == fx.v_b);

            CHECK(sc.sum_pow(fx.u.data(), fx.nx, fx.ny, fx.stride, p) ==
                  ac.sum_pow(fx.u.data(), fx.nx, fx.ny, fx.stride, p));
        }
        CHECK(sc.dirichlet_energy(fx.u.data(), fx.bc.data(), fx.nx, fx.ny, fx.stride) ==
              ac.dirichlet_energy(fx.u.data(), fx.bc.data(), fx.nx, fx.ny, fx.stride));

        std::vector<double> w1 = fx.u, w2 = fx.u;
        sc.scale(w1.data(), static_cast<std::ptrdiff_t>(w1.size()), 0.7315);
        ac.scale(w2.data(), static_cast<std::ptrdiff_t>(w2.size()), 0.7315);
        CHECK(w1 == w2);
    }
}

TEST_CASE("flow_step energy equals the Dirichlet form") {
    const Ops& k = scalar_ops();
    Fixture fx(31, 19, 42);
    const auto st = k.flow_step(fx.u.data(), fx.maskf.data(), fx.bc.data(), fx.v_a.data(), fx.nx,
                                fx.ny, fx.stride, 1.0, 0.0, 0.0, 1.0, 2.0);
    const double e = k.dirichlet_energy(fx.u.data(), fx.bc.data(), fx.nx, fx.ny, fx.stride);
    CHECK(st.energy_u == doctest::Approx(e).epsilon(1e-12));
}

TEST_CASE("flow_step keeps exterior cells at zero and clips negatives") {
    const Ops& k = scalar_ops();
    Fixture fx(12, 9, 7);
    // large negative forcing so raw updates go negative inside
    k.flow_step(fx.u.data(), fx.maskf.data(), fx.bc.data(), fx.v_a.data(), fx.nx, fx.ny,
                fx.stride, 1.0, 10.0, -100.0, 1.0, 2.0);
    for (std::ptrdiff_t j = 0; j < fx.ny + 2; ++j)
        for (std::ptrdiff_t i = 0; i < fx.nx + 2; ++i) {
            const size_t idx = static_cast<size_t>(j) * fx.stride + i;
            CHECK(fx.v_a[idx] >= 0.0);
            if (fx.maskf[idx] == 0.0)
                CHECK(fx.v_a[idx] == 0.0);
        }
}
