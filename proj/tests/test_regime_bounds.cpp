#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "bellscope/errors.hpp"
#include "bellscope/regime_bounds.hpp"

using namespace bellscope;

namespace
{

const double tsirelson = 2.0 * std::numbers::sqrt2;
const double global_limit = 2.0 * std::sqrt(3.0);

optimizer_config small(std::size_t dim, int restarts, std::uint64_t seed = 7)
{
    optimizer_config cfg;
    cfg.dim = dim;
    cfg.restarts = restarts;
    cfg.seed = seed;
    return cfg;
}

} // namespace

TEST_CASE("classical_max: brute force over 16 sign assignments")
{
    // independent enumeration
    double lo = 1e9, hi = -1e9;
    for(int s1 : {-1, 1})
        for(int s2 : {-1, 1})
            for(int t1 : {-1, 1})
                for(int t2 : {-1, 1})
                {
                    const double v = s1 * t1 + s1 * t2 + s2 * t1 - s2 * t2;
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                }
    CHECK(lo == -2.0);
    CHECK(hi == 2.0);

    const auto r = classical_max();
    CHECK(r.best_value == 2.0);
    CHECK(r.regime == commutation_regime::classical);
    const auto [s1, s2, t1, t2] = r.sign_witness;
    CHECK(s1 * t1 + s1 * t2 + s2 * t1 - s2 * t2 == 2);
    CHECK(r.sign_witness == std::array<int, 4>{1, 1, 1, 1});
    REQUIRE(r.best_observables.size() == 4);
    CHECK(verify_ceiling(r));
}

TEST_CASE("optimize_bound: classical delegates to brute force")
{
    const auto r = optimize_bound(commutation_regime::classical, optimizer_config{});
    CHECK(std::abs(r.best_value - classical_max().best_value) < 1e-9);
    CHECK(r.best_value == 2.0);
}

TEST_CASE("optimize_bound: tensor regime reaches 2 sqrt 2")
{
    const auto r = optimize_bound(commutation_regime::local_tensor, small(2, 64));
    CHECK(r.best_value >= tsirelson - 1e-3);
    CHECK(r.best_value <= tsirelson + 1e-6);
    CHECK(verify_ceiling(r));
    CHECK(r.per_restart_values.size() == 64);
    CHECK(r.best_value == *std::max_element(r.per_restart_values.begin(), r.per_restart_values.end()));
    CHECK(r.max_gram_eigenvalue <= 16.0 + 1e-9);
    CHECK(r.max_spectrum_defect <= 1e-9);

    // the reported witnesses reproduce the value
    const auto inst = build_bell(r.best_observables[0], r.best_observables[1], r.best_observables[2],
                                 r.best_observables[3], commutation_regime::local_tensor);
    CHECK(std::abs(max_expectation(inst).value - r.best_value) < 1e-9);
    CHECK(classify_regime(r.best_observables[0], r.best_observables[1], r.best_observables[2], r.best_observables[3],
                          false) == commutation_regime::local_tensor);
}

TEST_CASE("optimize_bound: global regime stays below 2 sqrt 3")
{
    const auto r = optimize_bound(commutation_regime::global, small(4, 8));
    MESSAGE("global dim 4, 8 restarts: best = " << r.best_value);
    CHECK(r.best_value <= global_limit + 1e-6);
    CHECK(verify_ceiling(r));
    CHECK(r.max_gram_eigenvalue <= 16.0 + 1e-9);
    CHECK(r.max_spectrum_defect <= 1e-9);
    // the Jordan-product composite is bounded by 2 sqrt 2 and the optimizer finds it
    CHECK(r.best_value >= tsirelson - 1e-3);
    CHECK(r.best_value <= tsirelson + 1e-6);

    const auto inst = build_bell(r.best_observables[0], r.best_observables[1], r.best_observables[2],
                                 r.best_observables[3], commutation_regime::global);
    CHECK(std::abs(max_expectation(inst).value - r.best_value) < 1e-9);
}

TEST_CASE("optimize_bound: global regime at dim 2")
{
    const auto r = optimize_bound(commutation_regime::global, small(2, 16));
    CHECK(r.best_value <= global_limit + 1e-6);
    CHECK(r.best_value >= 2.0 - 1e-6);
}

TEST_CASE("optimize_bound: contraction class")
{
    auto cfg = small(2, 16);
    cfg.observable_class = spectrum_class::contraction;
    const auto r = optimize_bound(commutation_regime::local_tensor, cfg);
    CHECK(r.best_value <= tsirelson + 1e-6);
    CHECK(r.best_value >= tsirelson - 1e-3);
    CHECK(r.max_spectrum_defect <= 1e-9);
    for(const auto& o : r.best_observables)
    {
        CHECK(o.cls() == spectrum_class::contraction);
        CHECK(spectral_norm(o.matrix()) <= 1.0 + 1e-9);
    }
}

TEST_CASE("optimize_bound: determinism across runs and thread counts")
{
    auto cfg = small(2, 12, 99);
    cfg.threads = 1;
    const auto serial = optimize_bound(commutation_regime::local_tensor, cfg);
    const auto again = optimize_bound(commutation_regime::local_tensor, cfg);
    cfg.threads = 4;
    const auto parallel = optimize_bound(commutation_regime::local_tensor, cfg);
    CHECK(serial.per_restart_values == again.per_restart_values);
    CHECK(serial.per_restart_values == parallel.per_restart_values);
    CHECK(serial.iterations == parallel.iterations);
    CHECK(serial.best_observables[0].matrix() == parallel.best_observables[0].matrix());

    cfg.seed = 100;
    const auto other = optimize_bound(commutation_regime::local_tensor, cfg);
    CHECK(other.per_restart_values != serial.per_restart_values);
}

TEST_CASE("optimize_bound: nesting for matched total dimension")
{
    const auto classical = optimize_bound(commutation_regime::classical, small(2, 8));
    const auto local = optimize_bound(commutation_regime::local_tensor, small(2, 8));
    const auto global = optimize_bound(commutation_regime::global, small(4, 8));
    CHECK(local.best_value >= classical.best_value);
    CHECK(global.best_value >= local.best_value - 1e-6);
    for(const auto* r : {&classical, &local, &global})
        for(double v : r->per_restart_values) CHECK(v <= 4.0);
}

TEST_CASE("optimize_bound: invalid configurations")
{
    auto cfg = small(2, 1);
    cfg.restarts = 0;
    CHECK_THROWS_AS(optimize_bound(commutation_regime::local_tensor, cfg), validation_error);
    cfg = small(2, 1);
    cfg.step_decay = 1.0;
    CHECK_THROWS_AS(optimize_bound(commutation_regime::local_tensor, cfg), validation_error);
    cfg = small(2, 1);
    cfg.fd_epsilon = 0.0;
    CHECK_THROWS_AS(optimize_bound(commutation_regime::global, cfg), validation_error);
    cfg = small(2, 1);
    cfg.max_iters = 0;
    CHECK_THROWS_AS(optimize_bound(commutation_regime::global, cfg), validation_error);
    CHECK_THROWS_AS(optimize_bound(commutation_regime::local_tensor, small(1, 1)), validation_error);
    CHECK_THROWS_AS(optimize_bound(commutation_regime::global, small(1, 1)), validation_error);
    CHECK_THROWS_AS(optimize_bound(commutation_regime::local_tensor, small(9, 1)), sizing_error);
    CHECK_THROWS_AS(optimize_bound(commutation_regime::global, small(65, 1)), sizing_error);
}

TEST_CASE("optimize_bound: non-convergence returns best so far")
{
    auto cfg = small(2, 2);
    cfg.max_iters = 1;
    const auto r = optimize_bound(commutation_regime::local_tensor, cfg);
    CHECK(r.iterations == 2);
    CHECK(r.best_value <= tsirelson + 1e-6);
}

TEST_CASE("verify_ceiling")
{
    bound_result r;
    r.regime = commutation_regime::classical;
    r.best_value = 2.0;
    CHECK(verify_ceiling(r));
    r.regime = commutation_regime::local_tensor;
    r.best_value = 2.8284;
    CHECK(verify_ceiling(r));
    r.best_value = tsirelson + 2e-6;
    CHECK_FALSE(verify_ceiling(r));
    r.regime = commutation_regime::global;
    r.best_value = 3.60;
    CHECK_FALSE(verify_ceiling(r));
    CHECK(regime_ceiling(commutation_regime::global) == doctest::Approx(3.4641016151377544));
}
