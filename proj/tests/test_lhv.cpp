#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bellscope/errors.hpp"
#include "bellscope/lhv.hpp"

using namespace bellscope;
using namespace bellscope::lhv;
using std::numbers::pi;

namespace
{

// Closed forms, integrated by hand over the uniform density.
double angular_distance(double a, double b)
{
    double d = std::fmod(std::abs(a - b), 2.0 * pi);
    return d > pi ? 2.0 * pi - d : d;
}

// sgn cos(l - a) * -sgn cos(l - b): the sawtooth -1 + 2|d|/pi on [0, pi]
double sawtooth(double a, double b)
{
    return -1.0 + 2.0 * angular_distance(a, b) / pi;
}

double smooth_closed_form(double a, double b)
{
    return -0.5 * std::cos(a - b);
}

hidden_variable_model random_smooth_model(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double c1 = u(rng), c2 = u(rng), c3 = u(rng), c4 = u(rng);
    return {"random-smooth",
            [=](double l, double a) { return 0.5 * std::cos(l - a + c1) + 0.4 * std::sin(2.0 * (l - a)) * c2; },
            [=](double l, double b) { return 0.6 * std::sin(l - b + c3) - 0.3 * std::cos(3.0 * (l - b)) * c4; },
            uniform_density};
}

measurement_settings random_settings(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-2.0 * pi, 2.0 * pi);
    return {u(rng), u(rng), u(rng), u(rng)};
}

const estimator quad{method::quadrature, 4096};

} // namespace

TEST_CASE("correlation examples")
{
    CHECK(correlation(constant_model(), 0.3, 1.1, quad).value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(correlation(sign_cos_model(), 0.4, 0.4, quad).value + 1.0) < 1e-12);
    CHECK(std::abs(correlation(sign_cos_model(), 0.0, pi / 2, quad).value) < 1e-6);
    CHECK(std::abs(correlation(sign_cos_model(), 1.0, 1.0 + pi / 2, quad).value) < 1e-6);

    const auto est = correlation(sign_cos_model(), 0.0, 1.0, quad);
    CHECK(est.method == method::quadrature);
    CHECK(est.samples == 4096);
    CHECK(est.stderr_ == 0.0);
}

TEST_CASE("correlation matches the closed forms")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-pi, pi);
    for(int k = 0; k < 50; ++k)
    {
        const double a = u(rng), b = u(rng);
        CHECK(std::abs(correlation(sign_cos_model(), a, b, quad).value - sawtooth(a, b)) < 2e-3);
        CHECK(std::abs(correlation(smooth_cos_model(), a, b, quad).value - smooth_closed_form(a, b)) < 1e-10);
    }
}

TEST_CASE("chsh_value examples")
{
    // textbook quadruple (0, pi/2, pi/4, 3pi/4): the sawtooth gives -1/2 on every term, total -2
    const auto s = measurement_settings::from_tuple(0.0, pi / 2, pi / 4, 3 * pi / 4);
    const double oracle = sawtooth(s.alpha1, s.beta1) + sawtooth(s.alpha1, s.beta2) + sawtooth(s.alpha2, s.beta1) -
                          sawtooth(s.alpha2, s.beta2);
    CHECK(oracle == doctest::Approx(-2.0));

    const auto q = chsh_value(sign_cos_model(), s, quad);
    CHECK(std::abs(std::abs(q.value) - 2.0) < 2e-3);
    CHECK(std::abs(q.value - oracle) < 2e-3);
    CHECK(q.stderr_ == 0.0);

    CHECK(chsh_value(constant_model(), {0.1, 0.2, 0.3, 0.4}, quad).value == doctest::Approx(2.0).epsilon(1e-12));

    const estimator mc{method::monte_carlo, default_samples, 42};
    const auto m = chsh_value(sign_cos_model(), s, mc);
    CHECK(m.stderr_ > 0.0);
    CHECK(std::abs(m.value - oracle) <= 5.0 * m.stderr_);
    CHECK(m.value <= 2.0 + 5.0 * m.stderr_);
}

TEST_CASE("property: quadrature chsh respects the classical bound")
{
    std::mt19937_64 rng(5);
    for(const auto& name : builtin_model_names())
    {
        const auto model = builtin_model(name);
        for(int k = 0; k < 100; ++k)
        {
            const auto s = random_settings(rng);
            CHECK(std::abs(chsh_value(model, s, quad).value) <= 2.0 + 1e-6);
        }
    }
    for(int k = 0; k < 20; ++k)
        CHECK(std::abs(chsh_value(random_smooth_model(rng), random_settings(rng), quad).value) <= 2.0 + 1e-6);
}

TEST_CASE("property: Monte Carlo agrees with quadrature")
{
    std::mt19937_64 rng(7);
    for(const auto& name : builtin_model_names())
    {
        const auto model = builtin_model(name);
        for(int k = 0; k < 3; ++k)
        {
            std::uniform_real_distribution<double> u(-pi, pi);
            const double a = u(rng), b = u(rng);
            const auto q = correlation(model, a, b, quad);
            const auto m = correlation(model, a, b, {method::monte_carlo, 200'000, 1000u + k});
            CHECK(std::abs(q.value - m.value) <= 5.0 * m.stderr_ + 2e-3);
            CHECK(std::abs(m.value) <= 1.0 + 3.0 * m.stderr_);
        }
    }
}

TEST_CASE("property: rotation covariance")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-pi, pi);
    for(int k = 0; k < 20; ++k)
    {
        const double a = u(rng), b = u(rng), delta = u(rng);
        for(const auto& model : {smooth_cos_model(), constant_model()})
            CHECK(std::abs(correlation(model, a, b, quad).value - correlation(model, a + delta, b + delta, quad).value) <
                  1e-8);
        // discontinuous responses are covariant under shifts by whole node spacings
        const double grid_delta = (k + 1) * 2.0 * pi / 4096.0;
        CHECK(std::abs(correlation(sign_cos_model(), a, b, quad).value -
                       correlation(sign_cos_model(), a + grid_delta, b + grid_delta, quad).value) < 1e-8);
    }
}

TEST_CASE("zero_expression_audit vanishes node by node")
{
    std::mt19937_64 rng(13);
    for(int k = 0; k < 20; ++k)
    {
        const auto s = random_settings(rng);
        CHECK(std::abs(zero_expression_audit(sign_cos_model(), s, 4096)) < 1e-12);
        CHECK(std::abs(zero_expression_audit(random_smooth_model(rng), s, 4096)) < 1e-10);
        CHECK(std::abs(zero_expression_audit(smooth_cos_model(), s, 64)) < 1e-10);
    }
    CHECK_THROWS_AS(zero_expression_audit(sign_cos_model(), {}, 63), validation_error);
}

TEST_CASE("interchange_gap")
{
    CHECK(interchange_gap(sign_cos_model(), 0.3, 1.2, 1.2, 4096) == 0.0);
    CHECK(std::abs(interchange_gap(sign_cos_model(), 0.0, 0.0, pi / 2, 4096) - 1.0) < 1e-6);
    CHECK(interchange_gap(constant_model(), 0.1, 0.7, 2.9, 4096) == 0.0);
}

TEST_CASE("bell_difference_decomposition")
{
    auto split = bell_difference_decomposition(smooth_cos_model(), 0.2, 0.9, 0.9, 4096);
    CHECK(split.lhs == 0.0);
    CHECK(split.rhs == 0.0);

    split = bell_difference_decomposition(sign_cos_model(), 0.0, 0.0, pi / 2, 4096);
    CHECK(std::abs(split.lhs + 1.0) < 1e-6);
    CHECK(std::abs(split.rhs + 1.0) < 1e-6);

    std::mt19937_64 rng(17);
    for(int k = 0; k < 20; ++k)
    {
        const auto s = random_settings(rng);
        split = bell_difference_decomposition(random_smooth_model(rng), s.alpha1, s.beta1, s.beta2, 4096);
        CHECK(std::abs(split.lhs - split.rhs) < 1e-10);
    }
}

TEST_CASE("model validation")
{
    CHECK_THROWS_AS(builtin_model("quantum"), validation_error);
    CHECK_THROWS_AS(correlation(sign_cos_model(), 0.0, 0.0, {method::quadrature, 32}), validation_error);

    auto heavy = constant_model();
    heavy.density = [](double) { return 0.2; };
    CHECK_THROWS_AS(correlation(heavy, 0.0, 0.0, quad), validation_error);

    auto loud = constant_model();
    loud.response_a = [](double, double) { return 1.5; };
    CHECK_THROWS_AS(correlation(loud, 0.0, 0.0, quad), validation_error);

    // non-uniform density that still integrates to one
    auto skewed = smooth_cos_model();
    skewed.density = [](double l) { return (1.0 + 0.5 * std::cos(l)) / (2.0 * pi); };
    const auto q = correlation(skewed, 0.3, 0.3, quad);
    const auto m = correlation(skewed, 0.3, 0.3, {method::monte_carlo, 400'000, 5});
    CHECK(std::abs(q.value - m.value) <= 5.0 * m.stderr_ + 1e-4);
}

TEST_CASE("table model from CSV")
{
    // sgn cos(lambda): +1 on [0, pi/2), -1 on [pi/2, 3pi/2), +1 after
    std::stringstream csv;
    csv << "lambda,response\n0,1\n" << pi / 2 << ",-1\n" << 3 * pi / 2 << ",1\n";
    const auto model = load_table_model(csv, "sign-table");
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u(-pi, pi);
    for(int k = 0; k < 10; ++k)
    {
        const double a = u(rng), b = u(rng);
        CHECK(std::abs(correlation(model, a, b, quad).value - sawtooth(a, b)) < 2e-3);
    }

    std::stringstream bad_header("theta,response\n0,1\n");
    CHECK_THROWS_AS(load_table_model(bad_header, "x"), validation_error);
    std::stringstream bad_range("lambda,response\n0,2\n");
    CHECK_THROWS_AS(load_table_model(bad_range, "x"), validation_error);
    std::stringstream bad_lambda("lambda,response\n7,0.5\n");
    CHECK_THROWS_AS(load_table_model(bad_lambda, "x"), validation_error);
    std::stringstream garbage("lambda,response\n0;1\n");
    CHECK_THROWS_AS(load_table_model(garbage, "x"), validation_error);
    std::stringstream empty("lambda,response\n");
    CHECK_THROWS_AS(load_table_model(empty, "x"), validation_error);
}

TEST_CASE("Monte Carlo is deterministic across thread counts")
{
    const auto model = sign_cos_model();
    estimator est{method::monte_carlo, 300'000, 77, 1};
    const auto serial = correlation(model, 0.2, 1.4, est);
    est.threads = 3;
    const auto parallel = correlation(model, 0.2, 1.4, est);
    CHECK(serial.value == parallel.value);
    CHECK(serial.stderr_ == parallel.stderr_);
    est.seed = 78;
    CHECK(correlation(model, 0.2, 1.4, est).value != serial.value);
}
