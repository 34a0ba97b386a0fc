#ifndef BELLSCOPE_LHV_HPP
#define BELLSCOPE_LHV_HPP

#include <cstdint>
#include <functional>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bellscope/quantum_pair.hpp"

namespace bellscope::lhv
{

// Response of one station to hidden variable lambda at analyzer angle theta; must lie in [-1, 1].
using response_fn = std::function<double(double lambda, double theta)>;
// Density of lambda on [0, 2 pi).
using density_fn = std::function<double(double lambda)>;

struct hidden_variable_model
{
    std::string name;
    response_fn response_a;
    response_fn response_b;
    density_fn density;
};

double uniform_density(double lambda) noexcept;

// a = sgn cos(lambda - alpha), b = -sgn cos(lambda - beta).
hidden_variable_model sign_cos_model();
// a = b = 1.
hidden_variable_model constant_model();
// a = cos(lambda - alpha), b = -cos(lambda - beta).
hidden_variable_model smooth_cos_model();

// Looks up sign-cos, constant or smooth-cos; throws validation_error otherwise.
hidden_variable_model builtin_model(std::string_view name);
std::vector<std::string> builtin_model_names();

/// Piecewise-constant response table read from CSV with header "lambda,response".
///
/// Rows give breakpoints in [0, 2 pi); the response holds until the next
/// breakpoint and wraps around. The angle enters as a shift: station A sees
/// table(lambda - alpha), station B sees -table(lambda - beta).
hidden_variable_model load_table_model(std::istream& csv, std::string name);

// Throws validation_error when a response leaves [-1, 1] on the 1024-point
// lambda grid at the given angles, or when the density does not integrate to 1.
void validate(const hidden_variable_model& model, std::span<const double> angles);

enum class method
{
    quadrature,
    monte_carlo,
};

std::string_view to_string(method m) noexcept;

struct correlation_estimate
{
    double value;
    lhv::method method;
    long samples; // nodes for quadrature
    double stderr_; // zero for quadrature
};

struct estimator
{
    lhv::method method = method::quadrature;
    long budget = 4096;
    std::uint64_t seed = 42;
    unsigned threads = 0;
};

inline constexpr long default_nodes = 4096;
inline constexpr long default_samples = 1'000'000;

// P(alpha, beta) = integral of a(lambda) b(lambda) rho(lambda) over [0, 2 pi).
correlation_estimate correlation(const hidden_variable_model& model, double alpha, double beta, const estimator& est);

struct chsh_estimate
{
    double value;
    std::array<correlation_estimate, 4> terms; // (a1,b1), (a1,b2), (a2,b1), (a2,b2)
    double stderr_;                             // combined, zero for quadrature
};

// P(a1,b1) + P(a1,b2) + P(a2,b1) - P(a2,b2).
chsh_estimate chsh_value(const hidden_variable_model& model, const measurement_settings& s, const estimator& est);

// Quadrature of [a1 b1 a2 b2 - a1 b2 a2 b1] rho; vanishes node by node.
double zero_expression_audit(const hidden_variable_model& model, const measurement_settings& s, long nodes);

// |P(alpha, beta1) - P(alpha, beta2)| by quadrature.
double interchange_gap(const hidden_variable_model& model, double alpha, double beta1, double beta2, long nodes);

struct difference_split
{
    double lhs; // P(a1,b1) - P(a1,b2)
    double rhs; // integral of a1 (b1 - b2) rho
};

difference_split bell_difference_decomposition(const hidden_variable_model& model, double alpha1, double beta1,
                                               double beta2, long nodes);

} // namespace bellscope::lhv

#endif
