#include "bellscope/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "bellscope/errors.hpp"
#include "bellscope/parallel.hpp"

namespace bellscope::lhv
{

namespace
{

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr long min_budget = 64;
constexpr int validation_grid = 1024;
constexpr long density_check_nodes = 4096;
constexpr double density_tol = 1e-6;
constexpr long chunk_size = 1 << 16;
constexpr std::size_t cdf_cells = 1 << 16;

double sgn(double x) noexcept
{
    return x >= 0.0 ? 1.0 : -1.0;
}

double wrap(double x) noexcept
{
    double r = std::fmod(x, two_pi);
    if(r < 0.0) r += two_pi;
    return r;
}

void require_budget(long budget)
{
    if(budget < min_budget) throw validation_error("budget must be at least " + std::to_string(min_budget));
}

// Midpoint-rule sum of f(lambda) rho(lambda) over [0, 2 pi).
template <typename F>
double quadrature(const hidden_variable_model& model, long nodes, F&& f)
{
    const double h = two_pi / static_cast<double>(nodes);
    double sum = 0.0;
    for(long k = 0; k < nodes; ++k)
    {
        const double lambda = (static_cast<double>(k) + 0.5) * h;
        sum += f(lambda) * model.density(lambda);
    }
    return sum * h;
}

// Inverse-CDF sampler for a piecewise-constant approximation of the density.
class lambda_sampler
{
public:
    explicit lambda_sampler(const density_fn& density) : cdf_(cdf_cells + 1, 0.0)
    {
        const double h = two_pi / static_cast<double>(cdf_cells);
        for(std::size_t i = 0; i < cdf_cells; ++i)
            cdf_[i + 1] = cdf_[i] + density((static_cast<double>(i) + 0.5) * h) * h;
        const double total = cdf_.back();
        for(auto& c : cdf_) c /= total;
    }

    template <typename Rng>
    double operator()(Rng& rng) const
    {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const double target = u(rng);
        const auto it = std::upper_bound(cdf_.begin() + 1, cdf_.end(), target);
        const std::size_t cell = std::min<std::size_t>(static_cast<std::size_t>(it - cdf_.begin()) - 1, cdf_cells - 1);
        const double lo = cdf_[cell];
        const double width = cdf_[cell + 1] - lo;
        const double frac = width > 0.0 ? (target - lo) / width : 0.5;
        return (static_cast<double>(cell) + frac) * two_pi / static_cast<double>(cdf_cells);
    }

private:
    std::vector<double> cdf_;
};

struct moments
{
    double sum = 0.0;
    double sum_sq = 0.0;
};

correlation_estimate monte_carlo(const hidden_variable_model& model, double alpha, double beta, const estimator& est)
{
    const lambda_sampler sampler(model.density);
    const long chunks = (est.budget + chunk_size - 1) / chunk_size;
    std::vector<moments> parts(chunks);
    parallel_for(parts.size(), est.threads, [&](std::size_t c) {
        std::mt19937_64 rng(stream_seed(est.seed, c));
        const long begin = static_cast<long>(c) * chunk_size;
        const long end = std::min(est.budget, begin + chunk_size);
        moments m;
        for(long i = begin; i < end; ++i)
        {
            const double lambda = sampler(rng);
            const double v = model.response_a(lambda, alpha) * model.response_b(lambda, beta);
            m.sum += v;
            m.sum_sq += v * v;
        }
        parts[c] = m;
    });

    moments total;
    for(const auto& p : parts)
    {
        total.sum += p.sum;
        total.sum_sq += p.sum_sq;
    }
    const double n = static_cast<double>(est.budget);
    const double mean = total.sum / n;
    const double var = std::max(0.0, (total.sum_sq - n * mean * mean) / (n - 1.0));
    return {mean, method::monte_carlo, est.budget, std::sqrt(var / n)};
}

} // namespace

double uniform_density(double) noexcept
{
    return 1.0 / two_pi;
}

hidden_variable_model sign_cos_model()
{
    return {"sign-cos", [](double l, double a) { return sgn(std::cos(l - a)); },
            [](double l, double b) { return -sgn(std::cos(l - b)); }, uniform_density};
}

hidden_variable_model constant_model()
{
    return {"constant", [](double, double) { return 1.0; }, [](double, double) { return 1.0; }, uniform_density};
}

hidden_variable_model smooth_cos_model()
{
    return {"smooth-cos", [](double l, double a) { return std::cos(l - a); },
            [](double l, double b) { return -std::cos(l - b); }, uniform_density};
}

std::vector<std::string> builtin_model_names()
{
    return {"sign-cos", "constant", "smooth-cos"};
}

hidden_variable_model builtin_model(std::string_view name)
{
    if(name == "sign-cos") return sign_cos_model();
    if(name == "constant") return constant_model();
    if(name == "smooth-cos") return smooth_cos_model();
    throw validation_error("unknown model '" + std::string(name) + "'");
}

hidden_variable_model load_table_model(std::istream& csv, std::string name)
{
    std::string line;
    if(!std::getline(csv, line)) throw validation_error("model file is empty");
    if(!line.empty() && line.back() == '\r') line.pop_back();
    if(line != "lambda,response") throw validation_error("model file header must be 'lambda,response'");

    std::vector<std::pair<double, double>> rows;
    int lineno = 1;
    while(std::getline(csv, line))
    {
        ++lineno;
        if(!line.empty() && line.back() == '\r') line.pop_back();
        if(line.empty()) continue;
        std::istringstream fields(line);
        double lambda = 0.0;
        double response = 0.0;
        char comma = 0;
        if(!(fields >> lambda >> comma >> response) || comma != ',' || !(fields >> std::ws).eof())
            throw validation_error("malformed model row at line " + std::to_string(lineno));
        if(!std::isfinite(lambda) || lambda < 0.0 || lambda >= two_pi)
            throw validation_error("lambda outside [0, 2pi) at line " + std::to_string(lineno));
        if(!std::isfinite(response) || std::abs(response) > 1.0)
            throw validation_error("response outside [-1, 1] at line " + std::to_string(lineno));
        rows.emplace_back(lambda, response);
    }
    if(rows.empty()) throw validation_error("model file has no rows");
    std::sort(rows.begin(), rows.end());

    auto table = std::make_shared<const std::vector<std::pair<double, double>>>(std::move(rows));
    auto lookup = [table](double x) {
        const double w = wrap(x);
        auto it = std::upper_bound(table->begin(), table->end(), w,
                                   [](double v, const auto& row) { return v < row.first; });
        return it == table->begin() ? table->back().second : std::prev(it)->second;
    };
    return {std::move(name), [lookup](double l, double a) { return lookup(l - a); },
            [lookup](double l, double b) { return -lookup(l - b); }, uniform_density};
}

void validate(const hidden_variable_model& model, std::span<const double> angles)
{
    if(!model.response_a || !model.response_b || !model.density)
        throw validation_error("model '" + model.name + "' is incomplete");
    for(int j = 0; j < validation_grid; ++j)
    {
        const double lambda = two_pi * j / validation_grid;
        const double rho = model.density(lambda);
        if(!(rho >= 0.0) || !std::isfinite(rho)) throw validation_error("density is negative or not finite");
        for(double theta : angles)
        {
            const double a = model.response_a(lambda, theta);
            const double b = model.response_b(lambda, theta);
            if(!(std::abs(a) <= 1.0) || !(std::abs(b) <= 1.0))
                throw validation_error("model '" + model.name + "' response leaves [-1, 1]");
        }
    }
    const double mass = quadrature(model, density_check_nodes, [](double) { return 1.0; });
    if(std::abs(mass - 1.0) > density_tol)
        throw validation_error("density integrates to " + std::to_string(mass) + ", not 1");
}

std::string_view to_string(method m) noexcept
{
    return m == method::quadrature ? "quadrature" : "monte-carlo";
}

correlation_estimate correlation(const hidden_variable_model& model, double alpha, double beta, const estimator& est)
{
    require_budget(est.budget);
    const double angles[] = {alpha, beta};
    validate(model, angles);
    if(est.method == method::monte_carlo) return monte_carlo(model, alpha, beta, est);
    const double value = quadrature(model, est.budget, [&](double l) {
        return model.response_a(l, alpha) * model.response_b(l, beta);
    });
    return {value, method::quadrature, est.budget, 0.0};
}

chsh_estimate chsh_value(const hidden_variable_model& model, const measurement_settings& s, const estimator& est)
{
    s.validate();
    const std::pair<double, double> pairs[] = {{s.alpha1, s.beta1}, {s.alpha1, s.beta2}, {s.alpha2, s.beta1},
                                               {s.alpha2, s.beta2}};
    chsh_estimate out{};
    double var = 0.0;
    for(std::size_t k = 0; k < 4; ++k)
    {
        auto term_est = est;
        term_est.seed = stream_seed(est.seed, 1000 + k);
        out.terms[k] = correlation(model, pairs[k].first, pairs[k].second, term_est);
        var += out.terms[k].stderr_ * out.terms[k].stderr_;
    }
    out.value = out.terms[0].value + out.terms[1].value + out.terms[2].value - out.terms[3].value;
    out.stderr_ = std::sqrt(var);
    return out;
}

double zero_expression_audit(const hidden_variable_model& model, const measurement_settings& s, long nodes)
{
    require_budget(nodes);
    s.validate();
    const double angles[] = {s.alpha1, s.alpha2, s.beta1, s.beta2};
    validate(model, angles);
    return quadrature(model, nodes, [&](double l) {
        const double a1 = model.response_a(l, s.alpha1);
        const double a2 = model.response_a(l, s.alpha2);
        const double b1 = model.response_b(l, s.beta1);
        const double b2 = model.response_b(l, s.beta2);
        return a1 * b1 * a2 * b2 - a1 * b2 * a2 * b1;
    });
}

double interchange_gap(const hidden_variable_model& model, double alpha, double beta1, double beta2, long nodes)
{
    const estimator est{method::quadrature, nodes};
    return std::abs(correlation(model, alpha, beta1, est).value - correlation(model, alpha, beta2, est).value);
}

difference_split bell_difference_decomposition(const hidden_variable_model& model, double alpha1, double beta1,
                                               double beta2, long nodes)
{
    const estimator est{method::quadrature, nodes};
    const double lhs = correlation(model, alpha1, beta1, est).value - correlation(model, alpha1, beta2, est).value;
    const double rhs = quadrature(model, nodes, [&](double l) {
        return model.response_a(l, alpha1) * (model.response_b(l, beta1) - model.response_b(l, beta2));
    });
    return {lhs, rhs};
}

} // namespace bellscope::lhv
