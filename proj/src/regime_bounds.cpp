#include "bellscope/regime_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "bellscope/errors.hpp"
#include "bellscope/parallel.hpp"

namespace bellscope
{

namespace
{

constexpr double min_step = 1e-9;

struct evaluation
{
    double lambda_max;
    double gram_max; // largest eigenvalue of B^dagger B = (max |lambda|)^2 for Hermitian B
};

evaluation evaluate(const complex_matrix& composite)
{
    const auto ev = hermitian_eigenvalues(composite);
    const double m = std::max(std::abs(ev.front()), std::abs(ev.back()));
    return {ev.back(), m * m};
}

// Parameter block for one observable: d*d generator entries, then d eigenvalues for contractions.
class observable_param
{
public:
    observable_param(std::size_t dim, spectrum_class cls) : dim_(dim), class_(cls)
    {
        signs_.resize(dim);
        for(std::size_t i = 0; i < dim; ++i) signs_[i] = i < (dim + 1) / 2 ? 1.0 : -1.0;
    }

    std::size_t size() const noexcept
    {
        return dim_ * dim_ + (class_ == spectrum_class::contraction ? dim_ : 0);
    }

    void project(std::span<double> p) const noexcept
    {
        if(class_ != spectrum_class::contraction) return;
        for(std::size_t i = dim_ * dim_; i < p.size(); ++i) p[i] = std::clamp(p[i], -1.0, 1.0);
    }

    complex_matrix matrix(std::span<const double> p) const
    {
        complex_matrix h(dim_);
        std::size_t k = 0;
        for(std::size_t i = 0; i < dim_; ++i) h(i, i) = p[k++];
        for(std::size_t i = 0; i < dim_; ++i)
            for(std::size_t j = i + 1; j < dim_; ++j)
            {
                h(i, j) = complex(p[k], p[k + 1]);
                h(j, i) = complex(p[k], -p[k + 1]);
                k += 2;
            }
        const auto v = unitary_exp(h);
        if(class_ == spectrum_class::dichotomic) return reconstruct(v, signs_);
        return reconstruct(v, p.subspan(k, dim_));
    }

    double defect(const complex_matrix& m) const
    {
        if(class_ == spectrum_class::dichotomic) return max_abs_diff(m * m, complex_matrix::identity(dim_));
        return std::max(0.0, spectral_norm(m) - 1.0);
    }

private:
    std::size_t dim_;
    spectrum_class class_;
    std::vector<double> signs_;
};

struct restart_outcome
{
    double value = -1.0;
    std::vector<complex_matrix> matrices;
    long iterations = 0;
    double max_gram = 0.0;
    double max_defect = 0.0;
};

class ascent
{
public:
    ascent(commutation_regime regime, const optimizer_config& cfg)
        : regime_(regime), cfg_(cfg), block_(cfg.dim, cfg.observable_class)
    {
    }

    restart_outcome run(std::uint64_t stream) const
    {
        std::mt19937_64 rng(stream);
        std::normal_distribution<double> normal(0.0, 1.0);

        const std::size_t bs = block_.size();
        std::vector<double> x(4 * bs);
        for(auto& v : x) v = normal(rng);
        for(int o = 0; o < 4; ++o) block_.project(block(x, o));

        restart_outcome out;
        std::vector<complex_matrix> mats;
        for(int o = 0; o < 4; ++o) mats.push_back(block_.matrix(block(x, o)));
        auto current = score(mats, out);
        track_defect(mats, out);

        double step = cfg_.initial_step;
        std::vector<double> grad(x.size());
        std::vector<double> trial(x.size());
        for(int iter = 0; iter < cfg_.max_iters && step >= min_step; ++iter)
        {
            ++out.iterations;
            double gnorm = 0.0;
            for(int o = 0; o < 4; ++o)
            {
                auto probe_mats = mats;
                for(std::size_t k = 0; k < bs; ++k)
                {
                    const std::size_t idx = o * bs + k;
                    const double saved = x[idx];
                    x[idx] = saved + cfg_.fd_epsilon;
                    probe_mats[o] = block_.matrix(block(x, o));
                    const double up = score(probe_mats, out);
                    x[idx] = saved - cfg_.fd_epsilon;
                    probe_mats[o] = block_.matrix(block(x, o));
                    const double down = score(probe_mats, out);
                    x[idx] = saved;
                    grad[idx] = (up - down) / (2.0 * cfg_.fd_epsilon);
                    gnorm += grad[idx] * grad[idx];
                }
            }
            gnorm = std::sqrt(gnorm);
            if(gnorm == 0.0) break;

            for(std::size_t i = 0; i < x.size(); ++i) trial[i] = x[i] + step * grad[i] / gnorm;
            for(int o = 0; o < 4; ++o) block_.project(block(trial, o));
            std::vector<complex_matrix> trial_mats;
            for(int o = 0; o < 4; ++o) trial_mats.push_back(block_.matrix(block(trial, o)));
            const double value = score(trial_mats, out);
            if(value > current)
            {
                x.swap(trial);
                mats = std::move(trial_mats);
                current = value;
                track_defect(mats, out);
            }
            else
            {
                step *= cfg_.step_decay;
            }
        }

        out.value = current;
        out.matrices = std::move(mats);
        return out;
    }

private:
    std::span<double> block(std::vector<double>& x, int o) const
    {
        return std::span<double>(x).subspan(o * block_.size(), block_.size());
    }

    double score(const std::vector<complex_matrix>& m, restart_outcome& out) const
    {
        const auto e = evaluate(bell_composite(m[0], m[1], m[2], m[3], regime_));
        out.max_gram = std::max(out.max_gram, e.gram_max);
        return e.lambda_max;
    }

    void track_defect(const std::vector<complex_matrix>& m, restart_outcome& out) const
    {
        for(const auto& o : m) out.max_defect = std::max(out.max_defect, block_.defect(o));
    }

    commutation_regime regime_;
    const optimizer_config& cfg_;
    observable_param block_;
};

} // namespace

void optimizer_config::validate() const
{
    if(restarts < 1) throw validation_error("restarts must be at least 1");
    if(max_iters < 1) throw validation_error("max_iters must be at least 1");
    if(!(step_decay > 0.0 && step_decay < 1.0)) throw validation_error("step_decay must lie in (0, 1)");
    if(!(fd_epsilon > 0.0)) throw validation_error("fd_epsilon must be positive");
    if(!(initial_step > 0.0)) throw validation_error("initial_step must be positive");
}

bound_result classical_max()
{
    bound_result out;
    out.regime = commutation_regime::classical;
    out.best_value = -1e300;
    for(int mask = 0; mask < 16; ++mask)
    {
        const int s1 = mask & 1 ? -1 : 1;
        const int s2 = mask & 2 ? -1 : 1;
        const int t1 = mask & 4 ? -1 : 1;
        const int t2 = mask & 8 ? -1 : 1;
        const double value = s1 * t1 + s1 * t2 + s2 * t1 - s2 * t2;
        if(value > out.best_value)
        {
            out.best_value = value;
            out.sign_witness = {s1, s2, t1, t2};
        }
    }
    for(int s : out.sign_witness)
    {
        const double v[] = {static_cast<double>(s)};
        out.best_observables.emplace_back(complex_matrix::diagonal(v), spectrum_class::dichotomic);
    }
    out.per_restart_values = {out.best_value};
    out.max_gram_eigenvalue = out.best_value * out.best_value;
    return out;
}

bound_result optimize_bound(commutation_regime regime, const optimizer_config& cfg)
{
    if(regime == commutation_regime::classical) return classical_max();

    cfg.validate();
    if(cfg.dim < 2)
        throw validation_error(std::string(regime == commutation_regime::local_tensor ? "dimPerFactor" : "totalDim") +
                               " must be at least 2");
    const std::size_t composite_dim = regime == commutation_regime::local_tensor ? cfg.dim * cfg.dim : cfg.dim;
    if(composite_dim > max_dim) throw sizing_error("requested dimension exceeds cap " + std::to_string(max_dim));

    const ascent engine(regime, cfg);
    std::vector<restart_outcome> outcomes(cfg.restarts);
    parallel_for(outcomes.size(), cfg.threads,
                 [&](std::size_t r) { outcomes[r] = engine.run(stream_seed(cfg.seed, r)); });

    bound_result out;
    out.regime = regime;
    std::size_t best = 0;
    for(std::size_t r = 0; r < outcomes.size(); ++r)
    {
        const auto& o = outcomes[r];
        out.per_restart_values.push_back(o.value);
        out.iterations += o.iterations;
        out.max_gram_eigenvalue = std::max(out.max_gram_eigenvalue, o.max_gram);
        out.max_spectrum_defect = std::max(out.max_spectrum_defect, o.max_defect);
        if(o.value > outcomes[best].value) best = r;
    }
    out.best_value = outcomes[best].value;
    for(const auto& m : outcomes[best].matrices) out.best_observables.emplace_back(m, cfg.observable_class);
    return out;
}

double regime_ceiling(commutation_regime regime) noexcept
{
    switch(regime)
    {
    case commutation_regime::classical: return 2.0;
    case commutation_regime::local_tensor: return 2.0 * std::sqrt(2.0);
    case commutation_regime::global: return 2.0 * std::sqrt(3.0);
    }
    return 4.0;
}

bool verify_ceiling(const bound_result& result) noexcept
{
    return result.best_value <= regime_ceiling(result.regime) + ceiling_tol;
}

} // namespace bellscope
