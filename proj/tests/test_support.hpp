#ifndef BELLSCOPE_TEST_SUPPORT_HPP
#define BELLSCOPE_TEST_SUPPORT_HPP

#include <cmath>
#include <random>

#include "bellscope/complex_matrix.hpp"
#include "bellscope/hermitian.hpp"

namespace bellscope::testing
{

inline complex_matrix random_matrix(std::size_t dim, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    complex_matrix m(dim);
    for(std::size_t i = 0; i < dim; ++i)
        for(std::size_t j = 0; j < dim; ++j) m(i, j) = complex(n(rng), n(rng));
    return m;
}

inline complex_matrix random_hermitian(std::size_t dim, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    complex_matrix m(dim);
    for(std::size_t i = 0; i < dim; ++i)
    {
        m(i, i) = n(rng);
        for(std::size_t j = i + 1; j < dim; ++j)
        {
            m(i, j) = complex(n(rng), n(rng));
            m(j, i) = std::conj(m(i, j));
        }
    }
    return m;
}

inline state_vector random_unit_vector(std::size_t dim, std::mt19937_64& rng)
{
    std::normal_distribution<double> n(0.0, 1.0);
    state_vector v(dim);
    for(auto& z : v) z = complex(n(rng), n(rng));
    const double s = norm(v);
    for(auto& z : v) z /= s;
    return v;
}

// Random dichotomic observable U diag(+1..,-1..) U^dagger with a balanced sign pattern.
inline observable random_dichotomic(std::size_t dim, std::mt19937_64& rng)
{
    const auto u = unitary_exp(random_hermitian(dim, rng));
    std::vector<double> signs(dim);
    for(std::size_t i = 0; i < dim; ++i) signs[i] = i < (dim + 1) / 2 ? 1.0 : -1.0;
    return observable(reconstruct(u, signs), spectrum_class::dichotomic);
}

} // namespace bellscope::testing

#endif
