#include "bellscope/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bellscope/errors.hpp"

namespace bellscope
{

namespace
{

constexpr double off_diagonal_tol = 1e-13;
constexpr int max_sweeps = 100;

double off_diagonal_mass(const complex_matrix& a)
{
    double s = 0.0;
    for(std::size_t i = 0; i < a.dim(); ++i)
        for(std::size_t j = 0; j < a.dim(); ++j)
            if(i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// Zeroes a(p,q) with the unitary U = diag(1, e^{-i phi}) * [[c, s], [-s, c]] acting on (p,q).
void rotate(complex_matrix& a, complex_matrix& v, std::size_t p, std::size_t q)
{
    const complex apq = a(p, q);
    const double r = std::abs(apq);
    if(r == 0.0) return;

    const complex phase = apq / r; // e^{i phi}
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * r);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const complex u_pp = c;
    const complex u_pq = s;
    const complex u_qp = -s * std::conj(phase);
    const complex u_qq = c * std::conj(phase);

    const std::size_t n = a.dim();
    for(std::size_t k = 0; k < n; ++k)
    {
        const complex akp = a(k, p);
        const complex akq = a(k, q);
        a(k, p) = akp * u_pp + akq * u_qp;
        a(k, q) = akp * u_pq + akq * u_qq;
    }
    for(std::size_t k = 0; k < n; ++k)
    {
        const complex apk = a(p, k);
        const complex aqk = a(q, k);
        a(p, k) = std::conj(u_pp) * apk + std::conj(u_qp) * aqk;
        a(q, k) = std::conj(u_pq) * apk + std::conj(u_qq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for(std::size_t k = 0; k < n; ++k)
    {
        const complex vkp = v(k, p);
        const complex vkq = v(k, q);
        v(k, p) = vkp * u_pp + vkq * u_qp;
        v(k, q) = vkp * u_pq + vkq * u_qq;
    }
}

void require_hermitian(const complex_matrix& m)
{
    const double defect = m.hermitian_defect();
    if(defect > observable::hermitian_tol)
        throw validation_error("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
}

// M^dagger M, built Hermitian by construction.
complex_matrix gram(const complex_matrix& m)
{
    const std::size_t n = m.dim();
    complex_matrix g(n);
    for(std::size_t i = 0; i < n; ++i)
        for(std::size_t j = i; j < n; ++j)
        {
            complex s = 0.0;
            for(std::size_t k = 0; k < n; ++k) s += std::conj(m(k, i)) * m(k, j);
            g(i, j) = s;
            g(j, i) = std::conj(s);
        }
    for(std::size_t i = 0; i < n; ++i) g(i, i) = g(i, i).real();
    return g;
}

} // namespace

eigen_decomposition hermitian_eigen(const complex_matrix& m)
{
    require_hermitian(m);
    const std::size_t n = m.dim();
    complex_matrix a = m;
    for(std::size_t i = 0; i < n; ++i) a(i, i) = a(i, i).real();
    complex_matrix v = complex_matrix::identity(n);

    const double tol = off_diagonal_tol * std::max(1.0, m.frobenius_norm());
    for(int sweep = 0; sweep < max_sweeps && off_diagonal_mass(a) >= tol; ++sweep)
    {
        for(std::size_t p = 0; p + 1 < n; ++p)
            for(std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

    eigen_decomposition out{std::vector<double>(n), complex_matrix(n)};
    for(std::size_t c = 0; c < n; ++c)
    {
        out.eigenvalues[c] = a(order[c], order[c]).real();
        for(std::size_t r = 0; r < n; ++r) out.eigenvectors(r, c) = v(r, order[c]);
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const complex_matrix& m)
{
    return hermitian_eigen(m).eigenvalues;
}

double max_eigenvalue(const complex_matrix& m)
{
    return hermitian_eigen(m).eigenvalues.back();
}

double spectral_norm(const complex_matrix& m)
{
    if(m.is_hermitian(observable::hermitian_tol))
    {
        const auto ev = hermitian_eigenvalues(m);
        return std::max(std::abs(ev.front()), std::abs(ev.back()));
    }
    return std::sqrt(std::max(0.0, max_eigenvalue(gram(m))));
}

complex_matrix reconstruct(const complex_matrix& vectors, std::span<const double> values)
{
    const std::size_t n = vectors.dim();
    if(values.size() != n) throw shape_error("eigenvalue count does not match dimension");
    complex_matrix out(n);
    for(std::size_t i = 0; i < n; ++i)
        for(std::size_t j = 0; j < n; ++j)
        {
            complex s = 0.0;
            for(std::size_t k = 0; k < n; ++k) s += vectors(i, k) * values[k] * std::conj(vectors(j, k));
            out(i, j) = s;
        }
    return out;
}

complex_matrix unitary_exp(const complex_matrix& hermitian)
{
    const auto eig = hermitian_eigen(hermitian);
    const std::size_t n = hermitian.dim();
    complex_matrix out(n);
    for(std::size_t i = 0; i < n; ++i)
        for(std::size_t j = 0; j < n; ++j)
        {
            complex s = 0.0;
            for(std::size_t k = 0; k < n; ++k)
                s += eig.eigenvectors(i, k) * std::polar(1.0, eig.eigenvalues[k]) * std::conj(eig.eigenvectors(j, k));
            out(i, j) = s;
        }
    return out;
}

std::string_view to_string(spectrum_class c) noexcept
{
    return c == spectrum_class::dichotomic ? "dichotomic" : "contraction";
}

observable::observable(complex_matrix matrix, spectrum_class cls) : matrix_(std::move(matrix)), class_(cls)
{
    require_hermitian(matrix_);
    if(class_ == spectrum_class::dichotomic)
    {
        const double defect = max_abs_diff(matrix_ * matrix_, complex_matrix::identity(matrix_.dim()));
        if(defect > spectrum_tol)
            throw validation_error("dichotomic observable does not square to identity (defect " +
                                   std::to_string(defect) + ")");
    }
    else
    {
        const double n = spectral_norm(matrix_);
        if(n > 1.0 + spectrum_tol)
            throw validation_error("contraction observable has spectral norm " + std::to_string(n) + " > 1");
    }
}

} // namespace bellscope
