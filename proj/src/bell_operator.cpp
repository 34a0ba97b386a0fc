#include "bellscope/bell_operator.hpp"

#include <cmath>
#include <string>

#include "bellscope/errors.hpp"

namespace bellscope
{

namespace
{

constexpr double state_norm_tol = 1e-12;
constexpr double imaginary_tol = 1e-10;
constexpr double ceiling_tol = 1e-9;

bool commutes(const complex_matrix& a, const complex_matrix& b)
{
    return spectral_norm(commutator(a, b)) < commute_tol;
}

void require_same_dim(std::size_t expected, const observable& o, const char* name)
{
    if(o.dim() != expected)
        throw shape_error(std::string("observable ") + name + " has dimension " + std::to_string(o.dim()) +
                          ", expected " + std::to_string(expected));
}

} // namespace

std::string_view to_string(commutation_regime r) noexcept
{
    switch(r)
    {
    case commutation_regime::classical: return "classical";
    case commutation_regime::local_tensor: return "tensor";
    case commutation_regime::global: return "global";
    }
    return "unknown";
}

std::optional<commutation_regime> parse_regime(std::string_view name) noexcept
{
    if(name == "classical") return commutation_regime::classical;
    if(name == "tensor") return commutation_regime::local_tensor;
    if(name == "global") return commutation_regime::global;
    return std::nullopt;
}

complex_matrix bell_composite(const complex_matrix& a1, const complex_matrix& a2, const complex_matrix& b1,
                              const complex_matrix& b2, commutation_regime regime)
{
    if(regime == commutation_regime::local_tensor)
    {
        auto out = tensor(a1, b1);
        out += tensor(a1, b2);
        out += tensor(a2, b1);
        out -= tensor(a2, b2);
        return out;
    }
    auto out = jordan_product(a1, b1);
    out += jordan_product(a1, b2);
    out += jordan_product(a2, b1);
    out -= jordan_product(a2, b2);
    return out;
}

bell_operator::bell_operator(observable a1, observable a2, observable b1, observable b2, commutation_regime regime,
                             complex_matrix composite)
    : a1_(std::move(a1)), a2_(std::move(a2)), b1_(std::move(b1)), b2_(std::move(b2)), regime_(regime),
      composite_(std::move(composite))
{
}

bell_operator build_bell(observable a1, observable a2, observable b1, observable b2, commutation_regime regime)
{
    if(regime == commutation_regime::local_tensor)
    {
        require_same_dim(a1.dim(), a2, "a2");
        require_same_dim(b1.dim(), b2, "b2");
        if(a1.dim() * b1.dim() > max_dim) throw sizing_error("tensor space exceeds dimension cap");
    }
    else
    {
        require_same_dim(a1.dim(), a2, "a2");
        require_same_dim(a1.dim(), b1, "b1");
        require_same_dim(a1.dim(), b2, "b2");
    }

    if(regime == commutation_regime::classical)
    {
        const complex_matrix* ops[] = {&a1.matrix(), &a2.matrix(), &b1.matrix(), &b2.matrix()};
        for(int i = 0; i < 4; ++i)
            for(int j = i + 1; j < 4; ++j)
                if(!commutes(*ops[i], *ops[j]))
                    throw regime_violation("classical regime requested but operators " + std::to_string(i) + " and " +
                                           std::to_string(j) + " do not commute");
    }

    auto composite = bell_composite(a1.matrix(), a2.matrix(), b1.matrix(), b2.matrix(), regime);
    // Each of the four terms has norm <= 1, so the composite cannot exceed 4.
    if(!composite.is_hermitian(observable::hermitian_tol)) throw validation_error("Bell composite is not Hermitian");
    if(spectral_norm(composite) > 4.0 + ceiling_tol) throw validation_error("Bell composite exceeds norm 4");

    return bell_operator(std::move(a1), std::move(a2), std::move(b1), std::move(b2), regime, std::move(composite));
}

commutation_regime classify_regime(const observable& a1, const observable& a2, const observable& b1,
                                   const observable& b2, bool same_space)
{
    require_same_dim(a1.dim(), a2, "a2");
    require_same_dim(b1.dim(), b2, "b2");

    const bool a_commute = commutes(a1.matrix(), a2.matrix());
    const bool b_commute = commutes(b1.matrix(), b2.matrix());

    if(!same_space)
        return a_commute && b_commute ? commutation_regime::classical : commutation_regime::local_tensor;

    require_same_dim(a1.dim(), b1, "b1");
    bool cross_commute = true;
    for(const auto* a : {&a1, &a2})
        for(const auto* b : {&b1, &b2}) cross_commute = cross_commute && commutes(a->matrix(), b->matrix());

    if(cross_commute && a_commute && b_commute) return commutation_regime::classical;
    if(cross_commute) return commutation_regime::local_tensor;
    return commutation_regime::global;
}

bell_evaluation expectation(const bell_operator& inst, std::span<const complex> state)
{
    if(state.size() != inst.dim())
        throw shape_error("state has length " + std::to_string(state.size()) + ", operator dimension is " +
                          std::to_string(inst.dim()));
    const double n = norm(state);
    if(std::abs(n - 1.0) > state_norm_tol) throw validation_error("state is not normalized (norm " + std::to_string(n) + ")");

    const complex value = expectation_value(inst.composite(), state);
    if(std::abs(value.imag()) >= imaginary_tol) throw validation_error("expectation has a non-negligible imaginary part");
    return {value.real(), evaluation_mode::state_expectation, inst.regime()};
}

bell_evaluation max_expectation(const bell_operator& inst)
{
    return {max_eigenvalue(inst.composite()), evaluation_mode::max_eigenvalue, inst.regime()};
}

double gram_max_eigenvalue(const complex_matrix& composite)
{
    const double n = spectral_norm(composite);
    return n * n;
}

} // namespace bellscope
