#ifndef BELLSCOPE_BELL_OPERATOR_HPP
#define BELLSCOPE_BELL_OPERATOR_HPP

#include <optional>
#include <span>
#include <string_view>

#include "bellscope/hermitian.hpp"

namespace bellscope
{

enum class commutation_regime
{
    classical,    // all four operators commute mutually
    local_tensor, // operators on different tensor factors commute
    global,       // no commutation assumed
};

std::string_view to_string(commutation_regime r) noexcept;
std::optional<commutation_regime> parse_regime(std::string_view name) noexcept;

// Spectral norm below which two operators are taken to commute.
inline constexpr double commute_tol = 1e-10;

/// The four measurement observables and the assembled Bell combination
///
///     B = a1.b1 + a1.b2 + a2.b1 - a2.b2
///
/// where "." is the Kronecker product in the local-tensor regime and the
/// Jordan product (ab + ba)/2 otherwise, which keeps B Hermitian.
class bell_operator
{
public:
    const observable& a1() const noexcept { return a1_; }
    const observable& a2() const noexcept { return a2_; }
    const observable& b1() const noexcept { return b1_; }
    const observable& b2() const noexcept { return b2_; }
    commutation_regime regime() const noexcept { return regime_; }
    const complex_matrix& composite() const noexcept { return composite_; }
    std::size_t dim() const noexcept { return composite_.dim(); }

    friend bell_operator build_bell(observable a1, observable a2, observable b1, observable b2,
                                    commutation_regime regime);

private:
    bell_operator(observable a1, observable a2, observable b1, observable b2, commutation_regime regime,
                  complex_matrix composite);

    observable a1_, a2_, b1_, b2_;
    commutation_regime regime_;
    complex_matrix composite_;
};

// Throws shape_error on dimension mismatch, regime_violation when a
// Classical instance is requested for non-commuting inputs.
bell_operator build_bell(observable a1, observable a2, observable b1, observable b2, commutation_regime regime);

// Composite only, without building an instance. Used by the optimizer's inner loop.
complex_matrix bell_composite(const complex_matrix& a1, const complex_matrix& a2, const complex_matrix& b1,
                              const complex_matrix& b2, commutation_regime regime);

/// Classifies four observables by which pairs commute.
///
/// With same_space = false the a's live on factor one and the b's on factor
/// two, so cross pairs commute by construction.
commutation_regime classify_regime(const observable& a1, const observable& a2, const observable& b1,
                                   const observable& b2, bool same_space);

enum class evaluation_mode
{
    state_expectation,
    max_eigenvalue,
};

struct bell_evaluation
{
    double value;
    evaluation_mode mode;
    commutation_regime regime;
};

// <state|B|state>. The state must be unit norm within 1e-12.
bell_evaluation expectation(const bell_operator& inst, std::span<const complex> state);

// Largest eigenvalue of B.
bell_evaluation max_expectation(const bell_operator& inst);

// Largest eigenvalue of B^dagger B.
double gram_max_eigenvalue(const complex_matrix& composite);

} // namespace bellscope

#endif
