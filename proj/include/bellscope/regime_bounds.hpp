#ifndef BELLSCOPE_REGIME_BOUNDS_HPP
#define BELLSCOPE_REGIME_BOUNDS_HPP

#include <array>
#include <cstdint>
#include <vector>

#include "bellscope/bell_operator.hpp"

namespace bellscope
{

struct optimizer_config
{
    // Dimension of each tensor factor (tensor regime) or of the shared space (global regime).
    std::size_t dim = 2;
    int restarts = 64;
    int max_iters = 2000;
    double initial_step = 0.1;
    double step_decay = 0.7;
    std::uint64_t seed = 42;
    spectrum_class observable_class = spectrum_class::dichotomic;
    double fd_epsilon = 1e-5;
    // Worker threads for restarts; 0 picks the hardware concurrency.
    unsigned threads = 0;

    // Throws validation_error on out-of-range fields.
    void validate() const;
};

struct bound_result
{
    double best_value = 0.0;
    commutation_regime regime = commutation_regime::classical;
    std::vector<observable> best_observables; // a1, a2, b1, b2
    std::vector<double> per_restart_values;
    long iterations = 0;
    // Largest eigenvalue of B^dagger B seen over every evaluated iterate.
    double max_gram_eigenvalue = 0.0;
    // Largest spectrum-invariant defect over accepted iterates (|O^2 - I| or norm excess).
    double max_spectrum_defect = 0.0;
    // Sign witness for the classical brute force (s1, s2, t1, t2).
    std::array<int, 4> sign_witness{};
};

// Brute-force maximum of s1 t1 + s1 t2 + s2 t1 - s2 t2 over s, t in {-1, +1}.
bound_result classical_max();

/// Multi-start ascent on the largest eigenvalue of B over observable configurations.
///
/// Each observable is V diag(mu) V^dagger with V = exp(iH). The free
/// parameters are the entries of H (plus mu for contractions); mu is a fixed
/// balanced sign pattern for dichotomic observables. The gradient is a
/// central finite difference, steps are normalized and shrink by
/// step_decay whenever they fail to improve. The classical regime delegates
/// to classical_max().
bound_result optimize_bound(commutation_regime regime, const optimizer_config& cfg);

// 2, 2 sqrt 2 and 2 sqrt 3 for classical, tensor and global.
double regime_ceiling(commutation_regime regime) noexcept;

inline constexpr double ceiling_tol = 1e-6;

// True iff best_value <= regime_ceiling + 1e-6.
bool verify_ceiling(const bound_result& result) noexcept;

} // namespace bellscope

#endif
