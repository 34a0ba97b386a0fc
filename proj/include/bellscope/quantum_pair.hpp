#ifndef BELLSCOPE_QUANTUM_PAIR_HPP
#define BELLSCOPE_QUANTUM_PAIR_HPP

#include <array>
#include <ostream>
#include <string_view>
#include <utility>
#include <vector>

#include "bellscope/hermitian.hpp"

namespace bellscope
{

/// Analyzer angles in radians for the combination
///     P(a1,b1) + P(a1,b2) + P(a2,b1) - P(a2,b2).
struct measurement_settings
{
    double alpha1 = 0.0;
    double alpha2 = 0.0;
    double beta1 = 0.0;
    double beta2 = 0.0;

    /// Maps a quadruple in textbook CHSH order (a, a', b, b'), whose
    /// combination is E(a,b) - E(a,b') + E(a',b) + E(a',b'), onto the
    /// fields above: alpha1 = a', alpha2 = a, beta1 = b, beta2 = b'.
    /// Both combinations then agree term by term.
    static measurement_settings from_tuple(double a, double a_prime, double b, double b_prime) noexcept
    {
        return {a_prime, a, b, b_prime};
    }

    // Throws validation_error when an angle is not finite.
    void validate() const;
};

namespace quantum
{

enum class pair_kind
{
    spin_singlet,   // (|01> - |10>)/sqrt 2, E = -cos(alpha - beta)
    photon_cascade, // (|HH> + |VV>)/sqrt 2, E = cos 2(alpha - beta)
};

std::string_view to_string(pair_kind k) noexcept;

struct two_particle_state
{
    state_vector vector;
    pair_kind kind;

    static two_particle_state singlet();
    static two_particle_state photon_pair();
};

// cos(angle) sigma_z + sin(angle) sigma_x
observable spin_observable(double angle);

// Station observable; photon analyzers rotate polarization, so the Bloch angle is doubled.
observable analyzer_observable(double angle, pair_kind kind);

// <psi| A(alpha) (x) B(beta) |psi>
double correlation(const two_particle_state& state, double alpha, double beta);

struct outcome_probabilities
{
    double pp, pm, mp, mm;

    double correlator() const noexcept { return pp - pm - mp + mm; }
    double total() const noexcept { return pp + pm + mp + mm; }
};

// Indexed [i][j] for the pair (alpha_{i+1}, beta_{j+1}).
using coincidence_table = std::array<std::array<outcome_probabilities, 2>, 2>;

coincidence_table make_coincidence_table(const two_particle_state& state, const measurement_settings& s);

double chsh_value(const two_particle_state& state, const measurement_settings& s);
double chsh_from_table(const coincidence_table& table) noexcept;

// Settings reaching 2 sqrt 2 in magnitude: textbook (0, pi/4, pi/8, 3pi/8) for photons
// and (0, pi/2, pi/4, 3pi/4) for spins.
measurement_settings canonical_settings(pair_kind kind) noexcept;

struct scan_descriptor
{
    double start;
    double stop;
    double step;

    // Parses "start:stop:step". Throws validation_error on malformed or empty scans.
    static scan_descriptor parse(std::string_view text);
    std::vector<double> offsets() const;
};

struct scan_point
{
    double offset;
    double chsh;
};

// Shifts both far-side angles of `pattern` by each offset.
std::vector<scan_point> angle_scan(const two_particle_state& state, const measurement_settings& pattern,
                                   const scan_descriptor& scan, unsigned threads = 0);

// CSV with header "offset_radians,chsh_value".
void write_scan_csv(std::ostream& out, const std::vector<scan_point>& points);

} // namespace quantum

} // namespace bellscope

#endif
