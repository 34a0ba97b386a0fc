#ifndef BELLSCOPE_BOOLE_HPP
#define BELLSCOPE_BOOLE_HPP

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

namespace bellscope::boole
{

struct bounds_interval
{
    double lo;
    double hi;
};

// Weights over 2^n atoms; bit i of the atom index marks membership in event A_i.
using joint_distribution = std::vector<double>;

inline constexpr std::size_t max_witness_events = 20;
inline constexpr std::size_t max_oracle_events = 3;
inline constexpr double joint_tol = 1e-12;

// Throws validation_error for an empty list or a probability outside [0, 1].
void validate_probs(std::span<const double> probs);

// Event probabilities with an optional explicit joint distribution.
struct boole_system
{
    std::vector<double> probs;
    std::optional<joint_distribution> joint;

    // Checks probs, and that the joint (if any) is nonnegative, sums to 1 and reproduces probs within 1e-12.
    void validate() const;
};

// [max p_i, min(1, sum p_i)]
bounds_interval union_bounds(std::span<const double> probs);
// [max(0, sum p_i - n + 1), min p_i]
bounds_interval intersection_bounds(std::span<const double> probs);

std::size_t event_count(const joint_distribution& joint);
std::vector<double> marginals(const joint_distribution& joint);
double union_probability(const joint_distribution& joint);
double intersection_probability(const joint_distribution& joint);

enum class bound_target
{
    union_lo,
    union_hi,
    inter_lo,
    inter_hi,
};

std::string_view to_string(bound_target t) noexcept;
inline constexpr bound_target all_targets[] = {bound_target::union_lo, bound_target::union_hi, bound_target::inter_lo,
                                               bound_target::inter_hi};

/// Joint distribution with the given marginals attaining one bound.
///
/// Events are laid out as arcs on a unit circle. Nested arcs [0, p_i)
/// attain the union lower and intersection upper bounds. Consecutive arcs
/// attain the union upper bound, and consecutive complements the
/// intersection lower bound.
joint_distribution witness(std::span<const double> probs, bound_target target);

struct oracle_report
{
    bounds_interval union_observed;
    bounds_interval intersection_observed;
    long vertices = 0;    // basic feasible solutions of the marginal polytope
    long grid_points = 0; // grid distributions whose marginals matched exactly
};

/// Brute-force extremes of the union and intersection probabilities over
/// joint distributions with the given marginals (n <= 3). Combines vertex
/// enumeration of the marginal polytope, an exhaustive grid of atom weights
/// in steps of 1/grid_resolution and the analytic witnesses.
oracle_report oracle_extremes(std::span<const double> probs, int grid_resolution, unsigned threads = 0);

// CSV with header "atom_bitmask,weight".
void write_joint_csv(std::ostream& out, const joint_distribution& joint);
// `events` fixes the atom count at 2^events; 0 infers it from the largest bitmask.
joint_distribution read_joint_csv(std::istream& in, std::size_t events = 0);

} // namespace bellscope::boole

#endif
