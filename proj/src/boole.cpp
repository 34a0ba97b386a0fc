#include "bellscope/boole.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <string>

#include "bellscope/errors.hpp"
#include "bellscope/parallel.hpp"

namespace bellscope::boole
{

namespace
{

constexpr double vertex_tol = 1e-12;
constexpr double grid_match_tol = 1e-9;

// Arc [start, start + length) on the unit circle; length >= 1 covers everything.
struct arc
{
    double start;
    double length;

    bool contains(double x) const noexcept
    {
        if(length >= 1.0) return true;
        double d = x - start;
        d -= std::floor(d);
        return d < length;
    }
};

struct event_layout
{
    std::vector<arc> arcs;
    bool complemented = false; // event is the circle minus its arc
};

joint_distribution rasterize(const event_layout& layout)
{
    const std::size_t n = layout.arcs.size();
    std::vector<double> cuts{0.0, 1.0};
    for(const auto& a : layout.arcs)
    {
        if(a.length >= 1.0 || a.length <= 0.0) continue;
        cuts.push_back(a.start - std::floor(a.start));
        const double end = a.start + a.length;
        cuts.push_back(end - std::floor(end));
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    joint_distribution joint(std::size_t{1} << n, 0.0);
    for(std::size_t k = 0; k + 1 < cuts.size(); ++k)
    {
        const double width = cuts[k + 1] - cuts[k];
        if(width <= 0.0) continue;
        const double mid = 0.5 * (cuts[k] + cuts[k + 1]);
        std::size_t mask = 0;
        for(std::size_t i = 0; i < n; ++i)
            if(layout.arcs[i].contains(mid) != layout.complemented) mask |= std::size_t{1} << i;
        joint[mask] += width;
    }
    return joint;
}

// Solves the square system a x = b in place by Gaussian elimination with partial pivoting.
bool solve(std::vector<std::vector<double>>& a, std::vector<double>& b)
{
    const std::size_t n = b.size();
    for(std::size_t col = 0; col < n; ++col)
    {
        std::size_t pivot = col;
        for(std::size_t r = col + 1; r < n; ++r)
            if(std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        if(std::abs(a[pivot][col]) < 1e-12) return false;
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for(std::size_t r = 0; r < n; ++r)
        {
            if(r == col) continue;
            const double f = a[r][col] / a[col][col];
            if(f == 0.0) continue;
            for(std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for(std::size_t r = 0; r < n; ++r) b[r] /= a[r][r];
    return true;
}

struct extremes
{
    double union_lo = 2.0, union_hi = -1.0, inter_lo = 2.0, inter_hi = -1.0;

    void observe(const joint_distribution& joint)
    {
        const double u = union_probability(joint);
        const double i = intersection_probability(joint);
        union_lo = std::min(union_lo, u);
        union_hi = std::max(union_hi, u);
        inter_lo = std::min(inter_lo, i);
        inter_hi = std::max(inter_hi, i);
    }

    void merge(const extremes& o)
    {
        union_lo = std::min(union_lo, o.union_lo);
        union_hi = std::max(union_hi, o.union_hi);
        inter_lo = std::min(inter_lo, o.inter_lo);
        inter_hi = std::max(inter_hi, o.inter_hi);
    }
};

long enumerate_vertices(std::span<const double> probs, extremes& ext)
{
    const std::size_t n = probs.size();
    const std::size_t atoms = std::size_t{1} << n;
    const std::size_t rows = n + 1;
    long found = 0;

    // Every subset of `rows` atoms is a candidate basis.
    for(std::size_t subset = 0; subset < (std::size_t{1} << atoms); ++subset)
    {
        if(static_cast<std::size_t>(std::popcount(subset)) != rows) continue;
        std::vector<std::size_t> basis;
        for(std::size_t a = 0; a < atoms; ++a)
            if(subset >> a & 1) basis.push_back(a);

        std::vector<std::vector<double>> m(rows, std::vector<double>(rows));
        std::vector<double> rhs(rows);
        for(std::size_t c = 0; c < rows; ++c)
        {
            m[0][c] = 1.0;
            for(std::size_t i = 0; i < n; ++i) m[i + 1][c] = basis[c] >> i & 1 ? 1.0 : 0.0;
        }
        rhs[0] = 1.0;
        for(std::size_t i = 0; i < n; ++i) rhs[i + 1] = probs[i];
        if(!solve(m, rhs)) continue;
        if(std::any_of(rhs.begin(), rhs.end(), [](double w) { return w < -vertex_tol; })) continue;

        joint_distribution joint(atoms, 0.0);
        for(std::size_t c = 0; c < rows; ++c) joint[basis[c]] = std::max(0.0, rhs[c]);
        ext.observe(joint);
        ++found;
    }
    return found;
}

// Visits every composition of `remaining` units into the atoms from `pos` on.
void grid_walk(std::vector<int>& units, std::size_t pos, int remaining, int resolution, std::span<const double> probs,
               extremes& ext, long& matched)
{
    if(pos + 1 == units.size())
    {
        units[pos] = remaining;
        const std::size_t n = probs.size();
        for(std::size_t i = 0; i < n; ++i)
        {
            int count = 0;
            for(std::size_t a = 0; a < units.size(); ++a)
                if(a >> i & 1) count += units[a];
            if(std::abs(static_cast<double>(count) / resolution - probs[i]) > grid_match_tol) return;
        }
        joint_distribution joint(units.size());
        for(std::size_t a = 0; a < units.size(); ++a) joint[a] = static_cast<double>(units[a]) / resolution;
        ext.observe(joint);
        ++matched;
        return;
    }
    for(int u = 0; u <= remaining; ++u)
    {
        units[pos] = u;
        grid_walk(units, pos + 1, remaining - u, resolution, probs, ext, matched);
    }
}

} // namespace

void validate_probs(std::span<const double> probs)
{
    if(probs.empty()) throw validation_error("probability list is empty");
    for(double p : probs)
        if(!(p >= 0.0 && p <= 1.0)) throw validation_error("probability " + std::to_string(p) + " outside [0, 1]");
}

void boole_system::validate() const
{
    validate_probs(probs);
    if(!joint) return;
    if(joint->size() != std::size_t{1} << probs.size())
        throw validation_error("joint distribution must have 2^n atoms");
    double total = 0.0;
    for(double w : *joint)
    {
        if(!(w >= 0.0)) throw validation_error("joint distribution has a negative weight");
        total += w;
    }
    if(std::abs(total - 1.0) > joint_tol) throw validation_error("joint distribution does not sum to 1");
    const auto m = marginals(*joint);
    for(std::size_t i = 0; i < probs.size(); ++i)
        if(std::abs(m[i] - probs[i]) > joint_tol)
            throw validation_error("joint distribution does not reproduce marginal " + std::to_string(i));
}

bounds_interval union_bounds(std::span<const double> probs)
{
    validate_probs(probs);
    const double lo = *std::max_element(probs.begin(), probs.end());
    const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    return {lo, std::min(1.0, sum)};
}

bounds_interval intersection_bounds(std::span<const double> probs)
{
    validate_probs(probs);
    const double sum = std::accumulate(probs.begin(), probs.end(), 0.0);
    const double n = static_cast<double>(probs.size());
    return {std::max(0.0, sum - n + 1.0), *std::min_element(probs.begin(), probs.end())};
}

std::size_t event_count(const joint_distribution& joint)
{
    if(joint.empty() || !std::has_single_bit(joint.size()))
        throw validation_error("joint distribution size must be a power of two");
    return static_cast<std::size_t>(std::countr_zero(joint.size()));
}

std::vector<double> marginals(const joint_distribution& joint)
{
    const std::size_t n = event_count(joint);
    std::vector<double> out(n, 0.0);
    for(std::size_t a = 0; a < joint.size(); ++a)
        for(std::size_t i = 0; i < n; ++i)
            if(a >> i & 1) out[i] += joint[a];
    return out;
}

double union_probability(const joint_distribution& joint)
{
    event_count(joint);
    double s = 0.0;
    for(std::size_t a = 1; a < joint.size(); ++a) s += joint[a];
    return s;
}

double intersection_probability(const joint_distribution& joint)
{
    event_count(joint);
    return joint.back();
}

std::string_view to_string(bound_target t) noexcept
{
    switch(t)
    {
    case bound_target::union_lo: return "union_lo";
    case bound_target::union_hi: return "union_hi";
    case bound_target::inter_lo: return "inter_lo";
    case bound_target::inter_hi: return "inter_hi";
    }
    return "unknown";
}

joint_distribution witness(std::span<const double> probs, bound_target target)
{
    validate_probs(probs);
    if(probs.size() > max_witness_events)
        throw validation_error("witness construction supports at most " + std::to_string(max_witness_events) +
                               " events");

    event_layout layout;
    switch(target)
    {
    case bound_target::union_lo:
    case bound_target::inter_hi:
        for(double p : probs) layout.arcs.push_back({0.0, p});
        break;
    case bound_target::union_hi:
    {
        double cursor = 0.0;
        for(double p : probs)
        {
            layout.arcs.push_back({cursor, p});
            cursor += p;
            cursor -= std::floor(cursor);
        }
        break;
    }
    case bound_target::inter_lo:
    {
        layout.complemented = true;
        double cursor = 0.0;
        for(double p : probs)
        {
            const double q = 1.0 - p;
            layout.arcs.push_back({cursor, q});
            cursor += q;
            cursor -= std::floor(cursor);
        }
        break;
    }
    }
    return rasterize(layout);
}

oracle_report oracle_extremes(std::span<const double> probs, int grid_resolution, unsigned threads)
{
    validate_probs(probs);
    if(probs.size() > max_oracle_events)
        throw validation_error("oracle supports at most " + std::to_string(max_oracle_events) + " events");
    if(grid_resolution < 10) throw validation_error("grid resolution must be at least 10");

    oracle_report report;
    extremes ext;
    report.vertices = enumerate_vertices(probs, ext);
    for(auto t : all_targets) ext.observe(witness(probs, t));

    const std::size_t atoms = std::size_t{1} << probs.size();
    std::vector<extremes> parts(grid_resolution + 1);
    std::vector<long> matched(grid_resolution + 1, 0);
    parallel_for(parts.size(), threads, [&](std::size_t first) {
        std::vector<int> units(atoms, 0);
        units[0] = static_cast<int>(first);
        if(atoms == 1) return;
        grid_walk(units, 1, grid_resolution - static_cast<int>(first), grid_resolution, probs, parts[first],
                  matched[first]);
    });
    for(std::size_t k = 0; k < parts.size(); ++k)
    {
        ext.merge(parts[k]);
        report.grid_points += matched[k];
    }

    report.union_observed = {ext.union_lo, ext.union_hi};
    report.intersection_observed = {ext.inter_lo, ext.inter_hi};
    return report;
}

void write_joint_csv(std::ostream& out, const joint_distribution& joint)
{
    event_count(joint);
    out << "atom_bitmask,weight\n";
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(17);
    for(std::size_t a = 0; a < joint.size(); ++a) out << a << ',' << joint[a] << '\n';
    out.flags(flags);
    out.precision(precision);
}

joint_distribution read_joint_csv(std::istream& in, std::size_t events)
{
    std::string line;
    if(!std::getline(in, line)) throw validation_error("joint file is empty");
    if(!line.empty() && line.back() == '\r') line.pop_back();
    if(line != "atom_bitmask,weight") throw validation_error("joint file header must be 'atom_bitmask,weight'");

    std::vector<std::pair<unsigned long, double>> rows;
    unsigned long largest = 0;
    while(std::getline(in, line))
    {
        if(!line.empty() && line.back() == '\r') line.pop_back();
        if(line.empty()) continue;
        std::istringstream fields(line);
        unsigned long mask = 0;
        double weight = 0.0;
        char comma = 0;
        if(!(fields >> mask >> comma >> weight) || comma != ',' || !(fields >> std::ws).eof())
            throw validation_error("malformed joint row '" + line + "'");
        if(!(weight >= 0.0) || !std::isfinite(weight)) throw validation_error("joint weight must be nonnegative");
        if(mask >= (1ul << max_witness_events)) throw validation_error("atom bitmask too large");
        rows.emplace_back(mask, weight);
        largest = std::max(largest, mask);
    }
    if(rows.empty()) throw validation_error("joint file has no rows");

    if(events > max_witness_events) throw validation_error("too many events");
    std::size_t atoms = events != 0 ? std::size_t{1} << events : std::max<std::size_t>(2, std::bit_ceil(largest + 1));
    if(largest >= atoms) throw validation_error("atom bitmask exceeds 2^n - 1");
    joint_distribution joint(atoms, 0.0);
    std::vector<bool> seen(joint.size(), false);
    for(const auto& [mask, weight] : rows)
    {
        if(seen[mask]) throw validation_error("duplicate atom " + std::to_string(mask));
        seen[mask] = true;
        joint[mask] = weight;
    }
    return joint;
}

} // namespace bellscope::boole
