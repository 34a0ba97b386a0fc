#include "bellscope/quantum_pair.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <string>

#include "bellscope/errors.hpp"
#include "bellscope/parallel.hpp"

namespace bellscope
{

void measurement_settings::validate() const
{
    for(double a : {alpha1, alpha2, beta1, beta2})
        if(!std::isfinite(a)) throw validation_error("analyzer angle is not finite");
}

namespace quantum
{

namespace
{

const complex_matrix& identity2()
{
    static const complex_matrix id = complex_matrix::identity(2);
    return id;
}

double parse_double(std::string_view text)
{
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if(ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw validation_error("malformed number '" + std::string(text) + "'");
    return v;
}

} // namespace

std::string_view to_string(pair_kind k) noexcept
{
    return k == pair_kind::spin_singlet ? "singlet" : "photon";
}

two_particle_state two_particle_state::singlet()
{
    const double h = 1.0 / std::numbers::sqrt2;
    return {{0.0, h, -h, 0.0}, pair_kind::spin_singlet};
}

two_particle_state two_particle_state::photon_pair()
{
    const double h = 1.0 / std::numbers::sqrt2;
    return {{h, 0.0, 0.0, h}, pair_kind::photon_cascade};
}

observable spin_observable(double angle)
{
    auto m = pauli::z() * std::cos(angle);
    m += pauli::x() * std::sin(angle);
    return observable(std::move(m), spectrum_class::dichotomic);
}

observable analyzer_observable(double angle, pair_kind kind)
{
    return spin_observable(kind == pair_kind::photon_cascade ? 2.0 * angle : angle);
}

double correlation(const two_particle_state& state, double alpha, double beta)
{
    const auto a = analyzer_observable(alpha, state.kind);
    const auto b = analyzer_observable(beta, state.kind);
    return expectation_value(tensor(a.matrix(), b.matrix()), state.vector).real();
}

coincidence_table make_coincidence_table(const two_particle_state& state, const measurement_settings& s)
{
    s.validate();
    const double alphas[] = {s.alpha1, s.alpha2};
    const double betas[] = {s.beta1, s.beta2};
    coincidence_table table{};
    for(int i = 0; i < 2; ++i)
    {
        const auto a_obs = analyzer_observable(alphas[i], state.kind);
        const auto& a = a_obs.matrix();
        const auto a_plus = (identity2() + a) * 0.5;
        const auto a_minus = (identity2() - a) * 0.5;
        for(int j = 0; j < 2; ++j)
        {
            const auto b_obs = analyzer_observable(betas[j], state.kind);
            const auto& b = b_obs.matrix();
            const auto b_plus = (identity2() + b) * 0.5;
            const auto b_minus = (identity2() - b) * 0.5;
            auto prob = [&](const complex_matrix& pa, const complex_matrix& pb) {
                return expectation_value(tensor(pa, pb), state.vector).real();
            };
            table[i][j] = {prob(a_plus, b_plus), prob(a_plus, b_minus), prob(a_minus, b_plus), prob(a_minus, b_minus)};
        }
    }
    return table;
}

double chsh_value(const two_particle_state& state, const measurement_settings& s)
{
    s.validate();
    return correlation(state, s.alpha1, s.beta1) + correlation(state, s.alpha1, s.beta2) +
           correlation(state, s.alpha2, s.beta1) - correlation(state, s.alpha2, s.beta2);
}

double chsh_from_table(const coincidence_table& t) noexcept
{
    return t[0][0].correlator() + t[0][1].correlator() + t[1][0].correlator() - t[1][1].correlator();
}

measurement_settings canonical_settings(pair_kind kind) noexcept
{
    using std::numbers::pi;
    if(kind == pair_kind::photon_cascade) return measurement_settings::from_tuple(0.0, pi / 4, pi / 8, 3 * pi / 8);
    return measurement_settings::from_tuple(0.0, pi / 2, pi / 4, 3 * pi / 4);
}

scan_descriptor scan_descriptor::parse(std::string_view text)
{
    const auto c1 = text.find(':');
    const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
    if(c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos)
        throw validation_error("scan descriptor must look like start:stop:step");
    scan_descriptor d{parse_double(text.substr(0, c1)), parse_double(text.substr(c1 + 1, c2 - c1 - 1)),
                      parse_double(text.substr(c2 + 1))};
    if(d.offsets().empty()) throw validation_error("scan is empty");
    return d;
}

std::vector<double> scan_descriptor::offsets() const
{
    std::vector<double> out;
    if(!(step > 0.0) || !(stop >= start) || !std::isfinite(start) || !std::isfinite(stop)) return out;
    const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
    if(count > 10'000'000) throw validation_error("scan has too many points");
    out.reserve(count);
    for(long k = 0; k < count; ++k) out.push_back(start + static_cast<double>(k) * step);
    return out;
}

std::vector<scan_point> angle_scan(const two_particle_state& state, const measurement_settings& pattern,
                                   const scan_descriptor& scan, unsigned threads)
{
    const auto offsets = scan.offsets();
    if(offsets.empty()) throw validation_error("scan is empty");
    std::vector<scan_point> out(offsets.size());
    parallel_for(offsets.size(), threads, [&](std::size_t k) {
        auto s = pattern;
        s.beta1 += offsets[k];
        s.beta2 += offsets[k];
        out[k] = {offsets[k], chsh_value(state, s)};
    });
    return out;
}

void write_scan_csv(std::ostream& out, const std::vector<scan_point>& points)
{
    out << "offset_radians,chsh_value\n";
    const auto flags = out.flags();
    const auto precision = out.precision();
    out << std::setprecision(17);
    for(const auto& p : points) out << p.offset << ',' << p.chsh << '\n';
    out.flags(flags);
    out.precision(precision);
}

} // namespace quantum

} // namespace bellscope
