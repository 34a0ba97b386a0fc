#include "bellscope/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bellscope/boole.hpp"
#include "bellscope/errors.hpp"
#include "bellscope/lhv.hpp"
#include "bellscope/quantum_pair.hpp"
#include "bellscope/regime_bounds.hpp"

namespace bellscope::cli
{

namespace
{

using json = nlohmann::ordered_json;

constexpr double lhv_bound_tol = 1e-6;
constexpr double audit_tol = 1e-10;

// A subcommand signals a scientific falsification by returning exit_falsified.
struct outcome
{
    json results;
    int exit_code = exit_ok;
};

std::vector<double> parse_list(const std::string& text, const char* what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while(std::getline(ss, item, ','))
    {
        std::size_t used = 0;
        double v = 0.0;
        try
        {
            v = std::stod(item, &used);
        }
        catch(const std::exception&)
        {
            throw validation_error(std::string("malformed ") + what + " value '" + item + "'");
        }
        if(used != item.size() || !std::isfinite(v))
            throw validation_error(std::string("malformed ") + what + " value '" + item + "'");
        out.push_back(v);
    }
    if(out.empty()) throw validation_error(std::string(what) + " list is empty");
    return out;
}

measurement_settings parse_angles(const std::string& text, bool degrees)
{
    auto v = parse_list(text, "angle");
    if(v.size() != 4) throw validation_error("--angles takes exactly four values a,a',b,b'");
    if(degrees)
        for(auto& x : v) x *= std::numbers::pi / 180.0;
    return measurement_settings::from_tuple(v[0], v[1], v[2], v[3]);
}

json settings_json(const measurement_settings& s)
{
    return {{"alpha1", s.alpha1}, {"alpha2", s.alpha2}, {"beta1", s.beta1}, {"beta2", s.beta2}};
}

json matrix_json(const complex_matrix& m)
{
    json rows = json::array();
    for(std::size_t i = 0; i < m.dim(); ++i)
    {
        json row = json::array();
        for(std::size_t j = 0; j < m.dim(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

json interval_json(const boole::bounds_interval& b)
{
    return json::array({b.lo, b.hi});
}

std::filesystem::path ensure_dir(const std::string& dir)
{
    std::filesystem::path p(dir);
    std::filesystem::create_directories(p);
    return p;
}

// Common flags shared by every subcommand.
struct common_options
{
    std::uint64_t seed = 42;
    unsigned threads = 0;
    std::string format = "json";
    std::string out_dir;

    void attach(CLI::App* app)
    {
        app->add_option("--seed", seed, "Master seed")->capture_default_str();
        app->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)")->capture_default_str();
        app->add_option("--format", format, "Report format")->check(CLI::IsMember({"json"}))->capture_default_str();
        app->add_option("--out-dir", out_dir, "Directory for CSV side files");
    }

    void echo(json& config) const
    {
        config["seed"] = seed;
        config["threads"] = threads;
        config["format"] = format;
        config["outDir"] = out_dir;
    }
};

struct bounds_options
{
    std::string regime;
    std::size_t dim = 0;
    optimizer_config cfg;
    std::string observable_class = "dichotomic";
};

outcome cmd_bounds(const bounds_options& o, const common_options& c, json& config)
{
    const auto regime = parse_regime(o.regime);
    if(!regime) throw validation_error("unknown regime '" + o.regime + "'");

    auto cfg = o.cfg;
    cfg.seed = c.seed;
    cfg.threads = c.threads;
    cfg.observable_class =
        o.observable_class == "contraction" ? spectrum_class::contraction : spectrum_class::dichotomic;
    cfg.dim = o.dim != 0 ? o.dim : (*regime == commutation_regime::global ? 4 : 2);

    config["regime"] = o.regime;
    config["dim"] = cfg.dim;
    config["restarts"] = cfg.restarts;
    config["iters"] = cfg.max_iters;
    config["initialStep"] = cfg.initial_step;
    config["stepDecay"] = cfg.step_decay;
    config["fdEpsilon"] = cfg.fd_epsilon;
    config["observableClass"] = o.observable_class;

    const auto result = optimize_bound(*regime, cfg);
    const bool pass = verify_ceiling(result);

    outcome out;
    auto& r = out.results;
    r["regime"] = o.regime;
    r["bestValue"] = result.best_value;
    r["ceiling"] = regime_ceiling(*regime);
    r["verdict"] = pass ? "pass" : "falsified";
    r["perRestartValues"] = result.per_restart_values;
    r["iterations"] = result.iterations;
    r["maxGramEigenvalue"] = result.max_gram_eigenvalue;
    r["maxSpectrumDefect"] = result.max_spectrum_defect;
    if(*regime == commutation_regime::classical)
        r["signWitness"] = {result.sign_witness[0], result.sign_witness[1], result.sign_witness[2],
                            result.sign_witness[3]};
    json obs = json::object();
    const char* names[] = {"a1", "a2", "b1", "b2"};
    for(std::size_t k = 0; k < result.best_observables.size(); ++k)
        obs[names[k]] = matrix_json(result.best_observables[k].matrix());
    r["bestObservables"] = std::move(obs);

    if(!pass)
    {
        r["falsification"] = {{"bestValue", result.best_value},
                              {"ceiling", regime_ceiling(*regime)},
                              {"excess", result.best_value - regime_ceiling(*regime)}};
        out.exit_code = exit_falsified;
    }
    return out;
}

struct lhv_options
{
    std::string model = "sign-cos";
    std::string model_file;
    std::string angles;
    bool degrees = false;
    std::string method = "quadrature";
    long nodes = lhv::default_nodes;
    long samples = lhv::default_samples;
    bool audit = false;
};

lhv::hidden_variable_model resolve_model(const lhv_options& o)
{
    if(o.model_file.empty()) return lhv::builtin_model(o.model);
    std::ifstream in(o.model_file);
    if(!in) throw validation_error("cannot open model file '" + o.model_file + "'");
    return lhv::load_table_model(in, std::filesystem::path(o.model_file).filename().string());
}

measurement_settings lhv_settings(const lhv_options& o)
{
    if(o.angles.empty())
    {
        using std::numbers::pi;
        return measurement_settings::from_tuple(0.0, pi / 2, pi / 4, 3 * pi / 4);
    }
    return parse_angles(o.angles, o.degrees);
}

void echo_lhv(const lhv_options& o, const measurement_settings& s, json& config)
{
    config["model"] = o.model_file.empty() ? o.model : "";
    config["modelFile"] = o.model_file;
    config["settings"] = settings_json(s);
    config["degrees"] = o.degrees;
    config["method"] = o.method;
    config["nodes"] = o.nodes;
    config["samples"] = o.samples;
    config["audit"] = o.audit;
}

json audit_json(const lhv::hidden_variable_model& model, const measurement_settings& s, long nodes, bool& failed)
{
    const double residue = lhv::zero_expression_audit(model, s, nodes);
    const double gap = lhv::interchange_gap(model, s.alpha1, s.beta1, s.beta2, nodes);
    const auto split = lhv::bell_difference_decomposition(model, s.alpha1, s.beta1, s.beta2, nodes);
    const double split_error = std::abs(split.lhs - split.rhs);
    failed = std::abs(residue) >= audit_tol || split_error >= audit_tol;
    return {{"zeroExpressionResidue", residue},
            {"interchangeGap", gap},
            {"differenceLhs", split.lhs},
            {"differenceRhs", split.rhs},
            {"differenceSplitError", split_error},
            {"tolerance", audit_tol}};
}

outcome cmd_lhv(const lhv_options& o, const common_options& c, json& config)
{
    const auto model = resolve_model(o);
    const auto s = lhv_settings(o);
    echo_lhv(o, s, config);

    const bool mc = o.method == "monte-carlo";
    const lhv::estimator est{mc ? lhv::method::monte_carlo : lhv::method::quadrature, mc ? o.samples : o.nodes, c.seed,
                             c.threads};
    const auto chsh = lhv::chsh_value(model, s, est);

    outcome out;
    auto& r = out.results;
    r["model"] = model.name;
    r["method"] = lhv::to_string(est.method);
    r["chsh"] = chsh.value;
    json terms = json::array();
    const char* labels[] = {"a1b1", "a1b2", "a2b1", "a2b2"};
    for(std::size_t k = 0; k < 4; ++k)
        terms.push_back({{"pair", labels[k]}, {"value", chsh.terms[k].value}, {"stderr", chsh.terms[k].stderr_}});
    r["correlations"] = std::move(terms);
    r["stderr"] = chsh.stderr_;

    // Classical bound check: quadrature is exact up to 1e-6, Monte Carlo gets 5 standard errors.
    const double allowance = mc ? 5.0 * chsh.stderr_ : lhv_bound_tol;
    const bool within = std::abs(chsh.value) <= 2.0 + allowance;
    r["classicalBound"] = {{"limit", 2.0}, {"allowance", allowance}, {"verdict", within ? "pass" : "falsified"}};
    if(!within) out.exit_code = exit_falsified;

    if(o.audit)
    {
        bool failed = false;
        r["audit"] = audit_json(model, s, o.nodes, failed);
        if(failed) out.exit_code = exit_falsified;
    }
    return out;
}

outcome cmd_audit(const lhv_options& o, const common_options&, json& config)
{
    const auto model = resolve_model(o);
    const auto s = lhv_settings(o);
    config["model"] = o.model_file.empty() ? o.model : "";
    config["modelFile"] = o.model_file;
    config["settings"] = settings_json(s);
    config["degrees"] = o.degrees;
    config["nodes"] = o.nodes;

    outcome out;
    bool failed = false;
    out.results = audit_json(model, s, o.nodes, failed);
    out.results["model"] = model.name;
    out.results["verdict"] = failed ? "falsified" : "pass";
    if(failed) out.exit_code = exit_falsified;
    return out;
}

struct quantum_options
{
    std::string state = "photon";
    std::string angles;
    bool degrees = false;
    std::string scan;
    bool tables = false;
};

json table_json(const quantum::coincidence_table& t)
{
    json out = json::array();
    const char* labels[2][2] = {{"a1b1", "a1b2"}, {"a2b1", "a2b2"}};
    for(int i = 0; i < 2; ++i)
        for(int j = 0; j < 2; ++j)
        {
            const auto& p = t[i][j];
            out.push_back({{"pair", labels[i][j]},
                           {"pp", p.pp},
                           {"pm", p.pm},
                           {"mp", p.mp},
                           {"mm", p.mm},
                           {"correlator", p.correlator()}});
        }
    return out;
}

outcome cmd_quantum(const quantum_options& o, const common_options& c, json& config)
{
    quantum::two_particle_state state = quantum::two_particle_state::photon_pair();
    if(o.state == "singlet")
        state = quantum::two_particle_state::singlet();
    else if(o.state != "photon")
        throw validation_error("unknown state '" + o.state + "'");

    const auto s = o.angles.empty() ? quantum::canonical_settings(state.kind) : parse_angles(o.angles, o.degrees);
    config["state"] = o.state;
    config["settings"] = settings_json(s);
    config["degrees"] = o.degrees;
    config["scan"] = o.scan;
    config["tables"] = o.tables;

    outcome out;
    auto& r = out.results;
    r["state"] = o.state;
    r["chsh"] = quantum::chsh_value(state, s);
    r["tsirelson"] = 2.0 * std::numbers::sqrt2;
    if(o.tables) r["coincidenceTables"] = table_json(quantum::make_coincidence_table(state, s));

    if(!o.scan.empty())
    {
        const auto scan = quantum::scan_descriptor::parse(o.scan);
        const auto points = quantum::angle_scan(state, s, scan, c.threads);
        const auto dir = ensure_dir(c.out_dir.empty() ? "." : c.out_dir);
        const auto path = dir / ("scan_" + o.state + ".csv");
        std::ofstream file(path);
        if(!file) throw validation_error("cannot write '" + path.string() + "'");
        quantum::write_scan_csv(file, points);

        auto best = points.front();
        for(const auto& p : points)
            if(std::abs(p.chsh) > std::abs(best.chsh)) best = p;
        r["scan"] = {{"csv", path.filename().string()},
                     {"points", points.size()},
                     {"maxAbsChsh", std::abs(best.chsh)},
                     {"argmaxOffset", best.offset}};
    }
    return out;
}

struct boole_options
{
    std::string probs;
    bool oracle = false;
    int grid = 10;
    std::string joint_file;
};

outcome cmd_boole(const boole_options& o, const common_options& c, json& config)
{
    const auto probs = parse_list(o.probs, "probability");
    boole::validate_probs(probs);
    config["probs"] = probs;
    config["oracle"] = o.oracle;
    config["grid"] = o.grid;
    config["jointFile"] = o.joint_file;

    const auto ub = boole::union_bounds(probs);
    const auto ib = boole::intersection_bounds(probs);

    outcome out;
    auto& r = out.results;
    r["union"] = interval_json(ub);
    r["intersection"] = interval_json(ib);

    if(!o.joint_file.empty())
    {
        std::ifstream in(o.joint_file);
        if(!in) throw validation_error("cannot open joint file '" + o.joint_file + "'");
        boole::boole_system sys{probs, boole::read_joint_csv(in, probs.size())};
        sys.validate();
        const double u = boole::union_probability(*sys.joint);
        const double i = boole::intersection_probability(*sys.joint);
        const bool inside = u >= ub.lo - boole::joint_tol && u <= ub.hi + boole::joint_tol &&
                            i >= ib.lo - boole::joint_tol && i <= ib.hi + boole::joint_tol;
        r["joint"] = {{"union", u}, {"intersection", i}, {"withinBounds", inside}};
        if(!inside) out.exit_code = exit_falsified;
    }

    if(o.oracle)
    {
        if(probs.size() > boole::max_oracle_events)
            throw validation_error("--oracle supports at most " + std::to_string(boole::max_oracle_events) +
                                   " events");
        json witnesses = json::object();
        bool attained = true;
        for(auto t : boole::all_targets)
        {
            const auto w = boole::witness(probs, t);
            const bool is_union = t == boole::bound_target::union_lo || t == boole::bound_target::union_hi;
            const double achieved = is_union ? boole::union_probability(w) : boole::intersection_probability(w);
            const double target = t == boole::bound_target::union_lo   ? ub.lo
                                  : t == boole::bound_target::union_hi ? ub.hi
                                  : t == boole::bound_target::inter_lo ? ib.lo
                                                                       : ib.hi;
            const bool ok = std::abs(achieved - target) <= boole::joint_tol;
            attained = attained && ok;
            witnesses[std::string(boole::to_string(t))] = {{"achieved", achieved}, {"bound", target}, {"attained", ok}};
            if(!c.out_dir.empty())
            {
                std::ofstream file(ensure_dir(c.out_dir) / ("witness_" + std::string(boole::to_string(t)) + ".csv"));
                boole::write_joint_csv(file, w);
            }
        }
        const auto rep = boole::oracle_extremes(probs, o.grid, c.threads);
        const double tol = 1.0 / o.grid;
        const bool matches = std::abs(rep.union_observed.lo - ub.lo) <= tol &&
                             std::abs(rep.union_observed.hi - ub.hi) <= tol &&
                             std::abs(rep.intersection_observed.lo - ib.lo) <= tol &&
                             std::abs(rep.intersection_observed.hi - ib.hi) <= tol;
        r["witnesses"] = std::move(witnesses);
        r["oracle"] = {{"union", interval_json(rep.union_observed)},
                       {"intersection", interval_json(rep.intersection_observed)},
                       {"vertices", rep.vertices},
                       {"gridPoints", rep.grid_points},
                       {"tolerance", tol},
                       {"matchesFormulas", matches}};
        if(!matches || !attained) out.exit_code = exit_falsified;
    }
    return out;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Bell-combination bounds, hidden-variable simulation and Boole probability bounds", "bellscope"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    common_options common;

    bounds_options bo;
    auto* bounds = app.add_subcommand("bounds", "Maximize the Bell combination within a commutation regime");
    bounds->add_option("--regime", bo.regime, "classical | tensor | global")
        ->required()
        ->check(CLI::IsMember({"classical", "tensor", "global"}));
    bounds->add_option("--dim", bo.dim, "Factor dimension (tensor) or total dimension (global)");
    bounds->add_option("--restarts", bo.cfg.restarts)->capture_default_str();
    bounds->add_option("--iters", bo.cfg.max_iters)->capture_default_str();
    bounds->add_option("--step", bo.cfg.initial_step)->capture_default_str();
    bounds->add_option("--decay", bo.cfg.step_decay)->capture_default_str();
    bounds->add_option("--fd-epsilon", bo.cfg.fd_epsilon)->capture_default_str();
    bounds->add_option("--observable-class", bo.observable_class)
        ->check(CLI::IsMember({"dichotomic", "contraction"}))
        ->capture_default_str();
    common.attach(bounds);

    lhv_options lo;
    auto* lhv_cmd = app.add_subcommand("lhv", "Hidden-variable coincidence simulation");
    auto* audit_cmd = app.add_subcommand("audit", "Audit the derivation identities for a hidden-variable model");
    for(auto* sub : {lhv_cmd, audit_cmd})
    {
        auto* model_opt = sub->add_option("--model", lo.model, "sign-cos | constant | smooth-cos")
                              ->check(CLI::IsMember(lhv::builtin_model_names()))
                              ->capture_default_str();
        sub->add_option("--model-file", lo.model_file, "CSV response table (lambda,response)")->excludes(model_opt);
        sub->add_option("--angles", lo.angles, "a,a',b,b' in radians");
        sub->add_flag("--degrees", lo.degrees, "Interpret --angles in degrees");
        sub->add_option("--nodes", lo.nodes, "Quadrature nodes")->capture_default_str();
        common.attach(sub);
    }
    lhv_cmd->add_option("--method", lo.method)
        ->check(CLI::IsMember({"quadrature", "monte-carlo"}))
        ->capture_default_str();
    lhv_cmd->add_option("--samples", lo.samples, "Monte Carlo samples")->capture_default_str();
    lhv_cmd->add_flag("--audit", lo.audit, "Also run the derivation audits");

    quantum_options qo;
    auto* quantum_cmd = app.add_subcommand("quantum", "Quantum two-particle correlations");
    quantum_cmd->add_option("--state", qo.state, "singlet | photon")->capture_default_str();
    quantum_cmd->add_option("--angles", qo.angles, "a,a',b,b' in radians (default: canonical optimum)");
    quantum_cmd->add_flag("--degrees", qo.degrees);
    quantum_cmd->add_option("--scan", qo.scan, "start:stop:step offset applied to both far-side angles");
    quantum_cmd->add_flag("--tables", qo.tables, "Include coincidence tables");
    common.attach(quantum_cmd);

    boole_options bl;
    auto* boole_cmd = app.add_subcommand("boole", "Boole bounds for unions and intersections");
    boole_cmd->add_option("--probs", bl.probs, "Comma-separated event probabilities")->required();
    boole_cmd->add_flag("--oracle", bl.oracle, "Witnesses and brute-force corroboration (n <= 3)");
    boole_cmd->add_option("--grid", bl.grid, "Oracle grid resolution")->capture_default_str();
    boole_cmd->add_option("--joint", bl.joint_file, "Check a joint distribution CSV (atom_bitmask,weight)");
    common.attach(boole_cmd);

    try
    {
        app.parse(argc, argv);
    }
    catch(const CLI::ParseError& e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    const auto started = std::chrono::steady_clock::now();
    json report;
    report["toolVersion"] = tool_version;
    json config = json::object();
    common.echo(config);

    outcome result;
    try
    {
        if(bounds->parsed())
        {
            report["command"] = "bounds";
            result = cmd_bounds(bo, common, config);
        }
        else if(lhv_cmd->parsed())
        {
            report["command"] = "lhv";
            result = cmd_lhv(lo, common, config);
        }
        else if(audit_cmd->parsed())
        {
            report["command"] = "audit";
            result = cmd_audit(lo, common, config);
        }
        else if(quantum_cmd->parsed())
        {
            report["command"] = "quantum";
            result = cmd_quantum(qo, common, config);
        }
        else
        {
            report["command"] = "boole";
            result = cmd_boole(bl, common, config);
        }
    }
    catch(const validation_error& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }
    catch(const std::filesystem::filesystem_error& e)
    {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    }

    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
    report["config"] = std::move(config);
    report["seed"] = common.seed;
    report["results"] = std::move(result.results);
    report["wallTimeMs"] = elapsed.count();
    out << report.dump(2) << '\n';
    if(result.exit_code == exit_falsified)
        err << "falsification: a computed value exceeds its theoretical limit; see the report\n";
    return result.exit_code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    std::vector<const char*> argv{"bellscope"};
    for(const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

} // namespace bellscope::cli
