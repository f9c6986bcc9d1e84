// Command line front end: rate-curve sweeps, optimality certification,
// attack-unitary synthesis and export, and the protocol simulations.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bb84eve/info.hpp"
#include "bb84eve/io.hpp"
#include "bb84eve/optimality.hpp"
#include "bb84eve/sim.hpp"
#include "bb84eve/synth.hpp"

namespace {

using namespace bb84eve;

// JSON config support: top-level keys feed global options, nested objects
// scope their keys to the subcommand of the same name. Flags given on the
// command line still win.
class ConfigJson : public CLI::Config {
  public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        return render(app, default_also).dump(2) + "\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j = json::parse(input);
        std::vector<CLI::ConfigItem> out;
        collect(j, "", {}, out);
        return out;
    }

  private:
    static json render(const CLI::App* app, bool default_also) {
        json j = json::object();
        for (const CLI::Option* opt : app->get_options()) {
            if (opt->get_lnames().empty() || !opt->get_configurable()) continue;
            const std::string& name = opt->get_lnames()[0];
            if (opt->count() > 0)
                j[name] = opt->results().at(0);
            else if (default_also && !opt->get_default_str().empty())
                j[name] = opt->get_default_str();
        }
        for (const CLI::App* sub : app->get_subcommands([](const CLI::App*) { return true; }))
            j[sub->get_name()] = render(sub, default_also);
        return j;
    }

    static void collect(const json& node, const std::string& name, std::vector<std::string> parents,
                        std::vector<CLI::ConfigItem>& out) {
        if (node.is_object()) {
            if (!name.empty()) parents.push_back(name);
            for (auto it = node.begin(); it != node.end(); ++it)
                collect(it.value(), it.key(), parents, out);
            return;
        }
        if (name.empty()) throw std::invalid_argument("config: top level must be a JSON object");
        CLI::ConfigItem item;
        item.parents = std::move(parents);
        item.name = name;
        if (node.is_boolean()) {
            item.inputs = {node.get<bool>() ? "true" : "false"};
        } else if (node.is_number_integer()) {
            item.inputs = {std::to_string(node.get<long long>())};
        } else if (node.is_number()) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", node.get<double>());
            item.inputs = {buf};
        } else if (node.is_string()) {
            item.inputs = {node.get<std::string>()};
        } else {
            throw std::invalid_argument("config: unsupported value type for key '" + name + "'");
        }
        out.push_back(std::move(item));
    }
};

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

MeasurementSetup resolve_setup(const std::string& kind, const std::string& file,
                               std::uint64_t seed) {
    if (kind == "computational") return computational_setup();
    if (kind == "fuchs") return fuchs_setup();
    if (kind == "random") return random_setup(seed);
    if (file.empty())
        throw std::invalid_argument("--measurement file requires --measurement-file <path>");
    MeasurementSetup m = setup_from_json(read_json_file(file));
    if (m.basis != Basis::Computational)
        throw std::invalid_argument("measurement file must serve the computational basis");
    return m;
}

// Transport chain from the native construction to the requested initial
// state, then to the requested measurement frame.
AttackUnitary build_attack(const ErrorRates& rates, const std::string& is_kind,
                           const std::string& is_file, const MeasurementSetup& m) {
    AttackUnitary a = synth_delta_hadamard(rates);
    if (is_kind != "delta_hadamard") {
        a = change_initial_state(a, kron(CMat::identity(2), hadamard()));
        if (is_kind != "delta") {
            a = change_initial_state(a,
                                     kron(rate_rotation(rates.d_xy), rate_rotation(rates.d_uv)));
            if (is_kind == "bell") {
                a = change_initial_state(a, cnot() * kron(hadamard(), CMat::identity(2)));
            } else if (is_kind == "file") {
                if (is_file.empty())
                    throw std::invalid_argument(
                        "--initial-state file requires --initial-state-file <path>");
                CVec target = cvec_from_json(read_json_file(is_file));
                if (target.size() != 4)
                    throw std::invalid_argument("initial state file must hold 4 amplitudes");
                if (std::abs(norm(target) - 1.0) > 1e-9)
                    throw std::invalid_argument("initial state file must be normalized");
                a = change_initial_state(a,
                                         from_columns(complete_orthonormal_basis({target}, 4)));
            }
        }
    }
    return change_measurement(a, m);
}

struct SweepOpts {
    double start = 0.0, stop = 0.25, step = 0.005;
    std::string out, format = "csv";
};

int run_sweep(const SweepOpts& o) {
    if (o.start < 0.0 || o.stop > 0.5 || o.start > o.stop)
        throw std::invalid_argument("sweep grid must satisfy 0 <= start <= stop <= 0.5");
    std::vector<RateCurvePoint> points;
    long long last = llround((o.stop - o.start) / o.step);
    for (long long k = 0; k <= last; ++k) {
        double d = o.start + double(k) * o.step;
        if (d > o.stop + 0.5 * o.step) break;
        points.push_back(rate_curve_point(std::min(d, 0.5)));
    }
    if (o.format == "csv") {
        emit(o.out, sweep_csv(points));
    } else {
        json rows = json::array();
        for (const RateCurvePoint& p : points)
            rows.push_back({{"d", p.d},
                            {"ig_star", p.ig_star},
                            {"mi_ab", p.mi_ab},
                            {"mi_ae", p.mi_ae},
                            {"key_rate", p.key_rate},
                            {"chsh", p.chsh},
                            {"shrink", p.shrink}});
        emit(o.out, rows.dump(2) + "\n");
    }
    return 0;
}

struct VerifyOpts {
    double d_xy = 0.1, d_uv = 0.1, perturb = 0.0, tol = 1e-9;
    std::uint64_t seed = 0;
    std::string measurement = "computational", measurement_file, out;
};

int run_verify(const VerifyOpts& o) {
    ErrorRates rates{o.d_xy, o.d_uv};
    MeasurementSetup m = resolve_setup(o.measurement, o.measurement_file, o.seed);
    InteractionVectors ivs = optimal_ivs(Basis::Computational, rates, m);
    if (o.perturb > 0.0) ivs = perturb_ivs(ivs, o.perturb, o.seed);
    NscReport report = full_battery(ivs, m, rates, o.tol);
    emit(o.out, to_json(report).dump(2) + "\n");
    return report.passed ? 0 : 1;
}

struct SynthOpts {
    double d_xy = 0.1, d_uv = 0.1;
    std::uint64_t seed = 0;
    std::string initial_state = "delta_hadamard", initial_state_file;
    std::string measurement = "computational", measurement_file;
    std::string out, format = "json";
};

int run_synth(const SynthOpts& o) {
    ErrorRates rates{o.d_xy, o.d_uv};
    MeasurementSetup m = resolve_setup(o.measurement, o.measurement_file, o.seed);
    AttackUnitary a = build_attack(rates, o.initial_state, o.initial_state_file, m);
    if (!attack_is_valid(a)) {
        std::cerr << "synth: anchor revalidation failed (defect " << anchor_defect(a) << ")\n";
        return 1;
    }
    emit(o.out, o.format == "csv" ? matrix_csv(a.u) : to_json(a).dump(2) + "\n");
    return 0;
}

struct SimulateOpts {
    double d_xy = 0.1, d_uv = 0.1;
    long long n = 100000;
    std::uint64_t seed = 0;
    std::string measurement = "computational", measurement_file, out;
};

int run_simulate(const SimulateOpts& o) {
    SimConfig cfg;
    cfg.rates = ErrorRates{o.d_xy, o.d_uv};
    cfg.n_rounds = o.n;
    cfg.seed = o.seed;
    MeasurementSetup m = resolve_setup(o.measurement, o.measurement_file, o.seed);
    cfg.attack = build_attack(cfg.rates, "delta_hadamard", "", m);
    cfg.eve_xy = cfg.attack.measurement;
    cfg.eve_uv = conjugate_setup(cfg.attack.measurement);
    SimStats st = run_pm(cfg);
    emit(o.out, to_json(st).dump(2) + "\n");
    return 0;
}

struct ChshOpts {
    double d = 0.0;
    long long n = 100000;
    std::uint64_t seed = 0;
    std::string out;
};

int run_chsh(const ChshOpts& o) {
    ChshRun run = run_eb_chsh(o.d, o.n, o.seed);
    emit(o.out, to_json(run).dump(2) + "\n");
    return 0;
}

struct OracleOpts {
    double d = 0.1;
    long long n = 1000;
    std::uint64_t seed = 0;
    std::string out;
};

int run_oracle(const OracleOpts& o) {
    ErrorRates rates{o.d, o.d};
    Pijs p = optimal_pijs_pair(rates, computational_setup());
    IgOracle oracle =
        brute_force_ig(eve_reduced_density(p, 0), eve_reduced_density(p, 1), o.n, o.seed);
    emit(o.out, to_json(oracle).dump(2) + "\n");
    return 0;
}

void add_rate_flags(CLI::App* cmd, double& d_xy, double& d_uv) {
    cmd->add_option("--d-xy", d_xy, "Error rate in the computational basis")
        ->check(CLI::Range(0.0, 0.5))
        ->capture_default_str();
    cmd->add_option("--d-uv", d_uv, "Error rate in the Hadamard basis")
        ->check(CLI::Range(0.0, 0.5))
        ->capture_default_str();
}

void add_measurement_flags(CLI::App* cmd, std::string& kind, std::string& file) {
    cmd->add_option("--measurement", kind, "Eve's measurement frame")
        ->check(CLI::IsMember({"computational", "fuchs", "random", "file"}))
        ->capture_default_str();
    cmd->add_option("--measurement-file", file, "JSON measurement setup for --measurement file");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal-eavesdropping toolkit for BB84: curves, certificates, synthesis"};
    app.require_subcommand(1);
    app.set_config("--config", "", "JSON config file; flags override its values");
    app.config_formatter(std::make_shared<ConfigJson>());

    SweepOpts sw;
    CLI::App* sweep = app.add_subcommand("sweep", "Tabulate the rate curves over a QBER grid");
    sweep->add_option("--start", sw.start, "Grid start")->check(CLI::Range(0.0, 0.5))
        ->capture_default_str();
    sweep->add_option("--stop", sw.stop, "Grid stop (inclusive)")->check(CLI::Range(0.0, 0.5))
        ->capture_default_str();
    sweep->add_option("--step", sw.step, "Grid step")->check(CLI::PositiveNumber)
        ->capture_default_str();
    sweep->add_option("--out", sw.out, "Output path (stdout when omitted)");
    sweep->add_option("--format", sw.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    VerifyOpts vf;
    CLI::App* verify =
        app.add_subcommand("verify", "Run the optimality certificate battery on constructed IVs");
    add_rate_flags(verify, vf.d_xy, vf.d_uv);
    add_measurement_flags(verify, vf.measurement, vf.measurement_file);
    verify->add_option("--seed", vf.seed, "Seed for random measurement and perturbation")
        ->capture_default_str();
    verify->add_option("--perturb", vf.perturb, "Rotate half the IV set by this angle first")
        ->check(CLI::NonNegativeNumber)->capture_default_str();
    verify->add_option("--tol", vf.tol, "Residual tolerance")->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify->add_option("--out", vf.out, "Report path (stdout when omitted)");

    SynthOpts sy;
    CLI::App* synth =
        app.add_subcommand("synth", "Build an attack unitary and export it as JSON or CSV");
    add_rate_flags(synth, sy.d_xy, sy.d_uv);
    synth->add_option("--initial-state", sy.initial_state, "Ancilla state the unitary acts from")
        ->check(CLI::IsMember({"delta_hadamard", "delta", "zero", "bell", "file"}))
        ->capture_default_str();
    synth->add_option("--initial-state-file", sy.initial_state_file,
                      "JSON amplitude vector for --initial-state file");
    add_measurement_flags(synth, sy.measurement, sy.measurement_file);
    synth->add_option("--seed", sy.seed, "Seed for random measurement")->capture_default_str();
    synth->add_option("--out", sy.out, "Output path (stdout when omitted)");
    synth->add_option("--format", sy.format, "json (full attack) or csv (matrix only)")
        ->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    SimulateOpts si;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Prepare-and-measure Monte Carlo against the attack");
    add_rate_flags(simulate, si.d_xy, si.d_uv);
    add_measurement_flags(simulate, si.measurement, si.measurement_file);
    simulate->add_option("--n", si.n, "Number of transmitted rounds")
        ->check(CLI::PositiveNumber)->capture_default_str();
    simulate->add_option("--seed", si.seed, "Simulation seed")->capture_default_str();
    simulate->add_option("--out", si.out, "Stats path (stdout when omitted)");

    ChshOpts ch;
    CLI::App* chsh = app.add_subcommand("chsh", "Entanglement-based Bell estimate at rate d");
    chsh->add_option("--d", ch.d, "Symmetric error rate")->check(CLI::Range(0.0, 0.5))
        ->capture_default_str();
    chsh->add_option("--n", ch.n, "Rounds")->check(CLI::PositiveNumber)->capture_default_str();
    chsh->add_option("--seed", ch.seed, "Seed")->capture_default_str();
    chsh->add_option("--out", ch.out, "Output path (stdout when omitted)");

    OracleOpts orc;
    CLI::App* oracle =
        app.add_subcommand("oracle", "Brute-force measurement search for Eve's information gain");
    oracle->add_option("--d", orc.d, "Symmetric error rate")->check(CLI::Range(0.0, 0.5))
        ->capture_default_str();
    oracle->add_option("--n", orc.n, "Number of sampled measurements")
        ->check(CLI::PositiveNumber)->capture_default_str();
    oracle->add_option("--seed", orc.seed, "Seed")->capture_default_str();
    oracle->add_option("--out", orc.out, "Output path (stdout when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (sweep->parsed()) return run_sweep(sw);
        if (verify->parsed()) return run_verify(vf);
        if (synth->parsed()) return run_synth(sy);
        if (simulate->parsed()) return run_simulate(si);
        if (chsh->parsed()) return run_chsh(ch);
        return run_oracle(orc);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
