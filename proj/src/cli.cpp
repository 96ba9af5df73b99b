#include "nhsym/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "nhsym/dynamics.hpp"
#include "nhsym/linalg.hpp"
#include "nhsym/serialize.hpp"
#include "nhsym/symmetry.hpp"

namespace nhsym::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) throw ConfigError(where + " must be a JSON object");
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.contains(key)) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <typename T>
T field(const json& obj, const std::string& key, const std::string& where, T fallback) {
    if (!obj.contains(key)) return fallback;
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(where + "." + key + ": " + e.what());
    }
}

double positive(double v, const std::string& name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(name + " must be positive and finite");
    return v;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    const std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

PotentialSpec parse_potential(const json& obj, const std::filesystem::path& base) {
    reject_unknown(obj, {"kind", "parameters", "path"}, "potential");
    const auto kind_name = field<std::string>(obj, "kind", "potential", "");
    const auto kind = parse_potential_kind(kind_name);
    if (!kind) throw ConfigError("unknown potential kind '" + kind_name + "'");
    PotentialSpec spec;
    spec.kind = *kind;
    if (obj.contains("parameters")) {
        const json& params = obj.at("parameters");
        if (!params.is_object()) throw ConfigError("potential.parameters must be an object");
        for (const auto& [name, value] : params.items()) {
            if (!value.is_number()) throw ConfigError("potential.parameters." + name + " must be a number");
            spec.parameters[name] = value.get<double>();
        }
    }
    if (obj.contains("path")) spec.path = resolve(base, field<std::string>(obj, "path", "potential", ""));
    try {
        validate(spec);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("potential: ") + e.what());
    }
    return spec;
}

InitialStateConfig parse_initial_state(const json& obj, const std::filesystem::path& base) {
    reject_unknown(obj, {"kind", "center", "width", "momentum", "path", "re", "im"}, "initial_state");
    InitialStateConfig s;
    const auto kind = field<std::string>(obj, "kind", "initial_state", "Gaussian");
    if (kind == "Gaussian") {
        s.kind = InitialStateConfig::Kind::Gaussian;
        s.center = field(obj, "center", "initial_state", 0.0);
        s.width = positive(field(obj, "width", "initial_state", 1.0), "initial_state.width");
        s.momentum = field(obj, "momentum", "initial_state", 0.0);
    } else if (kind == "File") {
        s.kind = InitialStateConfig::Kind::File;
        if (!obj.contains("path")) throw ConfigError("initial_state of kind File needs a path");
        s.path = resolve(base, field<std::string>(obj, "path", "initial_state", ""));
    } else if (kind == "Components") {
        s.kind = InitialStateConfig::Kind::Components;
        s.re = field<std::vector<double>>(obj, "re", "initial_state", {});
        s.im = field<std::vector<double>>(obj, "im", "initial_state", std::vector<double>(s.re.size(), 0.0));
        if (s.re.empty() || s.re.size() != s.im.size()) {
            throw ConfigError("initial_state Components needs equally long non-empty 're' and 'im'");
        }
    } else {
        throw ConfigError("unknown initial_state kind '" + kind + "'");
    }
    return s;
}

InvariantConfig parse_invariant(const json& obj) {
    reject_unknown(obj,
                   {"schedule", "variant", "initial", "detuning", "drive", "frequency", "loss", "epsilon", "step"},
                   "invariant");
    InvariantConfig c;
    const auto schedule = field<std::string>(obj, "schedule", "invariant", "DrivenTwoLevel");
    if (schedule == "DrivenTwoLevel") {
        c.schedule = InvariantConfig::Schedule::DrivenTwoLevel;
    } else if (schedule == "Static") {
        c.schedule = InvariantConfig::Schedule::Static;
    } else {
        throw ConfigError("unknown invariant.schedule '" + schedule + "'");
    }
    const auto variant = field<std::string>(obj, "variant", "invariant", "Plain");
    if (variant == "Plain") {
        c.variant = InvariantVariant::Plain;
    } else if (variant == "Primed") {
        c.variant = InvariantVariant::Primed;
    } else {
        throw ConfigError("unknown invariant.variant '" + variant + "'");
    }
    const auto initial = field<std::string>(obj, "initial", "invariant", "Hamiltonian");
    if (initial == "Hamiltonian") {
        c.initial = InvariantConfig::Initial::Hamiltonian;
    } else if (initial == "IdentityPerturbation") {
        c.initial = InvariantConfig::Initial::IdentityPerturbation;
    } else {
        throw ConfigError("unknown invariant.initial '" + initial + "'");
    }
    c.detuning = field(obj, "detuning", "invariant", c.detuning);
    c.drive = field(obj, "drive", "invariant", c.drive);
    c.frequency = field(obj, "frequency", "invariant", c.frequency);
    c.loss = field(obj, "loss", "invariant", c.loss);
    c.epsilon = field(obj, "epsilon", "invariant", c.epsilon);
    c.step = field(obj, "step", "invariant", c.step);
    return c;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
}

void write_json(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::filesystem::path output_dir(const RunConfig& config) {
    std::error_code ec;
    std::filesystem::create_directories(config.outputs, ec);
    if (ec) throw InputError("cannot create output directory " + config.outputs.string() + ": " + ec.message());
    return config.outputs;
}

class CsvWriter {
public:
    explicit CsvWriter(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
        out_ << '\n';
    }
    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_double(values[i]);
        out_ << '\n';
    }
    std::string str() const { return out_.str(); }

private:
    std::ostringstream out_;
};

Matrix parity_for(const Operator& h) {
    if (h.grid()) return parity_matrix(*h.grid()).matrix();
    return reversal_matrix(h.dim());
}

json grid_json(const RunConfig& c) {
    return json{{"n", c.grid.n}, {"x_max", c.grid.x_max}, {"hbar", c.grid.hbar}, {"mass", c.grid.mass}};
}

json potential_json(const PotentialSpec& p) {
    json params = json::object();
    for (const auto& [k, v] : potential_defaults(p.kind)) params[k] = p.parameters.contains(k) ? p.parameters.at(k) : v;
    return json{{"kind", std::string(to_string(p.kind))}, {"parameters", params}};
}

const PotentialSpec& require_potential(const RunConfig& config) {
    if (!config.potential) throw ConfigError("this command needs a 'potential' block");
    return *config.potential;
}

}  // namespace

std::vector<double> TimesConfig::grid() const {
    std::vector<double> ts(static_cast<std::size_t>(samples));
    for (Index k = 0; k < samples; ++k) {
        ts[static_cast<std::size_t>(k)] =
            samples == 1 ? 0.0 : t_max * static_cast<double>(k) / static_cast<double>(samples - 1);
    }
    return ts;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    reject_unknown(doc, {"grid", "potential", "tolerance", "times", "initial_state", "outputs", "invariant"},
                   "config");
    RunConfig c;
    if (!doc.contains("grid")) throw ConfigError("config needs a 'grid' block");
    const json& g = doc.at("grid");
    reject_unknown(g, {"n", "x_max", "hbar", "mass"}, "grid");
    c.grid.n = field<Index>(g, "n", "grid", c.grid.n);
    if (c.grid.n < 2) throw ConfigError("grid.n must be at least 2");
    c.grid.x_max = positive(field(g, "x_max", "grid", c.grid.x_max), "grid.x_max");
    c.grid.hbar = positive(field(g, "hbar", "grid", c.grid.hbar), "grid.hbar");
    c.grid.mass = positive(field(g, "mass", "grid", c.grid.mass), "grid.mass");

    if (doc.contains("potential")) c.potential = parse_potential(doc.at("potential"), base_dir);
    c.tolerance = positive(field(doc, "tolerance", "config", c.tolerance), "tolerance");
    if (doc.contains("times")) {
        const json& t = doc.at("times");
        reject_unknown(t, {"t_max", "samples"}, "times");
        c.times.t_max = field(t, "t_max", "times", c.times.t_max);
        c.times.samples = field<Index>(t, "samples", "times", c.times.samples);
        if (!(c.times.t_max >= 0.0) || !std::isfinite(c.times.t_max)) throw ConfigError("times.t_max must be >= 0");
        if (c.times.samples < 1) throw ConfigError("times.samples must be at least 1");
    }
    if (doc.contains("initial_state")) c.initial_state = parse_initial_state(doc.at("initial_state"), base_dir);
    if (doc.contains("outputs")) c.outputs = resolve(base_dir, field<std::string>(doc, "outputs", "config", "."));
    if (doc.contains("invariant")) c.invariant = parse_invariant(doc.at("invariant"));
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
}

Grid make_grid_from(const RunConfig& config) {
    return make_grid(config.grid.n, config.grid.x_max, config.grid.hbar, config.grid.mass);
}

Operator hamiltonian_from(const RunConfig& config) {
    return build_hamiltonian(make_grid_from(config), require_potential(config));
}

Vector initial_state_from(const RunConfig& config, Index dim) {
    const auto& s = config.initial_state;
    Vector psi;
    switch (s.kind) {
        case InitialStateConfig::Kind::Gaussian: {
            const Grid grid = make_grid_from(config);
            if (grid.n() != dim) {
                throw DomainError("a Gaussian initial state needs a grid Hamiltonian; use Components or File");
            }
            psi.resize(dim);
            for (Index j = 0; j < dim; ++j) {
                const double x = grid.x(j);
                const double s2 = (x - s.center) / s.width;
                psi[j] = std::exp(-0.5 * s2 * s2) * std::polar(1.0, s.momentum * x / grid.hbar());
            }
            break;
        }
        case InitialStateConfig::Kind::File: {
            std::ifstream in(s.path);
            if (!in) throw InputError("cannot open state file " + s.path.string());
            std::vector<cplx> values;
            std::string line;
            while (std::getline(in, line)) {
                if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
                std::replace(line.begin(), line.end(), ',', ' ');
                std::istringstream fields(line);
                double re = 0.0, im = 0.0;
                if (!(fields >> re >> im)) throw InputError("state file " + s.path.string() + ": bad line '" + line + "'");
                values.emplace_back(re, im);
            }
            psi = Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
            break;
        }
        case InitialStateConfig::Kind::Components: {
            psi.resize(static_cast<Index>(s.re.size()));
            for (std::size_t j = 0; j < s.re.size(); ++j) psi[static_cast<Index>(j)] = cplx(s.re[j], s.im[j]);
            break;
        }
    }
    if (psi.size() != dim) {
        throw InputError("initial state has " + std::to_string(psi.size()) + " components, H has dimension " +
                         std::to_string(dim));
    }
    const double norm = psi.norm();
    if (!(norm > 0.0)) throw DomainError("initial state is the zero vector");
    return psi / norm;
}

HamiltonianSchedule schedule_from(const RunConfig& config) {
    if (!config.invariant) throw ConfigError("the invariant command needs an 'invariant' block");
    const InvariantConfig& c = *config.invariant;
    if (c.schedule == InvariantConfig::Schedule::Static) {
        return HamiltonianSchedule::constant(hamiltonian_from(config));
    }
    // (Delta/2) sigma_z + (Omega sin(omega t)/2) sigma_x - i gamma |1><1|
    const double delta = c.detuning, omega0 = c.drive, freq = c.frequency, loss = c.loss;
    HamiltonianSchedule s;
    s.dim = 2;
    s.hbar = config.grid.hbar;
    s.evaluator = [=](double t) {
        const double rabi = omega0 * std::sin(freq * t);
        Matrix h(2, 2);
        h << 0.5 * delta, 0.5 * rabi, 0.5 * rabi, cplx(-0.5 * delta, -loss);
        return h;
    };
    return s;
}

int cmd_classify(const RunConfig& config) {
    const Operator h = hamiltonian_from(config);
    const SymmetryReport position = classify(h, config.tolerance);
    json out = to_json(position);
    out["grid"] = grid_json(config);
    out["potential"] = potential_json(*config.potential);
    if (h.grid() && h.dim() % 2 == 1) {
        const SymmetryReport momentum = classify(to_momentum(h), config.tolerance);
        out["momentum_report"] = to_json(momentum);
        out["bases_agree"] = position.held() == momentum.held();
    }
    write_json(output_dir(config) / "symmetry_report.json", out);
    return kOk;
}

int cmd_spectrum(const RunConfig& config) {
    const Operator h = hamiltonian_from(config);
    const BiorthogonalSystem sys = biorthogonal_eig(h);
    json out = to_json(sys, h.matrix());
    const double closure = multiset_distance(sys.eigenvalues, sys.eigenvalues.conjugate());
    out["conjugation_distance"] = closure;
    out["conjugation_closed"] = closure < 1e-8 * std::max(1.0, h.matrix().norm());
    out["grid"] = grid_json(config);
    out["potential"] = potential_json(*config.potential);
    const auto dir = output_dir(config);
    write_json(dir / "spectrum.json", out);
    CsvWriter csv({"index", "re", "im"});
    for (Index j = 0; j < sys.eigenvalues.size(); ++j) {
        csv.row({static_cast<double>(j), sys.eigenvalues[j].real(), sys.eigenvalues[j].imag()});
    }
    write_text(dir / "spectrum.csv", csv.str());
    return kOk;
}

int cmd_evolve(const RunConfig& config) {
    const Operator h = hamiltonian_from(config);
    const Vector psi0 = initial_state_from(config, h.dim());
    const std::vector<double> times = config.times.grid();
    const Trajectory traj = evolve(h, psi0, times, true);
    const Matrix parity = parity_for(h);
    const AntilinearMap parity_map(parity, false);
    const double tol = config.tolerance;

    const cplx parity0 = expectation(parity, psi0);
    const auto dir = output_dir(config);
    CsvWriter csv({"t", "N", "re_parity", "im_parity", "re_parity_times_N", "im_parity_times_N", "re_dual_overlap",
                   "im_dual_overlap", "re_dual_parity", "im_dual_parity", "bound_margin"});
    double max_norm_drift = 0.0, max_dual_overlap_drift = 0.0, min_margin = std::numeric_limits<double>::infinity();
    bool nonincreasing = true;
    for (std::size_t k = 0; k < traj.size(); ++k) {
        const Vector& psi = traj.states[k];
        const Vector& psihat = traj.dual_states[k];
        const double n = traj.norms[k];
        const cplx par = expectation(parity, psi);
        const double scale = std::exp(traj.log_scale[k] + traj.dual_log_scale[k]);
        const cplx overlap = psihat.dot(psi) * scale;
        const cplx dual_par = psihat.dot(parity * psi) * scale;
        const double margin = n - std::abs(parity0);
        csv.row({traj.times[k], n, par.real(), par.imag(), (par * n).real(), (par * n).imag(), overlap.real(),
                 overlap.imag(), dual_par.real(), dual_par.imag(), margin});
        max_norm_drift = std::max(max_norm_drift, std::abs(n - 1.0));
        max_dual_overlap_drift = std::max(max_dual_overlap_drift, std::abs(overlap - 1.0));
        min_margin = std::min(min_margin, margin);
        if (k > 0 && traj.norms[k] > traj.norms[k - 1] * (1.0 + 1e-12)) nonincreasing = false;
    }
    write_text(dir / "trajectory.csv", csv.str());

    json summary{{"grid", grid_json(config)},
                 {"potential", potential_json(*config.potential)},
                 {"samples", traj.size()},
                 {"t_max", config.times.t_max},
                 {"rescaled", traj.rescaled()},
                 {"max_norm_drift", max_norm_drift},
                 {"norm_nonincreasing", nonincreasing},
                 {"max_dual_overlap_drift", max_dual_overlap_drift},
                 {"parity_expectation_0", complex_json(parity0)},
                 {"min_parity_bound_margin", min_margin}};
    const double iv = parity_map.pseudohermiticity_residual(h.matrix());
    const double iii = parity_map.commutation_residual(h.matrix());
    summary["parity_pseudohermiticity_residual"] = iv;
    summary["parity_commutation_residual"] = iii;
    summary["parity_bound_applies"] = iv <= tol;
    if (!traj.rescaled()) {
        if (iv <= tol) summary["parity_pseudo_audit"] = to_json(conservation_audit(h, parity, Relation::Pseudo, traj, tol));
        if (iii <= tol) {
            summary["parity_commute_audit"] = to_json(conservation_audit(h, parity, Relation::Commute, traj, tol));
        }
        const bool hermitian = (h.matrix() - h.matrix().adjoint()).norm() <= tol * h.matrix().norm();
        if (hermitian) {
            summary["energy_audit"] = to_json(conservation_audit(h, h.matrix(), Relation::Commute, traj, tol));
        }
    }
    summary["rate_audit_t0"] = to_json(rate_audit(h, parity, psi0, 1e-3));
    write_json(dir / "evolve_summary.json", summary);
    return kOk;
}

int cmd_group_check(const RunConfig& config) {
    const GroupReport report = verify_group(make_grid_from(config));
    json out = to_json(report);
    out["all_pass"] = report.elementary_abelian_order_8 && report.generated_by_dagger_parity_time;
    write_json(output_dir(config) / "group_report.json", out);
    return kOk;
}

int cmd_invariant(const RunConfig& config, bool halve_step) {
    const HamiltonianSchedule schedule = schedule_from(config);
    const InvariantConfig& ic = *config.invariant;
    const std::vector<double> times = config.times.grid();
    Matrix i0;
    if (ic.initial == InvariantConfig::Initial::Hamiltonian) {
        i0 = schedule.at(times.front());
    } else {
        i0 = Matrix::Identity(schedule.dim, schedule.dim) + ic.epsilon * reversal_matrix(schedule.dim);
    }
    Vector psi0;
    if (config.initial_state.kind == InitialStateConfig::Kind::Gaussian && schedule.dim == 2) {
        // Default two-level start; an eigenvector of H(0) would hide the leading RK4 error term.
        psi0.resize(2);
        psi0 << 0.8, cplx(0.0, 0.6);
    } else {
        psi0 = initial_state_from(config, schedule.dim);
    }

    const InvariantTrack track = integrate_invariant(schedule, i0, times, ic.variant, ic.step);
    const InvariantAuditReport audit = invariant_audit(schedule, track, psi0);
    json summary = to_json(audit);
    summary["samples"] = times.size();
    summary["t_max"] = config.times.t_max;
    if (halve_step) summary["step_halving"] = to_json(step_halving(schedule, i0, psi0, times, ic.variant, track.step));

    const auto dir = output_dir(config);
    write_json(dir / "invariant_summary.json", summary);

    const Trajectory forward = evolve_td(schedule, psi0, times, false, track.step);
    const bool with_dual = ic.variant == InvariantVariant::Plain;
    const Trajectory dual = with_dual ? evolve_td(schedule, psi0, times, true, track.step) : forward;
    CsvWriter csv({"t", "N", "re_ordinary", "im_ordinary", "re_dual", "im_dual"});
    for (std::size_t k = 0; k < times.size(); ++k) {
        const Vector& psi = forward.states[k];
        const cplx ordinary = psi.dot(track.operators[k] * psi);
        const cplx paired = dual.states[k].dot(track.operators[k] * psi);
        csv.row({times[k], forward.norms[k], ordinary.real(), ordinary.imag(), paired.real(), paired.imag()});
    }
    write_text(dir / "invariant.csv", csv.str());
    return kOk;
}

int run(int argc, const char* const* argv) {
    CLI::App app{"Symmetry, spectrum and conservation-law audits for non-Hermitian Hamiltonians", "nhsym"};
    app.require_subcommand(1);
    std::string config_path;
    std::string out_dir;
    bool halve = false;
    const std::vector<std::string> names{"classify", "spectrum", "evolve", "group-check", "invariant"};
    for (const auto& name : names) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides 'outputs')");
        sub->add_flag("--halve-step", halve, "also rerun with half the integration step");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }
    const std::string command = app.get_subcommands().front()->get_name();
    try {
        RunConfig config = load_config(config_path);
        if (!out_dir.empty()) config.outputs = out_dir;
        if (command == "classify") return cmd_classify(config);
        if (command == "spectrum") return cmd_spectrum(config);
        if (command == "evolve") return cmd_evolve(config);
        if (command == "group-check") return cmd_group_check(config);
        return cmd_invariant(config, halve);
    } catch (const InputError& e) {
        std::cerr << "nhsym " << command << ": input error: " << e.what() << '\n';
        return kConfigError;
    } catch (const NumericalRefusal& e) {
        std::cerr << "nhsym " << command << ": numerical refusal: " << e.what() << '\n';
        return kNumericalRefusal;
    } catch (const std::invalid_argument& e) {
        std::cerr << "nhsym " << command << ": domain error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::domain_error& e) {
        std::cerr << "nhsym " << command << ": domain error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::logic_error& e) {
        std::cerr << "nhsym " << command << ": domain error: " << e.what() << '\n';
        return kDomainError;
    }
}

}  // namespace nhsym::cli
