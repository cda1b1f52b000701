#include "cqed/scan_config.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#define TOML_EXCEPTIONS 1
#include <toml.hpp>

#include "cqed/scan_io.hpp"

namespace cqed {

namespace {

using nlohmann::json;

json toml_to_json(const toml::node& node) {
    if (const auto* table = node.as_table()) {
        json out = json::object();
        for (auto&& [key, value] : *table) out[std::string(key.str())] = toml_to_json(value);
        return out;
    }
    if (const auto* array = node.as_array()) {
        json out = json::array();
        for (const toml::node& element : *array) out.push_back(toml_to_json(element));
        return out;
    }
    if (const auto* v = node.as_floating_point()) return v->get();
    if (const auto* v = node.as_integer()) return v->get();
    if (const auto* v = node.as_boolean()) return v->get();
    if (const auto* v = node.as_string()) return v->get();
    throw std::invalid_argument("unsupported TOML value (dates and times are not config values)");
}

template <typename T>
std::optional<T> optional_key(const json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) return std::nullopt;
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw std::invalid_argument(std::string("config key '") + key + "' has the wrong type");
    }
}

// An amplitude given either as a number, a [re, im] pair, or separate _re/_im keys.
std::optional<Complex> amplitude_key(const json& doc, const std::string& name) {
    if (!doc.is_object()) return std::nullopt;
    if (doc.contains(name)) {
        const json& v = doc.at(name);
        if (v.is_number()) return Complex(v.get<double>(), 0.0);
        if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            return Complex(v[0].get<double>(), v[1].get<double>());
        }
        throw std::invalid_argument("amplitude '" + name + "' must be a number or a [re, im] pair");
    }
    const auto re = optional_key<double>(doc, (name + "_re").c_str());
    const auto im = optional_key<double>(doc, (name + "_im").c_str());
    if (!re && !im) return std::nullopt;
    return Complex(re.value_or(0.0), im.value_or(0.0));
}

// Completes a missing partner with a real, non-negative amplitude and normalizes.
std::pair<Complex, Complex> resolve_amplitudes(std::optional<Complex> a, std::optional<Complex> b,
                                               std::pair<Complex, Complex> fallback) {
    auto partner = [](Complex known, const char* name) {
        const double rest = 1.0 - std::norm(known);
        if (rest < -1e-12) throw std::invalid_argument(std::string("|") + name + "| exceeds 1");
        return Complex(std::sqrt(std::max(0.0, rest)), 0.0);
    };
    if (a && !b) b = partner(*a, "a");
    if (b && !a) a = partner(*b, "b");
    if (!a) return fallback;
    ModelParams p;
    p.amp_a = *a;
    p.amp_b = *b;
    p = normalized(p);
    return {p.amp_a, p.amp_b};
}

Axis axis_from_json(const json& j) {
    Axis axis;
    try {
        axis.name = parse_axis_name(j.at("name").get<std::string>());
        axis.min = j.at("min").get<double>();
        axis.max = j.at("max").get<double>();
        axis.step = j.at("step").get<double>();
    } catch (const json::exception&) {
        throw std::invalid_argument("each axis needs name, min, max and step");
    }
    return axis;
}

ScanQuantity quantity_for(std::string_view subcommand, const std::string& name) {
    if (subcommand == "nm-map") {
        if (name == "fidelity") return ScanQuantity::FidelityDiff;
        if (name == "trace-distance") return ScanQuantity::TraceDistDiff;
        if (name == "relative-entropy") return ScanQuantity::RelEntropyDiff;
        throw std::invalid_argument("nm-map witness must be fidelity, trace-distance or relative-entropy");
    }
    if (subcommand == "corr-map") {
        if (name == "classical") return ScanQuantity::ClassicalCorr;
        if (name == "discord") return ScanQuantity::QuantumDiscord;
        if (name == "mutual-information") return ScanQuantity::MutualInfo;
        throw std::invalid_argument("corr-map measure must be classical, discord or mutual-information");
    }
    throw std::invalid_argument(std::string(subcommand) + " does not select a quantity");
}

void require_object(const json& config) {
    if (!config.is_null() && !config.is_object()) throw std::invalid_argument("config must be an object/table");
}

}  // namespace

json parse_toml_document(std::string_view text) {
    try {
        return toml_to_json(toml::parse(text));
    } catch (const toml::parse_error& e) {
        throw std::invalid_argument(std::string("malformed TOML: ") + std::string(e.description()));
    }
}

json load_config_document(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::invalid_argument("cannot read config '" + path + "'");
    std::stringstream buffer;
    buffer << file.rdbuf();
    const std::string text = buffer.str();
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".toml") == 0) return parse_toml_document(text);
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("malformed JSON config: ") + e.what());
    }
}

ScanSpec default_scan_spec(std::string_view subcommand) {
    ScanSpec spec;
    const Axis t_axis{AxisName::T, 0.0, 4.0, 0.02};
    const Axis tau_axis{AxisName::Tau, 0.0, 4.0, 0.02};
    const Axis decay_axis{AxisName::LambdaC, 0.0, 4.0, 0.05};
    if (subcommand == "fidelity-surface") {
        spec.quantity = ScanQuantity::FidelitySurface;
        spec.partition = Partition::CavityCavity;
        spec.axis1 = t_axis;
        spec.axis2 = decay_axis;
    } else if (subcommand == "nm-map") {
        spec.quantity = ScanQuantity::FidelityDiff;
        spec.partition = Partition::AtomReservoirIntra;
        spec.axis1 = t_axis;
        spec.axis2 = tau_axis;
    } else if (subcommand == "chsh-map") {
        spec.quantity = ScanQuantity::Chsh;
        spec.partition = Partition::ReservoirReservoir;
        spec.axis1 = t_axis;
        spec.axis2 = decay_axis;
    } else if (subcommand == "corr-map") {
        spec.quantity = ScanQuantity::QuantumDiscord;
        spec.partition = Partition::AtomAtom;
        spec.axis1 = t_axis;
        spec.axis2 = decay_axis;
    } else {
        throw std::invalid_argument("no grid defaults for subcommand '" + std::string(subcommand) + "'");
    }
    spec.output = std::string(subcommand) + ".csv";
    return spec;
}

ScanSpec build_scan_spec(std::string_view subcommand, const json& config, const ScanOverrides& overrides) {
    require_object(config);
    ScanSpec spec = default_scan_spec(subcommand);

    if (auto v = optional_key<std::string>(config, "partition")) spec.partition = parse_partition(*v);
    const char* quantity_key = subcommand == "nm-map" ? "witness" : "measure";
    if (subcommand == "nm-map" || subcommand == "corr-map") {
        if (auto v = optional_key<std::string>(config, quantity_key)) spec.quantity = quantity_for(subcommand, *v);
    }
    if (config.is_object() && config.contains("axes")) {
        const json& axes = config.at("axes");
        if (!axes.is_array() || axes.size() != 2) throw std::invalid_argument("axes must list exactly two axes");
        spec.axis1 = axis_from_json(axes[0]);
        spec.axis2 = axis_from_json(axes[1]);
    }
    if (auto v = optional_key<double>(config, "coupling")) spec.coupling = *v;
    if (auto v = optional_key<double>(config, "lambda_c")) spec.lambda_c = *v;
    if (auto v = optional_key<double>(config, "tau")) spec.tau = *v;
    if (auto v = optional_key<double>(config, "t")) spec.t = *v;
    if (auto v = optional_key<double>(config, "epsilon")) spec.regularizer_eps = *v;
    if (auto v = optional_key<std::string>(config, "out")) spec.output = *v;
    if (auto v = optional_key<std::string>(config, "format")) spec.format = parse_output_format(*v);

    std::optional<Complex> a = amplitude_key(config, "a");
    const std::optional<Complex> b = amplitude_key(config, "b");

    if (overrides.partition) spec.partition = parse_partition(*overrides.partition);
    if (overrides.quantity) spec.quantity = quantity_for(subcommand, *overrides.quantity);
    if (overrides.lambda_c) spec.lambda_c = *overrides.lambda_c;
    if (overrides.tau) spec.tau = *overrides.tau;
    if (overrides.epsilon) spec.regularizer_eps = *overrides.epsilon;
    if (overrides.out) spec.output = *overrides.out;
    if (overrides.format) spec.format = parse_output_format(*overrides.format);
    if (overrides.step) {
        spec.axis1.step = *overrides.step;
        spec.axis2.step = *overrides.step;
    }
    if (overrides.t_max) {
        for (Axis* axis : {&spec.axis1, &spec.axis2}) {
            if (axis->name == AxisName::T) axis->max = *overrides.t_max;
        }
    }
    if (overrides.a_re || overrides.a_im) {
        const Complex base = a.value_or(spec.amp_a);
        a = Complex(overrides.a_re.value_or(base.real()), overrides.a_im.value_or(base.imag()));
    }
    std::tie(spec.amp_a, spec.amp_b) = resolve_amplitudes(a, b, {spec.amp_a, spec.amp_b});

    if (spec.output.empty()) throw std::invalid_argument("an output path is required");
    validate(spec);
    return spec;
}

TrajectoryCheckSetup build_trajectory_setup(const json& config, std::optional<double> lambda_c) {
    require_object(config);
    TrajectoryCheckSetup setup;
    TrajectoryConfig& c = setup.config;
    c.params.cavity_decay = 4.0;
    c.checkpoints = {0.5, 1.0, 2.0, 4.0};
    c.n_traj = 100000;
    c.seed = 1;

    if (auto v = optional_key<double>(config, "coupling")) c.params.coupling = *v;
    if (auto v = optional_key<double>(config, "lambda_c")) c.params.cavity_decay = *v;
    if (auto v = optional_key<std::vector<double>>(config, "checkpoints")) c.checkpoints = *v;
    if (auto v = optional_key<std::uint64_t>(config, "n_traj")) c.n_traj = *v;
    if (auto v = optional_key<std::uint64_t>(config, "seed")) c.seed = *v;
    if (auto v = optional_key<double>(config, "dt")) c.dt = *v;
    if (auto v = optional_key<unsigned>(config, "workers")) c.workers = *v;
    if (lambda_c) c.params.cavity_decay = *lambda_c;

    setup.reference = c.params;
    if (auto v = optional_key<double>(config, "reference_lambda_c")) setup.reference.cavity_decay = *v;
    if (auto v = optional_key<double>(config, "reference_coupling")) setup.reference.coupling = *v;
    validate(c);
    validate(setup.reference);
    return setup;
}

AmplitudeTableSpec build_amplitude_spec(const json& config, std::optional<double> lambda_c,
                                        std::optional<double> t_max, std::optional<double> step) {
    require_object(config);
    AmplitudeTableSpec spec;
    if (auto v = optional_key<double>(config, "coupling")) spec.params.coupling = *v;
    if (auto v = optional_key<double>(config, "lambda_c")) spec.params.cavity_decay = *v;
    if (auto v = optional_key<double>(config, "t_max")) spec.t_max = *v;
    if (auto v = optional_key<double>(config, "step")) spec.step = *v;
    if (auto v = optional_key<double>(config, "ode_tol")) spec.ode_tol = *v;
    if (lambda_c) spec.params.cavity_decay = *lambda_c;
    if (t_max) spec.t_max = *t_max;
    if (step) spec.step = *step;
    validate(spec.params);
    if (!(spec.step > 0.0) || !(spec.t_max >= 0.0)) throw std::invalid_argument("need step > 0 and t_max >= 0");
    return spec;
}

void write_amplitude_table(const AmplitudeTableSpec& spec, std::ostream& out) {
    out << "t,regime,xi_re,xi_im,eta_re,eta_im,p,q,gamma_d";
    if (spec.ode_tol) out << ",ode_atom,ode_cavity";
    out << '\n';
    const Axis axis{AxisName::T, 0.0, spec.t_max, spec.step};
    const char* regime = to_string(classify_regime(spec.params));
    for (double t : axis.values()) {
        const Amplitudes amp = amplitudes_analytic(spec.params, t);
        const ExcitationProbabilities probs = excitation_probabilities(spec.params, t);
        out << format_double(t) << ',' << regime << ',' << format_double(amp.xi.real()) << ','
            << format_double(amp.xi.imag()) << ',' << format_double(amp.eta.real()) << ','
            << format_double(amp.eta.imag()) << ',' << format_double(probs.p) << ',' << format_double(probs.q)
            << ',' << format_double(probs.gamma_d);
        if (spec.ode_tol) {
            const Amplitudes ode = amplitudes_ode(spec.params, t, *spec.ode_tol);
            out << ',' << format_double(std::norm(ode.xi)) << ',' << format_double(std::norm(ode.eta));
        }
        out << '\n';
    }
}

}  // namespace cqed
