#include "qlienard/config.hpp"

#include "qlienard/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <set>

namespace qlienard {

using nlohmann::json;

namespace {

std::string join(const std::string& parent, const std::string& key)
{
    return parent.empty() ? key : parent + "." + key;
}

std::string index_path(const std::string& parent, std::size_t i)
{
    return parent + "[" + std::to_string(i) + "]";
}

void reject_unknown(const json& node, const std::string& path, std::initializer_list<std::string_view> allowed)
{
    if (!node.is_object()) throw ConfigError(path, "expected a mapping");
    for (const auto& [key, value] : node.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError(join(path, key), "unknown key");
        }
    }
}

const json* find(const json& node, const std::string& key)
{
    const auto it = node.find(key);
    return it == node.end() ? nullptr : &*it;
}

double as_number(const json& node, const std::string& path)
{
    if (!node.is_number()) throw ConfigError(path, "expected a number");
    const double x = node.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path, "expected a finite number");
    return x;
}

std::uint64_t as_unsigned(const json& node, const std::string& path)
{
    if (node.is_number_unsigned()) return node.get<std::uint64_t>();
    if (node.is_number_integer()) {
        const auto v = node.get<std::int64_t>();
        if (v >= 0) return static_cast<std::uint64_t>(v);
    }
    throw ConfigError(path, "expected a non-negative integer");
}

bool as_bool(const json& node, const std::string& path)
{
    if (!node.is_boolean()) throw ConfigError(path, "expected true or false");
    return node.get<bool>();
}

std::string as_string(const json& node, const std::string& path)
{
    if (!node.is_string()) throw ConfigError(path, "expected a string");
    return node.get<std::string>();
}

std::vector<double> as_number_list(const json& node, const std::string& path)
{
    if (!node.is_array()) throw ConfigError(path, "expected a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(as_number(node[i], index_path(path, i)));
    return out;
}

template <class F>
auto wrap(const std::string& path, F&& f) -> decltype(f())
{
    try {
        return f();
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(path, e.what());
    }
}

json yaml_node_to_json(const YAML::Node& node)
{
    switch (node.Type()) {
    case YAML::NodeType::Null:
    case YAML::NodeType::Undefined:
        return nullptr;
    case YAML::NodeType::Sequence: {
        json arr = json::array();
        for (const auto& child : node) arr.push_back(yaml_node_to_json(child));
        return arr;
    }
    case YAML::NodeType::Map: {
        json obj = json::object();
        for (const auto& kv : node) obj[kv.first.as<std::string>()] = yaml_node_to_json(kv.second);
        return obj;
    }
    case YAML::NodeType::Scalar: {
        const std::string& s = node.Scalar();
        if (node.Tag() == "!") return s; // quoted
        if (s == "true" || s == "True") return true;
        if (s == "false" || s == "False") return false;
        if (s == "null" || s == "~") return nullptr;
        std::int64_t i = 0;
        auto [iend, iec] = std::from_chars(s.data(), s.data() + s.size(), i);
        if (iec == std::errc{} && iend == s.data() + s.size()) {
            if (i >= 0) return static_cast<std::uint64_t>(i);
            return i;
        }
        double d = 0.0;
        auto [dend, dec] = std::from_chars(s.data(), s.data() + s.size(), d);
        if (dec == std::errc{} && dend == s.data() + s.size()) return d;
        return s;
    }
    }
    return nullptr;
}

DampingSpec parse_spec(const json& node)
{
    const std::string path = "spec";
    reject_unknown(node, path, {"family", "basis", "coeffs"});
    const json* family = find(node, "family");
    const json* coeffs = find(node, "coeffs");
    if (!family) throw ConfigError(join(path, "family"), "missing required key");
    if (!coeffs) throw ConfigError(join(path, "coeffs"), "missing required key");
    const Family fam = wrap(join(path, "family"), [&] { return family_from_string(as_string(*family, join(path, "family"))); });
    Basis basis = Basis::M;
    if (const json* b = find(node, "basis")) {
        basis = wrap(join(path, "basis"), [&] { return basis_from_string(as_string(*b, join(path, "basis"))); });
    }
    const auto values = as_number_list(*coeffs, join(path, "coeffs"));
    return wrap(join(path, "coeffs"), [&] { return DampingSpec::from_basis(fam, basis, values); });
}

SystemParams parse_params(const json& node, const DampingSpec& spec)
{
    const std::string path = "params";
    reject_unknown(node, path, {"omega0", "gamma", "epsilon", "n", "theta"});
    SystemParams p;
    p.n = spec.n();
    if (const json* v = find(node, "omega0")) p.omega0 = as_number(*v, join(path, "omega0"));
    if (const json* v = find(node, "theta")) p.theta = as_number(*v, join(path, "theta"));
    const json* gamma = find(node, "gamma");
    const json* epsilon = find(node, "epsilon");
    if (gamma && epsilon) throw ConfigError(join(path, "epsilon"), "give either gamma or epsilon, not both");
    if (!gamma && !epsilon) throw ConfigError(join(path, "gamma"), "missing required key (or epsilon)");
    if (gamma) p.gamma = as_number(*gamma, join(path, "gamma"));
    else p.gamma = gamma_for_epsilon(as_number(*epsilon, join(path, "epsilon")), spec);
    if (const json* v = find(node, "n")) {
        const auto n = as_unsigned(*v, join(path, "n"));
        if (n != static_cast<std::uint64_t>(spec.n())) {
            throw ConfigError(join(path, "n"), "n = " + std::to_string(n) + " does not match the damping order "
                                                   + std::to_string(spec.n()) + " of spec");
        }
    }
    if (!(p.omega0 > 0.0)) throw ConfigError(join(path, "omega0"), "must be > 0");
    if (!(p.gamma > 0.0)) {
        throw ConfigError(join(path, gamma ? "gamma" : "epsilon"), "damping rate gamma = epsilon * m_n must be > 0");
    }
    if (!(p.theta >= 0.0)) throw ConfigError(join(path, "theta"), "must be >= 0");
    return p;
}

NoiseSpec parse_noise(const json& node)
{
    const std::string path = "noise";
    reject_unknown(node, path, {"kind", "intensity"});
    const json* kind = find(node, "kind");
    if (!kind) throw ConfigError(join(path, "kind"), "missing required key");
    const NoiseKind k = wrap(join(path, "kind"), [&] { return noise_kind_from_string(as_string(*kind, join(path, "kind"))); });
    std::optional<double> intensity;
    if (const json* v = find(node, "intensity")) intensity = as_number(*v, join(path, "intensity"));
    return wrap(join(path, "intensity"), [&] { return NoiseSpec(k, intensity); });
}

std::vector<PhaseState> parse_initial(const json& node)
{
    const std::string path = "initial";
    if (!node.is_array() || node.empty()) throw ConfigError(path, "expected a non-empty list of [x, v] pairs");
    std::vector<PhaseState> out;
    for (std::size_t i = 0; i < node.size(); ++i) {
        const auto pair = as_number_list(node[i], index_path(path, i));
        if (pair.size() != 2) throw ConfigError(index_path(path, i), "expected [x, v]");
        out.push_back({pair[0], pair[1]});
    }
    return out;
}

} // namespace

double default_t_total(double omega0)
{
    return 400.0 * 2.0 * std::numbers::pi / omega0;
}

json yaml_to_json(std::string_view text)
{
    try {
        return yaml_node_to_json(YAML::Load(std::string(text)));
    } catch (const YAML::Exception& e) {
        throw ConfigError("", std::string("malformed YAML: ") + e.what());
    }
}

RunConfig parse_config(std::string_view text)
{
    const auto first = text.find_first_not_of(" \t\r\n");
    json doc;
    if (first != std::string_view::npos && text[first] == '{') {
        try {
            doc = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError("", std::string("malformed JSON: ") + e.what());
        }
    } else {
        doc = yaml_to_json(text);
    }
    return config_from_json(doc);
}

RunConfig config_from_json(const json& doc)
{
    reject_unknown(doc, "", {"name", "spec", "params", "noise", "scheme", "representation", "t_total", "dt",
                             "allow_coarse_dt", "seed", "ensemble_size", "initial", "kappa", "sample_stride",
                             "burn_in", "outputs"});
    const json* spec_node = find(doc, "spec");
    if (!spec_node) throw ConfigError("spec", "missing required key");
    const json* params_node = find(doc, "params");
    if (!params_node) throw ConfigError("params", "missing required key");

    DampingSpec spec = parse_spec(*spec_node);
    SystemParams params = parse_params(*params_node, spec);
    RunConfig cfg{.spec = spec, .params = params};

    if (const json* v = find(doc, "name")) cfg.name = as_string(*v, "name");
    if (const json* v = find(doc, "noise")) cfg.noise = parse_noise(*v);
    if (const json* v = find(doc, "scheme")) {
        cfg.scheme.kind = wrap("scheme", [&] { return scheme_from_string(as_string(*v, "scheme")); });
    }
    if (const json* v = find(doc, "representation")) {
        cfg.representation = wrap("representation", [&] { return representation_from_string(as_string(*v, "representation")); });
    }
    cfg.scheme.dt = default_dt(params.omega0);
    if (const json* v = find(doc, "dt")) cfg.scheme.dt = as_number(*v, "dt");
    if (const json* v = find(doc, "allow_coarse_dt")) cfg.scheme.allow_coarse_dt = as_bool(*v, "allow_coarse_dt");
    wrap("dt", [&] { cfg.scheme.validate(params.omega0); return 0; });

    cfg.t_total = default_t_total(params.omega0);
    if (const json* v = find(doc, "t_total")) cfg.t_total = as_number(*v, "t_total");
    if (!(cfg.t_total > 0.0)) throw ConfigError("t_total", "must be > 0");
    if (const json* v = find(doc, "seed")) cfg.seed = as_unsigned(*v, "seed");
    if (const json* v = find(doc, "ensemble_size")) cfg.ensemble_size = as_unsigned(*v, "ensemble_size");
    if (cfg.ensemble_size < 1) throw ConfigError("ensemble_size", "must be >= 1");
    cfg.initial = {{0.1, 0.0}, {4.0, 0.0}};
    if (const json* v = find(doc, "initial")) cfg.initial = parse_initial(*v);
    if (const json* v = find(doc, "kappa")) cfg.kappa = as_number(*v, "kappa");
    if (!(cfg.kappa >= 0.0)) throw ConfigError("kappa", "must be >= 0");
    if (const json* v = find(doc, "sample_stride")) cfg.sample_stride = as_unsigned(*v, "sample_stride");
    if (cfg.sample_stride < 1) throw ConfigError("sample_stride", "must be >= 1");
    if (const json* v = find(doc, "burn_in")) cfg.burn_in = as_number(*v, "burn_in");
    if (!(cfg.burn_in >= 0.0 && cfg.burn_in < 1.0)) throw ConfigError("burn_in", "must lie in [0, 1)");
    if (const json* v = find(doc, "outputs")) {
        reject_unknown(*v, "outputs", {"dir"});
        if (const json* d = find(*v, "dir")) cfg.output_dir = as_string(*d, "outputs.dir");
    }
    return cfg;
}

json config_to_json(const RunConfig& c)
{
    json noise = {{"kind", std::string(to_string(c.noise.kind()))}};
    if (c.noise.intensity_override()) noise["intensity"] = *c.noise.intensity_override();
    json initial = json::array();
    for (const auto& s : c.initial) initial.push_back({s.x, s.v});
    return json{
        {"name", c.name},
        {"spec", {{"family", std::string(to_string(c.spec.family()))}, {"basis", "m"}, {"coeffs", c.spec.m()}}},
        {"params", {{"omega0", c.params.omega0}, {"gamma", c.params.gamma}, {"n", c.params.n}, {"theta", c.params.theta}}},
        {"noise", noise},
        {"scheme", std::string(to_string(c.scheme.kind))},
        {"representation", std::string(to_string(c.representation))},
        {"t_total", c.t_total},
        {"dt", c.scheme.dt},
        {"allow_coarse_dt", c.scheme.allow_coarse_dt},
        {"seed", c.seed},
        {"ensemble_size", c.ensemble_size},
        {"initial", initial},
        {"kappa", c.kappa},
        {"sample_stride", c.sample_stride},
        {"burn_in", c.burn_in},
        {"outputs", {{"dir", c.output_dir}}},
    };
}

std::string serialize_config(const RunConfig& config)
{
    return config_to_json(config).dump(2);
}

namespace {

struct PresetDef {
    std::string_view name;
    Family family;
    Basis basis;
    std::vector<double> coeffs;
    double epsilon;
    double theta;
    NoiseKind noise;
};

const std::vector<PresetDef>& preset_table()
{
    // Reference configurations of the five figures and the coefficient
    // table. epsilon for the table rows is a toolkit choice.
    static const std::vector<PresetDef> table = {
        {"fig1a", Family::Position, Basis::A, {0.0, 1.0}, 0.01, 50.0, NoiseKind::None},
        {"fig1b", Family::Position, Basis::A, {0.0, 1.0}, 0.01, 50.0, NoiseKind::Internal},
        {"fig1c", Family::Position, Basis::A, {0.0, 1.0}, 0.01, 50.0, NoiseKind::External},
        {"fig2a", Family::Position, Basis::A, {-1.0, 1.0}, 2.0, 0.0, NoiseKind::None},
        {"fig2b", Family::Position, Basis::A, {-1.0, 1.0}, 2.0, 0.0, NoiseKind::Internal},
        {"fig3a", Family::Velocity, Basis::Beta, {-1.0, 1.0}, 1.0, 10.0, NoiseKind::None},
        {"fig3b", Family::Velocity, Basis::Beta, {-1.0, 1.0}, 1.0, 10.0, NoiseKind::Internal},
        {"fig4a", Family::Position, Basis::A, {-1.0, 1.0, -0.144, 0.005}, 0.01, 0.0, NoiseKind::None},
        {"fig4b", Family::Position, Basis::A, {-1.0, 1.0, -0.144, 0.005}, 0.01, 0.0, NoiseKind::Internal},
        {"fig5a", Family::Velocity, Basis::Beta, {-1.0, -1.0, 1.0, 1.0}, 1.5, 20.0, NoiseKind::None},
        {"fig5b", Family::Velocity, Basis::Beta, {-1.0, -1.0, 1.0, 1.0}, 1.5, 20.0, NoiseKind::Internal},
        {"table1_1", Family::Position, Basis::M, {-1.0, 1.0, 2.0}, 0.1, 0.0, NoiseKind::None},
        {"table1_2", Family::Position, Basis::M, {0.0, -1.0, 2.0}, 0.1, 0.0, NoiseKind::None},
        {"table1_3", Family::Position, Basis::M, {-1.0, 0.0, 2.0}, 0.1, 0.0, NoiseKind::None},
    };
    return table;
}

} // namespace

std::vector<std::string> preset_names()
{
    std::vector<std::string> names;
    for (const auto& p : preset_table()) names.emplace_back(p.name);
    return names;
}

RunConfig preset(std::string_view name)
{
    const auto& table = preset_table();
    const auto it = std::find_if(table.begin(), table.end(), [&](const PresetDef& p) { return p.name == name; });
    if (it == table.end()) throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");

    DampingSpec spec = DampingSpec::from_basis(it->family, it->basis, it->coeffs);
    SystemParams params{.omega0 = 1.0, .gamma = gamma_for_epsilon(it->epsilon, spec), .n = spec.n(), .theta = it->theta};

    NoiseSpec noise = NoiseSpec::none();
    if (it->noise == NoiseKind::Internal) noise = NoiseSpec::internal();
    // Same intensity as the matched internal noise, applied without the
    // (alpha*)^n structure that ties it to the damping.
    if (it->noise == NoiseKind::External) noise = NoiseSpec::external(noise_intensity(params, NoiseSpec::internal()));

    RunConfig cfg{.name = std::string(name), .spec = spec, .params = params, .noise = noise};
    cfg.representation = it->noise == NoiseKind::None ? Representation::Phase : Representation::Amplitude;
    cfg.scheme.kind = SchemeKind::Heun;
    cfg.scheme.dt = default_dt(params.omega0);
    cfg.t_total = default_t_total(params.omega0);
    cfg.seed = 20240101;
    cfg.initial = {{0.1, 0.0}, {4.0, 0.0}};
    cfg.ensemble_size = cfg.initial.size();
    cfg.output_dir = "qlienard-out/" + std::string(name);
    return cfg;
}

} // namespace qlienard
