// Job configuration: JSON schema parsing with field-path errors, beta mode
// selection, potential table validation against the admissible language, and
// canonical re-serialization.
#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "betatherm/zerotemp.hpp"

namespace betatherm {

using Json = nlohmann::json;

struct JobConfig {
    BetaSpec spec;
    Potential potential;
    std::size_t depth = 4;
    double tol = default_power_tol;
    TemperatureGrid grid = TemperatureGrid::geometric();
    std::uint64_t seed = 0;
    std::string out_dir;

    double fit_bound = default_fit_bound;
    double tol_zero = default_tol_zero;
    double oracle_tol = default_oracle_tol;
    double gamma_tol = default_gamma_tol;

    ZeroTempOptions zero_temp_options() const {
        ZeroTempOptions opt;
        opt.power_tol = tol;
        opt.fit_bound = fit_bound;
        opt.oracle_tol = oracle_tol;
        opt.gamma_tol = gamma_tol;
        opt.tol_zero = tol_zero;
        return opt;
    }
};

// "start:stop:kind[:factor]", e.g. "2:256:geometric".
inline TemperatureGrid parse_t_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    if (parts.size() < 3 || parts.size() > 4) throw SchemaError("t-grid wants start:stop:kind[:factor]");
    try {
        const double start = std::stod(parts[0]);
        const double stop = std::stod(parts[1]);
        const double factor = parts.size() == 4 ? std::stod(parts[3]) : 2.0;
        if (parts[2] != "geometric") throw SchemaError("unknown t-grid kind \"" + parts[2] + "\"");
        return TemperatureGrid::geometric(start, stop, factor);
    } catch (const std::invalid_argument&) {
        throw SchemaError("malformed t-grid \"" + text + "\"");
    }
}

namespace detail {

inline const Json& require_field(const Json& j, const std::string& key, const std::string& path) {
    const auto it = j.find(key);
    if (it == j.end()) throw SchemaError("missing field " + path + "." + key);
    return *it;
}

}  // namespace detail

inline BetaSpec beta_from_json(const Json& j, const std::string& path = "beta") {
    if (!j.is_object()) throw SchemaError(path + " must be an object");
    const bool has_value = j.contains("value");
    const bool has_digits = j.contains("digits");
    if (has_value == has_digits)
        throw SchemaError(path + " needs exactly one of \"value\" or \"digits\"");
    if (has_digits) {
        if (!j["digits"].is_string()) throw SchemaError(path + ".digits must be a string");
        return BetaSpec::from_digits(parse_sequence(j["digits"].get<std::string>()));
    }
    if (!j["value"].is_number()) throw SchemaError(path + ".value must be a number");
    const double v = j["value"].get<double>();
    if (v <= 1.0) throw SchemaError(path + ".value must exceed 1");
    return BetaSpec::from_value(v);
}

inline JobConfig parse_config(const std::string& text) {
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw SchemaError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw SchemaError("config root must be an object");

    JobConfig cfg;
    cfg.spec = beta_from_json(detail::require_field(j, "beta", "config"));

    const Json& pj = detail::require_field(j, "potential", "config");
    const Json& dj = detail::require_field(pj, "depth", "config.potential");
    if (!dj.is_number_unsigned() || dj.get<std::uint64_t>() == 0)
        throw SchemaError("config.potential.depth must be a positive integer");
    const std::size_t pdepth = dj.get<std::size_t>();
    const Json& tj = detail::require_field(pj, "table", "config.potential");
    if (!tj.is_object()) throw SchemaError("config.potential.table must be an object");
    std::map<Word, double> table;
    for (const auto& [key, value] : tj.items()) {
        if (!value.is_number()) throw SchemaError("config.potential.table[\"" + key + "\"] must be a number");
        Word w;
        try {
            w = parse_word(key);
        } catch (const SchemaError&) {
            throw InadmissibleTableKey(key);
        }
        if (w.size() != pdepth) throw InadmissibleTableKey(key);
        table[w] = value.get<double>();
    }
    const double theta = pj.value("theta", 1.0);
    const double holder = pj.value("holder_const", 0.0);
    cfg.potential = Potential::from_table(cfg.spec, pdepth, std::move(table), theta,
                                          Side::forward, holder);

    cfg.depth = j.value("depth", std::size_t{4});
    if (cfg.depth < pdepth) throw SchemaError("config.depth must reach the potential depth");
    cfg.tol = j.value("tol", default_power_tol);
    if (j.contains("t_grid")) {
        const Json& g = j["t_grid"];
        if (g.is_string()) {
            cfg.grid = parse_t_grid(g.get<std::string>());
        } else if (g.is_object()) {
            const std::string kind = g.value("kind", "geometric");
            if (kind != "geometric") throw SchemaError("config.t_grid.kind must be \"geometric\"");
            cfg.grid = TemperatureGrid::geometric(g.value("start", 2.0), g.value("stop", 256.0),
                                                  g.value("factor", 2.0));
        } else {
            throw SchemaError("config.t_grid must be a string or an object");
        }
    }
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.out_dir = j.value("out", std::string{});
    cfg.fit_bound = j.value("fit_bound", default_fit_bound);
    cfg.tol_zero = j.value("tol_zero", default_tol_zero);
    cfg.oracle_tol = j.value("oracle_tol", default_oracle_tol);
    cfg.gamma_tol = j.value("gamma_tol", default_gamma_tol);
    return cfg;
}

// Canonical form: sorted keys, words as digit strings.
inline Json serialize_config(const JobConfig& cfg) {
    Json j;
    if (cfg.spec.periodic_presentation())
        j["beta"]["digits"] = format_sequence(cfg.spec.xbeta());
    else
        j["beta"]["value"] = cfg.spec.beta_double();
    j["potential"]["depth"] = cfg.potential.depth;
    for (const auto& [w, v] : cfg.potential.table) j["potential"]["table"][format_word(w)] = v;
    j["potential"]["theta"] = cfg.potential.theta;
    j["depth"] = cfg.depth;
    j["tol"] = cfg.tol;
    j["t_grid"]["start"] = cfg.grid.values.front();
    j["t_grid"]["stop"] = cfg.grid.values.back();
    j["t_grid"]["kind"] = "geometric";
    j["seed"] = cfg.seed;
    if (!cfg.out_dir.empty()) j["out"] = cfg.out_dir;
    return j;
}

}  // namespace betatherm
