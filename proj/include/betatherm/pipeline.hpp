// Orchestration behind the CLI subcommands: each command is a pure-ish
// function from validated inputs to a JSON payload plus files on disk, so
// tests can drive it without a process boundary. All file output is routed
// through one writer and formatted deterministically.
#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "betatherm/job.hpp"
#include "betatherm/orbit.hpp"

namespace betatherm {

struct RunResult {
    Json payload;
    int exit_code = 0;
    std::string warning;
};

namespace detail {

inline std::string csv_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + path.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << content;
    if (!out.good()) throw IoError("write to " + path.string() + " failed");
}

// Seeded bilateral pairs at cylinder resolution, zero tails.
inline std::vector<BilateralPair> sample_bilateral_pairs(const BetaSpec& spec, std::size_t depth,
                                                         std::size_t count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const auto pasts = enumerate_language(depth, spec, true);
    const auto futures = enumerate_language(depth, spec);
    std::vector<BilateralPair> out;
    std::size_t attempts = 0;
    while (out.size() < count) {
        if (++attempts > count * 1000)
            throw ResourceLimit("bilateral pair sampling keeps missing; depth too constrained");
        const BilateralPair p{EventuallyPeriodicSeq::from_word(pasts[rng() % pasts.size()]),
                              EventuallyPeriodicSeq::from_word(futures[rng() % futures.size()])};
        if (spec.is_bilateral(p)) out.push_back(p);
    }
    return out;
}

inline std::vector<BilateralPair> pairs_from_file(const BetaSpec& spec, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read pair file " + path);
    std::vector<BilateralPair> out;
    std::string past, future;
    while (in >> past >> future) {
        const BilateralPair p{parse_sequence(past), parse_sequence(future)};
        if (!spec.is_bilateral(p))
            throw NotBilateral("pair \"" + past + " " + future + "\" from " + path);
        out.push_back(p);
    }
    return out;
}

}  // namespace detail

struct ExpandOptions {
    std::string beta_text;    // decimal beta, parsed at extended precision
    std::string digits_text;  // or a "pre(period)" presentation
    std::size_t n = 16;
    bool greedy = false;  // default: quasi-greedy
};

inline RunResult cmd_expand(const ExpandOptions& opt) {
    if (opt.beta_text.empty() == opt.digits_text.empty())
        throw SchemaError("expand needs exactly one of --beta or --digits");
    RunResult r;
    if (!opt.digits_text.empty()) {
        const BetaSpec spec = BetaSpec::from_digits(parse_sequence(opt.digits_text));
        r.payload["beta"] = spec.beta_double();
        r.payload["digits"] = format_word(spec.xbeta().first(opt.n));
        r.payload["presentation"] = format_sequence(spec.xbeta());
        return r;
    }
    const HighPrec beta(opt.beta_text);
    if (beta <= 1) throw SchemaError("--beta must exceed 1");
    if (opt.greedy) {
        r.payload["digits"] = format_word(greedy_expansion(HighPrec(1), beta, opt.n));
    } else {
        const QuasiGreedyResult qg = quasi_greedy_of_one(beta, opt.n);
        r.payload["digits"] = format_word(qg.digits);
        if (qg.exact) r.payload["presentation"] = format_sequence(*qg.exact);
    }
    r.payload["beta"] = beta.convert_to<double>();
    return r;
}

inline RunResult cmd_admissible(const BetaSpec& spec, const std::string& word_text, bool transpose) {
    const Word w = parse_word(word_text);
    RunResult r;
    r.payload["word"] = word_text;
    r.payload["transpose"] = transpose;
    r.payload["admissible"] = spec.is_admissible_word(w, transpose);
    return r;
}

inline RunResult cmd_language(const BetaSpec& spec, std::size_t n, bool transpose, bool count_only) {
    const auto words = enumerate_language(n, spec, transpose);
    RunResult r;
    r.payload["n"] = n;
    r.payload["count"] = words.size();
    if (!count_only) {
        Json list = Json::array();
        for (const Word& w : words) list.push_back(format_word(w));
        r.payload["words"] = std::move(list);
    }
    return r;
}

inline RunResult cmd_spectrum(const JobConfig& cfg, double t, const std::string& out_dir) {
    const Potential at = cfg.potential.scaled(t);
    const SpectralTriple tr = power_iteration(at, cfg.depth, cfg.spec, cfg.tol);
    RunResult r;
    r.payload["lambda"] = tr.lambda;
    r.payload["log_lambda"] = tr.log_lambda;
    r.payload["residual"] = tr.residual;
    r.payload["iterations"] = tr.iterations;
    r.payload["t"] = t;
    r.payload["depth"] = cfg.depth;
    if (!out_dir.empty()) {
        std::ostringstream csv;
        csv << "word,psi,rho,gibbs\n";
        for (const auto& [w, p] : tr.psi.values)
            csv << format_word(w) << ',' << detail::csv_number(p) << ','
                << detail::csv_number(tr.rho(w)) << ',' << detail::csv_number(tr.gibbs(w)) << '\n';
        detail::write_text_file(std::filesystem::path(out_dir) / "spectrum.csv", csv.str());
    }
    return r;
}

struct PairSource {
    std::size_t random_count = 100;
    std::string file;  // overrides random sampling when set

    // "random:100" or "file:path"
    static PairSource parse(const std::string& text) {
        PairSource ps;
        if (text.empty()) return ps;
        const auto colon = text.find(':');
        if (colon == std::string::npos) throw SchemaError("pairs spec wants random:<n> or file:<path>");
        const std::string kind = text.substr(0, colon), rest = text.substr(colon + 1);
        if (kind == "random") {
            ps.random_count = std::stoul(rest);
        } else if (kind == "file") {
            ps.file = rest;
        } else {
            throw SchemaError("unknown pairs source \"" + kind + "\"");
        }
        return ps;
    }
};

inline RunResult cmd_involution(const JobConfig& cfg, const PairSource& pairs,
                                const std::string& out_dir) {
    const Potential& a = cfg.potential;
    const KernelSpec ks = KernelSpec::exact_for(a);
    const Potential at = transpose_potential(a, cfg.spec, ks);
    const SpectralTriple fwd = power_iteration(a, cfg.depth, cfg.spec, cfg.tol);
    const SpectralTriple trans = power_iteration(at, cfg.depth, cfg.spec, cfg.tol);

    const std::vector<BilateralPair> sampled =
        pairs.file.empty()
            ? detail::sample_bilateral_pairs(cfg.spec, cfg.depth, pairs.random_count, cfg.seed)
            : detail::pairs_from_file(cfg.spec, pairs.file);
    double worst = 0.0;
    std::ostringstream csv;
    csv << "past,future,W\n";
    for (const BilateralPair& p : sampled) {
        worst = std::max(worst, check_duality(a, at, p.past, p.future, cfg.spec, ks));
        csv << format_sequence(p.past) << ',' << format_sequence(p.future) << ','
            << detail::csv_number(detail::kernel_sum(a, p.past, p.future, ks)) << '\n';
    }

    const CouplingMeasure cm = coupling_measure(a, fwd, trans, ks, cfg.depth, cfg.spec);
    const auto [dp, df] = check_marginals(cm, trans.gibbs, fwd.gibbs);

    RunResult r;
    r.payload["c_A"] = cm.c;
    r.payload["duality_max_residual"] = worst;
    r.payload["marginal_defects"]["past"] = dp;
    r.payload["marginal_defects"]["future"] = df;
    r.payload["pairs"] = sampled.size();
    if (!out_dir.empty())
        detail::write_text_file(std::filesystem::path(out_dir) / "involution_w.csv", csv.str());
    return r;
}

inline RunResult cmd_zerotemp(const JobConfig& cfg, const std::string& out_dir) {
    const ZeroTempReport rep =
        run_zero_temperature(cfg.potential, cfg.grid, cfg.depth, cfg.spec, cfg.zero_temp_options());
    RunResult r;
    r.payload["m"] = rep.m;
    r.payload["m_fit_residual"] = rep.m_fit.residual;
    r.payload["gamma"] = rep.gamma.value;
    r.payload["gamma_from_c_rate"] = rep.gamma.from_c_rate;
    r.payload["calibration_defect"] = rep.calibration_defect;
    r.payload["calibration_defect_transpose"] = rep.calibration_defect_transpose;
    r.payload["oracle_m"] = rep.oracle->m;
    r.payload["oracle_unique"] = rep.oracle->unique;
    if (!out_dir.empty()) {
        std::ostringstream csv;
        csv << "t,lambda,log_lambda_over_t,c_over_t\n";
        for (const PerTemperature& pt : rep.per_t)
            csv << detail::csv_number(pt.t) << ',' << detail::csv_number(pt.forward.lambda) << ','
                << detail::csv_number(pt.log_lambda_over_t) << ','
                << detail::csv_number(pt.c_over_t) << '\n';
        detail::write_text_file(std::filesystem::path(out_dir) / "zerotemp_per_t.csv", csv.str());
    }
    return r;
}

inline RunResult cmd_ldp(const JobConfig& cfg, const std::string& cylinder, const std::string& out_dir) {
    const ZeroTempReport rep =
        run_zero_temperature(cfg.potential, cfg.grid, cfg.depth, cfg.spec, cfg.zero_temp_options());
    const LdpResult ldp = ldp_cylinder_limit(parse_word(cylinder), rep, cfg.spec, cfg.fit_bound);
    RunResult r;
    r.payload["cylinder"] = cylinder;
    r.payload["empirical_limit"] = ldp.empirical_limit;
    r.payload["sup_I"] = ldp.sup_I;
    r.payload["gap"] = ldp.gap;
    r.payload["witness_point"] = format_sequence(ldp.witness);
    r.payload["unique_maximizer"] = ldp.unique_maximizer;
    if (!out_dir.empty()) {
        std::ostringstream csv;
        csv << "t,log_mass_over_t\n";
        for (const auto& [t, v] : ldp.series)
            csv << detail::csv_number(t) << ',' << detail::csv_number(v) << '\n';
        detail::write_text_file(std::filesystem::path(out_dir) / "ldp_series.csv", csv.str());
    }
    if (!ldp.unique_maximizer) {
        r.exit_code = 4;
        r.warning = "the potential does not have a unique maximizing orbit; the decay limit is reported without the uniqueness hypothesis";
    }
    return r;
}

inline RunResult cmd_oracle(const JobConfig& cfg, std::size_t p_max) {
    const OrbitMax mx = max_orbit_mean(cfg.potential, p_max, cfg.spec);
    RunResult r;
    r.payload["m"] = mx.m;
    r.payload["unique"] = mx.unique;
    Json cycles = Json::array();
    for (const PeriodicOrbit& c : mx.argmax) cycles.push_back(format_word(c.word));
    r.payload["argmax_cycles"] = std::move(cycles);
    r.payload["max_period"] = p_max;
    return r;
}

// Plain-text rendering of a payload: one "key: value" line per field.
inline std::string render_text(const Json& payload) {
    std::ostringstream os;
    for (const auto& [key, value] : payload.items())
        os << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    return os.str();
}

}  // namespace betatherm
