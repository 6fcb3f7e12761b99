// betatherm: thermodynamic formalism on beta-shifts from the command line.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "betatherm/betatherm.hpp"

namespace {

using namespace betatherm;

struct GlobalFlags {
    bool json = false;
    std::string out;
    std::string config_path;
    std::optional<std::size_t> depth;
    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
};

JobConfig load_config(const GlobalFlags& g) {
    if (g.config_path.empty()) throw SchemaError("this subcommand needs --config <job.json>");
    std::ifstream in(g.config_path);
    if (!in) throw IoError("cannot read config " + g.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    JobConfig cfg = parse_config(buf.str());
    if (g.depth) cfg.depth = *g.depth;
    if (g.tol) cfg.tol = *g.tol;
    if (g.seed) cfg.seed = *g.seed;
    if (!g.out.empty()) cfg.out_dir = g.out;
    return cfg;
}

void emit(const RunResult& r, bool json) {
    if (!r.warning.empty()) std::cerr << "warning: " << r.warning << '\n';
    if (json)
        std::cout << r.payload.dump(2) << '\n';
    else
        std::cout << render_text(r.payload);
}

BetaSpec spec_from_flags(const std::string& beta_text, const std::string& digits_text) {
    if (beta_text.empty() == digits_text.empty())
        throw SchemaError("give exactly one of --beta or --digits");
    if (!digits_text.empty()) return BetaSpec::from_digits(parse_sequence(digits_text));
    const HighPrec b(beta_text);
    if (b <= 1) throw SchemaError("--beta must exceed 1");
    return BetaSpec::from_value(b);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"thermodynamic formalism on beta-shifts: expansions, transfer spectra, "
                 "involution kernels, zero-temperature limits"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_flag("--json", g.json, "structured JSON output");
    app.add_option("--out", g.out, "directory for CSV artifacts");
    app.add_option("--depth", g.depth, "cylinder depth override");
    app.add_option("--tol", g.tol, "solver tolerance override");
    app.add_option("--seed", g.seed, "seed override for sampled checks");

    // expand
    auto* expand = app.add_subcommand("expand", "greedy / quasi-greedy digits of 1");
    ExpandOptions eo;
    expand->add_option("--beta", eo.beta_text, "base as a decimal literal");
    expand->add_option("--digits", eo.digits_text, "base as a quasi-greedy presentation pre(period)");
    expand->add_option("--n", eo.n, "number of digits")->default_val(16);
    bool quasi_flag = false;
    expand->add_flag("--greedy", eo.greedy, "greedy digits");
    expand->add_flag("--quasi", quasi_flag, "quasi-greedy digits (default)");

    // admissible
    auto* adm = app.add_subcommand("admissible", "test a word against the Parry criterion");
    std::string adm_word, adm_beta, adm_digits;
    bool adm_transpose = false;
    adm->add_option("--word", adm_word, "digit word")->required();
    adm->add_option("--beta", adm_beta, "base as a decimal literal");
    adm->add_option("--digits", adm_digits, "base as a presentation");
    adm->add_flag("--transpose", adm_transpose, "test in the transpose shift");

    // language
    auto* lang = app.add_subcommand("language", "enumerate admissible words");
    std::string lang_beta, lang_digits;
    std::size_t lang_n = 4;
    bool lang_count_only = false, lang_transpose = false;
    lang->add_option("--n", lang_n, "word length")->required();
    lang->add_option("--beta", lang_beta, "base as a decimal literal");
    lang->add_option("--digits", lang_digits, "base as a presentation");
    lang->add_flag("--count-only", lang_count_only, "print only the count");
    lang->add_flag("--transpose", lang_transpose, "transpose-side language");

    // spectrum
    auto* spec_cmd = app.add_subcommand("spectrum", "Perron eigendata of the transfer operator");
    double spectrum_t = 1.0;
    spec_cmd->add_option("--config", g.config_path, "job configuration")->required();
    spec_cmd->add_option("--t", spectrum_t, "inverse temperature scaling")->default_val(1.0);

    // involution
    auto* inv = app.add_subcommand("involution", "kernel, duality residuals, coupling marginals");
    std::string inv_pairs;
    inv->add_option("--config", g.config_path, "job configuration")->required();
    inv->add_option("--pairs", inv_pairs, "random:<n> or file:<path>");

    // zerotemp
    auto* zt = app.add_subcommand("zerotemp", "zero-temperature sweep: m, sub-actions, gamma");
    std::string zt_grid, zt_csv;
    zt->add_option("--config", g.config_path, "job configuration")->required();
    zt->add_option("--t-grid", zt_grid, "start:stop:geometric[:factor]");
    zt->add_option("--csv", zt_csv, "directory for the per-t CSV");

    // ldp
    auto* ldp = app.add_subcommand("ldp", "cylinder decay rate against the rate function");
    std::string ldp_cylinder;
    ldp->add_option("--config", g.config_path, "job configuration")->required();
    ldp->add_option("--cylinder", ldp_cylinder, "cylinder word")->required();

    // oracle
    auto* oracle = app.add_subcommand("oracle", "periodic-orbit maximizing value");
    std::size_t oracle_p = 8;
    oracle->add_option("--config", g.config_path, "job configuration")->required();
    oracle->add_option("--max-period", oracle_p, "cycle period bound")->default_val(8);

    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        RunResult r;
        if (*expand) {
            r = cmd_expand(eo);
        } else if (*adm) {
            r = cmd_admissible(spec_from_flags(adm_beta, adm_digits), adm_word, adm_transpose);
        } else if (*lang) {
            r = cmd_language(spec_from_flags(lang_beta, lang_digits), lang_n, lang_transpose,
                             lang_count_only);
        } else if (*spec_cmd) {
            const JobConfig cfg = load_config(g);
            r = cmd_spectrum(cfg, spectrum_t, !g.out.empty() ? g.out : cfg.out_dir);
        } else if (*inv) {
            const JobConfig cfg = load_config(g);
            r = cmd_involution(cfg, PairSource::parse(inv_pairs), !g.out.empty() ? g.out : cfg.out_dir);
        } else if (*zt) {
            JobConfig cfg = load_config(g);
            if (!zt_grid.empty()) cfg.grid = parse_t_grid(zt_grid);
            const std::string dir = !zt_csv.empty() ? zt_csv : (!g.out.empty() ? g.out : cfg.out_dir);
            r = cmd_zerotemp(cfg, dir);
        } else if (*ldp) {
            const JobConfig cfg = load_config(g);
            r = cmd_ldp(cfg, ldp_cylinder, !g.out.empty() ? g.out : cfg.out_dir);
        } else if (*oracle) {
            const JobConfig cfg = load_config(g);
            r = cmd_oracle(cfg, oracle_p);
        }
        emit(r, g.json);
        return r.exit_code;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.family();
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
