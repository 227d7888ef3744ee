// Command-line front end: estimate ordinal CDFs, compute identified quantile
// sets, build inner confidence sets, run frequentist/Bayesian tests, and
// drive simulation studies. Reports are printed as text and optionally
// written as JSON.

#include "ordq/io.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <string>

namespace {

void add_input_options(CLI::App* cmd, ordq::AnalysisRequest& req) {
    cmd->add_option("input", req.input_path, "CSV input file")->required();
    cmd->add_option("--group-col", req.group_col,
                    "group column name (raw per-row mode; omit for tabulated "
                    "category,count_x,count_y input)");
    cmd->add_option("--category-col", req.category_col, "category column (raw mode)");
    cmd->add_option("--weight-col", req.weight_col, "sampling weight column (raw mode)");
    cmd->add_option("--x", req.x_label, "label of the first group (X)");
    cmd->add_option("--y", req.y_label, "label of the second group (Y)");
    cmd->add_option("--category-min", req.category_min, "declared lowest category");
    cmd->add_option("--category-max", req.category_max, "declared highest category");
    cmd->add_option("--merge", req.merge,
                    "merge categories, e.g. \"1-12,13,14,15,16,17,18,19-25\"");
    cmd->add_option("--json", req.json_path, "write the full JSON report here");
    cmd->add_option("--decimals", req.decimals, "decimal places for interval text");
}

void add_sim_options(CLI::App* cmd, ordq::AnalysisRequest& req) {
    cmd->add_option("--alpha", req.alpha, "level (default 0.05)");
    cmd->add_option("--seed", req.seed, "RNG seed (default 1)");
    cmd->add_option("--draws", req.draws, "simulation draws for critical values");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ordq: compare latent distributions from ordinal data"};
    app.require_subcommand(1);
    ordq::AnalysisRequest req;

    auto* estimate = app.add_subcommand("estimate", "weighted ordinal CDFs + covariance");
    add_input_options(estimate, req);
    estimate->add_option("--plot", req.plot_path, "write step-function CDF TSV here");

    auto* identify = app.add_subcommand("identify", "identified quantile sets");
    identify->require_subcommand(1);
    auto* id_between = identify->add_subcommand("between", "between-group quantile set");
    auto* id_wf = identify->add_subcommand("within-fixed", "fixed-pair interquantile sets");
    id_wf->add_option("--j", req.j, "lower category")->required();
    id_wf->add_option("--k", req.k, "upper category")->required();
    auto* id_wa = identify->add_subcommand("within-all", "all-pairs rectangle set");
    for (CLI::App* c : {id_between, id_wf, id_wa}) add_input_options(c, req);

    auto* cs = app.add_subcommand("cs", "inner confidence sets");
    cs->require_subcommand(1);
    auto* cs_between = cs->add_subcommand("between", "between-group inner CS");
    auto* cs_wf = cs->add_subcommand("within-fixed", "fixed-pair inner CS");
    cs_wf->add_option("--j", req.j, "lower category")->required();
    cs_wf->add_option("--k", req.k, "upper category")->required();
    auto* cs_wa = cs->add_subcommand("within-all", "all-pairs inner CS");
    for (CLI::App* c : {cs_between, cs_wf, cs_wa}) {
        add_input_options(c, req);
        add_sim_options(c, req);
    }

    auto* test = app.add_subcommand("test", "frequentist hypothesis tests");
    test->require_subcommand(1);
    auto* t_sd1 = test->add_subcommand("sd1", "H0: X first-order dominates Y");
    auto* t_non = test->add_subcommand("nonsd1", "H0: X does not dominate Y");
    auto* t_sc = test->add_subcommand("sc", "H0: single CDF crossing");
    for (CLI::App* c : {t_sd1, t_non, t_sc}) {
        add_input_options(c, req);
        add_sim_options(c, req);
    }

    auto* bayes = app.add_subcommand("bayes", "posterior probability of a relationship");
    add_input_options(bayes, req);
    bayes->add_option("--event", req.event, "sd1-xy|sd1-yx|sc-xy|sc-yx");
    bayes->add_option("--alpha", req.alpha, "decision level (default 0.05)");
    bayes->add_option("--seed", req.seed, "RNG seed (default 1)");
    bayes->add_option("--draws", req.bayes_draws, "posterior draws (default 10000)");
    bayes->add_flag("--improper-prior", req.improper_prior,
                    "Dirichlet(eps) prior instead of uniform");

    auto* sim = app.add_subcommand("simulate", "scenario-driven simulation studies");
    sim->add_option("scenario", req.scenario_path, "scenario JSON file")->required();
    sim->add_option("--study", req.study, "verify|coverage|size")->required();
    sim->add_option("--check", req.check, "verify: between|within");
    sim->add_option("--grid-step", req.grid_step, "verify: tau grid step");
    sim->add_option("--method", req.method, "coverage: between|within-fixed|within-all");
    sim->add_option("--j", req.j, "coverage within-fixed: lower category");
    sim->add_option("--k", req.k, "coverage within-fixed: upper category");
    sim->add_option("--test", req.test, "size: sd1|nonsd1|sc");
    add_sim_options(sim, req);
    sim->add_option("--json", req.json_path, "write the full JSON report here");
    std::string tsv_path;
    sim->add_option("--tsv", tsv_path, "write a key/value TSV summary here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : static_cast<int>(ordq::ExitCode::InputError);
    }

    if (estimate->parsed()) req.subcommand = "estimate";
    if (id_between->parsed()) req.subcommand = "identify-between";
    if (id_wf->parsed()) req.subcommand = "identify-within-fixed";
    if (id_wa->parsed()) req.subcommand = "identify-within-all";
    if (cs_between->parsed()) req.subcommand = "cs-between";
    if (cs_wf->parsed()) req.subcommand = "cs-within-fixed";
    if (cs_wa->parsed()) req.subcommand = "cs-within-all";
    if (t_sd1->parsed()) req.subcommand = "test-sd1";
    if (t_non->parsed()) req.subcommand = "test-nonsd1";
    if (t_sc->parsed()) req.subcommand = "test-sc";
    if (bayes->parsed()) req.subcommand = "bayes";
    if (sim->parsed()) req.subcommand = "simulate";

    try {
        const ordq::RunResult rr = ordq::run(req);
        std::cout << rr.human;
        if (req.subcommand == "simulate" && !tsv_path.empty())
            ordq::detail::write_text_file(tsv_path, ordq::study_tsv(rr.doc["result"]));
        return static_cast<int>(ordq::ExitCode::Ok);
    } catch (const ordq::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(ordq::ExitCode::InputError);
    } catch (const std::exception& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return static_cast<int>(ordq::ExitCode::NumericalError);
    }
}
