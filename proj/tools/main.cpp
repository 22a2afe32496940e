// Command-line front end: check compatibility of two conditional probability
// matrices, dump the D/C system matrices, or run the underlying LPs.

#include "condcompat/io.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Exact compatibility analysis of two discrete conditional distributions"};
    app.require_subcommand(1);

    std::string path_a, path_b;
    bool csv = false, renormalize = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("A", path_a, "matrix file for A = P(X|Y), column-stochastic")->required();
        cmd->add_option("B", path_b, "matrix file for B = P(Y|X), row-stochastic")->required();
        cmd->add_flag("--csv", csv, "inputs are CSV instead of JSON");
        cmd->add_flag("--renormalize", renormalize,
                      "rescale near-stochastic columns of A / rows of B exactly to sum 1");
    };

    auto* check = app.add_subcommand("check", "decide compatibility and report the joint");
    std::string format = "text";
    add_common(check);
    check->add_option("--format", format, "report format")
        ->check(CLI::IsMember({"text", "json"}));

    auto* dmatrix = app.add_subcommand("dmatrix", "print the D matrix of the pair");
    bool cmatrix = false;
    add_common(dmatrix);
    dmatrix->add_flag("--cmatrix", cmatrix, "also print the C matrix");

    auto* lp = app.add_subcommand("lp", "solve the compatibility linear program");
    std::string space = "joint";
    add_common(lp);
    lp->add_option("--space", space, "LP space")->check(CLI::IsMember({"joint", "eta"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (check->parsed()) {
        condcompat::CheckOptions opts{format == "json", csv, renormalize};
        return condcompat::cmd_check(path_a, path_b, opts, std::cout, std::cerr);
    }
    if (dmatrix->parsed()) {
        condcompat::DmatrixOptions opts{cmatrix, csv, renormalize};
        return condcompat::cmd_dmatrix(path_a, path_b, opts, std::cout, std::cerr);
    }
    condcompat::LpOptions opts;
    opts.space = space == "eta" ? condcompat::LpOptions::Space::Eta
                                : condcompat::LpOptions::Space::Joint;
    opts.csv = csv;
    opts.renormalize = renormalize;
    return condcompat::cmd_lp(path_a, path_b, opts, std::cout, std::cerr);
}
