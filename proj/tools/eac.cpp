#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "eac/eac.hpp"

namespace
{

struct Common {
    std::string file;
    std::optional<std::uint64_t> seed;
    std::optional<double> budget;
    std::optional<int> grid;
    std::optional<int> target;
    std::string out;
    std::string csv;
};

void add_common(CLI::App *cmd, Common &c, bool needs_file)
{
    auto *f = cmd->add_option("file", c.file, "instance file (JSON)");
    if (needs_file) f->required();
    cmd->add_option("--seed", c.seed, "randomness seed");
    cmd->add_option("--budget", c.budget, "wall-clock budget in seconds");
    cmd->add_option("--grid", c.grid, "scan grid points per cell side")->check(CLI::PositiveNumber);
    cmd->add_option("--target", c.target, "number of distinct solutions to harvest")->check(CLI::PositiveNumber);
    cmd->add_option("--out", c.out, "write the JSON report to this path");
    cmd->add_option("--csv", c.csv, "write solutions as CSV to this path");
}

eac::Instance load(const Common &c)
{
    auto inst = eac::load_instance(c.file);
    if (c.seed) inst.solver.seed = *c.seed;
    if (c.budget) inst.solver.budget_seconds = *c.budget;
    if (c.grid) inst.solver.grid = *c.grid;
    if (c.target) {
        inst.solver.target_count = *c.target;
        inst.target_given = true;
    }
    return inst;
}

int emit(const eac::Outcome &o, const Common &c)
{
    const std::string text = o.report.dump(2) + "\n";
    std::cout << text;
    if (!c.out.empty()) {
        std::ofstream f(c.out);
        if (!f) {
            std::cerr << "eac: cannot write " << c.out << "\n";
            return eac::exit_code::usage;
        }
        f << text;
    }
    return o.code;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Exact certificates and numerical witnesses for exp(L) meeting a subvariety W of a product of elliptic curves"};
    app.require_subcommand(1);
    Common c;
    double fault_bias = 0;
    auto *check = app.add_subcommand("check", "decide whether L x W is free and rotund (exit 0 yes, 2 no, 3 indeterminate)");
    auto *hull = app.add_subcommand("hull", "rational hull T of L and the hull chain");
    auto *certify = app.add_subcommand("certify", "exact homological certificate");
    auto *solve = app.add_subcommand("solve", "find points of exp(L) on W (exit 4 if uncertified)");
    auto *density = app.add_subcommand("density", "harvest many distinct solutions (default target 25)");
    auto *selftest = app.add_subcommand("selftest", "run the built-in property suite");
    for (auto *cmd : {check, hull, certify, solve, density}) add_common(cmd, c, true);
    add_common(selftest, c, false);
    selftest->add_option("--fault-bias", fault_bias, "corrupt p by this additive bias (the suite must then fail)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return eac::exit_code::usage;
    }

    try {
        if (selftest->parsed()) {
            eac::SelftestOptions so;
            so.fault_bias = fault_bias;
            if (c.seed) so.seed = *c.seed;
            const auto rows = eac::run_selftest(so);
            bool all = true;
            for (const auto &r : rows) {
                std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << "  " << r.detail << "\n";
                all &= r.pass;
            }
            std::cout << (all ? "selftest: all passed\n" : "selftest: FAILURES\n");
            return all ? 0 : 2;
        }
        auto inst = load(c);
        if (check->parsed()) return emit(eac::run_check(inst), c);
        if (hull->parsed()) return emit(eac::run_hull(inst), c);
        if (certify->parsed()) return emit(eac::run_certify(inst), c);
        if (density->parsed() && !inst.target_given) inst.solver.target_count = 25;
        auto run = eac::run_solve(inst, solve->parsed() ? "solve" : "density");
        if (!c.csv.empty() && run.harvest) eac::write_csv(*run.harvest, c.csv);
        return emit(run.outcome, c);
    } catch (const eac::InstanceError &e) {
        std::cerr << "eac: " << e.what() << "\n";
        return eac::exit_code::usage;
    } catch (const std::exception &e) {
        std::cerr << "eac: error: " << e.what() << "\n";
        return eac::exit_code::usage;
    }
}
