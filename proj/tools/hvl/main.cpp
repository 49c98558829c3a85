#include "hvl/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"hvl: radial bound states, hypervirial identities and Feynman-Hellmann checks"};
    app.require_subcommand(1);

    hvl::CommandOptions options;
    std::string format;
    double tolerance = 0.0;

    for (const char* name : {"solve", "check", "scan", "fh", "oracle"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", options.config_path, "config file (key-tree text or JSON)")->required();
        sub->add_option("--out", options.out, "output path (default: output.path, then stdout)");
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--tolerance", tolerance, "override every check tolerance")->check(CLI::PositiveNumber);
        sub->add_flag("--disable-extra-term", options.disable_extra_term, "drop the origin term from the virial check");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return hvl::kExitConfig;
    }

    options.command = app.get_subcommands().front()->get_name();
    const CLI::App* sub = app.get_subcommands().front();
    if (sub->count("--format") > 0) {
        options.format = format;
    }
    if (sub->count("--tolerance") > 0) {
        options.tolerance = tolerance;
    }
    return hvl::run_command(options, std::cout, std::cerr);
}
