// Command-line front end: parses flags, delegates to run_command, prints the
// deterministic report on stdout and timing on stderr only.

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tdm/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"pullback-certified tangent category toolkit"};
    app.require_subcommand(1);

    std::string file;
    std::string mor, base, system;
    tdm::Flags flags;

    const std::vector<std::string> names = {
        "validate", "tangent-check", "classify",  "maximal-system", "split",
        "slice",    "par",           "open",      "ring-demo"};
    std::vector<CLI::App*> subs;
    for (const auto& n : names) {
        CLI::App* s = app.add_subcommand(n);
        s->add_option("file", file, "presentation file")->required();
        if (n == "classify")
            s->add_option("--mor", mor, "restrict to one morphism");
        if (n == "slice")
            s->add_option("--base", base, "base object")->required();
        if (n == "par")
            s->add_option("--system", system, "system block name")->required();
        if (n == "ring-demo")
            s->add_option("--depth", flags.depth, "preservation depth");
        if (n == "maximal-system")
            s->add_option("--budget", flags.budget,
                          "enumeration cap for the fully-displayed check");
        subs.push_back(s);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    if (!mor.empty()) flags.mor = mor;
    if (!base.empty()) flags.base = base;
    if (!system.empty()) flags.system = system;

    const std::string command = app.get_subcommands().front()->get_name();
    auto t0 = std::chrono::steady_clock::now();
    tdm::RunResult rr = tdm::run_command(command, file, flags);
    auto t1 = std::chrono::steady_clock::now();
    std::cout << rr.report;
    std::cerr << "elapsed_ms: "
              << std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0)
                     .count()
              << "\n";
    return rr.exit_code;
}
