#include "hcm/errors.hpp"
#include "hcm/report.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitUnstable = 3;
constexpr int kExitSelftestFailed = 1;

// Option name -> config key.
const std::map<std::string, std::string> kOptionKeys{
    {"d", "d"},         {"g", "g"},           {"maxdeg", "maxdeg"}, {"maxlen", "maxlen"}, {"jobs", "jobs"},
    {"format", "format"}, {"seed", "seed"},   {"i", "i"},           {"table", "table"},
};

struct Invocation {
    std::string command;
    std::string config_file;
    std::string output_file;
    std::map<std::string, std::string> flags;  // config key -> value given on the command line
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw hcm::ValidationError("cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact computations for omega-derivation Lie algebras, their invariant CE complexes "
                 "and stable characteristic classes."};
    app.require_subcommand(1);
    Invocation inv;

    const std::string footer =
        "Tables start with '# key: value' metadata lines, then the columns listed above.\n"
        "Config file: 'key = value' lines with keys d, g, maxdeg, maxlen, jobs, format, seed, i, table; "
        "command-line flags win.\nExit codes: 0 success, 1 selftest failure, 2 invalid input, "
        "3 outside the stable range or divergence.";
    app.footer(footer);

    for (const auto& name : hcm::command_names()) {
        auto* sub = app.add_subcommand(name, hcm::command_help(name));
        sub->add_option("--config", inv.config_file, "config file of 'key = value' lines");
        sub->add_option("-o,--output", inv.output_file, "write the table to a file instead of stdout");
        const std::map<std::string, std::string> help{
            {"d", "degree parameter d >= 3"},
            {"g", "genus or range a..b"},
            {"maxdeg", "maximal total degree"},
            {"maxlen", "maximal word length"},
            {"jobs", "worker threads"},
            {"format", "csv or json"},
            {"seed", "seed for randomized checks"},
            {"i", "index of the characteristic-class relation"},
            {"table", "JSON file of Out(F_n) homology dims"},
        };
        for (const auto& [option, key] : kOptionKeys) {
            sub->add_option_function<std::string>(
                "--" + option, [&inv, key = key](const std::string& v) { inv.flags[key] = v; }, help.at(option));
        }
        sub->callback([&inv, name] { inv.command = name; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        hcm::RunConfig config;
        if (!inv.config_file.empty()) config = hcm::parse_config(read_file(inv.config_file));
        for (const auto& [key, value] : inv.flags) config.set(key, value);
        const hcm::ResultTable table = hcm::run(inv.command, config);
        const std::string text = table.render(config.format);
        if (inv.output_file.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(inv.output_file);
            if (!out) throw hcm::ValidationError("cannot write " + inv.output_file);
            out << text;
        }
        if (inv.command == "selftest" && !hcm::selftest_passed(table)) return kExitSelftestFailed;
        return 0;
    } catch (const hcm::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const hcm::UnstableRangeError& e) {
        std::cerr << e.what() << '\n';
        return kExitUnstable;
    } catch (const hcm::DivergenceError& e) {
        std::cerr << e.what() << '\n';
        return kExitUnstable;
    }
}
