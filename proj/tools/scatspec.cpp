#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scatspec/config.hpp"
#include "scatspec/errors.hpp"
#include "scatspec/report.hpp"
#include "scatspec/suites.hpp"

int main(int argc, char** argv) {
    CLI::App app{"scatspec: numerical checks of low-energy estimates on asymptotically conic manifolds"};
    std::string suite;
    std::string config;
    std::string out;
    std::vector<std::string> overrides;
    std::string suites_help = "suite to run: all";
    for (const auto& s : scatspec::known_suites()) suites_help += " | " + s;
    app.add_option("suite", suite, suites_help)->required();
    app.add_option("--config", config, "key = value configuration file")->required();
    app.add_option("--out", out, "output directory (overrides output.dir)");
    app.add_option("--override", overrides, "key=value, applied after the file")->take_all();
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        const std::vector<std::string> names = scatspec::expand_suites(suite);
        scatspec::ExperimentConfig cfg = scatspec::load_config(config, overrides);
        if (!out.empty()) cfg.output_dir = out;
        const scatspec::VerificationReport report = scatspec::run_suites(cfg, names);
        scatspec::emit_report(report, cfg.output_dir);
        for (const auto& b : report.blocks) {
            std::cout << b.name << ": " << scatspec::to_string(b.status());
            if (!b.error.empty()) std::cout << " (" << b.error << ")";
            std::cout << "\n";
        }
        std::cout << "overall: " << scatspec::to_string(report.status()) << "  [" << cfg.output_dir << "]\n";
        return scatspec::exit_code(report);
    } catch (const scatspec::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const scatspec::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const scatspec::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
