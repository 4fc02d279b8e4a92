// Experiment runner: one subcommand per module pipeline, JSON config in,
// JSON report + CSV data out.

#include <chrono>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lambdasurf/common.hpp"
#include "lambdasurf/io.hpp"
#include "lambdasurf/kernels/kernels.hpp"
#include "lambdasurf/runners.hpp"

namespace {

std::string default_out_dir(const std::string& command) {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y%m%d-%H%M%S", &tm);
    return command + "-" + buf;
}

}  // namespace

int main(int argc, char** argv) {
    using lambdasurf::kExitInvariant;
    using lambdasurf::kExitValidation;

    CLI::App app{"lambdasurf: numerical experiments on lambda-hypersurfaces"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 12345;
    bool quiet = false;

    for (const std::string& name : lambdasurf::command_names()) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "JSON config file")->required();
        sub->add_option("--out", out_dir, "output directory (default: <command>-<timestamp>)");
        sub->add_option("--seed", seed, "sampling seed");
        sub->add_flag("--quiet", quiet, "suppress the resolved-config echo");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitValidation;
    }

    const std::string command = app.get_subcommands().front()->get_name();

    nlohmann::json raw;
    try {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot read config " << config_path << "\n";
            return kExitValidation;
        }
        in >> raw;
    } catch (const std::exception& e) {
        std::cerr << "error: config parse failed: " << e.what() << "\n";
        return kExitValidation;
    }

    try {
        const nlohmann::json config = lambdasurf::resolve_config(command, raw);
        lambdasurf::RunContext ctx;
        ctx.out_dir = out_dir.empty() ? default_out_dir(command) : out_dir;
        ctx.seed = seed;
        ctx.quiet = quiet;
        if (!quiet) {
            std::cout << "command: " << command << "\n"
                      << "kernels: "
                      << lambdasurf::kernels::backend_name(lambdasurf::kernels::active_backend())
                      << "\n"
                      << "resolved config: " << config.dump(2) << "\n";
        }
        return lambdasurf::run_command(command, config, ctx);
    } catch (const lambdasurf::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const lambdasurf::PreconditionError& e) {
        std::cerr << "precondition violated, check refused: " << e.what() << "\n";
        return kExitValidation;
    } catch (const std::exception& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return kExitInvariant;
    }
}
