// Command line driver: staged pipeline subcommands plus the verification
// suite. Exit codes: 0 success, 2 config error, 3 numerical failure,
// 4 verification failure.
#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "multibump/pipeline.hpp"

namespace {

int dispatch(const std::string& cmd, const multibump::RunConfig& cfg,
             const multibump::PipelineOptions& opt) {
    multibump::Pipeline pipe(cfg, opt);
    if (cmd == "limit-solve") {
        pipe.limit_solve();
    } else if (cmd == "project") {
        pipe.project();
    } else if (cmd == "assemble") {
        pipe.assemble();
    } else if (cmd == "reduce") {
        pipe.reduce();
    } else if (cmd == "minimize") {
        pipe.minimize();
    } else if (cmd == "sweep") {
        pipe.sweep();
    } else {
        const multibump::VerificationReport rep = pipe.verify();
        std::fputs(multibump::report_summary(rep).c_str(), stdout);
        return rep.all_pass() ? 0 : 4;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Alternating-sign multibump chains on expanding tubular domains"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int threads = 1;
    app.add_option("--config", config_path, "Run configuration file")->required();
    app.add_option("--out", out_dir, "Output directory (default: out)");
    app.add_option("--seed", seed, "Seed for randomized checks");
    app.add_option("--threads", threads, "Worker threads for the radius sweep")
        ->check(CLI::Range(1, 256));

    app.add_subcommand("limit-solve", "Solve the strip profile and write the cache");
    app.add_subcommand("project", "Project one bump onto the first-radius tube");
    app.add_subcommand("assemble", "Superpose the configured chain and report its energy");
    app.add_subcommand("reduce", "Refine the assembled chain to a reduced solution");
    app.add_subcommand("minimize", "Minimize the chain energy, then refine the minimizer");
    app.add_subcommand("sweep", "Run the radius sweep and write trend rows");
    app.add_subcommand("verify", "Run the property suite and write the report");
    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        const multibump::RunConfig cfg = multibump::RunConfig::from_file(config_path);
        return dispatch(cmd, cfg, {out_dir, seed, threads});
    } catch (const multibump::ConfigError& e) {
        std::fprintf(stderr, "multibump: %s\n", e.what());
        return 2;
    } catch (const multibump::VerificationFailure& e) {
        std::fprintf(stderr, "multibump: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "multibump: %s\n", e.what());
        return 3;
    }
}
