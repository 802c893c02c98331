#include <cstdio>
#include <exception>
#include <string>

#include <CLI11.hpp>

#include "arcsim/errors.hpp"
#include "arcsim/manifest.hpp"

namespace {

// exit codes: 0 success, 2 configuration/parse, 3 simulation, 4 decomposition
int dispatch(arcsim::RunManifest manifest) {
    try {
        arcsim::run_manifest(manifest);
        return 0;
    } catch (const arcsim::config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const arcsim::decomposition_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 4;
    } catch (const arcsim::simulation_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arc-fault waveform simulation and delay-embedding detection"};
    app.require_subcommand(1);

    std::string manifest_path;
    std::string out_dir;
    std::string thresholds;
    int reps = 0;
    int q = 0;
    long long seed = 0;

    CLI::App* run = app.add_subcommand("run", "run the scenarios listed in a manifest file");
    run->add_option("manifest", manifest_path, "key=value manifest file")->required();
    run->add_option("--out", out_dir, "output directory (overrides the manifest)");
    run->add_option("--reps", reps, "repetitions per scenario")->check(CLI::PositiveNumber);
    run->add_option("--q", q, "delay-embedding depth")->check(CLI::Range(2, 1000000));
    run->add_option("--seed", seed, "base random seed")->check(CLI::NonNegativeNumber);

    CLI::App* bench = app.add_subcommand("benchmark", "run the built-in nine-scenario benchmark");
    bench->add_option("--out", out_dir, "output directory");
    bench->add_option("--reps", reps, "repetitions per scenario")->check(CLI::PositiveNumber);
    bench->add_option("--q", q, "delay-embedding depth")->check(CLI::Range(2, 1000000));
    bench->add_option("--seed", seed, "base random seed")->check(CLI::NonNegativeNumber);

    app.add_option("--thresholds", thresholds,
                   "classification band edges a,b,c,d (ascending magnitudes)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        arcsim::RunManifest manifest;
        if (run->parsed()) {
            manifest = arcsim::parse_manifest_file(manifest_path);
        } else {
            manifest = arcsim::benchmark_manifest();
        }
        if (!out_dir.empty()) manifest.out_dir = out_dir;
        if (reps > 0) manifest.reps = reps;
        if (q > 0) manifest.q = q;
        if (run->count("--seed") > 0 || bench->count("--seed") > 0) {
            manifest.seed = static_cast<unsigned long long>(seed);
        }
        if (!thresholds.empty()) {
            manifest.thresholds = arcsim::parse_thresholds(thresholds, manifest.thresholds);
        }
        return dispatch(std::move(manifest));
    } catch (const arcsim::config_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
