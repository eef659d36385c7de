#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plapmem/plapmem.h"

namespace {

// The C API has a few finer-grained codes than the documented exit codes.
int exit_code(plm_status status) {
    switch (status) {
        case PLM_OK: return 0;
        case PLM_ERR_CONFIG:
        case PLM_ERR_NUMERIC_INPUT:
        case PLM_ERR_OUT_OF_RANGE:
        case PLM_ERR_INVALID_ARGUMENT: return 2;
        case PLM_ERR_DIVERGENCE: return 3;
        case PLM_ERR_LINEAR_SOLVE:
        case PLM_ERR_ILL_POSED_STEP: return 4;
        case PLM_ERR_IO: return 5;
        case PLM_ERR_INTERNAL: return 1;
    }
    return 1;
}

int report(plm_status status) {
    if (status != PLM_OK) {
        std::fprintf(stderr, "error (%s): %s\n", plm_status_name(status), plm_last_error());
    }
    return exit_code(status);
}

int run_solve(const std::string& config_path, const std::optional<std::string>& out) {
    plm_config* config = nullptr;
    plm_status st = plm_config_from_file(config_path.c_str(), &config);
    if (st != PLM_OK) {
        return report(st);
    }
    if (out) {
        st = plm_config_set_output_dir(config, out->c_str());
    }
    plm_run* run = nullptr;
    if (st == PLM_OK) {
        st = plm_solve(config, &run);
    }
    if (st == PLM_OK) {
        st = plm_run_write(run, nullptr);
    }
    if (st == PLM_OK) {
        size_t levels = 0;
        plm_run_num_levels(run, &levels);
        std::vector<double> energy(levels);
        plm_run_energy(run, energy.data(), energy.size());
        size_t needed = 0;
        plm_config_output_dir(config, nullptr, 0, &needed);
        std::string dir(needed, '\0');
        plm_config_output_dir(config, dir.data(), dir.size(), &needed);
        dir.resize(needed - 1);
        std::printf("levels: %zu\n", levels);
        std::printf("energy: b(0) = %.6e, b(T) = %.6e\n", energy.front(), energy.back());
        double eu = 0.0, ey = 0.0;
        if (plm_run_errors(run, &eu, &ey) == PLM_OK) {
            std::printf("L2 error at T: u %.6e, y %.6e\n", eu, ey);
        }
        std::printf("outputs: %s\n", dir.c_str());
    }
    plm_run_free(run);
    plm_config_free(config);
    return report(st);
}

int run_example(int id, const std::optional<double>& p, const std::optional<double>& lambda,
                const std::string& out, bool parallel, unsigned threads) {
    plm_example_options options{};
    options.has_p = p.has_value();
    options.p = p.value_or(0.0);
    options.has_lambda = lambda.has_value();
    options.lambda = lambda.value_or(0.0);
    options.parallel = parallel ? 1 : 0;
    options.threads = threads;
    const plm_status st = plm_run_example(id, &options, out.c_str());
    if (st == PLM_OK || st == PLM_ERR_DIVERGENCE || st == PLM_ERR_LINEAR_SOLVE) {
        std::printf("outputs: %s\n", out.c_str());
    }
    return report(st);
}

void print_check(const char* name, int passed, const char* detail, void*) {
    std::printf("%s  %s (%s)\n", passed ? "PASS" : "FAIL", name, detail);
}

int run_verify() {
    int failures = 0;
    const plm_status st = plm_verify(print_check, nullptr, &failures);
    if (st != PLM_OK) {
        return report(st);
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"p-Laplacian evolution with memory: finite elements in space, Crank-Nicolson in time"};
    app.require_subcommand(1);
    app.set_version_flag("--version", plm_version());

    std::string config_path;
    std::optional<std::string> solve_out;
    auto* solve = app.add_subcommand("solve", "Run one configuration file");
    solve->add_option("--config", config_path, "JSON run configuration")->required();
    solve->add_option("--out", solve_out, "Output directory (overrides output_dir)");

    int example_id = 0;
    std::optional<double> p;
    std::optional<double> lambda;
    std::string example_out = "out";
    bool parallel = false;
    unsigned threads = 0;
    auto* example = app.add_subcommand("example", "Run one of the four experiment families");
    example->add_option("id", example_id, "Experiment family")
        ->required()
        ->check(CLI::Range(1, 4));
    example->add_option("--p", p, "Restrict to this exponent");
    example->add_option("--lambda", lambda, "Restrict to this memory amplitude");
    example->add_option("--out", example_out, "Output directory")->capture_default_str();
    example->add_flag("--parallel", parallel, "Run sweep points concurrently");
    example->add_option("--threads", threads,
                        "Worker count for --parallel (default: PLAPMEM_THREADS or all cores)");

    auto* verify = app.add_subcommand("verify", "Run the built-in oracle checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (solve->parsed()) {
        return run_solve(config_path, solve_out);
    }
    if (example->parsed()) {
        return run_example(example_id, p, lambda, example_out, parallel, threads);
    }
    if (verify->parsed()) {
        return run_verify();
    }
    return 2;
}
