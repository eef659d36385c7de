#include "plapmem/plapmem.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <optional>
#include <string>

#include "plapmem/config.hpp"
#include "plapmem/errors.hpp"
#include "plapmem/experiments.hpp"
#include "plapmem/output.hpp"
#include "plapmem/verify.hpp"

struct plm_config {
    plapmem::RunConfig config;
};

struct plm_run {
    plapmem::SolveResult result;
};

namespace {

thread_local std::string last_error;

plm_status fail(plm_status status, const std::string& message) {
    last_error = message;
    return status;
}

template <class F>
plm_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const plapmem::Error& e) {
        return fail(static_cast<plm_status>(static_cast<int>(e.code())), e.what());
    } catch (const std::bad_alloc&) {
        return fail(PLM_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PLM_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PLM_ERR_INTERNAL, "unknown error");
    }
}

plm_status copy_string(const std::string& s, char* buffer, size_t capacity, size_t* needed) {
    if (needed) {
        *needed = s.size() + 1;
    }
    if (buffer && capacity > 0) {
        const size_t n = std::min(capacity - 1, s.size());
        std::memcpy(buffer, s.data(), n);
        buffer[n] = '\0';
    }
    if (buffer && capacity < s.size() + 1) {
        return fail(PLM_ERR_OUT_OF_RANGE, "buffer too small");
    }
    return PLM_OK;
}

plm_status copy_vector(std::span<const double> v, double* values, size_t capacity) {
    if (!values || capacity < v.size()) {
        return fail(PLM_ERR_OUT_OF_RANGE, "output buffer holds " + std::to_string(capacity) +
                                              " values, " + std::to_string(v.size()) +
                                              " required");
    }
    std::copy(v.begin(), v.end(), values);
    return PLM_OK;
}

plm_status null_argument(const char* name) {
    return fail(PLM_ERR_INVALID_ARGUMENT, std::string("argument '") + name + "' is null");
}

}  // namespace

extern "C" {

const char* plm_version(void) { return "0.1.0"; }

const char* plm_last_error(void) { return last_error.c_str(); }

const char* plm_status_name(plm_status status) {
    switch (status) {
        case PLM_OK: return "ok";
        case PLM_ERR_CONFIG: return "configuration error";
        case PLM_ERR_DIVERGENCE: return "fixed-point divergence";
        case PLM_ERR_LINEAR_SOLVE: return "linear solve failure";
        case PLM_ERR_IO: return "I/O failure";
        case PLM_ERR_NUMERIC_INPUT: return "non-finite input data";
        case PLM_ERR_ILL_POSED_STEP: return "ill-posed step";
        case PLM_ERR_OUT_OF_RANGE: return "out of range";
        case PLM_ERR_INVALID_ARGUMENT: return "invalid argument";
        case PLM_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

plm_status plm_config_from_file(const char* path, plm_config** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = new plm_config{plapmem::parse_config(path)};
        return PLM_OK;
    });
}

plm_status plm_config_from_json(const char* json, plm_config** out) {
    if (!json) return null_argument("json");
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = new plm_config{plapmem::parse_config_text(json)};
        return PLM_OK;
    });
}

void plm_config_free(plm_config* config) { delete config; }

plm_status plm_config_to_json(const plm_config* config, char* buffer, size_t capacity,
                              size_t* needed) {
    if (!config) return null_argument("config");
    return guarded([&] {
        return copy_string(plapmem::config_to_json(config->config), buffer, capacity, needed);
    });
}

plm_status plm_config_set_output_dir(plm_config* config, const char* dir) {
    if (!config) return null_argument("config");
    if (!dir) return null_argument("dir");
    if (*dir == '\0') return fail(PLM_ERR_CONFIG, "output_dir must not be empty");
    config->config.output_dir = dir;
    return PLM_OK;
}

plm_status plm_config_output_dir(const plm_config* config, char* buffer, size_t capacity,
                                 size_t* needed) {
    if (!config) return null_argument("config");
    return copy_string(config->config.output_dir, buffer, capacity, needed);
}

plm_status plm_solve(const plm_config* config, plm_run** out) {
    if (!config) return null_argument("config");
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = new plm_run{plapmem::solve(config->config)};
        return PLM_OK;
    });
}

void plm_run_free(plm_run* run) { delete run; }

plm_status plm_run_num_levels(const plm_run* run, size_t* levels) {
    if (!run) return null_argument("run");
    if (!levels) return null_argument("levels");
    *levels = run->result.run.num_levels();
    return PLM_OK;
}

plm_status plm_run_num_dofs(const plm_run* run, size_t* dofs) {
    if (!run) return null_argument("run");
    if (!dofs) return null_argument("dofs");
    *dofs = run->result.run.mesh.num_interior();
    return PLM_OK;
}

plm_status plm_run_time(const plm_run* run, size_t level, double* t) {
    if (!run) return null_argument("run");
    if (!t) return null_argument("t");
    if (level >= run->result.run.num_levels()) {
        return fail(PLM_ERR_OUT_OF_RANGE, "level " + std::to_string(level) + " out of range");
    }
    *t = run->result.run.times[level];
    return PLM_OK;
}

plm_status plm_run_u(const plm_run* run, size_t level, double* values, size_t capacity) {
    if (!run) return null_argument("run");
    if (level >= run->result.run.num_levels()) {
        return fail(PLM_ERR_OUT_OF_RANGE, "level " + std::to_string(level) + " out of range");
    }
    return copy_vector(run->result.run.u[level], values, capacity);
}

plm_status plm_run_y(const plm_run* run, size_t level, double* values, size_t capacity) {
    if (!run) return null_argument("run");
    if (level >= run->result.run.num_levels()) {
        return fail(PLM_ERR_OUT_OF_RANGE, "level " + std::to_string(level) + " out of range");
    }
    return copy_vector(run->result.run.y[level], values, capacity);
}

plm_status plm_run_energy(const plm_run* run, double* values, size_t capacity) {
    if (!run) return null_argument("run");
    return copy_vector(run->result.run.energy, values, capacity);
}

plm_status plm_run_iterations(const plm_run* run, size_t step, int* iterations) {
    if (!run) return null_argument("run");
    if (!iterations) return null_argument("iterations");
    if (step >= run->result.run.diagnostics.size()) {
        return fail(PLM_ERR_OUT_OF_RANGE, "step " + std::to_string(step) + " out of range");
    }
    *iterations = run->result.run.diagnostics[step].iterations;
    return PLM_OK;
}

plm_status plm_run_errors(const plm_run* run, double* l2_u, double* l2_y) {
    if (!run) return null_argument("run");
    const auto& errors = run->result.run.errors;
    if (!errors) {
        return fail(PLM_ERR_INVALID_ARGUMENT, "problem has no exact solution");
    }
    if (l2_u) *l2_u = errors->l2_u;
    if (l2_y) *l2_y = errors->l2_y;
    return PLM_OK;
}

plm_status plm_run_write(const plm_run* run, const char* dir) {
    if (!run) return null_argument("run");
    return guarded([&] {
        const std::string target = dir ? dir : run->result.config.output_dir;
        plapmem::write_outputs(run->result.run, run->result.config, target);
        return PLM_OK;
    });
}

plm_status plm_run_example(int id, const plm_example_options* options, const char* out_dir) {
    if (!out_dir) return null_argument("out_dir");
    return guarded([&] {
        plapmem::ExampleOptions opts;
        if (options) {
            if (options->has_p) opts.p = options->p;
            if (options->has_lambda) opts.lambda = options->lambda;
            opts.parallel = options->parallel != 0;
            opts.threads = options->threads;
        }
        const plapmem::ExampleReport report = plapmem::run_example(id, opts, out_dir);
        if (report.failures.empty()) {
            return PLM_OK;
        }
        const auto& first = report.failures.front();
        return fail(static_cast<plm_status>(static_cast<int>(first.code)),
                    std::to_string(report.failures.size()) + " run(s) failed; first: " +
                        first.label + ": " + first.message);
    });
}

plm_status plm_verify(plm_check_callback callback, void* user, int* failures) {
    return guarded([&] {
        int failed = 0;
        for (const auto& check : plapmem::run_verification()) {
            if (!check.passed) {
                ++failed;
            }
            if (callback) {
                callback(check.name.c_str(), check.passed ? 1 : 0, check.detail.c_str(), user);
            }
        }
        if (failures) {
            *failures = failed;
        }
        return PLM_OK;
    });
}

}  // extern "C"
