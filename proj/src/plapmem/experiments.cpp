#include "plapmem/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "plapmem/analysis.hpp"
#include "plapmem/output.hpp"

namespace plapmem {

namespace fs = std::filesystem;

double quartic_datum(double x) {
    const double x2 = x * x;
    return 1.0 - x2 * x2;
}

double gap_cubic_datum(double x) {
    if (x < -0.5) {
        return 10.0 * (x + 1.0) * (x + 0.5) * (x + 0.5);
    }
    if (x > 0.5) {
        return 10.0 * (1.0 - x) * (x - 0.5) * (x - 0.5);
    }
    return 0.0;
}

double gap_septic_datum(double x) {
    if (x < -0.5) {
        return 100.0 * (x + 1.0) * std::pow(x + 0.5, 7);
    }
    if (x > 0.5) {
        return 100.0 * (1.0 - x) * std::pow(x - 0.5, 7);
    }
    return 0.0;
}

SolveResult solve(const RunConfig& config) {
    config.validate();
    const ProblemSpec problem = make_problem(config);
    RunOutput run = march(problem, make_mesh(config), make_solver_config(config));
    const double eta = default_gap_threshold(run.u.front());
    track_support(run, eta, 0.5 * (config.a + config.b));
    return SolveResult{config, std::move(run), eta};
}

void fill_orders(std::vector<ConvergenceRow>& rows, bool in_delta) {
    for (std::size_t i = 1; i < rows.size(); ++i) {
        ConvergenceRow& cur = rows[i];
        const ConvergenceRow& prev = rows[i - 1];
        cur.order_u.reset();
        cur.order_y.reset();
        if (cur.p != prev.p || cur.r != prev.r || cur.failure || prev.failure) {
            continue;
        }
        const double s0 = in_delta ? prev.delta : prev.h;
        const double s1 = in_delta ? cur.delta : cur.h;
        const double steps[] = {s0, s1};
        if (prev.err_u > 0.0 && cur.err_u > 0.0) {
            const double e[] = {prev.err_u, cur.err_u};
            cur.order_u = convergence_orders(e, steps)[0];
        }
        if (prev.err_y > 0.0 && cur.err_y > 0.0) {
            const double e[] = {prev.err_y, cur.err_y};
            cur.order_y = convergence_orders(e, steps)[0];
        }
    }
}

RunConfig example1_config(double p, double lambda, int r, int m, int N) {
    RunConfig c;
    c.a = 0.0;
    c.b = 1.0;
    c.T = 0.1;
    c.p = p;
    c.lambda = lambda;
    c.r = r;
    c.m = m;
    c.N = N;
    c.tol = kSweepTol;
    c.problem = ProblemKind::Manufactured;
    c.snapshot_times = {c.T};
    return resolve(c);
}

RunConfig example2_config(double p, double lambda) {
    RunConfig c;
    c.a = -1.0;
    c.b = 1.0;
    c.T = 3.0;
    c.p = p;
    c.lambda = lambda;
    c.r = 1;
    c.m = 10;
    c.N = 3000;
    c.problem = ProblemKind::Quartic;
    if (p < 2.0) {
        c.scheme = Scheme::A;
    }
    for (int i = 0; i <= 30; ++i) {
        c.snapshot_times.push_back(0.1 * i);
    }
    return resolve(c);
}

RunConfig example34_config(int id, double p, double lambda, int N) {
    RunConfig c;
    c.a = -1.0;
    c.b = 1.0;
    c.p = p;
    c.lambda = lambda;
    c.r = 1;
    c.m = 100;
    c.N = N;
    c.T = 1e-3 * N;
    c.problem = id == 3 ? ProblemKind::GapCubic : ProblemKind::GapSeptic;
    for (int k = 0; k <= N; k += 50) {
        c.snapshot_times.push_back(1e-3 * k);
    }
    return resolve(c);
}

unsigned sweep_threads() {
    if (const char* env = std::getenv("PLAPMEM_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return static_cast<unsigned>(v);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void for_each_index(std::size_t n, bool parallel, unsigned threads,
                    const std::function<void(std::size_t)>& task) {
    std::exception_ptr first_error;
    if (!parallel || threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) {
            try {
                task(i);
            } catch (...) {
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        }
        if (first_error) {
            std::rethrow_exception(first_error);
        }
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
            }
        }
    };
    std::vector<std::thread> pool;
    const std::size_t count = std::min<std::size_t>(threads, n);
    pool.reserve(count);
    for (std::size_t t = 0; t < count; ++t) {
        pool.emplace_back(worker);
    }
    for (auto& t : pool) {
        t.join();
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }
}

namespace {

struct Job {
    std::string label;
    RunConfig config;
};

/// Outcome of one job; `result` is empty when the solver failed.
struct JobOutcome {
    std::optional<SolveResult> result;
    std::optional<SweepFailure> failure;
};

std::vector<JobOutcome> run_jobs(const std::vector<Job>& jobs, const ExampleOptions& options,
                                 const fs::path& out) {
    std::vector<JobOutcome> outcomes(jobs.size());
    const unsigned threads = options.threads > 0 ? options.threads : sweep_threads();
    for_each_index(jobs.size(), options.parallel, threads, [&](std::size_t i) {
        const Job& job = jobs[i];
        try {
            SolveResult res = solve(job.config);
            write_outputs(res.run, job.config, out / job.label);
            outcomes[i].result.emplace(std::move(res));
        } catch (const IoError&) {
            throw;
        } catch (const Error& e) {
            outcomes[i].failure = SweepFailure{job.label, e.code(), e.what()};
        }
    });
    return outcomes;
}

std::string label_number(double v) { return format_double(v); }

void collect_failures(const std::vector<JobOutcome>& outcomes, ExampleReport& report) {
    for (const auto& o : outcomes) {
        if (o.failure) {
            report.failures.push_back(*o.failure);
        }
    }
}

void write_failures(const ExampleReport& report, const fs::path& out) {
    std::string csv = "run,code,message\n";
    for (const auto& f : report.failures) {
        std::string msg = f.message;
        std::replace(msg.begin(), msg.end(), '"', '\'');
        csv += f.label + ',' + std::to_string(static_cast<int>(f.code)) + ",\"" + msg + "\"\n";
    }
    write_text(out / "failures.csv", csv);
}

std::vector<ConvergenceRow> rows_from(const std::vector<Job>& jobs,
                                      const std::vector<JobOutcome>& outcomes) {
    std::vector<ConvergenceRow> rows;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const RunConfig& c = jobs[i].config;
        ConvergenceRow row;
        row.p = c.p;
        row.r = c.r;
        row.h = (c.b - c.a) / c.m;
        row.delta = c.delta();
        if (outcomes[i].result && outcomes[i].result->run.errors) {
            row.err_u = outcomes[i].result->run.errors->l2_u;
            row.err_y = outcomes[i].result->run.errors->l2_y;
        } else {
            row.failure = outcomes[i].failure ? outcomes[i].failure->code : ErrorCode::Config;
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> pick(const std::optional<double>& override, std::vector<double> defaults) {
    if (override) {
        return {*override};
    }
    return defaults;
}

ExampleReport example1(const ExampleOptions& options, const fs::path& out) {
    const std::vector<double> ps = pick(options.p, {3.0, 4.0});
    const double lambda = options.lambda.value_or(1.0);

    std::vector<Job> h_jobs;
    for (double p : ps) {
        for (int r : {1, 2, 3}) {
            for (int m : {4, 8, 16, 32}) {
                h_jobs.push_back({"h_sweep/p" + label_number(p) + "_r" + std::to_string(r) +
                                      "_m" + std::to_string(m),
                                  example1_config(p, lambda, r, m, 1000)});
            }
        }
    }
    std::vector<Job> d_jobs;
    for (double p : ps) {
        for (int N : {10, 20, 40, 80}) {
            d_jobs.push_back({"delta_sweep/p" + label_number(p) + "_N" + std::to_string(N),
                              example1_config(p, lambda, 4, 10, N)});
        }
    }

    ExampleReport report;
    const auto h_out = run_jobs(h_jobs, options, out);
    const auto d_out = run_jobs(d_jobs, options, out);
    collect_failures(h_out, report);
    collect_failures(d_out, report);

    auto h_rows = rows_from(h_jobs, h_out);
    auto d_rows = rows_from(d_jobs, d_out);
    fill_orders(h_rows, false);
    fill_orders(d_rows, true);
    write_convergence(h_rows, out / "h_sweep" / "convergence.csv");
    write_convergence(d_rows, out / "delta_sweep" / "convergence.csv");
    std::vector<ConvergenceRow> all = h_rows;
    all.insert(all.end(), d_rows.begin(), d_rows.end());
    write_convergence(all, out / "convergence.csv");
    write_failures(report, out);
    return report;
}

ExampleReport example2(const ExampleOptions& options, const fs::path& out) {
    const std::vector<double> lambdas = pick(options.lambda, {10.0, 0.0, -1.0, -10.0});
    const std::vector<double> ps = pick(options.p, {1.5, 2.0, 4.0});
    std::vector<Job> jobs;
    for (double lambda : lambdas) {
        for (double p : ps) {
            jobs.push_back({"lambda_" + label_number(lambda) + "_p_" + label_number(p),
                            example2_config(p, lambda)});
        }
    }
    ExampleReport report;
    const auto outcomes = run_jobs(jobs, options, out);
    collect_failures(outcomes, report);

    std::string csv = "lambda,p,status,b0,bT,min_u\n";
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const RunConfig& c = jobs[i].config;
        csv += format_double(c.lambda) + ',' + format_double(c.p) + ',';
        if (!outcomes[i].result) {
            csv += "failed,,,\n";
            continue;
        }
        const RunOutput& run = outcomes[i].result->run;
        double min_u = 0.0;
        for (const auto& e : extrema_series(run)) {
            min_u = std::min(min_u, e.min);
        }
        csv += "ok," + format_double(run.energy.front()) + ',' + format_double(run.energy.back()) +
               ',' + format_double(min_u) + '\n';
    }
    write_text(out / "cases.csv", csv);
    write_failures(report, out);
    return report;
}

ExampleReport example34(int id, const ExampleOptions& options, const fs::path& out) {
    const std::vector<double> lambdas = pick(options.lambda, {-5.0, 0.0, 5.0});
    const double p = options.p.value_or(3.0);
    std::vector<Job> jobs;
    for (double lambda : lambdas) {
        jobs.push_back({"lambda_" + label_number(lambda), example34_config(id, p, lambda, 500)});
    }
    ExampleReport report;
    const auto outcomes = run_jobs(jobs, options, out);
    collect_failures(outcomes, report);

    std::string cases = "lambda,p,status,eta,t_star,t_close\n";
    std::string fronts = "lambda,t,left,right\n";
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        const RunConfig& c = jobs[i].config;
        const std::string lam = format_double(c.lambda);
        cases += lam + ',' + format_double(c.p) + ',';
        if (!outcomes[i].result) {
            cases += "failed,,,\n";
            continue;
        }
        const SolveResult& res = *outcomes[i].result;
        const auto level = waiting_time_level(res.run);
        std::string t_close;
        for (const auto& s : res.run.support) {
            if (!s.gap) {
                t_close = format_double(s.t);
                break;
            }
        }
        cases += "ok," + format_double(res.eta) + ',' +
                 (level ? format_double(res.run.times[static_cast<std::size_t>(*level)]) : "") +
                 ',' + t_close + '\n';
        for (const auto& s : res.run.support) {
            fronts += lam + ',' + format_double(s.t) + ',';
            fronts += s.gap ? format_double(s.gap->first) + ',' + format_double(s.gap->second) : ",";
            fronts += '\n';
        }
    }
    write_text(out / "cases.csv", cases);
    write_text(out / "support.csv", fronts);
    write_failures(report, out);
    return report;
}

}  // namespace

ExampleReport run_example(int id, const ExampleOptions& options, const fs::path& out) {
    if (options.p && !(std::isfinite(*options.p) && *options.p > 1.0)) {
        throw ConfigError("--p must be a finite value > 1");
    }
    if (options.lambda && !std::isfinite(*options.lambda)) {
        throw ConfigError("--lambda must be finite");
    }
    switch (id) {
        case 1: return example1(options, out);
        case 2: return example2(options, out);
        case 3:
        case 4: return example34(id, options, out);
        default: throw ConfigError("example id must be 1, 2, 3 or 4");
    }
}

}  // namespace plapmem
