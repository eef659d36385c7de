#include "plapmem/output.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "plapmem/errors.hpp"
#include "plapmem/experiments.hpp"

namespace plapmem {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::vector<std::size_t> snapshot_levels(const RunOutput& run, std::span<const double> times) {
    std::vector<std::size_t> levels;
    if (times.empty()) {
        levels.resize(run.num_levels());
        for (std::size_t k = 0; k < levels.size(); ++k) {
            levels[k] = k;
        }
        return levels;
    }
    const double last = static_cast<double>(run.num_levels() - 1);
    for (double t : times) {
        const double k = std::clamp(std::round(t / run.delta), 0.0, last);
        levels.push_back(static_cast<std::size_t>(k));
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    return levels;
}

void write_text(const fs::path& file, const std::string& contents) {
    std::error_code ec;
    if (file.has_parent_path()) {
        fs::create_directories(file.parent_path(), ec);
        if (ec) {
            throw IoError("cannot create directory " + file.parent_path().string() + ": " +
                          ec.message());
        }
    }
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open " + file.string() + " for writing");
    }
    out << contents;
    out.flush();
    if (!out) {
        throw IoError("failed writing " + file.string());
    }
}

namespace {

std::string snapshots_csv(const RunOutput& run, std::span<const double> times,
                          int quadrature_points) {
    const Mesh1D& mesh = run.mesh;
    const QuadratureRule quad = gauss_legendre(quadrature_points);
    const BasisTable table = tabulate(mesh.basis(), quad);
    const auto r = static_cast<std::size_t>(mesh.degree());

    // Sample layout per element: its left end, then the Gauss points; the
    // right end of the domain closes the list.
    std::vector<double> xs;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        xs.push_back(mesh.element_left(e));
        for (double q : quad.points) {
            xs.push_back(mesh.element_left(e) + mesh.h() * q);
        }
    }
    xs.push_back(mesh.b());

    auto sample = [&](std::span<const double> coeffs, std::vector<double>& values) {
        values.clear();
        double local[kMaxDegree + 1];
        for (int e = 0; e < mesh.num_elements(); ++e) {
            gather_element(mesh, coeffs, e, std::span<double>(local, r + 1));
            values.push_back(local[0]);
            for (std::size_t k = 0; k < table.num_points; ++k) {
                double v = 0.0;
                for (std::size_t l = 0; l <= r; ++l) {
                    v += local[l] * table.value(k, l);
                }
                values.push_back(v);
            }
        }
        values.push_back(0.0);
    };

    std::string csv = "t,x,u,y\n";
    std::vector<double> us, ys;
    for (std::size_t k : snapshot_levels(run, times)) {
        sample(run.u[k], us);
        sample(run.y[k], ys);
        const std::string t = format_double(run.times[k]);
        for (std::size_t i = 0; i < xs.size(); ++i) {
            csv += t + ',' + format_double(xs[i]) + ',' + format_double(us[i]) + ',' +
                   format_double(ys[i]) + '\n';
        }
    }
    return csv;
}

}  // namespace

void write_outputs(const RunOutput& run, const RunConfig& config, const fs::path& dir) {
    write_text(dir / "snapshots.csv",
               snapshots_csv(run, config.snapshot_times, config.quadrature_points));

    std::string energy = "t,b\n";
    for (std::size_t k = 0; k < run.num_levels(); ++k) {
        energy += format_double(run.times[k]) + ',' + format_double(run.energy[k]) + '\n';
    }
    write_text(dir / "energy.csv", energy);

    std::string support = "t,left,right\n";
    for (const auto& s : run.support) {
        support += format_double(s.t) + ',';
        if (s.gap) {
            support += format_double(s.gap->first) + ',' + format_double(s.gap->second);
        } else {
            support += ',';
        }
        support += '\n';
    }
    write_text(dir / "support.csv", support);

    std::string diag = "k,iterations,increment_u,increment_y\n";
    for (std::size_t k = 0; k < run.diagnostics.size(); ++k) {
        const auto& d = run.diagnostics[k];
        diag += std::to_string(k) + ',' + std::to_string(d.iterations) + ',' +
                format_double(d.increment_u) + ',' + format_double(d.increment_y) + '\n';
    }
    write_text(dir / "diagnostics.csv", diag);

    write_text(dir / "config.json", config_to_json(config));
}

void write_convergence(const std::vector<ConvergenceRow>& rows, const fs::path& file) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    std::string csv = "p,r,h,delta,err_u,err_y,order_u,order_y\n";
    for (const auto& row : rows) {
        csv += format_double(row.p) + ',' + std::to_string(row.r) + ',' + format_double(row.h) +
               ',' + format_double(row.delta) + ',';
        if (row.failure) {
            csv += ",,,\n";
            continue;
        }
        csv += format_double(row.err_u) + ',' + format_double(row.err_y) + ',' +
               opt(row.order_u) + ',' + opt(row.order_y) + '\n';
    }
    write_text(file, csv);
}

}  // namespace plapmem
