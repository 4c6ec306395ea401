#include "koalint/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "koalint/linalg.hpp"

namespace koalint::verify {

int worker_count() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    if (const char* env = std::getenv("KOALINT_THREADS")) {
        int cap = std::atoi(env);
        if (cap >= 1 && cap < hw) hw = cap;
    }
    return hw;
}

void parallel_for(int n, const std::function<void(int)>& body) {
    const int workers = std::min(worker_count(), n);
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += workers) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<PhasePoint> sample_points(int arity, int n_points, const SweepOptions& opt,
                                      std::span<const Observable* const> regular_for) {
    std::vector<PhasePoint> points;
    points.reserve(n_points);
    for (int k = 0; k < n_points; ++k) {
        SplitMix64 rng(mix_seed(opt.seed, static_cast<std::uint64_t>(k)));
        bool placed = false;
        for (int attempt = 0; attempt <= opt.max_retries; ++attempt) {
            PhasePoint x = sample_box_point(rng, arity);
            if (opt.accept && !opt.accept(x)) continue;
            try {
                for (const Observable* f : regular_for) f->check_point(x);
            } catch (const Error&) {
                continue;
            }
            points.push_back(std::move(x));
            placed = true;
            break;
        }
        if (!placed)
            throw SamplingExhausted("no regular point found after " +
                                    std::to_string(opt.max_retries + 1) + " draws (sample " +
                                    std::to_string(k) + ")");
    }
    return points;
}

namespace {

double norm2(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

struct GradientTable {
    std::vector<std::vector<double>> rows;  // one gradient per point
    std::vector<double> norms;
};

GradientTable gradients_at(const Observable& f, const std::vector<PhasePoint>& points) {
    GradientTable table;
    table.rows.resize(points.size());
    table.norms.resize(points.size());
    parallel_for(static_cast<int>(points.size()), [&](int k) {
        table.rows[k] = gradient(f, points[k]);
        table.norms[k] = norm2(table.rows[k]);
    });
    return table;
}

BracketReport bracket_sweep(const std::string& left_label, const GradientTable& left,
                            const std::string& right_label, const GradientTable& right, int n,
                            const SweepOptions& opt) {
    BracketReport report;
    report.left = left_label;
    report.right = right_label;
    report.points = static_cast<int>(left.rows.size());
    report.seed = opt.seed;
    report.tol = opt.tol;
    for (std::size_t k = 0; k < left.rows.size(); ++k) {
        const auto& gf = left.rows[k];
        const auto& gg = right.rows[k];
        double raw = 0.0;
        for (int i = 0; i < n; ++i) raw += gf[i] * gg[n + i] - gf[n + i] * gg[i];
        raw = std::abs(raw);
        const double scale = std::max(1.0, left.norms[k] * right.norms[k]);
        report.max_raw = std::max(report.max_raw, raw);
        report.max_scaled = std::max(report.max_scaled, raw / scale);
    }
    report.pass = report.max_scaled <= opt.tol;
    return report;
}

}  // namespace

std::vector<BracketReport> check_conservation(const Labeled& hamiltonian,
                                              std::span<const Labeled> integrals,
                                              const SweepOptions& opt) {
    std::vector<const Observable*> all{&hamiltonian.fn};
    for (const auto& f : integrals) all.push_back(&f.fn);
    const int n = hamiltonian.fn.arity();
    auto points = sample_points(n, opt.n_points, opt, all);

    GradientTable h_table = gradients_at(hamiltonian.fn, points);
    std::vector<BracketReport> reports;
    reports.reserve(integrals.size());
    for (const auto& f : integrals) {
        GradientTable f_table = gradients_at(f.fn, points);
        reports.push_back(bracket_sweep(hamiltonian.label, h_table, f.label, f_table, n, opt));
    }
    return reports;
}

std::vector<std::vector<BracketReport>> check_involution(std::span<const Labeled> fns,
                                                         const SweepOptions& opt) {
    std::vector<std::vector<BracketReport>> rows(fns.size());
    if (fns.empty()) return rows;
    std::vector<const Observable*> all;
    for (const auto& f : fns) all.push_back(&f.fn);
    const int n = fns.front().fn.arity();
    auto points = sample_points(n, opt.n_points, opt, all);

    std::vector<GradientTable> tables(fns.size());
    for (std::size_t i = 0; i < fns.size(); ++i) tables[i] = gradients_at(fns[i].fn, points);
    for (std::size_t i = 0; i < fns.size(); ++i)
        for (std::size_t j = i + 1; j < fns.size(); ++j)
            rows[i].push_back(
                bracket_sweep(fns[i].label, tables[i], fns[j].label, tables[j], n, opt));
    return rows;
}

RankReport independence_rank(std::span<const Labeled> fns, int expected_rank,
                             const SweepOptions& opt) {
    RankReport report;
    report.expected_rank = expected_rank;
    report.rank_tol = opt.rank_tol;
    report.seed = opt.seed;
    if (fns.empty()) return report;
    std::vector<const Observable*> all;
    for (const auto& f : fns) {
        report.labels.push_back(f.label);
        all.push_back(&f.fn);
    }
    const int n = fns.front().fn.arity();
    auto points = sample_points(n, opt.rank_points, opt, all);

    report.singular_values.resize(points.size());
    report.rank_per_point.resize(points.size());
    parallel_for(static_cast<int>(points.size()), [&](int k) {
        Eigen::MatrixXd jac(fns.size(), 2 * n);
        for (std::size_t r = 0; r < fns.size(); ++r) {
            auto g = gradient(fns[r].fn, points[k]);
            for (int c = 0; c < 2 * n; ++c) jac(static_cast<int>(r), c) = g[c];
        }
        report.singular_values[k] = linalg::singular_values(jac);
        report.rank_per_point[k] =
            linalg::rank_from_singular_values(report.singular_values[k], opt.rank_tol);
    });

    std::vector<int> sorted = report.rank_per_point;
    std::sort(sorted.begin(), sorted.end());
    report.median_rank = sorted[sorted.size() / 2];
    report.pass = report.median_rank == expected_rank;
    return report;
}

PointwiseReport check_pointwise_equal(const std::string& label, const Observable& f,
                                      const Observable& g, const SweepOptions& opt, double tol) {
    PointwiseReport report;
    report.label = label;
    report.points = opt.n_points;
    report.tol = tol;
    report.seed = opt.seed;
    const Observable* both[] = {&f, &g};
    auto points = sample_points(f.arity(), opt.n_points, opt, both);
    std::vector<double> diffs(points.size());
    parallel_for(static_cast<int>(points.size()), [&](int k) {
        const double a = f.eval(points[k]);
        const double b = g.eval(points[k]);
        diffs[k] = std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
    });
    for (double d : diffs) report.max_scaled = std::max(report.max_scaled, d);
    report.pass = report.max_scaled <= tol;
    return report;
}

PointwiseReport check_left_right(const std::string& label, const Observable& left,
                                 const Observable& right, const SweepOptions& opt) {
    return check_pointwise_equal(label, left, right, opt, 1e-12);
}

LimitReport check_limit_order(const std::string& label, const std::string& parameter,
                              const std::function<Observable(double)>& quantity_at,
                              const Observable& reference, std::span<const double> values,
                              const SweepOptions& opt) {
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        if (!(values[i] > values[i + 1]) || values[i + 1] <= 0.0)
            throw Error("limit values must decrease strictly toward 0");

    LimitReport report;
    report.label = label;
    report.parameter = parameter;
    report.values.assign(values.begin(), values.end());
    report.seed = opt.seed;

    const Observable* refs[] = {&reference};
    auto points = sample_points(reference.arity(), opt.n_points, opt, refs);

    auto max_diff = [&](const Observable& probe) {
        std::vector<double> diffs(points.size());
        parallel_for(static_cast<int>(points.size()), [&](int k) {
            diffs[k] = std::abs(probe.eval(points[k]) - reference.eval(points[k]));
        });
        double m = 0.0;
        for (double d : diffs) m = std::max(m, d);
        return m;
    };

    for (double v : values) report.max_diffs.push_back(max_diff(quantity_at(v)));
    report.zero_diff = max_diff(quantity_at(0.0));
    report.exact_at_zero = report.zero_diff == 0.0;

    // least-squares slope of log(diff) against log(value); an identically-zero
    // difference sequence counts as infinitely fast convergence
    bool all_zero = true;
    for (double d : report.max_diffs) all_zero = all_zero && d == 0.0;
    if (all_zero) {
        report.order = std::numeric_limits<double>::infinity();
    } else {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int m = static_cast<int>(values.size());
        for (int i = 0; i < m; ++i) {
            const double x = std::log(report.values[i]);
            const double y = std::log(std::max(report.max_diffs[i], 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        report.order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    report.pass = report.exact_at_zero && report.order >= 0.9;
    return report;
}

}  // namespace koalint::verify
