#include "koalint/report.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace koalint::report {

namespace {

std::string fmt_double(double x) {
    if (!std::isfinite(x)) return "null";  // slopes can be +inf for identically-zero diffs
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            default: out += c;
        }
    }
    out += "\"";
    return out;
}

// Minimal streaming JSON writer with explicit structure; keys appear in
// insertion order.
class Json {
public:
    explicit Json(std::ostringstream& out) : out_(out) {}

    void open_object() { punct("{"); fresh_ = true; }
    void close_object() { out_ << "}"; fresh_ = false; }
    void open_array() { punct("["); fresh_ = true; }
    void close_array() { out_ << "]"; fresh_ = false; }

    void key(const std::string& k) {
        comma();
        out_ << quote(k) << ":";
        fresh_ = true;
    }

    void value(const std::string& s) { punct(quote(s)); }
    void value(const char* s) { value(std::string(s)); }
    void value(double x) { punct(fmt_double(x)); }
    void value(int x) { punct(std::to_string(x)); }
    void value(std::uint64_t x) { punct(std::to_string(x)); }
    void value(bool b) { punct(b ? "true" : "false"); }

private:
    void comma() {
        if (!fresh_) out_ << ",";
        fresh_ = false;
    }
    void punct(const std::string& tok) {
        comma();
        out_ << tok;
        fresh_ = false;
    }

    std::ostringstream& out_;
    bool fresh_ = true;
};

void write_bracket(Json& w, const verify::BracketReport& r) {
    w.open_object();
    w.key("left"); w.value(r.left);
    w.key("right"); w.value(r.right);
    w.key("max_scaled_residual"); w.value(r.max_scaled);
    w.key("max_raw_residual"); w.value(r.max_raw);
    w.key("points"); w.value(r.points);
    w.key("seed"); w.value(r.seed);
    w.key("tol"); w.value(r.tol);
    w.key("pass"); w.value(r.pass);
    w.close_object();
}

void write_pointwise(Json& w, const verify::PointwiseReport& r) {
    w.open_object();
    w.key("label"); w.value(r.label);
    w.key("max_scaled_diff"); w.value(r.max_scaled);
    w.key("points"); w.value(r.points);
    w.key("tol"); w.value(r.tol);
    w.key("seed"); w.value(r.seed);
    w.key("pass"); w.value(r.pass);
    w.close_object();
}

void write_rank(Json& w, const verify::RankReport& r) {
    w.open_object();
    w.key("labels");
    w.open_array();
    for (const auto& l : r.labels) w.value(l);
    w.close_array();
    w.key("expected_rank"); w.value(r.expected_rank);
    w.key("median_rank"); w.value(r.median_rank);
    w.key("rank_per_point");
    w.open_array();
    for (int x : r.rank_per_point) w.value(x);
    w.close_array();
    w.key("singular_values");
    w.open_array();
    for (const auto& row : r.singular_values) {
        w.open_array();
        for (double s : row) w.value(s);
        w.close_array();
    }
    w.close_array();
    w.key("rank_tol"); w.value(r.rank_tol);
    w.key("seed"); w.value(r.seed);
    w.key("pass"); w.value(r.pass);
    w.close_object();
}

void write_limit(Json& w, const verify::LimitReport& r) {
    w.open_object();
    w.key("label"); w.value(r.label);
    w.key("parameter"); w.value(r.parameter);
    w.key("values");
    w.open_array();
    for (double v : r.values) w.value(v);
    w.close_array();
    w.key("max_diffs");
    w.open_array();
    for (double d : r.max_diffs) w.value(d);
    w.close_array();
    w.key("order"); w.value(r.order);
    w.key("zero_diff"); w.value(r.zero_diff);
    w.key("exact_at_zero"); w.value(r.exact_at_zero);
    w.key("seed"); w.value(r.seed);
    w.key("pass"); w.value(r.pass);
    w.close_object();
}

void write_config(Json& w, const config::SystemConfig& cfg) {
    using config::Family;
    w.open_object();
    w.key("family"); w.value(config::family_name(cfg.family));
    w.key("N"); w.value(cfg.n);
    if (cfg.family != Family::comodule) {
        w.key("omega2"); w.value(cfg.omega2);
        w.key("b");
        w.open_array();
        for (double x : cfg.b) w.value(x);
        w.close_array();
        if (cfg.family != Family::sw) { w.key("z"); w.value(cfg.z); }
        if (cfg.family == Family::sw_general_f || cfg.family == Family::sw_deformed_general_f) {
            w.key("f_choice"); w.value(config::f_choice_name(cfg.f_choice));
        }
    } else {
        w.key("sigma"); w.value(cfg.sigma);
        w.key("lambda1"); w.value(cfg.lambda1);
        w.key("lambda2"); w.value(cfg.lambda2);
        w.key("b1"); w.value(cfg.b1);
    }
    w.key("seed"); w.value(cfg.seed);
    w.key("n_points"); w.value(cfg.n_points);
    w.key("tol"); w.value(cfg.tol);
    w.close_object();
}

}  // namespace

std::string render_verify_report(const driver::VerifyResults& results, bool with_timestamp) {
    std::ostringstream out;
    Json w(out);
    w.open_object();

    w.key("config");
    write_config(w, results.cfg);

    w.key("conservation");
    w.open_array();
    for (const auto& r : results.conservation) write_bracket(w, r);
    w.close_array();

    w.key("involution");
    w.open_array();
    for (const auto& block : results.involution) {
        w.open_object();
        w.key("labels");
        w.open_array();
        for (const auto& l : block.labels) w.value(l);
        w.close_array();
        w.key("pairs");
        w.open_array();
        for (const auto& row : block.rows) {
            w.open_array();
            for (const auto& r : row) write_bracket(w, r);
            w.close_array();
        }
        w.close_array();
        w.close_object();
    }
    w.close_array();

    w.key("rank");
    w.open_array();
    for (const auto& r : results.ranks) write_rank(w, r);
    w.close_array();

    w.key("left_right");
    w.open_array();
    for (const auto& r : results.left_right) write_pointwise(w, r);
    w.close_array();

    w.key("limits");
    w.open_array();
    for (const auto& r : results.limits) write_limit(w, r);
    w.close_array();

    w.key("identities");
    w.open_array();
    for (const auto& r : results.identities) write_pointwise(w, r);
    w.close_array();

    w.key("errata_notes");
    w.open_array();
    for (const auto& note : results.errata_notes) w.value(note);
    w.close_array();

    w.key("all_pass");
    w.value(results.all_pass());

    if (with_timestamp) {
        std::time_t now = std::time(nullptr);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        w.key("generated_at");
        w.value(std::string(buf));
    }

    w.close_object();
    out << "\n";
    return out.str();
}

std::string render_trajectory_csv(const dynamics::Trajectory& traj) {
    std::ostringstream out;
    const int n = traj.states.empty() ? 0 : traj.states.front().n();
    out << "t";
    for (int i = 1; i <= n; ++i) out << ",q" << i;
    for (int i = 1; i <= n; ++i) out << ",p" << i;
    out << "\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        out << fmt_double(traj.times[k]);
        for (int i = 0; i < n; ++i) out << "," << fmt_double(traj.states[k].q[i]);
        for (int i = 0; i < n; ++i) out << "," << fmt_double(traj.states[k].p[i]);
        out << "\n";
    }
    return out.str();
}

std::string render_scan_csv(const std::string& parameter, const std::vector<ScanRow>& rows) {
    std::ostringstream out;
    out << parameter << ",max_scaled_residual,median_rank,expected_rank,limit_diff,pass\n";
    for (const auto& r : rows) {
        out << fmt_double(r.value) << "," << fmt_double(r.max_scaled_residual) << ","
            << r.median_rank << "," << r.expected_rank << "," << fmt_double(r.limit_diff) << ","
            << (r.pass ? "true" : "false") << "\n";
    }
    return out.str();
}

}  // namespace koalint::report
