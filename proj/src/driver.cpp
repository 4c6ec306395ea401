#include "koalint/driver.hpp"

#include <cmath>

#include "koalint/comodule.hpp"
#include "koalint/linalg.hpp"
#include "koalint/stackel.hpp"

namespace koalint::driver {

bool VerifyResults::all_pass() const {
    for (const auto& r : conservation)
        if (!r.pass) return false;
    for (const auto& block : involution)
        for (const auto& row : block.rows)
            for (const auto& r : row)
                if (!r.pass) return false;
    for (const auto& r : ranks)
        if (!r.pass) return false;
    for (const auto& r : left_right)
        if (!r.pass) return false;
    for (const auto& r : limits)
        if (!r.pass) return false;
    for (const auto& r : identities)
        if (!r.pass) return false;
    return true;
}

verify::SweepOptions sweep_options(const config::SystemAssembly& sys) {
    verify::SweepOptions opt;
    opt.n_points = sys.cfg.n_points;
    opt.tol = sys.cfg.tol;
    opt.seed = sys.cfg.seed;
    opt.accept = sys.accept;
    return opt;
}

namespace {

constexpr double kLimitValues[] = {1e-2, 1e-3, 1e-4};

// Stäckel separability certificate: row condition, determinant against the
// closed form, closed-form inverse, Hamiltonian decomposition and the
// cross-route for the separation integrals (which differ from the direct
// form by the constant omega^2/(4z) absorbed into the z -> 0 regularization).
void stackel_certificate(const config::SystemAssembly& sys, const verify::SweepOptions& opt,
                         VerifyResults& out) {
    const auto& cfg = sys.cfg;
    stackel::System st{{{cfg.n, cfg.omega2, cfg.b}, cfg.z}};
    const Observable h = stackel::hamiltonian(st);
    // the boundary potentials U_1, U_N are undefined at z == 0 with omega2 != 0
    const bool potentials_defined = cfg.z != 0.0 || cfg.omega2 == 0.0;
    auto coeff = stackel::coefficients(st);

    const Observable* regular_for[] = {&h};
    auto points = verify::sample_points(cfg.n, opt.n_points, opt, regular_for);

    verify::PointwiseReport condition{"separability row condition", 0.0, opt.n_points, 1e-12,
                                      opt.seed, false};
    verify::PointwiseReport det{"determinant vs closed form", 0.0, opt.n_points, 1e-12, opt.seed,
                                false};
    verify::PointwiseReport inverse{"closed-form inverse (B*A == I)", 0.0, opt.n_points, 1e-10,
                                    opt.seed, false};
    verify::PointwiseReport decomposition{"hamiltonian decomposition", 0.0, opt.n_points, 1e-12,
                                          opt.seed, false};
    verify::PointwiseReport zroute{"separation integrals via inverse matrix", 0.0, opt.n_points,
                                   1e-11, opt.seed, false};

    std::vector<Observable> zints;
    for (int j = 2; j <= cfg.n; ++j) zints.push_back(stackel::z_integral(st, j));

    for (const auto& x : points) {
        Eigen::MatrixXd B = stackel::separability_matrix(st, x);
        Eigen::MatrixXd A = stackel::inverse_coefficients(st, x);

        Eigen::VectorXd a(cfg.n);
        for (int i = 0; i < cfg.n; ++i) a(i) = coeff.a[i].eval(x);
        Eigen::VectorXd row = B * a;
        for (int i = 0; i < cfg.n; ++i) {
            const double want = i == 0 ? 1.0 : 0.0;
            condition.max_scaled = std::max(condition.max_scaled, std::abs(row(i) - want));
        }

        const double lu = linalg::lu_determinant(B);
        const double closed = stackel::determinant_closed_form(st, x);
        det.max_scaled =
            std::max(det.max_scaled, std::abs(lu - closed) / std::max(1.0, std::abs(closed)));

        Eigen::MatrixXd resid = B * A - Eigen::MatrixXd::Identity(cfg.n, cfg.n);
        inverse.max_scaled = std::max(inverse.max_scaled, resid.cwiseAbs().maxCoeff());

        if (!potentials_defined) continue;

        const double hv = h.eval(x);
        double assembled = 0.0;
        for (int i = 0; i < cfg.n; ++i)
            assembled += a(i) * (0.5 * x.p[i] * x.p[i] + coeff.U[i](x.q[i]));
        decomposition.max_scaled = std::max(
            decomposition.max_scaled, std::abs(hv - assembled) / std::max(1.0, std::abs(hv)));

        // constant offset between the two routes (zero when omega2 == 0)
        const double offset = cfg.omega2 == 0.0 ? 0.0 : cfg.omega2 / (4.0 * cfg.z);
        for (int j = 2; j <= cfg.n; ++j) {
            double via_matrix = 0.0;
            for (int i = 0; i < cfg.n; ++i)
                via_matrix += A(i, j - 1) * (0.5 * x.p[i] * x.p[i] + coeff.U[i](x.q[i]));
            const double direct = zints[j - 2].eval(x) + offset;
            zroute.max_scaled =
                std::max(zroute.max_scaled,
                         std::abs(via_matrix - direct) / std::max(1.0, std::abs(direct)));
        }
    }
    for (auto* r : {&condition, &det, &inverse}) {
        r->pass = r->max_scaled <= r->tol;
        out.identities.push_back(*r);
    }
    if (potentials_defined) {
        for (auto* r : {&decomposition, &zroute}) {
            r->pass = r->max_scaled <= r->tol;
            out.identities.push_back(*r);
        }
    }
}

void comodule_certificate(const config::SystemAssembly& sys, const verify::SweepOptions& opt,
                          VerifyResults& out) {
    const auto& cfg = sys.cfg;
    comodule::Params at_zero{0.0, cfg.lambda1, cfg.lambda2, cfg.b1};
    // the two sides are different algebraic routes to the same polynomial, so
    // agreement is to rounding, not bitwise
    out.identities.push_back(verify::check_pointwise_equal(
        "casimir product identity (sigma -> 0)", comodule::c_sigma(at_zero),
        comodule::c_limit(at_zero), opt, 1e-13));
    out.identities.push_back(verify::check_pointwise_equal("hamiltonian limit (sigma -> 0)",
                                                           comodule::h_sigma(at_zero),
                                                           comodule::h_limit(at_zero), opt, 0.0));
}

}  // namespace

VerifyResults run_verification(const config::SystemAssembly& sys) {
    const verify::SweepOptions opt = sweep_options(sys);

    VerifyResults out;
    out.cfg = sys.cfg;
    out.errata_notes = sys.errata_notes;

    out.conservation = verify::check_conservation(sys.hamiltonian, sys.conserved, opt);

    for (const auto& block : sys.involution_blocks) {
        InvolutionBlock ib;
        for (const auto& f : block) ib.labels.push_back(f.label);
        ib.rows = verify::check_involution(block, opt);
        out.involution.push_back(std::move(ib));
    }

    out.ranks.push_back(verify::independence_rank(sys.rank_set, sys.expected_rank, opt));
    if (!sys.rank_set_extended.empty())
        out.ranks.push_back(
            verify::independence_rank(sys.rank_set_extended, sys.expected_rank_extended, opt));

    if (sys.left_right) {
        const auto& [left, right] = *sys.left_right;
        out.left_right.push_back(verify::check_left_right(left.label + " == " + right.label,
                                                          left.fn, right.fn, opt));
    }

    for (const auto& spec : sys.limits)
        out.limits.push_back(verify::check_limit_order(spec.label, spec.parameter,
                                                       spec.quantity_at, spec.reference,
                                                       kLimitValues, opt));

    if (sys.cfg.family == config::Family::stackel) stackel_certificate(sys, opt, out);
    if (sys.cfg.family == config::Family::comodule) comodule_certificate(sys, opt, out);

    return out;
}

}  // namespace koalint::driver
