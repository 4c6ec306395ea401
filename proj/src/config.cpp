#include "koalint/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "koalint/comodule.hpp"
#include "koalint/sl2_core.hpp"
#include "koalint/sl2_deformed.hpp"
#include "koalint/stackel.hpp"

namespace koalint::config {

using nlohmann::json;

std::string family_name(Family family) {
    switch (family) {
        case Family::sw: return "sw";
        case Family::sw_general_f: return "sw_general_f";
        case Family::sw_deformed: return "sw_deformed";
        case Family::sw_deformed_general_f: return "sw_deformed_general_f";
        case Family::stackel: return "stackel";
        case Family::comodule: return "comodule";
    }
    return "?";
}

std::string f_choice_name(FChoice choice) {
    switch (choice) {
        case FChoice::linear: return "linear";
        case FChoice::quadratic: return "quadratic";
        case FChoice::exp2z: return "exp2z";
    }
    return "?";
}

namespace {

Family parse_family(const std::string& name) {
    if (name == "sw") return Family::sw;
    if (name == "sw_general_f") return Family::sw_general_f;
    if (name == "sw_deformed") return Family::sw_deformed;
    if (name == "sw_deformed_general_f") return Family::sw_deformed_general_f;
    if (name == "stackel") return Family::stackel;
    if (name == "comodule") return Family::comodule;
    throw ConfigInvalid("$.family: unknown family '" + name + "'");
}

FChoice parse_f_choice(const std::string& name) {
    if (name == "linear") return FChoice::linear;
    if (name == "quadratic") return FChoice::quadratic;
    if (name == "exp2z") return FChoice::exp2z;
    throw ConfigInvalid("$.f_choice: unknown choice '" + name + "'");
}

bool is_general(Family family) {
    return family == Family::sw_general_f || family == Family::sw_deformed_general_f;
}

bool uses_z(Family family) {
    return family == Family::sw_deformed || family == Family::sw_deformed_general_f ||
           family == Family::stackel || family == Family::sw_general_f;
}

double require_number(const json& j, const std::string& path) {
    if (!j.is_number()) throw ConfigInvalid(path + ": expected a number");
    return j.get<double>();
}

int require_int(const json& j, const std::string& path) {
    if (!j.is_number_integer()) throw ConfigInvalid(path + ": expected an integer");
    return j.get<int>();
}

}  // namespace

SystemConfig parse_config(const std::string& json_text, int max_n) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigInvalid(std::string("not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigInvalid("$: expected a JSON object");
    if (!j.contains("family") || !j["family"].is_string())
        throw ConfigInvalid("$.family: required string field");

    SystemConfig cfg;
    cfg.family = parse_family(j["family"].get<std::string>());

    std::set<std::string> allowed{"family", "N", "seed", "n_points", "tol"};
    const bool sw_like = cfg.family != Family::comodule;
    if (sw_like) {
        allowed.insert("omega2");
        allowed.insert("b");
    }
    if (uses_z(cfg.family)) allowed.insert("z");
    if (is_general(cfg.family)) allowed.insert("f_choice");
    if (cfg.family == Family::comodule) {
        allowed.insert("sigma");
        allowed.insert("lambda1");
        allowed.insert("lambda2");
        allowed.insert("b1");
    }
    for (const auto& [key, value] : j.items()) {
        if (!allowed.count(key)) {
            const bool known = key == "omega2" || key == "b" || key == "z" || key == "sigma" ||
                               key == "lambda1" || key == "lambda2" || key == "b1" ||
                               key == "f_choice";
            throw ConfigInvalid("$." + key + (known ? ": field not applicable to family '"
                                                    : ": unknown field (family '") +
                                family_name(cfg.family) + "'" + (known ? "" : ")"));
        }
    }

    if (cfg.family == Family::comodule) {
        cfg.n = j.contains("N") ? require_int(j["N"], "$.N") : 2;
        if (cfg.n != 2) throw ConfigInvalid("$.N: the comodule family is two-particle (N == 2)");
        if (!j.contains("sigma")) throw ConfigInvalid("$.sigma: required for family 'comodule'");
        cfg.sigma = require_number(j["sigma"], "$.sigma");
        if (j.contains("lambda1")) cfg.lambda1 = require_number(j["lambda1"], "$.lambda1");
        if (j.contains("lambda2")) cfg.lambda2 = require_number(j["lambda2"], "$.lambda2");
        if (j.contains("b1")) cfg.b1 = require_number(j["b1"], "$.b1");
    } else {
        if (!j.contains("N")) throw ConfigInvalid("$.N: required field");
        cfg.n = require_int(j["N"], "$.N");
        if (cfg.n < 1) throw ConfigInvalid("$.N: must be >= 1");
        if (cfg.family == Family::stackel && cfg.n < 2)
            throw ConfigInvalid("$.N: the stackel family needs N >= 2");
        if (cfg.n > max_n)
            throw ConfigInvalid("$.N: exceeds the cap of " + std::to_string(max_n) +
                                " (override with --max-n)");

        if (!j.contains("b")) throw ConfigInvalid("$.b: required field");
        if (!j["b"].is_array()) throw ConfigInvalid("$.b: expected an array of numbers");
        for (std::size_t i = 0; i < j["b"].size(); ++i)
            cfg.b.push_back(require_number(j["b"][i], "$.b[" + std::to_string(i) + "]"));
        if (static_cast<int>(cfg.b.size()) != cfg.n)
            throw ConfigInvalid("$.b: must have length N = " + std::to_string(cfg.n));

        if (j.contains("omega2")) {
            cfg.omega2 = require_number(j["omega2"], "$.omega2");
            if (cfg.omega2 < 0.0) throw ConfigInvalid("$.omega2: must be >= 0");
        }

        const bool z_required = cfg.family == Family::sw_deformed ||
                                cfg.family == Family::sw_deformed_general_f ||
                                cfg.family == Family::stackel;
        if (j.contains("z")) {
            cfg.z = require_number(j["z"], "$.z");
        } else if (z_required) {
            throw ConfigInvalid("$.z: required for family '" + family_name(cfg.family) + "'");
        } else if (cfg.family == Family::sw_general_f) {
            cfg.z = 0.2;  // only consulted by the exp2z choice
        }

        if (is_general(cfg.family)) {
            if (!j.contains("f_choice"))
                throw ConfigInvalid("$.f_choice: required for family '" +
                                    family_name(cfg.family) + "'");
            if (!j["f_choice"].is_string()) throw ConfigInvalid("$.f_choice: expected a string");
            cfg.f_choice = parse_f_choice(j["f_choice"].get<std::string>());
        }
    }

    if (j.contains("seed")) {
        if (!j["seed"].is_number_integer() && !j["seed"].is_number_unsigned())
            throw ConfigInvalid("$.seed: expected an integer");
        cfg.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("n_points")) {
        cfg.n_points = require_int(j["n_points"], "$.n_points");
        if (cfg.n_points < 1) throw ConfigInvalid("$.n_points: must be >= 1");
    }
    if (j.contains("tol")) {
        cfg.tol = require_number(j["tol"], "$.tol");
        if (cfg.tol <= 0.0) throw ConfigInvalid("$.tol: must be > 0");
    }
    return cfg;
}

SystemConfig load_config(const std::string& path, int max_n) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config file '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str(), max_n);
}

SmoothFn make_f_choice(FChoice choice, double omega2, double z) {
    switch (choice) {
        case FChoice::linear:
            return {[omega2](double u) { return omega2 * u; },
                    [omega2](double) { return omega2; }, [](double) { return 0.0; }};
        case FChoice::quadratic:
            return {[](double u) { return u * u; }, [](double u) { return 2.0 * u; },
                    [](double) { return 2.0; }};
        case FChoice::exp2z:
            return {[omega2, z](double u) { return omega2 * (u * expm1_over((2.0 * z) * u)); },
                    [omega2, z](double u) { return omega2 * std::exp(2.0 * z * u); },
                    [omega2, z](double u) { return 2.0 * z * omega2 * std::exp(2.0 * z * u); }};
    }
    throw Error("unreachable");
}

namespace {

PhasePoint default_state(int n) {
    std::vector<double> q(n), p(n);
    for (int i = 0; i < n; ++i) {
        q[i] = 1.0 + 0.1 * i;
        p[i] = (i % 2 == 0) ? 0.3 : -0.2;
    }
    return PhasePoint(std::move(q), std::move(p));
}

const char* kGeneratorLabelNote =
    "generator labeling: the deformed momentum-type and position-type generators are assigned "
    "so that the one-particle realization is recovered; the swapped pairing fails the deformed "
    "bracket closure check and is not used";

const char* kDeterminantSignNote =
    "separability matrix: the closed-form determinant carries a sign factor (-1)^(N+1); the "
    "product form alone is its magnitude";

const char* kCasimirProductNote =
    "companion integral: built from (1/4) D^2 - H*C composed with the coupled images; the "
    "variant without the C factor does not reproduce the sigma -> 0 limit and is not used";

const char* kCrossTowerNote =
    "tower involution: the left tower and the right tower are each in involution and every "
    "integral commutes with the Hamiltonian; left-right pairs with overlapping partial site "
    "windows (e.g. the leading and trailing 2-site integrals at N = 3) do not Poisson-commute "
    "and are checked blockwise";

}  // namespace

SystemAssembly build_system(const SystemConfig& cfg) {
    SystemAssembly sys;
    sys.cfg = cfg;
    sys.default_initial_state = default_state(cfg.n);

    auto tower_labels = [](const char* stem, int m) {
        return std::string(stem) + "(" + std::to_string(m) + ")";
    };

    switch (cfg.family) {
        case Family::sw:
        case Family::sw_general_f: {
            sl2::Params base{cfg.n, cfg.omega2, cfg.b};
            const bool general = cfg.family == Family::sw_general_f;
            Observable h = general
                               ? sl2::generalized_hamiltonian(
                                     base, make_f_choice(cfg.f_choice, cfg.omega2, cfg.z))
                               : sl2::sw_hamiltonian(base);
            sys.hamiltonian = {"H", h};
            std::vector<verify::Labeled> left, right;
            for (int m = 2; m <= cfg.n; ++m)
                left.push_back({tower_labels("C", m), sl2::left_integral(base, m)});
            for (int m = 2; m <= cfg.n; ++m)
                right.push_back({tower_labels("I", m), sl2::right_integral(base, m)});
            sys.conserved = left;
            sys.conserved.insert(sys.conserved.end(), right.begin(), right.end());
            if (!general && cfg.n >= 2)
                sys.conserved.push_back({"M1", sl2::liouville_integral(base, 1)});
            if (!left.empty()) {
                sys.involution_blocks.push_back(left);
                sys.involution_blocks.push_back(right);
            }

            sys.rank_set.push_back(sys.hamiltonian);
            for (int m = 2; m <= cfg.n; ++m)
                sys.rank_set.push_back({tower_labels("C", m), sl2::left_integral(base, m)});
            for (int m = 2; m <= cfg.n - 1; ++m)
                sys.rank_set.push_back({tower_labels("I", m), sl2::right_integral(base, m)});
            sys.expected_rank = cfg.n == 1 ? 1 : 2 * cfg.n - 2;
            if (!general && cfg.n >= 2) {
                sys.rank_set_extended = sys.rank_set;
                sys.rank_set_extended.push_back({"M1", sl2::liouville_integral(base, 1)});
                sys.expected_rank_extended = 2 * cfg.n - 1;
            }
            if (cfg.n >= 2)
                sys.left_right = {{tower_labels("C", cfg.n), sl2::left_integral(base, cfg.n)},
                                  {tower_labels("I", cfg.n), sl2::right_integral(base, cfg.n)}};
            if (cfg.n >= 3) sys.errata_notes.push_back(kCrossTowerNote);
            break;
        }

        case Family::sw_deformed:
        case Family::sw_deformed_general_f: {
            sl2z::Params params{{cfg.n, cfg.omega2, cfg.b}, cfg.z};
            const bool general = cfg.family == Family::sw_deformed_general_f;
            auto hamiltonian_at = [cfg](double zv) {
                sl2z::Params pz{{cfg.n, cfg.omega2, cfg.b}, zv};
                if (cfg.family == Family::sw_deformed_general_f)
                    return sl2z::deformed_generalized_hamiltonian(
                        pz, make_f_choice(cfg.f_choice, cfg.omega2, zv));
                return sl2z::deformed_sw_hamiltonian(pz);
            };
            sys.hamiltonian = {"Hz", hamiltonian_at(cfg.z)};
            std::vector<verify::Labeled> left, right;
            for (int m = 2; m <= cfg.n; ++m)
                left.push_back({tower_labels("Cz", m), sl2z::deformed_left_integral(params, m)});
            for (int m = 2; m <= cfg.n; ++m)
                right.push_back({tower_labels("Iz", m), sl2z::deformed_right_integral(params, m)});
            sys.conserved = left;
            sys.conserved.insert(sys.conserved.end(), right.begin(), right.end());
            if (!left.empty()) {
                sys.involution_blocks.push_back(left);
                sys.involution_blocks.push_back(right);
            }

            sys.rank_set.push_back(sys.hamiltonian);
            for (int m = 2; m <= cfg.n; ++m)
                sys.rank_set.push_back(
                    {tower_labels("Cz", m), sl2z::deformed_left_integral(params, m)});
            for (int m = 2; m <= cfg.n - 1; ++m)
                sys.rank_set.push_back(
                    {tower_labels("Iz", m), sl2z::deformed_right_integral(params, m)});
            sys.expected_rank = cfg.n == 1 ? 1 : 2 * cfg.n - 2;
            if (cfg.n >= 2)
                sys.left_right = {
                    {tower_labels("Cz", cfg.n), sl2z::deformed_left_integral(params, cfg.n)},
                    {tower_labels("Iz", cfg.n), sl2z::deformed_right_integral(params, cfg.n)}};

            sys.limits.push_back({"Hz", "z", hamiltonian_at,
                                  general ? sl2::generalized_hamiltonian(
                                                params.base,
                                                make_f_choice(cfg.f_choice, cfg.omega2, 0.0))
                                          : sl2::sw_hamiltonian(params.base)});
            for (int m = 2; m <= cfg.n; ++m) {
                sys.limits.push_back({tower_labels("Cz", m), "z",
                                      [cfg, m](double zv) {
                                          sl2z::Params pz{{cfg.n, cfg.omega2, cfg.b}, zv};
                                          return sl2z::deformed_left_integral(pz, m);
                                      },
                                      sl2::left_integral(params.base, m)});
            }
            sys.errata_notes.push_back(kGeneratorLabelNote);
            sys.errata_notes.push_back(kCrossTowerNote);
            break;
        }

        case Family::stackel: {
            stackel::System st{{{cfg.n, cfg.omega2, cfg.b}, cfg.z}};
            sl2z::Params params = st.params;
            sys.hamiltonian = {"Hst", stackel::hamiltonian(st)};
            std::vector<verify::Labeled> left, right;
            for (int m = 2; m <= cfg.n; ++m)
                left.push_back({tower_labels("Cz", m), sl2z::deformed_left_integral(params, m)});
            for (int m = 2; m <= cfg.n; ++m)
                right.push_back({tower_labels("Iz", m), sl2z::deformed_right_integral(params, m)});
            std::vector<verify::Labeled> separation;
            for (int jj = 2; jj <= cfg.n; ++jj)
                separation.push_back({tower_labels("Z", jj), stackel::z_integral(st, jj)});
            sys.conserved = left;
            sys.conserved.insert(sys.conserved.end(), right.begin(), right.end());
            sys.conserved.insert(sys.conserved.end(), separation.begin(), separation.end());
            sys.involution_blocks.push_back(left);
            sys.involution_blocks.push_back(right);
            sys.involution_blocks.push_back(separation);

            sys.rank_set.push_back(sys.hamiltonian);
            for (int m = 2; m <= cfg.n; ++m)
                sys.rank_set.push_back(
                    {tower_labels("Cz", m), sl2z::deformed_left_integral(params, m)});
            for (int m = 2; m <= cfg.n - 1; ++m)
                sys.rank_set.push_back(
                    {tower_labels("Iz", m), sl2z::deformed_right_integral(params, m)});
            sys.expected_rank = 2 * cfg.n - 2;
            sys.rank_set_extended = sys.rank_set;
            sys.rank_set_extended.push_back({"Z(2)", stackel::z_integral(st, 2)});
            sys.expected_rank_extended = 2 * cfg.n - 1;
            sys.left_right = {
                {tower_labels("Cz", cfg.n), sl2z::deformed_left_integral(params, cfg.n)},
                {tower_labels("Iz", cfg.n), sl2z::deformed_right_integral(params, cfg.n)}};

            sys.limits.push_back({"Hst", "z",
                                  [cfg](double zv) {
                                      stackel::System at{{{cfg.n, cfg.omega2, cfg.b}, zv}};
                                      return stackel::hamiltonian(at);
                                  },
                                  sl2::sw_hamiltonian(params.base)});
            for (int jj = 2; jj <= cfg.n; ++jj) {
                sys.limits.push_back({tower_labels("Z", jj), "z",
                                      [cfg, jj](double zv) {
                                          stackel::System at{{{cfg.n, cfg.omega2, cfg.b}, zv}};
                                          return stackel::z_integral(at, jj);
                                      },
                                      stackel::z_integral_limit(st, jj)});
            }
            sys.errata_notes.push_back(kGeneratorLabelNote);
            sys.errata_notes.push_back(kCrossTowerNote);
            sys.errata_notes.push_back(kDeterminantSignNote);
            break;
        }

        case Family::comodule: {
            comodule::Params params{cfg.sigma, cfg.lambda1, cfg.lambda2, cfg.b1};
            sys.hamiltonian = {"Hsigma", comodule::h_sigma(params)};
            sys.conserved.push_back({"Csigma", comodule::c_sigma(params)});
            sys.involution_blocks.push_back(sys.conserved);  // singleton, vacuous by design

            sys.rank_set.push_back(sys.hamiltonian);
            sys.rank_set.push_back({"Csigma", comodule::c_sigma(params)});
            sys.expected_rank = 2;

            auto at_sigma = [cfg](double s) {
                return comodule::Params{s, cfg.lambda1, cfg.lambda2, cfg.b1};
            };
            sys.limits.push_back({"Hsigma", "sigma",
                                  [at_sigma](double s) { return comodule::h_sigma(at_sigma(s)); },
                                  comodule::h_limit(at_sigma(0.0))});
            sys.limits.push_back({"Csigma", "sigma",
                                  [at_sigma](double s) { return comodule::c_sigma(at_sigma(s)); },
                                  comodule::c_sigma(at_sigma(0.0))});

            const double margin_coef = cfg.sigma * cfg.lambda2;
            sys.accept = [margin_coef](const PhasePoint& x) {
                return std::abs(1.0 + margin_coef * x.p[1]) >= 0.3;
            };
            sys.errata_notes.push_back(kCasimirProductNote);
            break;
        }
    }
    return sys;
}

}  // namespace koalint::config
