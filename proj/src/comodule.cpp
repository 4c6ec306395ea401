#include "koalint/comodule.hpp"

namespace koalint::comodule {

void validate(const Params&) {}

namespace {

std::vector<Guard> family_guards(const Params& params) {
    std::vector<Guard> g;
    if (params.b1 != 0.0) g.push_back({Guard::Kind::coordinate_nonzero, 0, 0.0});
    if (params.sigma * params.lambda2 != 0.0)
        g.push_back({Guard::Kind::momentum_denominator, 1, params.sigma * params.lambda2});
    return g;
}

std::vector<Guard> denominator_guard(const Params& params) {
    std::vector<Guard> g;
    if (params.sigma * params.lambda2 != 0.0)
        g.push_back({Guard::Kind::momentum_denominator, 1, params.sigma * params.lambda2});
    return g;
}

}  // namespace

Observable h_sigma(const Params& params) {
    validate(params);
    return make_observable(
        2,
        [sl2 = params.sigma * params.lambda2, l1 = params.lambda1,
         b1 = params.b1]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            T den = 1.0 + sl2 * p[1];
            T kin1 = 0.5 * (p[0] * p[0]);  // single-site radial energy, particle 1
            if (b1 != 0.0) kin1 += b1 / (q[0] * q[0]);
            T dprime = l1 * l1 - 2.0 * (q[0] * p[0]);

            T block0 = 0.5 * (p[0] * p[0] + p[1] * p[1]);
            if (b1 != 0.0) block0 += b1 / (q[0] * q[0]);
            block0 += (q[0] * q[0]) / ((2.0 * den) * den) + (q[1] * q[1]) * 0.5;

            T block1 = 2.0 * kin1 * p[1] + (q[1] * dprime) / (2.0 * den);
            T block2 = kin1 * (p[1] * p[1]) + (dprime * dprime) / (((8.0 * den) * den));
            return block0 + sl2 * block1 + (sl2 * sl2) * block2;
        },
        family_guards(params));
}

std::map<std::string, Observable> coaction_images(const Params& params) {
    validate(params);
    const double sg = params.sigma;
    const double l1 = params.lambda1;
    const double l2 = params.lambda2;
    const double b1 = params.b1;

    std::map<std::string, Observable> img;

    img.emplace("M", constant_observable(2, l1 * l1 + l2 * l2));

    std::vector<Guard> hg;
    if (b1 != 0.0) hg.push_back({Guard::Kind::coordinate_nonzero, 0, 0.0});
    img.emplace("H", make_observable(
                         2,
                         [sg, l2, b1]<class T>(std::span<const T> q, std::span<const T> p) -> T {
                             T first = 0.5 * (p[0] * p[0]);
                             if (b1 != 0.0) first += b1 / (q[0] * q[0]);
                             T den = 1.0 + (sg * l2) * p[1];
                             return 0.5 * (p[1] * p[1]) + first * (den * den);
                         },
                         hg));

    img.emplace("D", make_observable(
                         2,
                         [sg, l1, l2]<class T>(std::span<const T> q, std::span<const T> p) -> T {
                             T den = 1.0 + (sg * l2) * p[1];
                             return -(p[1] * q[1]) - (p[0] * q[0]) / den -
                                    (0.5 * (l1 * l1)) * ((sg * l2) * p[1]) / den;
                         },
                         denominator_guard(params)));

    img.emplace("C", make_observable(
                         2,
                         [sg, l1, l2]<class T>(std::span<const T> q, std::span<const T> p) -> T {
                             T den = 1.0 + (sg * l2) * p[1];
                             T dprime = 0.5 * (l1 * l1) - p[0] * q[0];
                             return 0.5 * (q[1] * q[1]) + (0.5 * (q[0] * q[0])) / (den * den) +
                                    sg * dprime * (l2 * q[1]) / den +
                                    (0.5 * (sg * sg)) * (dprime * dprime) * (l2 * l2) / (den * den);
                         },
                         denominator_guard(params)));

    img.emplace("P", make_observable(
                         2, [sg, l1, l2]<class T>(std::span<const T>, std::span<const T> p) -> T {
                             return l2 * p[1] + l1 * p[0] + sg * ((l1 * p[0]) * (l2 * p[1]));
                         }));

    img.emplace("K", make_observable(
                         2,
                         [sg, l1, l2]<class T>(std::span<const T> q, std::span<const T> p) -> T {
                             T den = 1.0 + (sg * l2) * p[1];
                             T dprime = 0.5 * (l1 * l1) - p[0] * q[0];
                             return l2 * q[1] + (l1 * q[0]) / den + sg * dprime * (l2 * l2) / den;
                         },
                         denominator_guard(params)));

    return img;
}

Observable c_sigma(const Params& params) {
    auto img = coaction_images(params);
    const Observable& d = img.at("D");
    const Observable& h = img.at("H");
    const Observable& c = img.at("C");
    return 0.25 * (d * d) - h * c;
}

Observable h_limit(const Params& params) {
    validate(params);
    std::vector<Guard> g;
    if (params.b1 != 0.0) g.push_back({Guard::Kind::coordinate_nonzero, 0, 0.0});
    return make_observable(
        2,
        [b1 = params.b1]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            T block0 = 0.5 * (p[0] * p[0] + p[1] * p[1]);
            if (b1 != 0.0) block0 += b1 / (q[0] * q[0]);
            block0 += (q[0] * q[0]) / 2.0 + (q[1] * q[1]) * 0.5;
            return block0;
        },
        std::move(g));
}

Observable c_limit(const Params& params) {
    validate(params);
    std::vector<Guard> g;
    if (params.b1 != 0.0) g.push_back({Guard::Kind::coordinate_nonzero, 0, 0.0});
    return make_observable(
        2,
        [b1 = params.b1]<class T>(std::span<const T> q, std::span<const T> p) -> T {
            T ang = p[1] * q[0] - p[0] * q[1];
            T acc = -0.25 * (ang * ang);
            if (b1 != 0.0) acc = acc - (0.5 * b1) * (1.0 + (q[1] * q[1]) / (q[0] * q[0]));
            return acc;
        },
        std::move(g));
}

}  // namespace koalint::comodule
