#include "liouville/convexity.hpp"

#include "liouville/errors.hpp"
#include "liouville/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

namespace liouville {

namespace {

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(10);
    os << x;
    return os.str();
}

template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
    threads = std::max(1, threads);
    std::exception_ptr err;
    std::mutex m;
    auto work = [&](int w) {
        for (std::size_t j = w; j < n; j += threads) {
            try {
                body(j);
            } catch (...) {
                std::lock_guard<std::mutex> lock(m);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    if (err) std::rethrow_exception(err);
}

bool is_rotation(RegionKind k) { return k == RegionKind::lower_rotation || k == RegionKind::upper_rotation; }

// f(t, 1 - t) over [0, 1], split where the denominator 1 + t - E(1 - t) turns over
template <class F>
double unit_integral(F&& f, double E) {
    auto piece = [&](double a, double b) {
        return quad::tanh_sinh(
                   [&](double x, double xc) {
                       // xc is the signed distance to the nearer endpoint
                       double t = x, omt = 1 - x;
                       if (a == 0 && xc < 0) t = -xc;
                       if (b == 1 && xc > 0) omt = xc;
                       return f(t, omt);
                   },
                   a, b, 1e-14)
            .value;
    };
    const double ts = (1 - E) / (1 + E);
    if (ts >= 0.25) return piece(0, 1);
    return piece(0, ts) + piece(ts, 1);
}

}  // namespace

double d2E_dI2(const ActionMap& map, int region, double E) {
    const double d1 = map.dIdE(region, E);
    return -map.d2IdE2(region, E) / (d1 * d1 * d1);
}

double d2IdE2_richardson(const ActionMap& map, int region, double E, double h) {
    auto D = [&](double s) { return (map.dIdE(region, E + s) - map.dIdE(region, E - s)) / (2 * s); };
    const double d1 = D(h), d2 = D(h / 2), d4 = D(h / 4);
    const double r1 = (4 * d2 - d1) / 3, r2 = (4 * d4 - d2) / 3;
    return (16 * r2 - r1) / 15;
}

std::string curvature_label(Curvature c) {
    switch (c) {
        case Curvature::convex: return "convex";
        case Curvature::concave: return "concave";
        default: return "inflection-flag";
    }
}

ConvexityProfile convexity_profile(const ActionMap& map, int region, const std::vector<double>& energies,
                                   int threads) {
    ConvexityProfile prof;
    prof.region = region;
    prof.samples.resize(energies.size());
    parallel_for(energies.size(), threads, [&](std::size_t j) {
        ConvexitySample s;
        s.E = energies[j];
        s.I = map.action(region, s.E);
        s.dIdE = map.dIdE(region, s.E);
        s.d2IdE2 = map.d2IdE2(region, s.E);
        s.d2EdI2 = -s.d2IdE2 / (s.dIdE * s.dIdE * s.dIdE);
        s.verdict = s.d2EdI2 > 0 ? Curvature::convex : Curvature::concave;
        prof.samples[j] = s;
    });
    for (std::size_t j = 1; j < prof.samples.size(); ++j) {
        auto& a = prof.samples[j - 1];
        auto& b = prof.samples[j];
        if ((a.d2EdI2 > 0) != (b.d2EdI2 > 0)) {
            prof.inflections.push_back(0.5 * (a.E + b.E));
            b.verdict = Curvature::inflection;
        }
    }
    return prof;
}

std::vector<double> window_grid(const ActionMap& map, int region, int points, double margin) {
    const auto w = map.window(region);
    const double lo = w.E_minus + margin, hi = w.E_plus - margin;
    if (!(hi > lo) || points < 1) fail("InvalidArgument", "empty energy grid");
    std::vector<double> E(points);
    for (int j = 0; j < points; ++j) E[j] = points == 1 ? 0.5 * (lo + hi) : lo + (hi - lo) * j / (points - 1);
    return E;
}

OuterReport outer_convexity_check(const ActionMap& map, int region, const std::vector<double>& energies,
                                  bool throw_on_violation) {
    if (!is_rotation(map.kind(region))) fail("InvalidArgument", "outer check needs a rotation region");
    OuterReport rep;
    rep.region = region;
    rep.min_d2EdI2 = std::numeric_limits<double>::infinity();
    for (double E : energies) {
        const double d1 = map.dIdE(region, E), d2 = map.d2IdE2(region, E);
        const double v = -d2 / (d1 * d1 * d1);
        const double jr = std::pow(2 * d1, 3) / (-4 * d2);
        rep.min_d2EdI2 = std::min(rep.min_d2EdI2, v);
        rep.max_jensen_ratio = std::max(rep.max_jensen_ratio, jr);
        if (v < 2 * (1 - 1e-12)) rep.failures.push_back("d2E/dI2 = " + fmt(v) + " < 2 at E = " + fmt(E));
        if (!(jr <= 1 + 1e-12)) rep.failures.push_back("(2I')^3 > -4I'' at E = " + fmt(E));
    }
    if (!rep.ok() && throw_on_violation) fail("BoundViolation", rep.failures.front());
    return rep;
}

double a0_first(double E) {
    if (!(E > -1 && E < 1)) fail("OutOfWindow", "a0 needs -1 < E < 1");
    const double v = unit_integral(
        [&](double t, double omt) { return 1 / (std::sqrt(t * omt) * std::sqrt((1 - E) + (1 + E) * t)); }, E);
    return v / std::numbers::pi;
}

double a0_second(double E) {
    if (!(E > -1 && E < 1)) fail("OutOfWindow", "a0 needs -1 < E < 1");
    const double v = unit_integral(
        [&](double t, double omt) { return std::sqrt(omt / t) / std::pow((1 - E) + (1 + E) * t, 1.5); }, E);
    return v / (2 * std::numbers::pi);
}

double a0_ratio(double E) {
    const double a1 = a0_first(E);
    return a0_second(E) / (a1 * a1 * a1);
}

InnerReport inner_cosine_bound(const PeriodicPotential& G0, const std::vector<double>& energies,
                               bool throw_on_violation) {
    InnerReport rep;
    const auto cl = cosine_like_params(G0, 1.0);
    rep.g_hat = cl.g_hat;
    rep.hypothesis_met = cl.g_hat <= std::ldexp(1.0, -40);
    rep.exact_cosine = cl.g_hat <= 1e-14;

    const auto ur = rescale_to_unit(G0);
    const auto Hv = make_standard_form(ur.V);
    const ActionMap unit(Hv);
    if (unit.n_wells() != 1) fail("NotCosineLike", "rescaled potential has more than one well");

    rep.max_d2EdI2 = -std::numeric_limits<double>::infinity();
    for (double E : energies) {
        InnerSample s;
        s.E = E;
        s.L = ur.L(E);
        if (!(s.L > -1 && s.L < 1)) fail("OutOfWindow", "energy " + fmt(E) + " outside the well");
        const double i1 = unit.dIdE(1, s.L), i2 = unit.d2IdE2(1, s.L);
        const double A1 = a0_first(s.L), A2 = a0_second(s.L);
        s.d2EdI2 = -i2 / (i1 * i1 * i1);
        s.sandwich_lo = std::min(i1 / A1, i2 / A2);
        s.sandwich_hi = std::max(i1 / A1, i2 / A2);
        s.bound = -(4.0 / 27.0) * (A2 / (A1 * A1 * A1));
        rep.max_d2EdI2 = std::max(rep.max_d2EdI2, s.d2EdI2);
        if (s.sandwich_lo < 0.5 || s.sandwich_hi > 1.5)
            rep.failures.push_back("sandwich broken at E = " + fmt(E));
        if (s.d2EdI2 > -1.0 / 27.0) rep.failures.push_back("d2E/dI2 = " + fmt(s.d2EdI2) + " > -1/27 at E = " + fmt(E));
        if (rep.exact_cosine && s.d2EdI2 > -0.25 * (1 - 1e-9))
            rep.failures.push_back("d2E/dI2 = " + fmt(s.d2EdI2) + " > -1/4 at E = " + fmt(E));
        rep.samples.push_back(s);
    }
    if (!rep.ok() && throw_on_violation) fail("BoundViolation", rep.failures.front());
    return rep;
}

RescaledActionCheck rescaled_action(const PeriodicPotential& G, int region, double E) {
    const auto ur = rescale_to_unit(G);
    const ActionMap direct(make_standard_form(G));
    const ActionMap unit(make_standard_form(ur.V));
    RescaledActionCheck c;
    c.direct = direct.action(region, E);
    c.rescaled = std::sqrt((ur.max_value - ur.min_value) / 2) * unit.action(region, ur.L(E));
    c.rel_gap = std::abs(c.direct - c.rescaled) / std::max(std::abs(c.direct), 1e-300);
    return c;
}

}  // namespace liouville
