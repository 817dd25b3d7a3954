#include "liouville/action_map.hpp"

#include "liouville/errors.hpp"
#include "liouville/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace liouville {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Branch {
    double P = 0, dP = 1, d2P = 0;
};

// Real momentum branch with its first two derivatives in s.
Branch real_branch(double s, const NuSlice::At& nu) {
    Branch b;
    double Pt = 0;
    bool done = false;
    for (int it = 0; it < 200 && !done; ++it) {
        double nv = nu.value(s + Pt);
        if (!(1 + nv > 0)) fail("ContractionFailed", "1 + nu is not positive");
        double Ptn = (1.0 / std::sqrt(1.0 + nv) - 1.0) * s;
        done = std::abs(Ptn - Pt) <= 1e-16 * (1 + std::abs(s));
        Pt = Ptn;
    }
    if (!done) fail("ContractionFailed", "momentum branch contraction did not converge");
    double P = s + Pt;
    for (int it = 0; it < 3; ++it) {
        double n0 = nu.value(P), n1 = nu.d1(P);
        double r = std::sqrt(1 + n0);
        double sig = P * r, dsig = r + P * n1 / (2 * r);
        double step = (sig - s) / dsig;
        P -= step;
        if (std::abs(step) <= 1e-17 * (1 + std::abs(P))) break;
    }
    const double n0 = nu.value(P), n1 = nu.d1(P), n2 = nu.d2(P);
    const double r = std::sqrt(1 + n0);
    const double dsig = r + P * n1 / (2 * r);
    const double d2sig = n1 / r - 0.25 * P * n1 * n1 / (r * r * r) + 0.5 * P * n2 / r;
    b.P = P;
    b.dP = 1.0 / dsig;
    b.d2P = -d2sig * b.dP * b.dP * b.dP;
    return b;
}

}  // namespace

RegionKind region_kind(int i, int n_wells) {
    if (i < 0 || i > 2 * n_wells) throw ConfigError("InvalidArgument", "region index out of range");
    if (i == 0) return RegionKind::lower_rotation;
    if (i == 2 * n_wells) return RegionKind::upper_rotation;
    return i % 2 ? RegionKind::libration : RegionKind::annulus;
}

std::string region_label(RegionKind k) {
    switch (k) {
        case RegionKind::lower_rotation: return "rotation_lower";
        case RegionKind::upper_rotation: return "rotation_upper";
        case RegionKind::libration: return "libration";
        default: return "annulus";
    }
}

// ---------------------------------------------------------------- windows

namespace {

std::pair<int, int> enclosing_maxima(int i, const CriticalSet& reference) {
    const int j = i / 2, N = reference.n_wells();
    int jm = -1, jp = -1;
    for (int k = j - 1; k >= 0 && jm < 0; --k)
        if (reference.value(2 * k) > reference.value(2 * j)) jm = k;
    for (int k = j + 1; k <= N && jp < 0; ++k)
        if (reference.value(2 * k) > reference.value(2 * j)) jp = k;
    return {2 * jm, 2 * jp};
}

}  // namespace

EnergyWindow energy_window(int i, const CriticalSet& crit, const CriticalSet& reference, double rotation_cap) {
    const int N = crit.n_wells();
    EnergyWindow w;
    w.region = i;
    switch (region_kind(i, N)) {
        case RegionKind::lower_rotation:
        case RegionKind::upper_rotation:
            w.E_minus = crit.value(0);
            w.minus_anchor = i;
            w.E_plus = rotation_cap;
            w.plus_anchor = -1;
            break;
        case RegionKind::libration:
            w.E_minus = crit.value(i);
            w.minus_anchor = i;
            w.plus_anchor = crit.value(i - 1) <= crit.value(i + 1) ? i - 1 : i + 1;
            w.E_plus = crit.value(w.plus_anchor);
            break;
        case RegionKind::annulus: {
            auto [am, ap] = enclosing_maxima(i, reference);
            w.E_minus = crit.value(i);
            w.minus_anchor = i;
            w.plus_anchor = crit.value(am) <= crit.value(ap) ? am : ap;
            w.E_plus = crit.value(w.plus_anchor);
            break;
        }
    }
    return w;
}

EnergyWindow energy_window(int i, const ContinuedCriticals& crit, const std::vector<double>& p_hat,
                           const StandardCharacteristics& chars) {
    return energy_window(i, crit.at(p_hat), critical_set(crit.reference()),
                         chars.R0 * chars.R0 + chars.R0 * chars.r0);
}

std::pair<double, double> turning_points(double E, double theta_left_max, double theta_min, double theta_right_max,
                                         const PeriodicPotential& G) {
    const double Emin = G(theta_min);
    if (!(E > Emin) || !(E < G(theta_left_max)) || !(E < G(theta_right_max)))
        fail("OutOfWindow", "level is not strictly inside the well");
    auto solve = [&](double a, double b) {
        // root of E - G on the monotone branch [a, b], anchored at the minimum
        double ha = (E - Emin) - G.difference(theta_min, a - theta_min);
        double lo = a, hi = b, x = 0.5 * (a + b);
        for (int it = 0; it < 200; ++it) {
            double hx = (E - Emin) - G.difference(theta_min, x - theta_min);
            if (hx == 0) return x;
            ((hx < 0) == (ha < 0) ? lo : hi) = x;
            double xn = x + hx / G.derivative_at(x, 1);
            if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
            if (std::abs(xn - x) <= 1e-16 * (1 + std::abs(x)) || hi - lo <= 1e-15 * (1 + std::abs(x))) return xn;
            x = xn;
        }
        return x;
    };
    return {solve(theta_left_max, theta_min), solve(theta_min, theta_right_max)};
}

// ---------------------------------------------------------------- momentum

cplx momentum_branch(cplx z, const NuSlice::At& nu) {
    bool zero = std::all_of(nu.c.begin(), nu.c.end(), [](double c) { return c == 0; });
    if (zero) return z;
    cplx Pt = 0;
    bool done = false;
    for (int it = 0; it < 200 && !done; ++it) {
        cplx Ptn = (1.0 / std::sqrt(1.0 + nu.value(z + Pt)) - 1.0) * z;
        done = std::abs(Ptn - Pt) <= 1e-16 * (1 + std::abs(z));
        Pt = Ptn;
    }
    if (!done) fail("ContractionFailed", "momentum branch contraction did not converge");
    cplx P = z + Pt;
    for (int it = 0; it < 3; ++it) {
        cplx r = std::sqrt(1.0 + nu.value(P));
        cplx step = (P * r - z) / (r + P * nu.d1(P) / (2.0 * r));
        P -= step;
    }
    return P;
}

cplx momentum_branch(cplx z, double q1, const std::vector<double>& p_hat, const StandardFormHamiltonian& H) {
    return momentum_branch(z, H.nu->slice(p_hat).at(q1));
}

// ---------------------------------------------------------------- even composition

EvenSqrtComposition::EvenSqrtComposition(std::function<cplx(cplx)> g, double radius, int samples)
    : g_(std::move(g)), r_(radius) {
    double scale = 0, odd = 0;
    for (int j = 1; j <= 32; ++j) {
        double x = r_ * j / 32;
        cplx a = g_(x), b = g_(-x);
        scale = std::max({scale, std::abs(a), std::abs(b)});
        odd = std::max(odd, std::abs(a - b));
    }
    if (odd > 1e-12 * std::max(1.0, scale)) fail("NotEven", "function is not even on the symmetric grid");
    std::vector<cplx> vals(samples);
    for (int m = 0; m < samples; ++m) vals[m] = g_(std::polar(r_, kTwoPi * m / samples));
    for (int k = 0; 2 * k < samples / 2; ++k) {
        cplx s = 0;
        for (int m = 0; m < samples; ++m) s += vals[m] * std::polar(1.0, -kTwoPi * 2 * k * m / samples);
        coeffs_.push_back(s / static_cast<double>(samples) / std::pow(r_, 2 * k));
    }
}

cplx EvenSqrtComposition::series(cplx v) const {
    cplx s = 0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) s = s * v + coeffs_[k];
    return s;
}

cplx EvenSqrtComposition::operator()(cplx v) const {
    if (std::abs(v) < 0.25 * r_ * r_) return series(v);
    return g_(std::sqrt(v));
}

EvenSqrtComposition even_sqrt_compose(std::function<cplx(cplx)> g, double radius) {
    return EvenSqrtComposition(std::move(g), radius);
}

// ---------------------------------------------------------------- ActionMap

ActionMap::ActionMap(PeriodicPotential G, NuSlice nu, CriticalSet crit, CriticalSet reference, double rotation_cap,
                     const ActionMapOptions& opts)
    : G_(std::move(G)), nu_(std::move(nu)), crit_(std::move(crit)), reference_(std::move(reference)),
      cap_(rotation_cap), scale_(opts.energy_scale > 0 ? opts.energy_scale : 1.0), opts_(opts) {}

namespace {

MorseProfile reference_profile(const StandardFormHamiltonian& H) {
    MorseOptions mo;
    mo.require_distinct = false;
    return analyze_morse(H.G0, mo);
}

}  // namespace

ActionMap::ActionMap(const StandardFormHamiltonian& H, const ContinuedCriticals& cc, const std::vector<double>& p_hat,
                     const ActionMapOptions& opts)
    : ActionMap(H.G->slice(p_hat), H.nu->slice(p_hat), cc.at(p_hat), critical_set(cc.reference()),
                H.chars.R0 * H.chars.R0 + H.chars.R0 * H.chars.r0, opts) {
    scale_ = opts.energy_scale > 0 ? opts.energy_scale : H.chars.eps;
}

ActionMap::ActionMap(const StandardFormHamiltonian& H, const std::vector<double>& p_hat, const ActionMapOptions& opts)
    : ActionMap(H, ContinuedCriticals(H, reference_profile(H)), p_hat, opts) {}

EnergyWindow ActionMap::window(int i) const { return energy_window(i, crit_, reference_, cap_); }

double ActionMap::lambda_max() const {
    double lm = std::numeric_limits<double>::infinity();
    for (int i = 1; i < 2 * n_wells(); ++i) {
        auto w = window(i);
        lm = std::min(lm, (w.E_plus - w.E_minus) / scale_);
    }
    return lm;
}

Level ActionMap::near_plus(int i, double z) const {
    auto w = window(i);
    if (w.plus_anchor < 0) return Level{w.E_plus - scale_ * z, -1, 0};
    return Level{w.E_plus - scale_ * z, w.plus_anchor, -scale_ * z};
}

Level ActionMap::near_minus(int i, double z) const {
    auto w = window(i);
    return Level{w.E_minus + scale_ * z, w.minus_anchor, scale_ * z};
}

double ActionMap::delta(const Level& L, int c) const {
    if (L.anchor < 0) return L.E - crit_.value(c);
    const int n = static_cast<int>(crit_.theta.size());
    if (((L.anchor - c) % n + n) % n == 0) return L.offset;
    return (crit_.value(L.anchor) - crit_.value(c)) + L.offset;
}

void ActionMap::check_window(int i, const Level& L) const {
    auto w = window(i);
    double below = delta(L, w.minus_anchor);
    double above = w.plus_anchor < 0 ? w.E_plus - L.E : -delta(L, w.plus_anchor);
    if (below < 0 || above < 0) fail("OutOfWindow", "energy outside the window of region " + std::to_string(i));
}

double ActionMap::root_between(const Level& L, int c1, int c2) const {
    const double t1 = crit_.angle(c1), t2 = crit_.angle(c2);
    const double h1 = delta(L, c1), h2 = delta(L, c2);
    if (h1 == 0) return t1;
    if (h2 == 0) return t2;
    if ((h1 < 0) == (h2 < 0)) fail("OutOfWindow", "no turning point between the given critical points");
    auto h = [&](double x) {
        if (x - t1 <= t2 - x) return h1 - G_.difference(t1, x - t1);
        return h2 - G_.difference(t2, x - t2);
    };
    double lo = t1, hi = t2, x = 0.5 * (t1 + t2);
    for (int it = 0; it < 300; ++it) {
        double hx = h(x);
        if (hx == 0) return x;
        ((hx < 0) == (h1 < 0) ? lo : hi) = x;
        double xn = x + hx / G_.derivative_at(x, 1);
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::abs(xn - x) <= 2e-16 * std::abs(x) || hi - lo <= 2e-16 * std::abs(x)) return xn;
        x = xn;
    }
    return x;
}

std::pair<double, double> ActionMap::turning_points(int i, const Level& L) const {
    switch (kind(i)) {
        case RegionKind::libration:
            return {root_between(L, i - 1, i), root_between(L, i, i + 1)};
        case RegionKind::annulus: {
            auto [am, ap] = enclosing_maxima(i, reference_);
            return {root_between(L, am, am + 1), root_between(L, ap - 1, ap)};
        }
        default:
            fail("OutOfWindow", "rotation regions have no turning points");
    }
}

double ActionMap::integrate(int i, const Level& L, Quantity q) const {
    check_window(i, L);
    const RegionKind k = kind(i);
    const bool rotation = k == RegionKind::lower_rotation || k == RegionKind::upper_rotation;
    if (q == Quantity::d2IdE2 && !rotation) fail("Unsupported", "analytic second derivative only on rotation regions");

    struct Anchor {
        double angle;
        int crit;  // -1 for a turning point
    };
    struct Piece {
        Anchor a, b;
    };
    std::vector<Piece> pieces;
    auto C = [&](int c) { return Anchor{crit_.angle(c), c}; };
    if (rotation) {
        for (int c = 0; c < 2 * n_wells(); ++c) pieces.push_back({C(c), C(c + 1)});
    } else {
        int cl, cr;
        if (k == RegionKind::libration) {
            cl = i - 1;
            cr = i + 1;
        } else {
            std::tie(cl, cr) = enclosing_maxima(i, reference_);
        }
        auto [tl, tr] = turning_points(i, L);
        Anchor left = tl == crit_.angle(cl) ? C(cl) : Anchor{tl, -1};
        Anchor right = tr == crit_.angle(cr) ? C(cr) : Anchor{tr, -1};
        pieces.push_back({left, C(cl + 1)});
        for (int c = cl + 1; c < cr - 1; ++c) pieces.push_back({C(c), C(c + 1)});
        pieces.push_back({C(cr - 1), right});
    }

    const bool upper = k == RegionKind::upper_rotation;
    const bool lower = k == RegionKind::lower_rotation;
    const bool free_nu = nu_.is_zero();

    auto v_at = [&](const Anchor& a, double d) {
        double v = a.crit >= 0 ? delta(L, a.crit) - G_.difference(a.angle, d) : -G_.difference(a.angle, d);
        if (v <= 0) {
            v = std::max({std::abs(G_.derivative_at(a.angle, 1) * d), 0.5 * std::abs(G_.derivative_at(a.angle, 2)) * d * d,
                          1e-300});
        }
        return v;
    };

    auto integrand = [&](const Piece& pc, double x, double xc) {
        const Anchor& a = xc <= 0 ? pc.a : pc.b;
        const double v = v_at(a, -xc);
        const double sv = std::sqrt(v);
        if (free_nu) {
            switch (q) {
                case Quantity::action: return rotation ? sv / kTwoPi : sv / kPi;
                case Quantity::dIdE: return rotation ? 1.0 / (4 * kPi * sv) : 1.0 / (kTwoPi * sv);
                default: return -1.0 / (8 * kPi * v * sv);
            }
        }
        const auto nu = nu_.at(x);
        if (upper) {
            Branch b = real_branch(sv, nu);
            switch (q) {
                case Quantity::action: return b.P / kTwoPi;
                case Quantity::dIdE: return b.dP / (2 * sv) / kTwoPi;
                default: return (b.d2P / (4 * v) - b.dP / (4 * v * sv)) / kTwoPi;
            }
        }
        if (lower) {
            Branch b = real_branch(-sv, nu);
            switch (q) {
                case Quantity::action: return -b.P / kTwoPi;
                case Quantity::dIdE: return b.dP / (2 * sv) / kTwoPi;
                default: return (-b.d2P / (4 * v) - b.dP / (4 * v * sv)) / kTwoPi;
            }
        }
        Branch bp = real_branch(sv, nu), bm = real_branch(-sv, nu);
        if (q == Quantity::action) return (bp.P - bm.P) / kTwoPi;
        return (bp.dP + bm.dP) / (2 * sv) / kTwoPi;
    };

    double total = 0;
    for (const auto& pc : pieces) {
        if (pc.b.angle <= pc.a.angle) continue;
        auto r = quad::tanh_sinh([&](double x, double xc) { return integrand(pc, x, xc); }, pc.a.angle, pc.b.angle,
                                 opts_.quad_tol);
        if (!(r.error <= 1e-8 * std::max(r.l1, 1e-300)) && r.l1 > 0)
            fail("QuadratureTolNotMet", "quadrature error estimate " + std::to_string(r.error));
        total += r.value;
    }
    return total;
}

double ActionMap::action(int i, const Level& L) const { return integrate(i, L, Quantity::action); }

double ActionMap::dIdE(int i, const Level& L) const { return integrate(i, L, Quantity::dIdE); }

double ActionMap::d2IdE2(int i, const Level& L) const {
    const RegionKind k = kind(i);
    if (k == RegionKind::lower_rotation || k == RegionKind::upper_rotation)
        return integrate(i, L, Quantity::d2IdE2);
    auto w = window(i);
    const double below = delta(L, w.minus_anchor), above = -delta(L, w.plus_anchor);
    const double h0 = std::min(opts_.richardson_step * scale_, std::min(below, above) / 8);
    auto shifted = [&](double dE) {
        Level s = L;
        s.E += dE;
        s.offset += dE;
        return s;
    };
    auto D = [&](double h) { return (dIdE(i, shifted(h)) - dIdE(i, shifted(-h))) / (2 * h); };
    const double d1 = D(h0), d2 = D(h0 / 2), d3 = D(h0 / 4);
    const double r1 = (4 * d2 - d1) / 3, r2 = (4 * d3 - d2) / 3;
    return (16 * r2 - r1) / 15;
}

double ActionMap::period(int i, double E) const { return kTwoPi * dIdE(i, E); }

double ActionMap::energy_of_action(int i, double I) const {
    auto w = window(i);
    const Level lo_level{w.E_minus, w.minus_anchor, 0.0};
    const Level hi_level = w.plus_anchor < 0 ? Level{w.E_plus, -1, 0.0} : Level{w.E_plus, w.plus_anchor, 0.0};
    const double Ilo = kind(i) == RegionKind::libration ? 0.0 : action(i, lo_level);
    const double Ihi = action(i, hi_level);
    if (!(I >= Ilo && I <= Ihi)) fail("OutOfRange", "action outside the image of the window");
    if (I == Ilo) return w.E_minus;
    if (I == Ihi) return w.E_plus;
    double lo = w.E_minus, hi = w.E_plus;
    double E;
    if (kind(i) == RegionKind::libration || kind(i) == RegionKind::annulus)
        E = lo + (hi - lo) * (I - Ilo) / (Ihi - Ilo);
    else
        E = std::clamp(I * I, lo + 1e-3 * (hi - lo) * 0 + (hi - lo) * 1e-12, hi);
    const double escale = std::max(scale_, std::abs(E));
    for (int it = 0; it < 200; ++it) {
        if (!(E > lo && E < hi)) E = 0.5 * (lo + hi);
        const double f = action(i, E) - I;
        if (f == 0) return E;
        (f < 0 ? lo : hi) = E;
        const double df = dIdE(i, E);
        double En = E - f / df;
        if (!(En > lo && En < hi)) En = 0.5 * (lo + hi);
        if (std::abs(En - E) <= 1e-15 * std::max(escale, std::abs(E)) || hi - lo <= 1e-15 * std::max(escale, std::abs(E))) {
            E = En;
            break;
        }
        E = En;
    }
    if (std::abs(action(i, E) - I) > 1e-10 * std::max(1.0, I))
        fail("NoConvergence", "energy_of_action did not reach the tolerance");
    return E;
}

std::vector<int> ActionMap::separatrix_passages(int i, bool plus_edge) const {
    const RegionKind k = kind(i);
    const int n = 2 * n_wells();
    const double tol = 1e-12 * scale_;
    if (!plus_edge) {
        if (k == RegionKind::libration) return {};
        if (k == RegionKind::annulus) return {i, i};
        return {0};
    }
    if (k == RegionKind::lower_rotation || k == RegionKind::upper_rotation) return {};
    int a, b;
    if (k == RegionKind::libration) {
        a = i - 1;
        b = i + 1;
    } else {
        std::tie(a, b) = enclosing_maxima(i, reference_);
    }
    if ((a % n) == (b % n)) return {a % n, a % n};
    auto w = window(i);
    std::vector<int> out;
    for (int c : {a, b})
        if (std::abs(crit_.value(c) - w.E_plus) <= tol) out.push_back(c % n);
    return out;
}

// ---------------------------------------------------------------- tables and domains

ActionTable make_action_table(const ActionMap& map, int i, const std::vector<double>& energies,
                              const std::vector<double>& p_hat, int threads) {
    ActionTable t;
    t.region = i;
    t.p_hat = p_hat;
    t.samples.resize(energies.size());
    const RegionKind k = map.kind(i);
    t.orientation = k == RegionKind::lower_rotation   ? "rotation with p1 < 0 (q1 decreasing)"
                    : k == RegionKind::upper_rotation ? "rotation with p1 > 0 (q1 increasing)"
                                                      : "closed curve, clockwise in (q1, p1)";
    threads = std::max(1, threads);
    std::exception_ptr err;
    std::mutex m;
    auto work = [&](int w) {
        for (std::size_t j = w; j < energies.size(); j += threads) {
            try {
                ActionSample s;
                s.E = energies[j];
                s.I = map.action(i, s.E);
                s.dIdE = map.dIdE(i, s.E);
                s.T = 2 * kPi * s.dIdE;
                t.samples[j] = s;
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
    return t;
}

std::vector<RegionDomain> region_domains(double lambda, const ActionMap& map) {
    if (!(lambda >= 0) || lambda > map.lambda_max()) fail("LambdaOutOfRange", "lambda outside [0, lambda_max]");
    std::vector<RegionDomain> out;
    for (int i = 0; i < map.n_regions(); ++i) {
        RegionDomain d;
        d.region = i;
        const RegionKind k = map.kind(i);
        d.a_minus = k == RegionKind::libration ? 0.0 : map.action(i, map.near_minus(i, lambda));
        d.a_plus = map.action(i, map.near_plus(i, (k == RegionKind::libration || k == RegionKind::annulus) ? lambda : 0.0));
        out.push_back(d);
    }
    return out;
}

double measure_deficit(double lambda, const StandardFormHamiltonian& H, const ActionMapOptions& opts,
                       int points_per_dim) {
    if (!(lambda >= 0)) fail("LambdaOutOfRange", "lambda must be non-negative");
    ContinuedCriticals cc(H, reference_profile(H));
    std::vector<double> sup;
    for (auto& ph : hat_grid(H.chars, points_per_dim)) {
        ActionMap map(H, cc, ph, opts);
        auto d0 = region_domains(0.0, map);
        auto dl = region_domains(lambda, map);
        sup.resize(d0.size(), 0.0);
        for (std::size_t i = 0; i < d0.size(); ++i)
            sup[i] = std::max(sup[i], d0[i].a_plus - dl[i].a_plus + dl[i].a_minus - d0[i].a_minus);
    }
    double total = 0;
    for (double s : sup) total += s;
    return kTwoPi * H.chars.hat_measure() * total;
}

}  // namespace liouville
