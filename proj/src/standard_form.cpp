#include "liouville/standard_form.hpp"

#include "liouville/errors.hpp"
#include "liouville/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace liouville {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// k-th derivative in the first variable of a Fourier-Taylor table.
cplx dp1(const TaylorFourier& t, int k, const std::vector<cplx>& p, cplx q) {
    cplx s = 0;
    for (auto& term : t.terms()) {
        int a0 = term.powers[0];
        if (a0 < k) continue;
        double ff = 1;
        for (int j = 0; j < k; ++j) ff *= a0 - j;
        cplx m = ff;
        for (int e = 0; e < a0 - k; ++e) m *= p[0];
        for (std::size_t v = 1; v < p.size(); ++v)
            for (int e = 0; e < term.powers[v]; ++e) m *= p[v];
        s += m * term.coeff(q);
    }
    return s;
}

std::vector<cplx> join(cplx p1, const std::vector<cplx>& p_hat) {
    std::vector<cplx> p{p1};
    p.insert(p.end(), p_hat.begin(), p_hat.end());
    return p;
}

std::vector<cplx> to_complex(const std::vector<double>& x) { return {x.begin(), x.end()}; }

// Boundary of the complex rho-neighbourhood of [lo, hi].
std::vector<cplx> stadium(double lo, double hi, double rho, int n) {
    std::vector<cplx> pts;
    if (n <= 1 || rho == 0) {
        pts.push_back(0.5 * (lo + hi));
        return pts;
    }
    const double len = hi - lo, per = 2 * len + kTwoPi * rho;
    for (int j = 0; j < n; ++j) {
        double s = per * j / n;
        if (s < len) {
            pts.emplace_back(lo + s, rho);
        } else if (s < len + std::numbers::pi * rho) {
            double a = (s - len) / rho;
            pts.push_back(cplx(hi, 0) + std::polar(rho, std::numbers::pi / 2 - a));
        } else if (s < 2 * len + std::numbers::pi * rho) {
            pts.emplace_back(hi - (s - len - std::numbers::pi * rho), -rho);
        } else {
            double a = (s - 2 * len - std::numbers::pi * rho) / rho;
            pts.push_back(cplx(lo, 0) + std::polar(rho, -std::numbers::pi / 2 - a));
        }
    }
    return pts;
}

std::vector<std::vector<cplx>> tensor(const std::vector<std::vector<cplx>>& axes) {
    std::vector<std::vector<cplx>> out{{}};
    for (auto& ax : axes) {
        std::vector<std::vector<cplx>> next;
        for (auto& prefix : out)
            for (auto& x : ax) {
                auto v = prefix;
                v.push_back(x);
                next.push_back(v);
            }
        out = next;
    }
    return out;
}

std::vector<cplx> strip_edges(double s, int n) {
    std::vector<cplx> pts;
    for (int j = 0; j < n; ++j) {
        double x = kTwoPi * j / n;
        pts.emplace_back(x, s);
        pts.emplace_back(x, -s);
    }
    return pts;
}

}  // namespace

// ---------------------------------------------------------------- characteristics

double StandardCharacteristics::hat_measure() const {
    double m = 1;
    for (auto& b : hat_domain) m *= b[1] - b[0];
    return m;
}

std::vector<double> StandardCharacteristics::hat_center() const {
    std::vector<double> c;
    for (auto& b : hat_domain) c.push_back(0.5 * (b[0] + b[1]));
    return c;
}

double kappa_of(const StandardCharacteristics& c) {
    return std::max({4.0, 1.0 / c.s0, c.R0 / c.r0, c.eps / c.beta});
}

StandardCharacteristics characteristics_for(const PeriodicPotential& G0, double s0, double mu,
                                            std::vector<std::array<double, 2>> hat_domain) {
    StandardCharacteristics c;
    c.hat_domain = std::move(hat_domain);
    c.s0 = s0;
    c.mu = mu;
    c.eps = G0.sup_on_strip(s0, 1024);
    MorseOptions mo;
    mo.require_distinct = false;
    c.beta = analyze_morse(G0, mo).beta;
    c.r0 = c.R0 = 256.0 * std::sqrt(c.eps) * (1 + 1e-12);
    c.kappa = kappa_of(c);
    return c;
}

double StandardFormHamiltonian::value(double p1, const std::vector<double>& p_hat, double q) const {
    auto ph = to_complex(p_hat);
    return std::real((1.0 + nu->value(p1, ph, q)) * p1 * p1 + G->value(ph, q));
}

StandardFormHamiltonian make_standard_form(const PeriodicPotential& G0, const PeriodicPotential& nu, double s0) {
    StandardFormHamiltonian H;
    H.G0 = G0;
    H.G = constant_family(G0);
    H.nu = nu.is_zero() ? zero_nu() : nu_from_potential(nu);
    H.chars = characteristics_for(G0, s0, nu.is_zero() ? 0.0 : nu.sup_on_strip(s0, 1024));
    return H;
}

StandardFormHamiltonian pendulum(double eps) { return make_standard_form(PeriodicPotential::cosine(eps)); }

std::vector<std::vector<double>> hat_grid(const StandardCharacteristics& chars, int points) {
    std::vector<std::vector<double>> out{{}};
    for (auto& b : chars.hat_domain) {
        std::vector<std::vector<double>> next;
        for (auto& prefix : out)
            for (int j = 0; j < points; ++j) {
                auto v = prefix;
                v.push_back(points == 1 ? 0.5 * (b[0] + b[1]) : b[0] + (b[1] - b[0]) * j / (points - 1));
                next.push_back(v);
            }
        out = next;
    }
    return out;
}

ValidationReport validate_standard_form(const StandardFormHamiltonian& H, const SamplingSpec& grid) {
    ValidationReport rep;
    const auto& c = H.chars;
    const auto thetas = strip_edges(c.s0, grid.theta_points);

    std::vector<std::vector<cplx>> axes;
    for (auto& b : c.hat_domain) axes.push_back(stadium(b[0], b[1], c.r0, grid.p_hat_points));
    const auto hats = tensor(axes);

    rep.min_re_one_plus_nu = 1.0;
    if (!H.nu->is_zero()) {
        const auto p1s = stadium(-c.R0, c.R0, c.r0, grid.p1_points);
        rep.min_re_one_plus_nu = std::numeric_limits<double>::infinity();
        for (auto& ph : hats)
            for (auto& p1 : p1s)
                for (auto& th : thetas) {
                    cplx v = H.nu->value(p1, ph, th);
                    rep.sup_nu = std::max(rep.sup_nu, std::abs(v));
                    rep.min_re_one_plus_nu = std::min(rep.min_re_one_plus_nu, 1.0 + v.real());
                }
    }
    for (auto& ph : hats)
        for (auto& th : thetas)
            rep.sup_G_minus_G0_over_eps =
                std::max(rep.sup_G_minus_G0_over_eps, std::abs(H.G->value(ph, th) - H.G0(th)) / c.eps);
    rep.sup_G0 = H.G0.sup_on_strip(c.s0, grid.theta_points);
    rep.mu_measured = std::max(rep.sup_nu, rep.sup_G_minus_G0_over_eps);
    try {
        rep.beta_measured = morse_beta(H.G0);
        rep.morse_ok = true;
    } catch (const Error& e) {
        rep.failures.push_back(std::string("G0 is not beta-Morse: ") + e.what());
    }
    rep.kappa = kappa_of(c);

    const double slack = 1 + 1e-12;
    auto check = [&](bool ok, const std::string& msg) {
        if (!ok) rep.failures.push_back(msg);
    };
    check(c.eps <= c.r0 * c.r0 / 65536.0 * slack, "eps exceeds r0^2/2^16");
    check(c.mu >= 0 && c.mu < 1, "mu outside [0, 1)");
    check(c.eps / c.beta >= 0.5 / slack, "eps/beta below 1/2");
    check(rep.sup_nu <= c.mu * slack + 1e-15, "sup|nu| exceeds mu");
    check(rep.sup_G_minus_G0_over_eps <= c.mu * slack + 1e-15, "sup|G - G0| exceeds eps*mu");
    check(rep.sup_G0 <= c.eps * slack, "sup|G0| exceeds eps");
    check(H.G0.zero_mean(1e-14 * std::max(1.0, c.eps)), "G0 does not have zero average");
    check(rep.min_re_one_plus_nu >= 0.5, "Re(1 + nu) below 1/2");
    check(c.r0 > 0 && c.r0 <= c.R0 * slack, "r0 must satisfy 0 < r0 <= R0");
    check(c.kappa >= rep.kappa / slack, "kappa smaller than max(4, 1/s0, R0/r0, eps/beta)");
    check(1.0 / c.kappa <= c.s0 * slack && c.s0 <= 1.0 * slack, "s0 outside [1/kappa, 1]");
    check(c.R0 / c.r0 <= c.kappa * slack, "R0/r0 exceeds kappa");
    check(c.eps / c.beta <= c.kappa * slack, "eps/beta exceeds kappa");
    if (rep.morse_ok) check(rep.beta_measured >= c.beta / slack, "declared beta exceeds the measured Morse constant");
    return rep;
}

// ---------------------------------------------------------------- standardize

namespace {

class StandardizedNu : public NuFunction {
public:
    std::function<cplx(cplx, const std::vector<cplx>&, cplx)> f;
    int dim = 0;
    int degree = 0;
    int samples = 192;
    int fdeg = 48;
    int dim_p_hat() const override { return dim; }
    cplx value(cplx p1, const std::vector<cplx>& ph, cplx q) const override { return f(p1, ph, q); }
    NuSlice slice(const std::vector<double>& p_hat) const override {
        const auto ph = to_complex(p_hat);
        const int n = degree + 8;
        // Taylor coefficients in p1 by DFT on a circle, per angle sample.
        std::vector<std::vector<double>> table(degree + 1, std::vector<double>(samples));
        for (int j = 0; j < samples; ++j) {
            double q = kTwoPi * j / samples;
            std::vector<cplx> vals(n);
            for (int m = 0; m < n; ++m) vals[m] = f(std::polar(0.5, kTwoPi * m / n), ph, q);
            for (int k = 0; k <= degree; ++k) {
                cplx s = 0;
                for (int m = 0; m < n; ++m) s += vals[m] * std::polar(1.0, -kTwoPi * k * m / n);
                table[k][j] = std::real(s) / n / std::pow(0.5, k);
            }
        }
        std::vector<PeriodicPotential> coeffs;
        for (int k = 0; k <= degree; ++k) {
            const auto& row = table[k];
            coeffs.push_back(PeriodicPotential::fit(
                [&](double q) {
                    long idx = std::lround(q / kTwoPi * samples) % samples;
                    return row[idx];
                },
                fdeg, samples));
        }
        return NuSlice(coeffs);
    }
};

class StandardizedPotential : public PotentialFamily {
public:
    std::function<cplx(const std::vector<cplx>&, cplx)> f;
    int dim = 0;
    int samples = 192;
    int fdeg = 48;
    int dim_p_hat() const override { return dim; }
    cplx value(const std::vector<cplx>& ph, cplx q) const override { return f(ph, q); }
    PeriodicPotential slice(const std::vector<double>& p_hat) const override {
        const auto ph = to_complex(p_hat);
        return PeriodicPotential::fit([&](double q) { return std::real(f(ph, q)); }, fdeg, samples);
    }
};

// Newton for a scalar root in p1 with damping.
template <class F, class DF>
cplx newton(F f, DF df, cplx x0, double max_step, const char* what) {
    cplx x = x0;
    for (int it = 0; it < 50; ++it) {
        cplx d = df(x);
        if (d == 0.0) fail("DegenerateHessian", what);
        cplx step = f(x) / d;
        if (std::abs(step) > max_step) step *= max_step / std::abs(step);
        x -= step;
        if (std::abs(step) <= 1e-13 * (1 + std::abs(x))) {
            // one more step to settle the last digits
            cplx d2 = df(x);
            if (d2 != 0.0) x -= f(x) / d2;
            return x;
        }
    }
    fail("NewtonDiverged", what);
}

}  // namespace

StandardizeResult standardize(const TaylorFourier& h, const TaylorFourier& f, const std::vector<double>& p0,
                              double eps_pert, const StandardizeOptions& opts) {
    const int n = h.n_vars();
    if (n < 1 || f.n_vars() != n || static_cast<int>(p0.size()) != n)
        throw ConfigError("InvalidArgument", "h, f and p0 must share the same number of action variables");
    const int dim = n - 1;
    const auto P0 = to_complex(p0);
    const std::vector<cplx> ph0(P0.begin() + 1, P0.end());

    const double d = std::abs(dp1(h, 2, P0, 0.0));
    if (d == 0) fail("DegenerateHessian", "second p1-derivative of h vanishes at p0");
    if (std::abs(dp1(h, 1, P0, 0.0)) > 1e-10 * std::max(1.0, d))
        throw ConfigError("InvalidArgument", "p0 is not a critical point of p1 -> h");
    const double g0 = 0.5 * std::real(dp1(h, 2, P0, 0.0));
    const double h2_0 = 2 * g0;

    // bound M of |h|, |f| on the complex neighbourhood
    double M = 0;
    for (int j = 0; j < 64; ++j) {
        cplx p1 = P0[0] + std::polar(opts.r, kTwoPi * j / 64);
        std::vector<cplx> ph = ph0;
        for (auto& x : ph) x += std::polar(opts.r, kTwoPi * j / 64);
        auto p = join(p1, ph);
        M = std::max(M, std::abs(dp1(h, 0, p, 0.0)));
        for (int k = 0; k < 64; ++k) {
            double x = kTwoPi * k / 64;
            M = std::max({M, std::abs(dp1(f, 0, p, cplx(x, opts.s))), std::abs(dp1(f, 0, p, cplx(x, -opts.s)))});
        }
    }
    const double rho = std::min(opts.r / 4, d * std::pow(opts.r, 3) / M);

    auto u_of = [=](const std::vector<cplx>& ph) {
        return newton([&](cplx x) { return dp1(h, 1, join(x, ph), 0.0); },
                      [&](cplx x) { return dp1(h, 2, join(x, ph), 0.0); }, P0[0], rho / 2,
                      "Newton for the p1-critical point of h");
    };
    auto v_of_eps = [=](const std::vector<cplx>& ph, cplx q, double e) {
        cplx u = u_of(ph);
        return newton(
                   [&](cplx x) { return dp1(h, 1, join(u + x, ph), q) + e * dp1(f, 1, join(u + x, ph), q); },
                   [&](cplx x) { return dp1(h, 2, join(u + x, ph), q) + e * dp1(f, 2, join(u + x, ph), q); },
                   0.0, rho / 2, "Newton for the p1-critical point of H") ;
    };

    // empirical threshold ladder at p_hat0
    double threshold = 0;
    for (int k = 0; k < 60; ++k) {
        double e = eps_pert * std::ldexp(1.0, k);
        bool ok = true;
        try {
            for (int j = 0; j < 64 && ok; ++j) {
                cplx v = v_of_eps(ph0, kTwoPi * j / 64, e);
                ok = std::abs(v) <= rho / 4;
            }
        } catch (const Error&) {
            ok = false;
        }
        if (!ok) break;
        threshold = e;
    }
    if (threshold == 0) fail("EpsTooLarge", "Newton for v fails at the requested perturbation size");

    auto v_of = [=](const std::vector<cplx>& ph, cplx q) { return v_of_eps(ph, q, eps_pert); };

    auto graw = [=](const std::vector<cplx>& ph, cplx q) {
        cplx u = u_of(ph), v = v_of(ph, q);
        cplx I = quad::gauss_legendre(
            [&](double t) { return std::real((1 - t) * dp1(h, 2, join(u + t * v, ph), q)); }, 0.0, 1.0);
        cplx Ii = quad::gauss_legendre(
            [&](double t) { return std::imag((1 - t) * dp1(h, 2, join(u + t * v, ph), q)); }, 0.0, 1.0);
        return ((I + cplx(0, 1) * Ii) * v * v + eps_pert * dp1(f, 0, join(u + v, ph), q)) / g0;
    };
    const int nmean = 128;
    auto gmean = [=](const std::vector<cplx>& ph) {
        cplx s = 0;
        for (int j = 0; j < nmean; ++j) s += graw(ph, kTwoPi * j / nmean);
        return s / static_cast<double>(nmean);
    };

    auto Gfun = std::make_shared<StandardizedPotential>();
    Gfun->dim = dim;
    Gfun->samples = opts.fourier_samples;
    Gfun->fdeg = opts.fourier_degree;
    Gfun->f = [=](const std::vector<cplx>& ph, cplx q) { return graw(ph, q) - gmean(ph); };

    auto nufun = std::make_shared<StandardizedNu>();
    nufun->dim = dim;
    nufun->degree = std::max(0, std::max(h.degree_in(0), f.degree_in(0)) - 2);
    nufun->samples = opts.fourier_samples;
    nufun->fdeg = opts.fourier_degree;
    nufun->f = [=](cplx p1, const std::vector<cplx>& ph, cplx q) {
        cplx u = u_of(ph), v = v_of(ph, q);
        auto integrand = [&](double t) {
            auto p = join(u + v + t * p1, ph);
            return (1 - t) * (dp1(h, 2, p, q) - h2_0 + eps_pert * dp1(f, 2, p, q));
        };
        double re = quad::gauss_legendre([&](double t) { return std::real(integrand(t)); }, 0.0, 1.0);
        double im = quad::gauss_legendre([&](double t) { return std::imag(integrand(t)); }, 0.0, 1.0);
        return cplx(re, im) / g0;
    };

    StandardizeResult res;
    res.g0 = g0;
    res.rho = rho;
    res.eps_threshold = threshold;
    res.u = [=](const std::vector<double>& ph) { return std::real(u_of(to_complex(ph))); };
    res.v = [=](const std::vector<double>& ph, double q) { return std::real(v_of(to_complex(ph), q)); };
    res.g = [=](const std::vector<double>& ph) {
        auto c = to_complex(ph);
        return std::real(dp1(h, 0, join(u_of(c), c), 0.0) + g0 * gmean(c));
    };

    const PeriodicPotential f0 = f.slice(p0);
    res.H.G0 = f0.affine(eps_pert / g0, -eps_pert / g0 * f0.mean());
    res.H.G = Gfun;
    res.H.nu = nufun;

    auto& c = res.H.chars;
    for (int k = 0; k < dim; ++k) c.hat_domain.push_back({p0[k + 1] - rho / 8, p0[k + 1] + rho / 8});
    c.R0 = c.r0 = rho / 8;
    c.s0 = std::min(opts.s, 1.0);
    c.eps = res.H.G0.sup_on_strip(c.s0, 1024);
    c.beta = morse_beta(res.H.G0);
    c.mu = 0;
    c.kappa = kappa_of(c);
    SamplingSpec coarse;
    coarse.theta_points = 64;
    coarse.p1_points = 16;
    coarse.p_hat_points = 5;
    auto rep = validate_standard_form(res.H, coarse);
    c.mu = rep.mu_measured * (1 + 1e-9);
    return res;
}

// ---------------------------------------------------------------- continuation

double CriticalSet::angle(int i) const {
    const int n = static_cast<int>(theta.size());
    if (i == n) return theta[0] + kTwoPi;
    return theta[((i % n) + n) % n] + kTwoPi * std::floor(static_cast<double>(i) / n);
}

double CriticalSet::value(int i) const {
    const int n = static_cast<int>(energy.size());
    return energy[((i % n) + n) % n];
}

bool CriticalSet::is_max(int i) const {
    const int n = static_cast<int>(kind.size());
    return kind[((i % n) + n) % n] == CriticalKind::maximum;
}

CriticalSet critical_set(const MorseProfile& profile) {
    CriticalSet s;
    const int n = static_cast<int>(profile.criticals.size());
    for (int i = 0; i < n; ++i) {
        s.theta.push_back(profile.angle(i));
        s.energy.push_back(profile.value(i));
        s.kind.push_back(profile.kind(i));
    }
    return s;
}

ContinuedCriticals::ContinuedCriticals(const StandardFormHamiltonian& H, MorseProfile reference)
    : H_(H), reference_(std::move(reference)) {}

CriticalSet ContinuedCriticals::at(const std::vector<double>& p_hat) const {
    const PeriodicPotential G = H_.G->slice(p_hat);
    const PeriodicPotential d1 = G.derivative(1);
    CriticalSet out = critical_set(reference_);
    const int n = static_cast<int>(out.theta.size());
    for (int i = 0; i < n; ++i) {
        const double tb = out.theta[i];
        const double a = d1(tb);
        double y = 0;
        bool done = false;
        for (int it = 0; it < 500 && !done; ++it) {
            // mean of G'' over [tb, tb + y]
            double gbar = y == 0 ? G.derivative_at(tb, 2) : d1.difference(tb, y) / y;
            double yn = -a / gbar;
            if (!std::isfinite(yn) || std::abs(yn) > 1.0)
                fail("ContractionFailed", "critical point continuation left its neighbourhood");
            done = std::abs(yn - y) <= 1e-16 * (1 + std::abs(tb));
            y = yn;
        }
        if (!done) fail("ContractionFailed", "critical point contraction did not converge");
        double th = tb + y;
        for (int it = 0; it < 5; ++it) {
            double step = d1(th) / G.derivative_at(th, 2);
            th -= step;
            if (std::abs(step) < 1e-16) break;
        }
        out.theta[i] = th;
        out.energy[i] = G(th);
    }
    for (int i = 1; i < n; ++i)
        if (!(out.theta[i] > out.theta[i - 1])) fail("OrderViolation", "continued critical angles changed order");
    if (out.theta[n - 1] >= out.theta[0] + kTwoPi) fail("OrderViolation", "continued critical angles wrapped");
    const double tol = 1e-12 * std::max(1.0, H_.chars.eps);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double r = reference_.value(i) - reference_.value(j);
            if (std::abs(r) <= tol) continue;
            if ((r > 0) != (out.energy[i] - out.energy[j] > 0))
                fail("OrderViolation", "continued critical energies changed order");
        }
    return out;
}

ContinuedCriticals continue_critical_points(const StandardFormHamiltonian& H, const ContinuationOptions& opts) {
    MorseOptions mo;
    mo.require_distinct = opts.require_distinct;
    ContinuedCriticals cc(H, analyze_morse(H.G0, mo));
    const auto& c = H.chars;
    cc.theta_bound = 2 * c.eps * c.mu / (c.beta * c.s0);
    cc.energy_bound = 3 * std::pow(c.kappa, 3) * c.eps * c.mu;
    for (auto& ph : hat_grid(c, opts.points_per_dim)) {
        ContinuedCriticals::Sample s;
        s.p_hat = ph;
        s.set = cc.at(ph);
        const PeriodicPotential d1 = H.G->slice(ph).derivative(1);
        for (int i = 0; i < static_cast<int>(s.set.theta.size()); ++i) {
            s.max_theta_shift = std::max(s.max_theta_shift, std::abs(s.set.theta[i] - cc.reference().angle(i)));
            s.max_energy_shift = std::max(s.max_energy_shift, std::abs(s.set.energy[i] - cc.reference().value(i)));
            s.max_residual = std::max(s.max_residual, std::abs(d1(s.set.theta[i])));
        }
        if (s.max_theta_shift > cc.theta_bound * (1 + 1e-9) + 1e-14 ||
            s.max_energy_shift > cc.energy_bound * (1 + 1e-9) + 1e-14)
            cc.bounds_ok = false;
        cc.samples.push_back(std::move(s));
    }
    return cc;
}

}  // namespace liouville
