#include "liouville/potential.hpp"

#include "liouville/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace liouville {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double t) {
    double r = std::fmod(t, kTwoPi);
    if (r < 0) r += kTwoPi;
    if (r >= kTwoPi) r = 0;
    return r;
}

// Local minimisation of f on every grid cell pair around a sampled local minimum.
template <class F>
double refined_grid_min(F f, int grid, double* where = nullptr) {
    std::vector<double> v(grid);
    const double h = kTwoPi / grid;
    for (int j = 0; j < grid; ++j) v[j] = f(j * h);
    double best = v[0], best_x = 0;
    for (int j = 0; j < grid; ++j) {
        double l = v[(j + grid - 1) % grid], r = v[(j + 1) % grid];
        if (v[j] > l || v[j] > r) continue;
        auto res = boost::math::tools::brent_find_minima(f, (j - 1) * h, (j + 1) * h, 52);
        double m = std::min(v[j], res.second);
        if (m < best) {
            best = m;
            best_x = res.second < v[j] ? res.first : j * h;
        }
    }
    if (where) *where = wrap_angle(best_x);
    return best;
}

}  // namespace

PeriodicPotential::PeriodicPotential(std::vector<double> cos_coeffs, std::vector<double> sin_coeffs) {
    std::size_t m = std::max(cos_coeffs.size(), sin_coeffs.size() + 1);
    if (m == 0) m = 1;
    a_.assign(m, 0.0);
    b_.assign(m, 0.0);
    std::copy(cos_coeffs.begin(), cos_coeffs.end(), a_.begin());
    std::copy(sin_coeffs.begin(), sin_coeffs.end(), b_.begin() + 1);
}

PeriodicPotential PeriodicPotential::cosine(double amplitude, int k) {
    std::vector<double> a(k + 1, 0.0);
    a[k] = amplitude;
    return PeriodicPotential(a, {});
}

PeriodicPotential PeriodicPotential::fit(const std::function<double(double)>& f, int degree, int samples) {
    if (samples < 2 * degree + 1) samples = 2 * degree + 1;
    std::vector<double> y(samples);
    for (int j = 0; j < samples; ++j) y[j] = f(kTwoPi * j / samples);
    std::vector<double> a(degree + 1, 0.0), b(degree, 0.0);
    for (int k = 0; k <= degree; ++k) {
        double sc = 0, ss = 0;
        for (int j = 0; j < samples; ++j) {
            double t = kTwoPi * (static_cast<long long>(k) * j % samples) / samples;
            sc += y[j] * std::cos(t);
            ss += y[j] * std::sin(t);
        }
        double w = (k == 0 || 2 * k == samples) ? 1.0 / samples : 2.0 / samples;
        a[k] = w * sc;
        if (k > 0) b[k - 1] = w * ss;
    }
    return PeriodicPotential(a, b);
}

std::vector<double> PeriodicPotential::sin_coeffs() const {
    return std::vector<double>(b_.begin() + 1, b_.end());
}

double PeriodicPotential::operator()(double t) const {
    const double c1 = std::cos(t), s1 = std::sin(t);
    double ck = 1, sk = 0, sum = a_[0];
    for (std::size_t k = 1; k < a_.size(); ++k) {
        double cn = ck * c1 - sk * s1;
        sk = sk * c1 + ck * s1;
        ck = cn;
        sum += a_[k] * ck + b_[k] * sk;
    }
    return sum;
}

cplx PeriodicPotential::operator()(cplx z) const { return derivative_at(z, 0); }

double PeriodicPotential::derivative_at(double t, int n) const {
    if (n == 0) return (*this)(t);
    double sum = 0;
    for (std::size_t k = 1; k < a_.size(); ++k) {
        double kp = std::pow(static_cast<double>(k), n);
        double c = std::cos(k * t), s = std::sin(k * t);
        // d^n/dt^n cos(kt) = k^n cos(kt + n pi/2)
        switch (n % 4) {
            case 0: sum += kp * (a_[k] * c + b_[k] * s); break;
            case 1: sum += kp * (-a_[k] * s + b_[k] * c); break;
            case 2: sum += kp * (-a_[k] * c - b_[k] * s); break;
            default: sum += kp * (a_[k] * s - b_[k] * c); break;
        }
    }
    return sum;
}

cplx PeriodicPotential::derivative_at(cplx z, int n) const {
    const cplx e = std::exp(cplx(0, 1) * z), ei = 1.0 / e;
    cplx ek = 1, eki = 1;
    cplx sum = n == 0 ? cplx(a_[0]) : cplx(0);
    for (std::size_t k = 1; k < a_.size(); ++k) {
        ek *= e;
        eki *= ei;
        cplx c = 0.5 * (ek + eki), s = cplx(0, -0.5) * (ek - eki);
        double kp = std::pow(static_cast<double>(k), n);
        switch (n % 4) {
            case 0: sum += kp * (a_[k] * c + b_[k] * s); break;
            case 1: sum += kp * (-a_[k] * s + b_[k] * c); break;
            case 2: sum += kp * (-a_[k] * c - b_[k] * s); break;
            default: sum += kp * (a_[k] * s - b_[k] * c); break;
        }
    }
    return sum;
}

PeriodicPotential PeriodicPotential::derivative(int n) const {
    PeriodicPotential d = *this;
    for (int r = 0; r < n; ++r) {
        std::vector<double> a(d.a_.size(), 0.0), b(d.b_.size(), 0.0);
        for (std::size_t k = 1; k < d.a_.size(); ++k) {
            a[k] = k * d.b_[k];
            b[k] = -static_cast<double>(k) * d.a_[k];
        }
        d.a_ = a;
        d.b_ = b;
    }
    return d;
}

double PeriodicPotential::difference(double phi, double d) const {
    const double mid = phi + 0.5 * d;
    double sum = 0;
    for (std::size_t k = 1; k < a_.size(); ++k) {
        if (a_[k] == 0 && b_[k] == 0) continue;
        double sd = std::sin(0.5 * k * d);
        sum += 2.0 * sd * (-a_[k] * std::sin(k * mid) + b_[k] * std::cos(k * mid));
    }
    return sum;
}

bool PeriodicPotential::zero_mean(double tol) const { return std::abs(a_[0]) <= tol; }

bool PeriodicPotential::is_zero() const {
    for (std::size_t k = 0; k < a_.size(); ++k)
        if (a_[k] != 0 || b_[k] != 0) return false;
    return true;
}

double PeriodicPotential::sup_on_strip(double s, int samples) const {
    double best = 0;
    for (int j = 0; j < samples; ++j) {
        double x = kTwoPi * j / samples;
        if (s == 0) {
            best = std::max(best, std::abs((*this)(x)));
        } else {
            best = std::max(best, std::abs((*this)(cplx(x, s))));
            best = std::max(best, std::abs((*this)(cplx(x, -s))));
        }
    }
    return best;
}

PeriodicPotential PeriodicPotential::scaled(double c) const { return affine(c, 0.0); }

PeriodicPotential PeriodicPotential::affine(double scale, double shift) const {
    PeriodicPotential r = *this;
    for (auto& x : r.a_) x *= scale;
    for (auto& x : r.b_) x *= scale;
    r.a_[0] += shift;
    return r;
}

PeriodicPotential PeriodicPotential::operator+(const PeriodicPotential& o) const {
    std::size_t m = std::max(a_.size(), o.a_.size());
    PeriodicPotential r;
    r.a_.assign(m, 0.0);
    r.b_.assign(m, 0.0);
    for (std::size_t k = 0; k < m; ++k) {
        r.a_[k] = cos_coeff(k) + o.cos_coeff(k);
        r.b_[k] = sin_coeff(k) + o.sin_coeff(k);
    }
    return r;
}

PeriodicPotential PeriodicPotential::operator-(const PeriodicPotential& o) const {
    return *this + o.scaled(-1.0);
}

// ---------------------------------------------------------------- criticals

double MorseProfile::angle(int i) const {
    const int n = static_cast<int>(criticals.size());
    const double t0 = criticals[0].location;
    if (i == n) return t0 + kTwoPi;
    double off = criticals[i % n].location - t0;
    if (off < 0) off += kTwoPi;
    return t0 + off;
}

double MorseProfile::value(int i) const {
    const int n = static_cast<int>(criticals.size());
    return criticals[((i % n) + n) % n].value;
}

CriticalKind MorseProfile::kind(int i) const {
    const int n = static_cast<int>(criticals.size());
    return criticals[((i % n) + n) % n].kind;
}

std::vector<CriticalPoint> find_critical_points(const PeriodicPotential& G, double tol_root) {
    if (tol_root <= 0) throw ConfigError("InvalidArgument", "tol_root must be positive");
    const PeriodicPotential d1 = G.derivative(1);
    bool constant = true;
    for (int k = 1; k <= G.degree(); ++k)
        if (G.cos_coeff(k) != 0 || G.sin_coeff(k) != 0) constant = false;
    if (constant) fail("ConstantPotential", "potential has no critical structure");

    const int grid = 4096;
    const double h = kTwoPi / grid;
    std::vector<double> f(grid + 1);
    for (int j = 0; j <= grid; ++j) f[j] = d1(j * h);

    std::vector<CriticalPoint> out;
    for (int j = 0; j < grid; ++j) {
        double lo = j * h, hi = (j + 1) * h, flo = f[j], fhi = f[j + 1];
        if (flo == 0) {
            hi = lo;
        } else if (!((flo < 0) != (fhi < 0)) || fhi == 0) {
            continue;
        }
        double x = 0.5 * (lo + hi);
        bool converged = lo == hi;
        for (int it = 0; it < 100 && !converged; ++it) {
            double fx = d1(x), dfx = G.derivative_at(x, 2);
            if (fx == 0) {
                converged = true;
                break;
            }
            if ((fx < 0) == (flo < 0)) lo = x; else hi = x;
            double xn = x - fx / dfx;
            if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
            if (std::abs(xn - x) <= 1e-15 * (1 + std::abs(x))) converged = true;
            x = xn;
            if (hi - lo <= 4e-16 * (1 + std::abs(x))) converged = true;
        }
        if (!converged) fail("NoConvergence", "Newton polish of a critical point did not converge");
        double gp = d1(x), gpp = G.derivative_at(x, 2);
        if (std::abs(gp) > std::max(tol_root, 1e-13))
            fail("NoConvergence", "critical point residual above tolerance");
        if (std::abs(gp) + std::abs(gpp) < tol_root)
            fail("DegenerateCritical", "|G'|+|G''| below tolerance at a critical point");
        CriticalPoint cp;
        cp.location = wrap_angle(x);
        cp.value = G(x);
        cp.kind = gpp < 0 ? CriticalKind::maximum : CriticalKind::minimum;
        out.push_back(cp);
    }
    // A sign change landing on a grid node is seen by both neighbouring cells.
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.location < b.location; });
    std::vector<CriticalPoint> uniq;
    for (auto& c : out) {
        if (!uniq.empty() && std::abs(c.location - uniq.back().location) < 1e-12) continue;
        uniq.push_back(c);
    }
    if (uniq.size() > 1 && kTwoPi - uniq.back().location + uniq.front().location < 1e-12) uniq.pop_back();
    if (min_morse_gauge(G) < tol_root)
        fail("DegenerateCritical", "potential is not Morse: |G'|+|G''| vanishes");
    if (uniq.size() % 2 != 0) fail("DegenerateCritical", "odd number of critical points");
    return uniq;
}

std::vector<CriticalPoint> order_from_global_max(std::vector<CriticalPoint> crit) {
    if (crit.empty()) return crit;
    std::size_t best = 0;
    for (std::size_t i = 1; i < crit.size(); ++i)
        if (crit[i].value > crit[best].value) best = i;
    std::rotate(crit.begin(), crit.begin() + best, crit.end());
    return crit;
}

double min_morse_gauge(const PeriodicPotential& G, int grid) {
    const PeriodicPotential d1 = G.derivative(1), d2 = G.derivative(2);
    return refined_grid_min([&](double x) { return std::abs(d1(x)) + std::abs(d2(x)); }, grid);
}

double max_abs_second_derivative(const PeriodicPotential& G, int grid) {
    const PeriodicPotential d2 = G.derivative(2);
    return -refined_grid_min([&](double x) { return -std::abs(d2(x)); }, grid);
}

namespace {

double value_gap(const std::vector<CriticalPoint>& crit, bool adjacent_only) {
    double gap = std::numeric_limits<double>::infinity();
    const std::size_t n = crit.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (adjacent_only) {
            gap = std::min(gap, std::abs(crit[i].value - crit[(i + 1) % n].value));
        } else {
            for (std::size_t j = i + 1; j < n; ++j)
                gap = std::min(gap, std::abs(crit[i].value - crit[j].value));
        }
    }
    return gap;
}

}  // namespace

double morse_beta(const PeriodicPotential& G, double tol_root) {
    auto crit = find_critical_points(G, tol_root);
    double scale = 0;
    for (auto& c : crit) scale = std::max(scale, std::abs(c.value));
    double gap = value_gap(crit, false);
    if (gap < tol_root * std::max(1.0, scale))
        fail("DistinctValueViolation", "two critical values coincide");
    return std::min(min_morse_gauge(G), gap);
}

MorseProfile analyze_morse(const PeriodicPotential& G, const MorseOptions& opts) {
    MorseProfile p;
    p.criticals = order_from_global_max(find_critical_points(G, opts.tol_root));
    double scale = 0;
    for (auto& c : p.criticals) scale = std::max(scale, std::abs(c.value));
    double gap = value_gap(p.criticals, !opts.require_distinct);
    if (opts.require_distinct && gap < opts.tol_root * std::max(1.0, scale))
        fail("DistinctValueViolation", "two critical values coincide");
    if (p.criticals.size() > 1 && p.criticals[0].value - p.criticals[1].value <= 0)
        fail("DistinctValueViolation", "global maximum is not unique");
    for (std::size_t i = 1; i < p.criticals.size(); ++i)
        if (p.criticals[i].value == p.criticals[0].value)
            fail("DistinctValueViolation", "global maximum is not unique");
    p.beta = std::min(min_morse_gauge(G, opts.grid), gap);
    p.n_wells = static_cast<int>(p.criticals.size()) / 2;
    p.max_second_derivative = max_abs_second_derivative(G, opts.grid);
    return p;
}

double critical_count_bound(const MorseProfile& profile) {
    double bound = std::numbers::pi * std::sqrt(2.0 * profile.max_second_derivative / profile.beta);
    if (2.0 * profile.n_wells > bound * (1 + 1e-12))
        fail("InvariantViolation", "critical count exceeds the Morse bound");
    return bound;
}

// ---------------------------------------------------------------- cosine-like

CosineLikeParams cosine_like_params(const PeriodicPotential& G, double strip_width) {
    const double a1 = G.cos_coeff(1), b1 = G.sin_coeff(1);
    CosineLikeParams p;
    p.eta = std::hypot(a1, b1);
    if (p.eta == 0) fail("ZeroFirstHarmonic", "first Fourier harmonic vanishes");
    p.theta0 = std::atan2(-b1, a1);
    const int n = 2048;
    double sup = 0;
    for (int j = 0; j < n; ++j) {
        double x = kTwoPi * j / n;
        for (double s : {strip_width, -strip_width}) {
            cplx z(x, s);
            sup = std::max(sup, std::abs(G(z) - p.eta * std::cos(z + p.theta0)));
        }
    }
    p.g_hat = sup / p.eta;
    if (p.g_hat >= 0.25) fail("NotCosineLike", "g_hat = " + std::to_string(p.g_hat) + " >= 1/4");
    return p;
}

UnitRescaling rescale_to_unit(const PeriodicPotential& G) {
    double xmax = 0, xmin = 0;
    const double M = -refined_grid_min([&](double x) { return -G(x); }, 4096, &xmax);
    const double m = refined_grid_min([&](double x) { return G(x); }, 4096, &xmin);
    if (!(M > m)) fail("ConstantPotential", "cannot rescale a constant potential");
    UnitRescaling r;
    r.max_value = M;
    r.min_value = m;
    r.L.scale = 2.0 / (M - m);
    r.L.shift = -(M + m) / (M - m);
    r.V = G.affine(r.L.scale, r.L.shift);
    return r;
}

// ---------------------------------------------------------------- phase shift

PhaseShift phase_shift_b(const PeriodicPotential& w, double tol, const PhaseShiftOptions& opts) {
    PhaseShift out;
    const PeriodicPotential cosp = PeriodicPotential::cosine();
    out.g_hat0 = (w - cosp).sup_on_strip(1.0, 2048);
    out.hypothesis_met = out.g_hat0 <= std::ldexp(1.0, -10);
    if (!out.hypothesis_met && opts.enforce_hypothesis)
        fail("TooFarFromCosine", "sup_{T_1}|w - cos| exceeds 2^-10");

    auto crit = find_critical_points(w, 1e-12);
    if (crit.size() != 2) fail("NotNormalized", "w must have exactly one maximum and one minimum");
    auto cmax = crit[0].kind == CriticalKind::maximum ? crit[0] : crit[1];
    auto cmin = crit[0].kind == CriticalKind::maximum ? crit[1] : crit[0];
    if (std::abs(cmax.value - 1) > opts.normalization_tol || std::abs(cmin.value + 1) > opts.normalization_tol)
        fail("NotNormalized", "max w = 1 and min w = -1 required");

    // Place the maximum near 0 and the minimum near pi.
    double xM = cmax.location > std::numbers::pi ? cmax.location - kTwoPi : cmax.location;
    double xm = cmin.location;
    out.x_max = xM;
    out.x_min = xm;
    const double one_minus_wM = 1.0 - cmax.value, one_plus_wm = 1.0 + cmin.value;

    auto near = [](double x, double c) {
        double d = std::remainder(x - c, kTwoPi);
        return d;
    };

    auto b_at = [&](double x) {
        double dM = near(x, xM), dm = near(x, xm);
        if (std::abs(dM) < opts.critical_radius) {
            // x + b = a(s), s^2 = 2(1 - w), a(s) = 2 arcsin(s/2)
            double omw = std::max(0.0, one_minus_wM - w.difference(xM, dM));
            double s = std::copysign(std::sqrt(2.0 * omw), dM);
            return 2.0 * std::asin(0.5 * s) - dM - xM;
        }
        if (std::abs(dm) < opts.critical_radius) {
            double opw = std::max(0.0, one_plus_wm + w.difference(xm, dm));
            double s = std::copysign(std::sqrt(2.0 * opw), dm);
            return std::numbers::pi + 2.0 * std::asin(0.5 * s) - dm - xm;
        }
        // cos(x+b) - cos x = -2 sin(x + b/2) sin(b/2) = R
        const double R = w(x) - std::cos(x);
        double b = 0;
        for (int it = 0; it < 200; ++it) {
            double arg = -R / (2.0 * std::sin(x + 0.5 * b));
            double bn = 2.0 * std::asin(std::clamp(arg, -1.0, 1.0));
            bool done = std::abs(bn - b) <= 1e-16;
            b = bn;
            if (done) break;
        }
        return b;
    };

    out.b = PeriodicPotential::fit(b_at, 2 * w.degree(), opts.grid);

    double res = 0;
    const int nres = 10000;
    for (int j = 0; j < nres; ++j) {
        double x = kTwoPi * j / nres;
        res = std::max(res, std::abs(w(x) - std::cos(x + out.b(x))));
    }
    out.residual = res;
    out.sup_quarter = out.b.sup_on_strip(0.25, 2048);
    if (res > tol) fail("NoConvergence", "phase shift residual " + std::to_string(res) + " above tolerance");
    return out;
}

}  // namespace liouville
