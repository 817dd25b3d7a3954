#include "liouville/normal_form.hpp"

#include "liouville/action_map.hpp"
#include "liouville/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace liouville {

namespace {
constexpr double kPi = std::numbers::pi;
const double kRt2 = std::sqrt(2.0);
const cplx kI(0.0, 1.0);
}  // namespace

// ---------------------------------------------------------------- Poly2

Poly2 Poly2::var_x(int K) {
    Poly2 p(K);
    if (K >= 1) p.at(1, 0) = 1;
    return p;
}

Poly2 Poly2::var_y(int K) {
    Poly2 p(K);
    if (K >= 1) p.at(0, 1) = 1;
    return p;
}

Poly2 Poly2::constant(int K, cplx v) {
    Poly2 p(K);
    p.at(0, 0) = v;
    return p;
}

bool Poly2::is_zero(double tol) const {
    return std::all_of(c_.begin(), c_.end(), [tol](cplx v) { return std::abs(v) <= tol; });
}

double Poly2::max_abs() const {
    double m = 0;
    for (auto v : c_) m = std::max(m, std::abs(v));
    return m;
}

Poly2 Poly2::operator+(const Poly2& o) const {
    Poly2 r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] += o.c_[i];
    return r;
}

Poly2 Poly2::operator-(const Poly2& o) const {
    Poly2 r = *this;
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] -= o.c_[i];
    return r;
}

Poly2 Poly2::operator*(cplx s) const {
    Poly2 r = *this;
    for (auto& v : r.c_) v *= s;
    return r;
}

Poly2 Poly2::operator*(const Poly2& o) const {
    Poly2 r(K_);
    for (int h1 = 0; h1 <= K_; ++h1)
        for (int k1 = 0; h1 + k1 <= K_; ++k1) {
            const cplx a = at(h1, k1);
            if (a == cplx(0)) continue;
            for (int h2 = 0; h1 + k1 + h2 <= K_; ++h2)
                for (int k2 = 0; h1 + k1 + h2 + k2 <= K_; ++k2) r.at(h1 + h2, k1 + k2) += a * o.at(h2, k2);
        }
    return r;
}

Poly2 Poly2::dx() const {
    Poly2 r(K_);
    for (int h = 1; h <= K_; ++h)
        for (int k = 0; h + k <= K_; ++k) r.at(h - 1, k) = static_cast<double>(h) * at(h, k);
    return r;
}

Poly2 Poly2::dy() const {
    Poly2 r(K_);
    for (int h = 0; h <= K_; ++h)
        for (int k = 1; h + k <= K_; ++k) r.at(h, k - 1) = static_cast<double>(k) * at(h, k);
    return r;
}

Poly2 Poly2::homogeneous(int n) const {
    Poly2 r(K_);
    for (int h = 0; h <= n && h <= K_; ++h)
        if (n - h <= K_ && n <= K_) r.at(h, n - h) = at(h, n - h);
    return r;
}

Poly2 Poly2::from_degree(int n) const {
    Poly2 r = *this;
    for (int h = 0; h <= K_; ++h)
        for (int k = 0; h + k <= K_ && h + k < n; ++k) r.at(h, k) = 0;
    return r;
}

Poly2 Poly2::resized(int K) const {
    Poly2 r(K);
    for (int h = 0; h <= std::min(K, K_); ++h)
        for (int k = 0; h + k <= std::min(K, K_); ++k) r.at(h, k) = at(h, k);
    return r;
}

cplx Poly2::operator()(cplx x, cplx y) const {
    cplx s = 0;
    for (int h = K_; h >= 0; --h) {
        cplx row = 0;
        for (int k = K_ - h; k >= 0; --k) row = row * y + at(h, k);
        s = s * x + row;
    }
    return s;
}

Poly2 Poly2::compose(const Poly2& X, const Poly2& Y) const {
    Poly2 r(K_);
    std::vector<Poly2> Yp{Poly2::constant(K_, 1.0)};
    for (int k = 1; k <= K_; ++k) Yp.push_back(Yp.back() * Y);
    Poly2 Xp = Poly2::constant(K_, 1.0);
    for (int h = 0; h <= K_; ++h) {
        Poly2 row(K_);
        for (int k = 0; h + k <= K_; ++k)
            if (at(h, k) != cplx(0)) row = row + Yp[k] * at(h, k);
        r = r + Xp * row;
        Xp = Xp * X;
    }
    return r;
}

Poly2 poisson(const Poly2& f, const Poly2& g, cplx c) { return (f.dx() * g.dy() - f.dy() * g.dx()) * c; }

Poly2 lie_series(const Poly2& f, const Poly2& chi, cplx c) {
    Poly2 sum = f, term = f;
    for (int n = 1; n <= f.order() + 1; ++n) {
        term = poisson(term, chi, c) * (1.0 / n);
        if (term.is_zero()) break;
        sum = sum + term;
    }
    return sum;
}

std::string nf_kind_label(NFKind k) { return k == NFKind::hyperbolic ? "hyperbolic" : "elliptic"; }

// ---------------------------------------------------------------- local data

LocalExpansion local_expansion(const PeriodicPotential& G, const NuSlice& nu, double theta_c, int K) {
    if (K < 2 || K > 10) throw ConfigError("InvalidArgument", "normal form order must lie in [2, 10]");
    LocalExpansion loc;
    loc.theta_c = theta_c;
    loc.E_c = G(theta_c);
    loc.order = K;
    loc.h.assign(K + 1, std::vector<double>(K + 1, 0.0));
    double fact = 1;
    for (int b = 1; b <= K; ++b) {
        fact *= b;
        loc.h[0][b] = G.derivative_at(theta_c, b) / fact;
    }
    loc.h[2][0] += 1;
    for (int k = 0; k < static_cast<int>(nu.coeffs().size()) && k + 2 <= K; ++k) {
        const auto& ck = nu.coeffs()[k];
        if (ck.is_zero()) continue;
        double f = 1;
        for (int b = 0; k + 2 + b <= K; ++b) {
            if (b > 0) f *= b;
            loc.h[k + 2][b] += ck.derivative_at(theta_c, b) / f;
        }
    }
    const double g2 = 2 * loc.h[0][2];
    if (g2 == 0) fail("DegenerateHessian", "vanishing second derivative at the critical point");
    loc.kind = g2 < 0 ? NFKind::hyperbolic : NFKind::elliptic;
    const double Ec = loc.E_c;
    loc.exact = [G, nu, theta_c, Ec](cplx p, cplx q) {
        return (1.0 + nu.value(p, theta_c + q)) * p * p + (G(cplx(theta_c) + q) - Ec);
    };
    return loc;
}

LocalExpansion quadratic_model(double g0, NFKind kind, int K) {
    if (!(g0 > 0)) throw ConfigError("InvalidArgument", "g0 must be positive");
    LocalExpansion loc;
    loc.kind = kind;
    loc.order = K;
    loc.h.assign(K + 1, std::vector<double>(K + 1, 0.0));
    loc.h[2][0] = 1;
    const double s = kind == NFKind::hyperbolic ? -1.0 : 1.0;
    loc.h[0][2] = s * g0 * g0;
    loc.exact = [g0, s](cplx p, cplx q) { return p * p + s * g0 * g0 * q * q; };
    return loc;
}

QuadraticData local_quadratic_data(const LocalExpansion& loc) {
    QuadraticData d;
    d.kind = loc.kind;
    const double g2 = 2 * loc.h[0][2];
    d.nu0 = loc.h[2][0] - 1;
    if (g2 == 0) fail("DegenerateHessian", "vanishing second derivative");
    if (!(1 + d.nu0 > 0)) fail("DegenerateHessian", "kinetic coefficient is not positive");
    d.lambda_lin = std::sqrt(std::abs(g2) / 2);
    d.delta = std::sqrt(d.lambda_lin) / std::pow(1 + d.nu0, 0.25);
    d.g = std::sqrt(1 + d.nu0) * d.lambda_lin;
    return d;
}

namespace {

LocalExpansion expansion_at(const StandardFormHamiltonian& H, int c, const std::vector<double>& p_hat, int K) {
    ActionMap map(H, p_hat);
    return local_expansion(map.potential(), map.nu(), map.criticals().angle(c), K);
}

}  // namespace

QuadraticData local_quadratic_data(const StandardFormHamiltonian& H, int critical_index,
                                   const std::vector<double>& p_hat) {
    auto d = local_quadratic_data(expansion_at(H, critical_index, p_hat, 2));
    const auto& ch = H.chars;
    const double rb = std::sqrt(ch.beta), re = std::sqrt(ch.eps);
    const double slack = 1 + 1e-12;
    if (d.lambda_lin * slack < 2.0 / 3.0 * rb || d.lambda_lin > 2 * ch.kappa * re * slack)
        fail("InvariantViolation", "lambda outside [2/3 sqrt(beta), 2 kappa sqrt(eps)]");
    if (d.g * slack < rb / 3 || d.g > 4 * ch.kappa * re * slack)
        fail("InvariantViolation", "g outside [sqrt(beta)/3, 4 kappa sqrt(eps)]");
    return d;
}

// ---------------------------------------------------------------- normalization

cplx NormalFormData::R_value(cplx u) const {
    cplx s = 0;
    for (std::size_t k = R.size(); k-- > 0;) s = s * u + R[k];
    return s;
}

cplx NormalFormData::dR(cplx u) const {
    cplx s = 0;
    for (std::size_t k = R.size(); k-- > 1;) s = s * u + static_cast<double>(k) * R[k];
    return s;
}

cplx NormalFormData::d2R(cplx u) const {
    cplx s = 0;
    for (std::size_t k = R.size(); k-- > 2;) s = s * u + static_cast<double>(k * (k - 1)) * R[k];
    return s;
}

namespace {

struct Frame {
    Poly2 xi_of_yx, eta_of_yx;  // (xi, eta) as functions of (y~, x~)
    Poly2 y_of, x_of;           // (y~, x~) as functions of (xi, eta)
    cplx c;
};

Frame frame(NFKind kind, int K) {
    Frame f;
    const Poly2 a = Poly2::var_x(K), b = Poly2::var_y(K);
    if (kind == NFKind::hyperbolic) {
        f.xi_of_yx = (a - b) * (1 / kRt2);
        f.eta_of_yx = (a + b) * (1 / kRt2);
        f.y_of = (a + b) * (1 / kRt2);
        f.x_of = (b - a) * (1 / kRt2);
        f.c = 1.0;
    } else {
        f.xi_of_yx = (a - b * kI) * (1 / kRt2);
        f.eta_of_yx = (a + b * kI) * (1 / kRt2);
        f.y_of = (a + b) * (1 / kRt2);
        f.x_of = (a - b) * (kI / kRt2);
        f.c = kI;
    }
    return f;
}

struct Step {
    Poly2 F, X, Y;
    void apply(const Poly2& chi, cplx c) {
        if (chi.is_zero()) return;
        F = lie_series(F, chi, c);
        const Poly2 wide = chi.resized(X.order());
        X = lie_series(X, wide, c);
        Y = lie_series(Y, wide, c);
    }
};

}  // namespace

double normal_form_residual(const LocalExpansion& loc, const NormalFormResult& nf, double r, int angles) {
    const auto& d = nf.data;
    const auto& T = nf.transform;
    const Frame fr = frame(d.kind, T.X.order());
    const double e4 = std::pow(d.eps, 0.25);
    double worst = 0;
    for (int ra = 1; ra <= 2; ++ra) {
        const double rr = r * ra / 2;
        for (int i = 0; i < angles; ++i)
            for (int j = 0; j < angles; ++j) {
                const cplx xi = std::polar(rr, 2 * kPi * (i + 0.25) / angles);
                const cplx eta = std::polar(rr, 2 * kPi * (j + 0.6) / angles);
                const cplx X = T.X(xi, eta), Y = T.Y(xi, eta);
                const cplx yt = fr.y_of(X, Y), xt = fr.x_of(X, Y);
                const cplx p = d.delta * e4 * yt, q = e4 * xt / d.delta;
                const cplx lhs = loc.exact(p, q) / d.eps;
                const cplx w = xi * eta;
                const cplx rhs = d.omega * w + d.R_value(2.0 * w);
                worst = std::max(worst, std::abs(lhs - rhs));
            }
    }
    return worst;
}

NormalFormResult birkhoff_normalize(const LocalExpansion& loc, double eps, const NormalFormOptions& opts) {
    const int K = opts.order;
    if (K < 2 || K > 10) throw ConfigError("InvalidArgument", "normal form order must lie in [2, 10]");
    if (K > loc.order) throw ConfigError("InvalidArgument", "expansion order below the requested order");
    if (!(eps > 0)) throw ConfigError("InvalidArgument", "eps must be positive");
    const QuadraticData q = local_quadratic_data(loc);
    const double e4 = std::pow(eps, 0.25);
    const Frame fr = frame(loc.kind, K);

    Poly2 Fyx(K);
    for (int a = 0; a <= K; ++a)
        for (int b = 0; a + b <= K; ++b)
            if (a + b >= 2) Fyx.at(a, b) = loc.h[a][b] * std::pow(q.delta * e4, a) * std::pow(e4 / q.delta, b) / eps;

    const int KT = 3 * K;
    Step st{Fyx.compose(fr.y_of, fr.x_of), Poly2::var_x(KT), Poly2::var_y(KT)};
    const cplx omega = st.F.at(1, 1);
    if (std::abs(omega) == 0) fail("SmallDivisorZero", "vanishing quadratic coefficient");
    st.F.at(2, 0) = st.F.at(0, 2) = 0;

    for (int n = 3; n <= K; ++n) {
        std::vector<int> hs;
        for (int h = 0; h <= n; ++h)
            if (2 * h != n) hs.push_back(h);
        auto divisor = [&](int h) { return fr.c * omega * static_cast<double>(2 * h - n); };
        switch (opts.ordering) {
            case NFOrdering::simultaneous:
            case NFOrdering::kernel_shift: {
                Poly2 chi(K);
                for (int h : hs) chi.at(h, n - h) = st.F.at(h, n - h) / divisor(h);
                if (opts.ordering == NFOrdering::kernel_shift && n % 2 == 0) chi.at(n / 2, n / 2) = 0.05;
                st.apply(chi, fr.c);
                break;
            }
            case NFOrdering::ascending:
            case NFOrdering::descending: {
                if (opts.ordering == NFOrdering::descending) std::reverse(hs.begin(), hs.end());
                for (int h : hs) {
                    Poly2 chi(K);
                    chi.at(h, n - h) = st.F.at(h, n - h) / divisor(h);
                    st.apply(chi, fr.c);
                }
                break;
            }
        }
        for (int h : hs) st.F.at(h, n - h) = 0;
    }

    NormalFormResult out;
    auto& d = out.data;
    d.kind = loc.kind;
    d.theta_c = loc.theta_c;
    d.E_c = loc.E_c;
    d.eps = eps;
    d.lambda_lin = q.lambda_lin;
    d.delta = q.delta;
    d.g = q.g;
    d.nu0 = q.nu0;
    d.omega = omega.real();
    d.order = K;
    d.R.assign(K / 2 + 1, 0.0);
    for (int h = 2; 2 * h <= K; ++h) d.R[h] = st.F.at(h, h).real() / std::pow(2.0, h);
    out.normalized = st.F;

    auto& T = out.transform;
    T.kind = loc.kind;
    T.delta = q.delta;
    T.eps = eps;
    T.theta_c = loc.theta_c;
    T.X = st.X;
    T.Y = st.Y;
    // nonlinear parts only, so an untouched frame gives a1 = a2 = 0 exactly
    const Frame wide = frame(loc.kind, KT);
    const Poly2 dX = (st.X - Poly2::var_x(KT)).compose(wide.xi_of_yx, wide.eta_of_yx);
    const Poly2 dY = (st.Y - Poly2::var_y(KT)).compose(wide.xi_of_yx, wide.eta_of_yx);
    Poly2 a1 = wide.y_of.compose(dX, dY);
    Poly2 a2 = wide.x_of.compose(dX, dY);
    T.a1 = Poly2(KT);
    T.a2 = Poly2(KT);
    for (int a = 0; a <= KT; ++a)
        for (int b = 0; a + b <= KT; ++b) {
            T.a1.at(a, b) = a1.at(a, b).real();
            T.a2.at(a, b) = a2.at(a, b).real();
        }

    // effective radius: largest r with residual below probe_level, then the residual at r/10
    auto res = [&](double r) { return normal_form_residual(loc, out, r, opts.probe_angles); };
    double lo = 1e-3, hi = opts.probe_cap;
    if (res(hi) <= opts.probe_level) {
        lo = hi;
    } else if (res(lo) > opts.probe_level) {
        hi = lo;
    } else {
        for (int it = 0; it < 40 && hi / lo > 1 + 1e-3; ++it) {
            double mid = std::sqrt(lo * hi);
            (res(mid) <= opts.probe_level ? lo : hi) = mid;
        }
    }
    d.c0 = lo;
    d.residual = res(0.1 * d.c0);
    if (opts.throw_on_residual && d.residual > opts.tol)
        fail("ResidualTooLarge", "normal form residual " + std::to_string(d.residual) + " above tolerance");
    d.inversion_radius = probe_inversion_radius(d);
    return out;
}

NormalFormResult birkhoff_normalize(const StandardFormHamiltonian& H, int critical_index,
                                    const std::vector<double>& p_hat, const NormalFormOptions& opts,
                                    double energy_scale) {
    const double eps = energy_scale > 0 ? energy_scale : H.chars.eps;
    return birkhoff_normalize(expansion_at(H, critical_index, p_hat, opts.order), eps, opts);
}

std::array<double, 2> transform_point(const TransformSeries& ts, double y1, double x1) {
    const double e4 = std::pow(ts.eps, 0.25);
    const double yt = y1 / e4, xt = x1 / e4;
    const double Y = yt + ts.a1(yt, xt).real(), X = xt + ts.a2(yt, xt).real();
    return {ts.delta * e4 * Y, ts.theta_c + e4 * X / ts.delta};
}

std::array<double, 4> transform_jacobian(const TransformSeries& ts, double y1, double x1) {
    const double e4 = std::pow(ts.eps, 0.25);
    const double yt = y1 / e4, xt = x1 / e4;
    const double a1y = ts.a1.dx()(yt, xt).real(), a1x = ts.a1.dy()(yt, xt).real();
    const double a2y = ts.a2.dx()(yt, xt).real(), a2x = ts.a2.dy()(yt, xt).real();
    return {ts.delta * (1 + a1y), ts.delta * a1x, a2y / ts.delta, (1 + a2x) / ts.delta};
}

// ---------------------------------------------------------------- inversion and coordinates

namespace {

bool newton_J(const NormalFormData& nf, cplx z, cplx& J) {
    const double a = nf.g / std::sqrt(nf.eps);
    J = z / a;
    for (int it = 0; it < 60; ++it) {
        const cplx f = a * J - nf.R_value(-J) - z;
        const cplx df = a + nf.dR(-J);
        if (df == cplx(0)) return false;
        const cplx step = f / df;
        J -= step;
        if (!std::isfinite(std::abs(J))) return false;
        if (std::abs(step) <= 1e-16 * std::max(1.0, std::abs(J))) break;
    }
    return std::abs(a * J - nf.R_value(-J) - z) <= 1e-13 * std::max(1.0, std::abs(z));
}

}  // namespace

cplx invert_energy_J(const NormalFormData& nf, cplx z) {
    if (nf.inversion_radius > 0 && std::abs(z) > nf.inversion_radius)
        fail("NewtonDiverged", "z beyond the probed inversion radius");
    cplx J;
    if (!newton_J(nf, z, J)) fail("NewtonDiverged", "J inversion did not converge");
    return J;
}

double invert_energy_J(const NormalFormData& nf, double z) { return invert_energy_J(nf, cplx(z)).real(); }

double probe_inversion_radius(const NormalFormData& nf, double cap) {
    auto ok = [&](double r) {
        for (int j = 0; j < 16; ++j) {
            cplx J;
            if (!newton_J(nf, std::polar(r, 2 * kPi * j / 16), J)) return false;
        }
        return true;
    };
    if (ok(cap)) return cap;
    double lo = 0, hi = cap;
    for (int it = 0; it < 30; ++it) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

double elliptic_action_energy(const NormalFormData& nf, double I1) {
    if (nf.kind != NFKind::elliptic) throw ConfigError("InvalidArgument", "elliptic normal form required");
    const double se = std::sqrt(nf.eps);
    if (nf.c0 > 0 && std::abs(I1) > nf.c0 * nf.c0 * se / 2) fail("OutOfRadius", "action beyond the normal form disk");
    return nf.E_c + 2 * nf.g * I1 + nf.eps * nf.R_at(2 * I1 / se);
}

EnergyTimePoint energy_time_coords(const NormalFormData& nf, double E, double t) {
    if (nf.kind != NFKind::hyperbolic) throw ConfigError("InvalidArgument", "hyperbolic normal form required");
    const double se = std::sqrt(nf.eps);
    const double z = (nf.E_c - E) / nf.eps;
    const double J = invert_energy_J(nf, z);
    const double Jp = se * J;
    if (!(Jp > 0)) fail("BranchViolation", "-J(E) not in the right half-plane");
    EnergyTimePoint pt;
    pt.J = J;
    pt.w = 2 * (nf.g + se * nf.dR(-J).real());
    pt.y1 = std::sqrt(Jp) * std::sinh(pt.w * t);
    pt.x1 = std::sqrt(Jp + pt.y1 * pt.y1);
    return pt;
}

double energy_time_inverse(const NormalFormData& nf, double E, double y1, double x1) {
    const double se = std::sqrt(nf.eps);
    const double J = invert_energy_J(nf, (nf.E_c - E) / nf.eps);
    const double w = 2 * (nf.g + se * nf.dR(-J).real());
    return std::atanh(y1 / x1) / w;
}

oracle::PlanarHamiltonian normal_form_hamiltonian(const NormalFormData& nf) {
    const double s = nf.kind == NFKind::hyperbolic ? -1.0 : 1.0;
    const double se = std::sqrt(nf.eps);
    auto Om = [nf, se](double U) { return nf.g + se * nf.dR(U / se).real(); };
    auto dOm = [nf](double U) { return nf.d2R(U / std::sqrt(nf.eps)).real(); };
    oracle::PlanarHamiltonian H;
    H.value = [nf, s, se](double p, double q) {
        const double U = p * p + s * q * q;
        return nf.E_c + nf.g * U + nf.eps * nf.R_at(U / se);
    };
    H.gradient = [s, Om](double p, double q) {
        const double o = Om(p * p + s * q * q);
        return std::array<double, 2>{2 * p * o, 2 * s * q * o};
    };
    H.hessian = [s, Om, dOm](double p, double q) {
        const double U = p * p + s * q * q;
        const double o = Om(U), d = dOm(U);
        return std::array<double, 3>{2 * o + 4 * p * p * d, 4 * s * p * q * d, 2 * s * o + 4 * q * q * d};
    };
    return H;
}

}  // namespace liouville
