#include "liouville/separatrix.hpp"

#include "liouville/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace liouville {

namespace {
constexpr double kPi = std::numbers::pi;

Level edge_level(const ActionMap& map, int region, Branch b, double z) {
    return b == Branch::plus ? map.near_plus(region, z) : map.near_minus(region, z);
}

double horner(const std::vector<double>& c, double z) {
    double s = 0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * z + c[k];
    return s;
}

cplx horner(const std::vector<double>& c, cplx z) {
    cplx s = 0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * z + c[k];
    return s;
}

// slope and intercept of y against x
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return {slope, (sy - slope * sx) / n};
}
}  // namespace

std::string branch_label(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

Branch parse_branch(const std::string& s) {
    if (s == "plus") return Branch::plus;
    if (s == "minus") return Branch::minus;
    throw ConfigError("InvalidArgument", "branch must be plus or minus, got " + s);
}

std::vector<double> dyadic_grid(int k_min, int k_max, int per_octave) {
    if (k_min > k_max || per_octave < 1) throw ConfigError("InvalidArgument", "empty dyadic grid");
    std::vector<double> z;
    for (int j = per_octave * k_max; j >= per_octave * k_min; --j)
        z.push_back(std::exp2(-static_cast<double>(j) / per_octave));
    return z;
}

std::vector<double> branch_grid(const ActionMap& map, int region, int k_min, int k_max, int per_octave) {
    const auto w = map.window(region);
    const double Z = (w.E_plus - w.E_minus) / map.energy_scale();
    const int k_edge = static_cast<int>(std::ceil(std::log2(4 / Z)));
    return dyadic_grid(std::max(k_min, k_edge), k_max, per_octave);
}

SingularSamples singular_samples(const ActionMap& map, int region, Branch branch, const std::vector<double>& z) {
    SingularSamples s;
    s.region = region;
    s.branch = branch;
    s.eps = map.energy_scale();
    s.z = z;
    for (double zi : z) {
        if (!(zi > 0)) throw ConfigError("InvalidArgument", "z samples must be positive");
        s.I.push_back(map.action(region, edge_level(map, region, branch, zi)));
    }
    return s;
}

double SingularRep::phi_at(double z) const { return horner(phi, z); }
double SingularRep::psi_at(double z) const { return horner(psi, z); }
double SingularRep::value(double z) const { return phi_at(z) + psi_at(z) * z * std::log(z); }

SingularRep fit_singular_rep(const SingularSamples& s, const FitOptions& opts) {
    if (opts.degree > 8) throw ConfigError("InvalidArgument", "fit degree above 8");
    if (s.z.size() != s.I.size() || s.z.empty()) throw ConfigError("InvalidArgument", "sample arrays mismatch");
    for (int d = opts.degree; d >= 0; --d) {
        const int nc = 2 * (d + 1);
        const int nr = static_cast<int>(s.z.size());
        if (nr < nc) continue;
        Eigen::MatrixXd A(nr, nc);
        Eigen::VectorXd b(nr);
        for (int r = 0; r < nr; ++r) {
            const double z = s.z[r], lz = std::log(z);
            for (int k = 0; k <= d; ++k) {
                A(r, k) = std::pow(z, k);
                A(r, d + 1 + k) = std::pow(z, k + 1) * lz;
            }
            b(r) = s.I[r];
        }
        Eigen::VectorXd colscale(nc);
        for (int c = 0; c < nc; ++c) {
            colscale(c) = A.col(c).cwiseAbs().maxCoeff();
            A.col(c) /= colscale(c);
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        const double rmax = std::abs(qr.matrixR()(0, 0)), rmin = std::abs(qr.matrixR()(nc - 1, nc - 1));
        if (qr.rank() < nc || rmax > opts.max_condition * rmin) continue;  // IllConditionedFit: drop a degree
        Eigen::VectorXd x = qr.solve(b);
        SingularRep rep;
        rep.region = s.region;
        rep.branch = s.branch;
        rep.eps = s.eps;
        rep.degree = d;
        rep.radius = opts.radius;
        for (int k = 0; k <= d; ++k) {
            rep.phi.push_back(x(k) / colscale(k));
            rep.psi.push_back(x(d + 1 + k) / colscale(d + 1 + k));
        }
        for (int r = 0; r < nr; ++r) rep.fit_residual = std::max(rep.fit_residual, std::abs(rep.value(s.z[r]) - s.I[r]));
        const int sg = opts.expected_sign;
        if ((sg == 1 && !(rep.psi0() > 0)) || (sg == -1 && !(rep.psi0() < 0)))
            fail("SignViolation", "psi(0) = " + std::to_string(rep.psi0()) + " has the wrong sign");
        return rep;
    }
    fail("IllConditionedFit", "no degree gives a well conditioned fit");
}

int expected_psi_sign(const ActionMap& map, int region, Branch branch) {
    auto passages = map.separatrix_passages(region, branch == Branch::plus);
    if (passages.empty()) return 0;
    return branch == Branch::plus ? 1 : -1;
}

double psi_zero_prediction(double g, double eps) {
    if (!(g > 0)) throw ConfigError("InvalidArgument", "g must be positive");
    return eps / (4 * kPi * g);
}

double critical_rate(const ActionMap& map, int c) {
    const double t = map.criticals().angle(c);
    const double g2 = map.potential().derivative_at(t, 2);
    const double nu0 = map.nu().at(t).value(0.0);
    if (g2 == 0) fail("DegenerateHessian", "vanishing second derivative at a critical point");
    return std::sqrt(1 + nu0) * std::sqrt(std::abs(g2) / 2);
}

double psi_zero_from_passages(const ActionMap& map, int region, Branch branch) {
    double s = 0;
    for (int c : map.separatrix_passages(region, branch == Branch::plus))
        s += psi_zero_prediction(critical_rate(map, c), map.energy_scale());
    return branch == Branch::plus ? s : -s;
}

cplx complex_action_eval(const SingularRep& rep, cplx z) {
    if (z.imag() == 0 && z.real() <= 0) fail("BranchCut", "z on the closed negative real axis");
    if (rep.radius > 0 && std::abs(z) >= rep.radius) fail("OutOfRadius", "|z| beyond the representation radius");
    return horner(rep.phi, z) + horner(rep.psi, z) * z * std::log(z);
}

BoundsReport check_derivative_bounds(const ActionMap& map, int region, const SingularRep& rep,
                                     const BoundsOptions& opts) {
    BoundsReport r;
    const double eps = map.energy_scale();
    const auto w = map.window(region);
    const RegionKind k = map.kind(region);
    const bool rotation = k == RegionKind::lower_rotation || k == RegionKind::upper_rotation;
    r.min_scaled_derivative = std::numeric_limits<double>::infinity();
    for (int j = 0; j < opts.samples; ++j) {
        double E, scaled;
        if (rotation) {
            // geometric in the distance to the separatrix, up to 100 eps above it
            double d = eps * std::pow(10.0, -8 + 10.0 * j / std::max(1, opts.samples - 1));
            E = w.E_minus + d;
            scaled = map.dIdE(region, map.near_minus(region, d / eps)) * std::sqrt(E + eps);
        } else {
            double t = (j + 0.5) / opts.samples;
            E = w.E_minus + (w.E_plus - w.E_minus) * t;
            scaled = map.dIdE(region, E) * std::sqrt(eps);
        }
        r.min_scaled_derivative = std::min(r.min_scaled_derivative, scaled);
    }
    if (opts.c_emp > 0 && r.min_scaled_derivative < opts.c_emp)
        r.failures.push_back("derivative lower bound " + std::to_string(r.min_scaled_derivative) + " < c_emp " +
                             std::to_string(opts.c_emp));

    std::vector<double> L, D;
    for (int kk = opts.slope_k_min; kk <= opts.slope_k_max; ++kk) {
        double z = std::exp2(-kk);
        L.push_back(-std::log(z));
        D.push_back(map.dIdE(region, edge_level(map, region, rep.branch, z)));
    }
    r.slope = linear_fit(L, D).first;
    r.slope_expected = std::abs(rep.psi0()) / eps;
    for (std::size_t j = 0; j < L.size(); ++j)
        r.max_asymptote_gap = std::max(r.max_asymptote_gap, std::abs(D[j] - r.slope_expected * L[j]));
    if (std::abs(r.slope - r.slope_expected) > opts.slope_tol * r.slope_expected)
        r.failures.push_back("log slope " + std::to_string(r.slope) + " vs psi(0)/eps " +
                             std::to_string(r.slope_expected));
    if (opts.throw_on_violation && !r.ok()) fail("BoundViolation", r.failures.front());
    return r;
}

DriftReport perturbation_drift(const ActionMap& perturbed, const ActionMap& reference, double mu, double lambda,
                               double C_hat, int points) {
    DriftReport rep;
    rep.lambda = lambda;
    rep.mu = mu;
    rep.in_regime = C_hat <= 0 || (C_hat * mu <= lambda && lambda * C_hat <= 1);
    const double eps = reference.energy_scale();
    if (perturbed.n_regions() != reference.n_regions()) fail("InvalidArgument", "maps have different regions");
    for (int i = 0; i < reference.n_regions(); ++i) {
        const auto w = reference.window(i);
        const RegionKind k = reference.kind(i);
        for (int j = 1; j <= points; ++j) {
            const double t = static_cast<double>(j) / points;
            double diff;
            if (k == RegionKind::libration) {
                // from just above the bottom to lambda below the top, anchored at the top
                const double span = (w.E_plus - w.E_minus) / eps - lambda;
                const double z = lambda + span * (t - 0.5 / points);
                diff = perturbed.dIdE(i, perturbed.near_plus(i, z)) - reference.dIdE(i, reference.near_plus(i, z));
            } else if (k == RegionKind::annulus) {
                const double span = (w.E_plus - w.E_minus) / eps - 2 * lambda;
                const double z = lambda + span * (t - 0.5 / points);
                diff = perturbed.dIdE(i, perturbed.near_minus(i, z)) - reference.dIdE(i, reference.near_minus(i, z));
            } else {
                const double z = lambda * std::pow(100.0 / lambda, (t - 1.0 / points) / (1 - 1.0 / points));
                diff = perturbed.dIdE(i, perturbed.near_minus(i, z)) - reference.dIdE(i, reference.near_minus(i, z));
            }
            rep.max_dIdE_diff = std::max(rep.max_dIdE_diff, std::abs(diff));
        }
    }
    rep.scaled = mu > 0 ? rep.max_dIdE_diff * lambda * std::sqrt(eps) / mu : 0.0;

    for (int i = 0; i < reference.n_regions(); ++i) {
        const RegionKind k = reference.kind(i);
        const Branch b = k == RegionKind::libration ? Branch::plus : Branch::minus;
        const auto z = branch_grid(reference, i);
        FitOptions fo;
        auto a = fit_singular_rep(singular_samples(perturbed, i, b, z), fo);
        auto c = fit_singular_rep(singular_samples(reference, i, b, z), fo);
        rep.max_phi_diff = std::max(rep.max_phi_diff, std::abs(a.phi0() - c.phi0()));
        rep.max_psi_diff = std::max(rep.max_psi_diff, std::abs(a.psi0() - c.psi0()));
    }
    return rep;
}

AnalyticityWindow analyticity_window(double lambda, double eps, double C_hat) {
    if (!(C_hat > 0)) throw ConfigError("InvalidArgument", "C_hat must be positive");
    if (!(lambda > 0) || lambda > 1 / C_hat) fail("LambdaOutOfRange", "lambda outside (0, 1/C_hat]");
    AnalyticityWindow w;
    w.lambda = lambda;
    const double L = std::abs(std::log(lambda));
    w.rho = std::sqrt(eps) * lambda * L / C_hat;
    w.sigma = 1 / (C_hat * L);
    w.lambda_hat = lambda * L * L * L;
    return w;
}

RadiusProbe chebyshev_radius(const std::function<double(double)>& f, double center, double half_width, int samples) {
    RadiusProbe p;
    p.center = center;
    p.half_width = half_width;
    const int n = samples;
    std::vector<double> v(n);
    double vmax = 0;
    for (int j = 0; j < n; ++j) {
        v[j] = f(center + half_width * std::cos(kPi * (j + 0.5) / n));
        vmax = std::max(vmax, std::abs(v[j]));
    }
    p.coeffs.resize(n);
    for (int k = 0; k < n; ++k) {
        double s = 0;
        for (int j = 0; j < n; ++j) s += v[j] * std::cos(kPi * k * (j + 0.5) / n);
        p.coeffs[k] = (k == 0 ? 1.0 : 2.0) * s / n;
    }
    const double floor = 64 * 2.2e-16 * std::max(vmax, 1e-300);
    std::vector<double> env(n, 0.0);
    for (int k = n - 1; k >= 0; --k) env[k] = std::max(std::abs(p.coeffs[k]), k + 1 < n ? env[k + 1] : 0.0);
    int last = 0;
    for (int k = 1; k < n; ++k)
        if (env[k] > floor) last = k;
    double r;
    if (last >= 4) {
        std::vector<double> K, Y;
        // tail of the envelope, where the geometric rate dominates
        for (int k = std::max(1, last / 2); k <= last; ++k) {
            K.push_back(k);
            Y.push_back(std::log(env[k]));
        }
        r = std::exp(-linear_fit(K, Y).first);
    } else {
        // coefficients reach the noise floor almost at once
        r = std::pow(std::max(env[1], vmax) / floor, 1.0 / (last + 1));
    }
    p.bernstein = std::max(r, 1.0);
    p.radius = half_width * (p.bernstein - 1 / p.bernstein) / 2;
    return p;
}

HessianReport hessian_bounds(const ActionMap& map, int region, const AnalyticityWindow& window, int points) {
    HessianReport rep;
    const double eps = map.energy_scale();
    const double lambda = window.lambda;
    const RegionKind k = map.kind(region);
    const bool rotation = k == RegionKind::lower_rotation || k == RegionKind::upper_rotation;
    auto d0 = region_domains(0.0, map)[region];
    auto dl = region_domains(lambda, map)[region];
    double lo = dl.a_minus;
    double hi = rotation ? map.action(region, map.window(region).E_minus + 50 * eps) : dl.a_plus;
    double sing_hi = rotation ? std::numeric_limits<double>::infinity() : d0.a_plus;
    double sing_lo = k == RegionKind::libration ? -std::numeric_limits<double>::infinity() : d0.a_minus;
    for (int j = 0; j <= points; ++j) {
        double I = lo + (hi - lo) * static_cast<double>(j) / points;
        if (k == RegionKind::libration && j == 0) I = lo + (hi - lo) * 0.25 / points;
        double h = std::min({1e-3 * (hi - lo), 0.1 * (sing_hi - I), 0.1 * (I - sing_lo)});
        if (k == RegionKind::libration) h = std::min(h, 0.5 * I);
        const double E = map.energy_of_action(region, I);
        const double Ep = map.energy_of_action(region, I + h), Em = map.energy_of_action(region, I - h);
        const double d2 = (Ep - 2 * E + Em) / (h * h);
        const double d1 = 1 / map.dIdE(region, E);
        rep.max_first_ratio = std::max(rep.max_first_ratio, std::abs(d1) / std::sqrt(eps + std::abs(E)));
        rep.max_second = std::max(rep.max_second, std::abs(d2));
        const double ip = map.dIdE(region, E);
        const double id = -map.d2IdE2(region, E) / (ip * ip * ip);
        rep.max_identity_gap = std::max(rep.max_identity_gap, std::abs(d2 - id) / std::max(1.0, std::abs(id)));
    }
    rep.max_second_scaled = rep.max_second * window.lambda_hat;
    return rep;
}

}  // namespace liouville
