#pragma once

#include "liouville/oracle.hpp"
#include "liouville/standard_form.hpp"

#include <functional>
#include <string>
#include <vector>

namespace liouville {

/// Complex polynomial sum c[h][k] x^h y^k truncated at total degree K.
class Poly2 {
public:
    explicit Poly2(int K = 0) : K_(K), c_((K + 1) * (K + 1), cplx(0)) {}
    static Poly2 var_x(int K);
    static Poly2 var_y(int K);
    static Poly2 constant(int K, cplx v);

    int order() const { return K_; }
    cplx& at(int h, int k) { return c_[h * (K_ + 1) + k]; }
    cplx at(int h, int k) const { return c_[h * (K_ + 1) + k]; }
    bool is_zero(double tol = 0) const;
    double max_abs() const;

    Poly2 operator+(const Poly2& o) const;
    Poly2 operator-(const Poly2& o) const;
    Poly2 operator*(const Poly2& o) const;
    Poly2 operator*(cplx s) const;
    Poly2 dx() const;
    Poly2 dy() const;
    Poly2 homogeneous(int n) const;
    /// Drop every term of total degree below n.
    Poly2 from_degree(int n) const;
    /// Same coefficients at another truncation order.
    Poly2 resized(int K) const;

    cplx operator()(cplx x, cplx y) const;
    /// p(X, Y) with X, Y polynomials of the same order.
    Poly2 compose(const Poly2& X, const Poly2& Y) const;

private:
    int K_;
    std::vector<cplx> c_;
};

/// c (f_x g_y - f_y g_x).
Poly2 poisson(const Poly2& f, const Poly2& g, cplx c);
/// sum_n L^n f / n!, L f = {f, chi}.
Poly2 lie_series(const Poly2& f, const Poly2& chi, cplx c);

enum class NFKind { hyperbolic, elliptic };
std::string nf_kind_label(NFKind k);

/// Taylor table h[a][b] of H(theta_c + q, p) - E_c in p^a q^b, a + b <= K, plus an exact evaluator.
struct LocalExpansion {
    NFKind kind = NFKind::hyperbolic;
    double theta_c = 0;
    double E_c = 0;
    int order = 6;
    std::vector<std::vector<double>> h;
    /// H(p, theta_c + q) - E_c
    std::function<cplx(cplx, cplx)> exact;
};

LocalExpansion local_expansion(const PeriodicPotential& G, const NuSlice& nu, double theta_c, int K);
/// H = p^2 - g0^2 q^2 (hyperbolic) or p^2 + g0^2 q^2 (elliptic), exactly quadratic.
LocalExpansion quadratic_model(double g0, NFKind kind, int K);

struct QuadraticData {
    NFKind kind = NFKind::hyperbolic;
    double lambda_lin = 0;
    double delta = 0;
    double g = 0;
    double nu0 = 0;
};

QuadraticData local_quadratic_data(const LocalExpansion& loc);
/// Checks the two-sided bounds on lambda and g from the characteristics (InvariantViolation).
QuadraticData local_quadratic_data(const StandardFormHamiltonian& H, int critical_index,
                                   const std::vector<double>& p_hat = {});

enum class NFOrdering { simultaneous, ascending, descending, kernel_shift };

struct NormalFormOptions {
    int order = 6;
    NFOrdering ordering = NFOrdering::simultaneous;
    double tol = 1e-9;  ///< residual tolerance in units of eps
    bool throw_on_residual = true;
    double probe_level = 1e-3;
    double probe_cap = 4.0;
    int probe_angles = 12;
};

struct NormalFormData {
    NFKind kind = NFKind::hyperbolic;
    double theta_c = 0;
    double E_c = 0;
    double eps = 1;
    double lambda_lin = 0;
    double delta = 0;
    double g = 0;
    double nu0 = 0;
    double omega = 0;            ///< coefficient of xi*eta, 2g/sqrt(eps)
    std::vector<double> R;       ///< R(u) = sum R[h] u^h, R[0] = R[1] = 0
    int order = 0;
    double residual = 0;         ///< sup |H o Phi - normal form| / eps on the radius 0.1*c0
    double c0 = 0;               ///< scaled polydisk radius where the residual reaches probe_level
    double inversion_radius = 0;

    double R_at(double u) const { return R_value(cplx(u)).real(); }
    cplx R_value(cplx u) const;
    cplx dR(cplx u) const;
    cplx d2R(cplx u) const;
};

struct TransformSeries {
    NFKind kind = NFKind::hyperbolic;
    double delta = 1;
    double eps = 1;
    double theta_c = 0;
    Poly2 X, Y;  ///< old (xi, eta) as series in the new ones, carried to a higher order than the normal form
    /// old (y~, x~) = (y~ + a1, x~ + a2) in the scaled real variables, real coefficients
    Poly2 a1, a2;
};

struct NormalFormResult {
    NormalFormData data;
    TransformSeries transform;
    Poly2 normalized;  ///< F o Phi in (xi, eta), truncated
};

NormalFormResult birkhoff_normalize(const LocalExpansion& loc, double eps, const NormalFormOptions& opts = {});
NormalFormResult birkhoff_normalize(const StandardFormHamiltonian& H, int critical_index,
                                    const std::vector<double>& p_hat = {}, const NormalFormOptions& opts = {},
                                    double energy_scale = 0);

/// sup over the complex polydisk |xi|, |eta| <= r of |F o Phi - normal form| (F = (H - E_c)/eps).
double normal_form_residual(const LocalExpansion& loc, const NormalFormResult& nf, double r, int angles = 12);

/// (p1, q1) of the point with new unscaled coordinates (y1, x1).
std::array<double, 2> transform_point(const TransformSeries& ts, double y1, double x1);
/// Jacobian d(p1, q1)/d(y1, x1) from exact polynomial derivatives.
std::array<double, 4> transform_jacobian(const TransformSeries& ts, double y1, double x1);

/// J with (g/sqrt eps) J - R(-J) = z.
cplx invert_energy_J(const NormalFormData& nf, cplx z);
double invert_energy_J(const NormalFormData& nf, double z);
/// Largest |z| on a doubling/bisection ladder for which Newton converges on the whole circle.
double probe_inversion_radius(const NormalFormData& nf, double cap = 1.0);

/// E_c + 2 g I + eps R(2 I / sqrt eps).
double elliptic_action_energy(const NormalFormData& nf, double I1);

struct EnergyTimePoint {
    double y1 = 0, x1 = 0, w = 0, J = 0;
};
EnergyTimePoint energy_time_coords(const NormalFormData& nf, double E, double t);
/// arctanh(y1/x1)/w
double energy_time_inverse(const NormalFormData& nf, double E, double y1, double x1);

/// E_c + g U + eps R(U / sqrt eps), U = y1^2 - x1^2 (hyperbolic) or y1^2 + x1^2 (elliptic), p = y1, q = x1.
oracle::PlanarHamiltonian normal_form_hamiltonian(const NormalFormData& nf);

}  // namespace liouville
