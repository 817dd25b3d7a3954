#include "liouville/taylor_fourier.hpp"

#include "liouville/errors.hpp"

#include <algorithm>
#include <cmath>

namespace liouville {

TaylorFourier TaylorFourier::constant(int n_vars, const PeriodicPotential& c) {
    TaylorFourier t(n_vars);
    t.add_term(std::vector<int>(n_vars, 0), c);
    return t;
}

void TaylorFourier::add_term(std::vector<int> powers, const PeriodicPotential& coeff) {
    if (static_cast<int>(powers.size()) != n_vars_)
        throw ConfigError("InvalidArgument", "term arity does not match the table");
    for (auto& t : terms_) {
        if (t.powers == powers) {
            t.coeff = t.coeff + coeff;
            return;
        }
    }
    terms_.push_back({std::move(powers), coeff});
}

int TaylorFourier::degree_in(int var) const {
    int d = 0;
    for (auto& t : terms_)
        if (!t.coeff.is_zero()) d = std::max(d, t.powers[var]);
    return d;
}

bool TaylorFourier::is_zero() const {
    return std::all_of(terms_.begin(), terms_.end(), [](auto& t) { return t.coeff.is_zero(); });
}

double TaylorFourier::value(const std::vector<double>& p, double theta) const {
    double s = 0;
    for (auto& t : terms_) {
        double m = 1;
        for (int k = 0; k < n_vars_; ++k) m *= std::pow(p[k], t.powers[k]);
        s += m * t.coeff(theta);
    }
    return s;
}

cplx TaylorFourier::value(const std::vector<cplx>& p, cplx theta) const {
    cplx s = 0;
    for (auto& t : terms_) {
        cplx m = 1;
        for (int k = 0; k < n_vars_; ++k)
            for (int e = 0; e < t.powers[k]; ++e) m *= p[k];
        s += m * t.coeff(theta);
    }
    return s;
}

PeriodicPotential TaylorFourier::slice(const std::vector<double>& p) const {
    PeriodicPotential out;
    for (auto& t : terms_) {
        double m = 1;
        for (int k = 0; k < n_vars_; ++k) m *= std::pow(p[k], t.powers[k]);
        out = out + t.coeff.scaled(m);
    }
    return out;
}

std::vector<PeriodicPotential> TaylorFourier::slice_first(const std::vector<double>& rest) const {
    std::vector<PeriodicPotential> out(degree_in(0) + 1);
    for (auto& t : terms_) {
        double m = 1;
        for (int k = 1; k < n_vars_; ++k) m *= std::pow(rest[k - 1], t.powers[k]);
        out[t.powers[0]] = out[t.powers[0]] + t.coeff.scaled(m);
    }
    return out;
}

// ---------------------------------------------------------------- NuSlice

NuSlice::NuSlice(std::vector<PeriodicPotential> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.emplace_back();
    zero_ = std::all_of(coeffs_.begin(), coeffs_.end(), [](auto& c) { return c.is_zero(); });
}

NuSlice::At NuSlice::at(double theta) const {
    At a;
    a.c.resize(coeffs_.size());
    for (std::size_t k = 0; k < coeffs_.size(); ++k) a.c[k] = coeffs_[k].is_zero() ? 0.0 : coeffs_[k](theta);
    return a;
}

cplx NuSlice::value(cplx p, cplx theta) const {
    cplx s = 0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) s = s * p + coeffs_[k](theta);
    return s;
}

double NuSlice::At::value(double p) const {
    double s = 0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * p + c[k];
    return s;
}

double NuSlice::At::d1(double p) const {
    double s = 0;
    for (std::size_t k = c.size(); k-- > 1;) s = s * p + k * c[k];
    return s;
}

double NuSlice::At::d2(double p) const {
    double s = 0;
    for (std::size_t k = c.size(); k-- > 2;) s = s * p + static_cast<double>(k * (k - 1)) * c[k];
    return s;
}

cplx NuSlice::At::value(cplx p) const {
    cplx s = 0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * p + c[k];
    return s;
}

cplx NuSlice::At::d1(cplx p) const {
    cplx s = 0;
    for (std::size_t k = c.size(); k-- > 1;) s = s * p + static_cast<double>(k) * c[k];
    return s;
}

// ---------------------------------------------------------------- handles

cplx TaylorFourierNu::value(cplx p1, const std::vector<cplx>& p_hat, cplx q) const {
    std::vector<cplx> p;
    p.reserve(p_hat.size() + 1);
    p.push_back(p1);
    p.insert(p.end(), p_hat.begin(), p_hat.end());
    return table_.value(p, q);
}

NuSlice TaylorFourierNu::slice(const std::vector<double>& p_hat) const {
    return NuSlice(table_.slice_first(p_hat));
}

cplx TaylorFourierPotential::value(const std::vector<cplx>& p_hat, cplx q) const {
    return table_.value(p_hat, q);
}

PeriodicPotential TaylorFourierPotential::slice(const std::vector<double>& p_hat) const {
    return table_.slice(p_hat);
}

std::shared_ptr<const NuFunction> zero_nu(int dim_p_hat) {
    return std::make_shared<TaylorFourierNu>(TaylorFourier(dim_p_hat + 1));
}

std::shared_ptr<const NuFunction> nu_from_potential(const PeriodicPotential& c, int dim_p_hat) {
    return std::make_shared<TaylorFourierNu>(TaylorFourier::constant(dim_p_hat + 1, c));
}

std::shared_ptr<const PotentialFamily> constant_family(const PeriodicPotential& G, int dim_p_hat) {
    return std::make_shared<TaylorFourierPotential>(TaylorFourier::constant(dim_p_hat, G));
}

}  // namespace liouville
