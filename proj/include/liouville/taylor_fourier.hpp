#pragma once

#include "liouville/potential.hpp"

#include <memory>
#include <vector>

namespace liouville {

/// sum over multi-indices a of p^a * c_a(theta), c_a periodic.
class TaylorFourier {
public:
    struct Term {
        std::vector<int> powers;
        PeriodicPotential coeff;
    };

    explicit TaylorFourier(int n_vars = 0) : n_vars_(n_vars) {}
    static TaylorFourier constant(int n_vars, const PeriodicPotential& c);

    int n_vars() const { return n_vars_; }
    const std::vector<Term>& terms() const { return terms_; }
    /// Adds to an existing term with equal powers.
    void add_term(std::vector<int> powers, const PeriodicPotential& coeff);
    int degree_in(int var) const;
    bool is_zero() const;

    double value(const std::vector<double>& p, double theta) const;
    cplx value(const std::vector<cplx>& p, cplx theta) const;
    /// Fix every variable; result is a function of theta.
    PeriodicPotential slice(const std::vector<double>& p) const;
    /// Fix variables 1..n-1; coefficient k multiplies p_0^k.
    std::vector<PeriodicPotential> slice_first(const std::vector<double>& rest) const;

private:
    int n_vars_;
    std::vector<Term> terms_;
};

/// nu at fixed p_hat: polynomial in p1 with periodic coefficients.
class NuSlice {
public:
    NuSlice() = default;
    explicit NuSlice(std::vector<PeriodicPotential> coeffs);

    struct At {
        std::vector<double> c;
        double value(double p) const;
        double d1(double p) const;
        double d2(double p) const;
        cplx value(cplx p) const;
        cplx d1(cplx p) const;
    };

    bool is_zero() const { return zero_; }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<PeriodicPotential>& coeffs() const { return coeffs_; }
    At at(double theta) const;
    double value(double p, double theta) const { return at(theta).value(p); }
    cplx value(cplx p, cplx theta) const;

private:
    std::vector<PeriodicPotential> coeffs_;
    bool zero_ = true;
};

/// nu(p1, p_hat, q1), dimensionless.
class NuFunction {
public:
    virtual ~NuFunction() = default;
    virtual int dim_p_hat() const = 0;
    virtual cplx value(cplx p1, const std::vector<cplx>& p_hat, cplx q) const = 0;
    virtual NuSlice slice(const std::vector<double>& p_hat) const = 0;
    virtual bool is_zero() const { return false; }
};

/// G(p_hat, q1), energy units.
class PotentialFamily {
public:
    virtual ~PotentialFamily() = default;
    virtual int dim_p_hat() const = 0;
    virtual cplx value(const std::vector<cplx>& p_hat, cplx q) const = 0;
    virtual PeriodicPotential slice(const std::vector<double>& p_hat) const = 0;
};

class TaylorFourierNu : public NuFunction {
public:
    /// Variables are (p1, p_hat...).
    explicit TaylorFourierNu(TaylorFourier table) : table_(std::move(table)) {}
    int dim_p_hat() const override { return table_.n_vars() - 1; }
    cplx value(cplx p1, const std::vector<cplx>& p_hat, cplx q) const override;
    NuSlice slice(const std::vector<double>& p_hat) const override;
    bool is_zero() const override { return table_.is_zero(); }
    const TaylorFourier& table() const { return table_; }

private:
    TaylorFourier table_;
};

class TaylorFourierPotential : public PotentialFamily {
public:
    /// Variables are p_hat.
    explicit TaylorFourierPotential(TaylorFourier table) : table_(std::move(table)) {}
    int dim_p_hat() const override { return table_.n_vars(); }
    cplx value(const std::vector<cplx>& p_hat, cplx q) const override;
    PeriodicPotential slice(const std::vector<double>& p_hat) const override;
    const TaylorFourier& table() const { return table_; }

private:
    TaylorFourier table_;
};

std::shared_ptr<const NuFunction> zero_nu(int dim_p_hat = 0);
std::shared_ptr<const NuFunction> nu_from_potential(const PeriodicPotential& c, int dim_p_hat = 0);
std::shared_ptr<const PotentialFamily> constant_family(const PeriodicPotential& G, int dim_p_hat = 0);

}  // namespace liouville
