#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "poisswave/signals.hpp"

namespace poisswave {

/// Index into the biorthogonal family: j = -1 addresses the scaling translate
/// phi(. - k), j >= 0 addresses psi_{j,k} = 2^{j/2} psi(2^j . - k).
struct LambdaIndex {
    int j = -1;
    std::int64_t k = 0;

    friend bool operator==(const LambdaIndex& a, const LambdaIndex& b) {
        return a.j == b.j && a.k == b.k;
    }
    friend bool operator<(const LambdaIndex& a, const LambdaIndex& b) {
        return a.j != b.j ? a.j < b.j : a.k < b.k;
    }
};

/// Step function with half-open pieces [edges[i], edges[i+1]) -> values[i].
/// Evaluation at a breakpoint takes the right-limit; outside the hull it is 0.
/// Edges live on the half-integer grid so evaluation is exact in doubles.
struct PiecewiseConstant {
    std::vector<double> edges;
    std::vector<double> values;

    double operator()(double x) const;
    double lo() const { return edges.front(); }
    double hi() const { return edges.back(); }
    /// Exact moment integral of x^q against the step function.
    double moment(int q) const;
    double sup_abs() const;
    double inf_abs() const;  // over the pieces (the support)
};

/// Analysis pair (phi, psi) given exactly as step functions, plus the
/// reconstruction-side two-scale filters.  The dual scaling function is
/// evaluated through a cascade table at mesh 2^-cascade_depth with linear
/// interpolation (exact for Haar); duals are used only for reconstruction,
/// never for coefficient statistics.
class BiorthBasis {
  public:
    static const BiorthBasis& haar();
    static const BiorthBasis& spline15();
    static const BiorthBasis& from_token(const std::string& token);
    static const std::vector<std::string>& tokens();

    const std::string& token() const { return token_; }
    const PiecewiseConstant& phi() const { return phi_; }
    const PiecewiseConstant& psi() const { return psi_; }

    /// Dual two-scale filters: phid(x) = sum_m recon_lo[m] phid(2x - m - lo_off),
    /// psid(x) = sum_m recon_hi[m] phid(2x - m - hi_off).
    const std::vector<double>& recon_lo() const { return recon_lo_; }
    int recon_lo_offset() const { return recon_lo_off_; }
    const std::vector<double>& recon_hi() const { return recon_hi_; }
    int recon_hi_offset() const { return recon_hi_off_; }

    /// Largest q such that psi kills polynomials of degree <= q.
    int vanishing_degree() const { return vanishing_degree_; }
    int cascade_depth() const { return cascade_depth_; }

    double sup_norm(const LambdaIndex& l) const;
    double support_lo(const LambdaIndex& l) const;
    double support_hi(const LambdaIndex& l) const;
    double eval_analysis(const LambdaIndex& l, double x) const;
    double eval_dual(const LambdaIndex& l, double x) const;

    double dual_phi(double x) const;
    double dual_psi(double x) const;
    double dual_support_lo(const LambdaIndex& l) const;
    double dual_support_hi(const LambdaIndex& l) const;

  private:
    BiorthBasis() = default;
    void build_cascade();

    std::string token_;
    PiecewiseConstant phi_, psi_;
    std::vector<double> recon_lo_, recon_hi_;
    int recon_lo_off_ = 0, recon_hi_off_ = 0;
    int vanishing_degree_ = 0;
    int cascade_depth_ = 10;
    bool dual_exact_ = false;  // Haar: duals equal the analysis pair

    // Cascade table for the dual scaling function: values at
    // dual_lo_ + i * 2^-cascade_depth, i = 0..table size - 1.
    double dual_lo_ = 0.0, dual_hi_ = 0.0;
    std::vector<double> dual_table_;
};

/// Exact true coefficient beta_lambda = integral of f * (analysis atom),
/// computed from the signal CDF and the atom's step pieces.
double true_coeff(const Signal& f, const BiorthBasis& basis, const LambdaIndex& l);
/// Exact sigma^2_lambda = integral of f * (analysis atom)^2.
double true_sigma2(const Signal& f, const BiorthBasis& basis, const LambdaIndex& l);

/// Evaluate sum beta_lambda * (dual atom) on a sorted grid.
std::vector<double> reconstruct(const BiorthBasis& basis,
                                const std::vector<std::pair<LambdaIndex, double>>& coeffs,
                                const std::vector<double>& grid);

}  // namespace poisswave
