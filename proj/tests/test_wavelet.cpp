#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "poisswave/signals.hpp"
#include "poisswave/wavelet.hpp"

using namespace poisswave;

namespace {

// ---------------------------------------------------------------------------
// Dense linear solve (partial pivoting) for the filter oracle.
std::vector<double> solve_dense(std::vector<std::vector<double>> a, std::vector<double> b) {
    const std::size_t m = b.size();
    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < m; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        std::swap(a[col], a[piv]);
        std::swap(b[col], b[piv]);
        REQUIRE(std::abs(a[col][col]) > 1e-12);
        for (std::size_t r = col + 1; r < m; ++r) {
            double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < m; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(m);
    for (std::size_t i = m; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < m; ++c) s -= a[i][c] * x[c];
        x[i] = s / a[i][i];
    }
    return x;
}

// ---------------------------------------------------------------------------
// Adaptive Simpson with absolute tolerance; handles the finitely many jump
// discontinuities of the piecewise signals by recursion depth alone.
double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                   double fm, double fb, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 48);
}

// Integral of the signal density over [a, b); beta05's endpoint singularity
// is removed by the substitution x = t^2.
double density_integral(const Signal& f, double a, double b, double tol) {
    a = std::max(a, f.head_cut(1e-15) - 1.0);
    if (std::isinf(b)) b = f.tail_cut(1e-15);
    if (!(b > a)) return 0.0;
    if (f.token() == "beta05") {
        double ta = std::sqrt(std::max(a, 0.0));
        double tb = std::sqrt(std::min(b, 1.0));
        if (!(tb > ta)) return 0.0;
        auto g = [&](double t) { return f.density(t * t) * 2.0 * t; };
        return integrate(g, std::max(ta, 1e-15), tb, tol);
    }
    auto g = [&](double x) { return f.density(x); };
    return integrate(g, a, b, tol);
}

// Constant pieces of an analysis atom: [e_i, e_{i+1}) -> v_i, scale included.
struct AtomPieces {
    std::vector<double> e, v;
};

AtomPieces atom_pieces(const BiorthBasis& basis, const LambdaIndex& l) {
    AtomPieces out;
    const PiecewiseConstant& p = l.j < 0 ? basis.phi() : basis.psi();
    double scale = l.j < 0 ? 1.0 : std::ldexp(1.0, l.j);
    double amp = l.j < 0 ? 1.0 : std::sqrt(scale);
    for (double e : p.edges) out.e.push_back((e + static_cast<double>(l.k)) / scale);
    for (double v : p.values) out.v.push_back(v * amp);
    return out;
}

// ---------------------------------------------------------------------------
// Exact dual-side machinery from the two-scale filters alone.  Cell integrals
// I_d[i] = integral of dual phi over [i 2^-d, (i+1) 2^-d) obey the refinement
// I_d[i] = (1/2) sum_k c_k I_{d-1}[i - k 2^{d-1}] from I_0[i] = 1_{i=0}; taps
// are dyadic rationals so everything below is exact in doubles.
struct DualIntegrals {
    int depth = 0;
    std::int64_t lo = 0, hi = 0;       // support [lo, hi] in integers
    std::vector<double> prefix;        // prefix[i] = integral up to lo + i 2^-depth
    std::vector<double> hi_taps;       // recon_hi filter
    int hi_off = 0;

    double phi_int(double y) const {   // integral of dual phi over (-inf, y]
        double scaled = y * std::ldexp(1.0, depth);
        double r = std::round(scaled);
        REQUIRE(std::abs(scaled - r) < 1e-6);  // test grid must stay dyadic
        std::int64_t idx = static_cast<std::int64_t>(r) - lo * (std::int64_t{1} << depth);
        if (idx < 0) return 0.0;
        if (idx >= static_cast<std::int64_t>(prefix.size()))
            return prefix.back();
        return prefix[static_cast<std::size_t>(idx)];
    }
    double psi_int(double y) const {   // integral of dual psi over (-inf, y]
        double s = 0.0;
        for (std::size_t t = 0; t < hi_taps.size(); ++t)
            s += hi_taps[t] * 0.5 * phi_int(2.0 * y - static_cast<double>(hi_off + static_cast<int>(t)));
        return s;
    }
    // integral of the dual atom for lambda over [a, b)
    double atom_int(const LambdaIndex& l, double a, double b) const {
        if (l.j < 0) {
            double k = static_cast<double>(l.k);
            return phi_int(b - k) - phi_int(a - k);
        }
        double sc = std::ldexp(1.0, l.j);
        double amp = std::sqrt(sc);
        double k = static_cast<double>(l.k);
        return (psi_int(sc * b - k) - psi_int(sc * a - k)) * amp / sc;
    }
};

DualIntegrals build_dual_integrals(const BiorthBasis& basis, int depth) {
    DualIntegrals d;
    d.depth = depth;
    const auto& c = basis.recon_lo();
    d.lo = basis.recon_lo_offset();
    d.hi = d.lo + static_cast<std::int64_t>(c.size()) - 1;
    d.hi_taps = basis.recon_hi();
    d.hi_off = basis.recon_hi_offset();
    std::int64_t span = d.hi - d.lo;
    std::vector<double> cur(static_cast<std::size_t>(span), 0.0);
    for (std::int64_t i = 0; i < span; ++i)
        if (d.lo + i == 0) cur[static_cast<std::size_t>(i)] = 1.0;
    for (int dd = 1; dd <= depth; ++dd) {
        std::int64_t cells = span * (std::int64_t{1} << dd);
        std::int64_t base = d.lo * (std::int64_t{1} << dd);
        std::int64_t pcells = span * (std::int64_t{1} << (dd - 1));
        std::int64_t pbase = d.lo * (std::int64_t{1} << (dd - 1));
        std::vector<double> next(static_cast<std::size_t>(cells), 0.0);
        for (std::int64_t i = 0; i < cells; ++i) {
            double acc = 0.0;
            for (std::size_t t = 0; t < c.size(); ++t) {
                std::int64_t k = d.lo + static_cast<std::int64_t>(t);
                std::int64_t pi = base + i - k * (std::int64_t{1} << (dd - 1)) - pbase;
                if (pi < 0 || pi >= pcells) continue;
                acc += c[t] * cur[static_cast<std::size_t>(pi)];
            }
            next[static_cast<std::size_t>(i)] = 0.5 * acc;
        }
        cur.swap(next);
    }
    d.prefix.assign(cur.size() + 1, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) d.prefix[i + 1] = d.prefix[i] + cur[i];
    return d;
}

// Exact <analysis atom, dual atom> from pieces and exact dual integrals.
double exact_pairing(const BiorthBasis& basis, const DualIntegrals& d, const LambdaIndex& a,
                     const LambdaIndex& b) {
    AtomPieces p = atom_pieces(basis, a);
    double s = 0.0;
    for (std::size_t i = 0; i < p.v.size(); ++i)
        s += p.v[i] * d.atom_int(b, p.e[i], p.e[i + 1]);
    return s;
}

}  // namespace

TEST_SUITE("wavelet") {

TEST_CASE("haar atoms evaluate exactly") {
    const BiorthBasis& h = BiorthBasis::haar();
    CHECK(h.eval_analysis({0, 0}, 0.25) == 1.0);
    CHECK(h.eval_analysis({0, 0}, 0.75) == -1.0);
    // Breakpoints take the right limit: psi(0.5) = -1.
    CHECK(h.eval_analysis({0, 0}, 0.5) == -1.0);
    CHECK(h.eval_analysis({3, 5}, 0.64) == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-15));
    CHECK(h.eval_analysis({3, 5}, 5.5 / 8.0) ==
          doctest::Approx(-std::pow(2.0, 1.5)).epsilon(1e-15));
    CHECK(h.eval_analysis({-1, 3}, 3.5) == 1.0);
    CHECK(h.eval_analysis({-1, 3}, 4.0) == 0.0);
    // Unit box: integral of phi^2 is 1; psi has zero mean and first moment -1/4.
    CHECK(h.phi().moment(0) == 1.0);
    CHECK(h.psi().moment(0) == 0.0);
    CHECK(h.psi().moment(1) == -0.25);
    CHECK(h.sup_norm({4, 9}) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(h.support_lo({2, 3}) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(h.support_hi({2, 3}) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(h.vanishing_degree() == 0);
}

TEST_CASE("basis token registry") {
    CHECK(BiorthBasis::tokens() == std::vector<std::string>{"haar", "spline15"});
    CHECK(&BiorthBasis::from_token("haar") == &BiorthBasis::haar());
    CHECK(&BiorthBasis::from_token("spline15") == &BiorthBasis::spline15());
    CHECK_THROWS_AS(BiorthBasis::from_token("db4"), std::invalid_argument);
}

TEST_CASE("spline15 wavelet pieces match the published table") {
    const BiorthBasis& s = BiorthBasis::spline15();
    CHECK(s.psi().edges == std::vector<double>{-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0});
    CHECK(s.psi().values == std::vector<double>{3.0 / 128.0, -11.0 / 64.0, 1.0, -1.0,
                                                11.0 / 64.0, -3.0 / 128.0});
    CHECK(s.support_lo({0, 0}) == -2.0);
    CHECK(s.support_hi({0, 0}) == 3.0);
    CHECK(s.sup_norm({0, 0}) == 1.0);
    CHECK(s.psi().inf_abs() == 3.0 / 128.0);
    CHECK(s.vanishing_degree() == 4);
}

TEST_CASE("spline15 kills polynomials through degree 4") {
    const BiorthBasis& s = BiorthBasis::spline15();
    for (int q = 0; q <= 4; ++q) {
        INFO("degree " << q);
        CHECK(std::abs(s.psi().moment(q)) <= 1e-12);
    }
    // Degree 5 does not vanish, so 4 is exact.
    CHECK(std::abs(s.psi().moment(5)) > 1e-6);
}

TEST_CASE("dual lowpass filter solves the moment/biorthogonality system") {
    // Unknowns c_{-4..5}.  Five exact-reconstruction pair conditions against
    // the box filter (c_{-2l} + c_{1-2l} = 2 delta_{l0}) and five alternating
    // moment conditions (sum (-1)^m m^q c_m = 0, q = 0..4) pin the filter.
    std::vector<std::vector<double>> A(10, std::vector<double>(10, 0.0));
    std::vector<double> rhs(10, 0.0);
    int row = 0;
    for (int l = -2; l <= 2; ++l, ++row) {
        A[row][static_cast<std::size_t>(-2 * l + 4)] += 1.0;
        A[row][static_cast<std::size_t>(1 - 2 * l + 4)] += 1.0;
        rhs[row] = l == 0 ? 2.0 : 0.0;
    }
    for (int q = 0; q <= 4; ++q, ++row) {
        for (int m = -4; m <= 5; ++m) {
            double sign = (m % 2 == 0) ? 1.0 : -1.0;
            A[row][static_cast<std::size_t>(m + 4)] = sign * std::pow(m, q);
        }
        rhs[row] = 0.0;
    }
    std::vector<double> taps = solve_dense(A, rhs);

    const BiorthBasis& s = BiorthBasis::spline15();
    REQUIRE(s.recon_lo().size() == 10);
    CHECK(s.recon_lo_offset() == -4);
    for (int i = 0; i < 10; ++i) {
        INFO("tap " << i - 4);
        CHECK(s.recon_lo()[static_cast<std::size_t>(i)] ==
              doctest::Approx(taps[static_cast<std::size_t>(i)]).epsilon(1e-12));
    }
    // Published CDF(1,5) dual lowpass values.
    const std::vector<double> published = {3.0 / 128.0,  -3.0 / 128.0, -11.0 / 64.0,
                                           11.0 / 64.0,  1.0,          1.0,
                                           11.0 / 64.0,  -11.0 / 64.0, -3.0 / 128.0,
                                           3.0 / 128.0};
    CHECK(s.recon_lo() == published);
    CHECK(s.recon_hi() == std::vector<double>{1.0, -1.0});
    CHECK(s.recon_hi_offset() == 0);
}

TEST_CASE("true_coeff closed form for the x^{-1/2} density") {
    // beta05 has density x^{-1/2}/2 on (0,1]; the closed Haar forms below are
    // stated for the unnormalized x^{-1/2}, hence the factor 2.
    Signal f = Signal::from_token("beta05");
    const BiorthBasis& h = BiorthBasis::haar();
    CHECK(std::abs(2.0 * true_coeff(f, h, {0, 0}) - 2.0 * (std::sqrt(2.0) - 1.0)) <= 1e-12);
    CHECK(std::abs(2.0 * true_sigma2(f, h, {0, 0}) - 2.0) <= 1e-12);
    for (int j = 0; j <= 4; ++j) {
        double sc = std::ldexp(1.0, j);
        for (std::int64_t k = 0; k < static_cast<std::int64_t>(sc); ++k) {
            double kk = static_cast<double>(k);
            double beta_formula = 2.0 * std::pow(2.0, -0.0 * j) *
                                  (2.0 * std::sqrt(kk + 0.5) - std::sqrt(kk) - std::sqrt(kk + 1.0));
            double sig_formula = 2.0 * std::sqrt(sc) * (std::sqrt(kk + 1.0) - std::sqrt(kk));
            INFO("j=" << j << " k=" << k);
            CHECK(std::abs(2.0 * true_coeff(f, h, {j, k}) - beta_formula) <= 1e-12);
            CHECK(std::abs(2.0 * true_sigma2(f, h, {j, k}) - sig_formula) <= 1e-11);
        }
    }
}

TEST_CASE("true_coeff on the flat signal") {
    Signal f = Signal::from_token("haar1");
    const BiorthBasis& h = BiorthBasis::haar();
    CHECK(true_coeff(f, h, {-1, 0}) == 1.0);
    CHECK(true_coeff(f, h, {-1, 1}) == 0.0);
    for (int j = 0; j <= 6; ++j)
        for (std::int64_t k : {std::int64_t{0}, std::int64_t{1}, (std::int64_t{1} << j) - 1})
            CHECK(true_coeff(f, h, {j, k}) == 0.0);
    // sigma^2 = integral of psi_{j,k}^2 = 1 whenever the support is inside [0,1].
    CHECK(true_sigma2(f, h, {3, 4}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(true_sigma2(f, h, {0, 0}) == doctest::Approx(1.0).epsilon(1e-14));
    // Disjoint supports integrate to zero.
    CHECK(true_coeff(f, h, {2, -9}) == 0.0);
    CHECK(true_sigma2(f, h, {2, -9}) == 0.0);
}

TEST_CASE("true_coeff and true_sigma2 agree with adaptive quadrature") {
    for (const auto& tok : Signal::tokens()) {
        Signal f = Signal::from_token(tok);
        for (const auto& btok : BiorthBasis::tokens()) {
            const BiorthBasis& b = BiorthBasis::from_token(btok);
            for (int j : {-1, 0, 3, 6}) {
                for (double q : {0.25, 0.7}) {
                    double xc = f.quantile(q * f.mass());
                    double sc = std::ldexp(1.0, std::max(j, 0));
                    LambdaIndex l{j, static_cast<std::int64_t>(std::floor(xc * sc))};
                    AtomPieces p = atom_pieces(b, l);
                    double beta_q = 0.0, sig_q = 0.0;
                    for (std::size_t i = 0; i < p.v.size(); ++i) {
                        double cell = density_integral(f, p.e[i], p.e[i + 1], 1e-13);
                        beta_q += p.v[i] * cell;
                        sig_q += p.v[i] * p.v[i] * cell;
                    }
                    INFO(tok << "/" << btok << " j=" << j << " k=" << l.k);
                    CHECK(std::abs(true_coeff(f, b, l) - beta_q) <=
                          1e-9 * (1.0 + std::abs(beta_q)));
                    CHECK(std::abs(true_sigma2(f, b, l) - sig_q) <= 1e-9 * (1.0 + sig_q));
                }
            }
        }
    }
}

TEST_CASE("biorthogonality holds exactly at the filter level") {
    // Independent of the cascade: dual cell integrals follow from the filters
    // by exact dyadic recursion, so <psi_{j,k}, dual psi_{j',k'}> is a finite
    // exact sum.  Expect machine precision; assert far below the 1e-4 the
    // reconstruction path is allowed.
    for (const auto& btok : BiorthBasis::tokens()) {
        const BiorthBasis& b = BiorthBasis::from_token(btok);
        DualIntegrals d = build_dual_integrals(b, 8);
        CHECK(std::abs(d.prefix.back() - 1.0) <= 1e-12);  // dual phi has unit mass
        std::vector<LambdaIndex> lams;
        for (int j = -1; j <= 3; ++j)
            for (std::int64_t k = -4; k <= 4; ++k) lams.push_back({j, k});
        for (const auto& la : lams) {
            for (const auto& lb : lams) {
                double want = (la == lb) ? 1.0 : 0.0;
                double got = exact_pairing(b, d, la, lb);
                INFO(btok << " (" << la.j << "," << la.k << ") x (" << lb.j << "," << lb.k << ")");
                CHECK(std::abs(got - want) <= 1e-10);
            }
        }
    }
}

TEST_CASE("biorthogonality survives the cascade evaluation") {
    // Same pairings through eval_dual's mesh table (the reconstruction path);
    // integral of the interpolant computed exactly from node values.
    const BiorthBasis& b = BiorthBasis::spline15();
    const int depth = b.cascade_depth();
    const double h = std::ldexp(1.0, -depth);
    const double lo = static_cast<double>(b.recon_lo_offset());
    const std::size_t nodes =
        static_cast<std::size_t>((b.recon_lo().size() - 1) << depth) + 1;
    std::vector<double> pref(nodes, 0.0);
    double prev = b.dual_phi(lo);
    for (std::size_t i = 1; i < nodes; ++i) {
        double cur = b.dual_phi(lo + static_cast<double>(i) * h);
        pref[i] = pref[i - 1] + 0.5 * (prev + cur) * h;
        prev = cur;
    }
    auto phi_int = [&](double y) {
        double scaled = (y - lo) / h;
        double r = std::round(scaled);
        REQUIRE(std::abs(scaled - r) < 1e-6);
        if (r < 0.0) return 0.0;
        if (r >= static_cast<double>(nodes)) return pref.back();
        return pref[static_cast<std::size_t>(r)];
    };
    auto psi_int = [&](double y) { return 0.5 * (phi_int(2.0 * y) - phi_int(2.0 * y - 1.0)); };
    auto atom_int = [&](const LambdaIndex& l, double a, double bb) {
        if (l.j < 0) {
            double k = static_cast<double>(l.k);
            return phi_int(bb - k) - phi_int(a - k);
        }
        double sc = std::ldexp(1.0, l.j);
        double k = static_cast<double>(l.k);
        return (psi_int(sc * bb - k) - psi_int(sc * a - k)) * std::sqrt(sc) / sc;
    };
    for (int ja = -1; ja <= 3; ++ja) {
        for (std::int64_t ka = -4; ka <= 4; ++ka) {
            AtomPieces p = atom_pieces(b, {ja, ka});
            for (int jb = -1; jb <= 3; ++jb) {
                for (std::int64_t kb = -4; kb <= 4; ++kb) {
                    double s = 0.0;
                    for (std::size_t i = 0; i < p.v.size(); ++i)
                        s += p.v[i] * atom_int({jb, kb}, p.e[i], p.e[i + 1]);
                    double want = (ja == jb && ka == kb) ? 1.0 : 0.0;
                    INFO("(" << ja << "," << ka << ") x (" << jb << "," << kb << ")");
                    CHECK(std::abs(s - want) <= 1e-4);
                }
            }
        }
    }
}

TEST_CASE("haar reconstruction is exact") {
    const BiorthBasis& h = BiorthBasis::haar();
    std::vector<std::pair<LambdaIndex, double>> unit = {{{-1, 0}, 1.0}};
    std::vector<double> grid = {-0.5, 0.0, 0.5, 0.999, 1.0, 1.5};
    std::vector<double> vals = reconstruct(h, unit, grid);
    CHECK(vals == std::vector<double>{0.0, 1.0, 1.0, 1.0, 0.0, 0.0});

    // haar2 lives in the level<=2 Haar span, so its expansion reproduces the
    // density exactly away from nothing at all.
    Signal f = Signal::from_token("haar2");
    std::vector<std::pair<LambdaIndex, double>> coeffs = {{{-1, 0}, true_coeff(f, h, {-1, 0})}};
    for (int j = 0; j <= 2; ++j)
        for (std::int64_t k = 0; k < (std::int64_t{1} << j); ++k)
            coeffs.push_back({{j, k}, true_coeff(f, h, {j, k})});
    std::vector<double> xs = {0.05, 0.2, 0.3, 0.7, 0.9};
    std::vector<double> got = reconstruct(h, coeffs, xs);
    for (std::size_t i = 0; i < xs.size(); ++i)
        CHECK(got[i] == doctest::Approx(f.density(xs[i])).epsilon(1e-12));

    CHECK(reconstruct(h, {}, xs) == std::vector<double>(xs.size(), 0.0));
    std::vector<double> bad = {0.5, 0.25};
    CHECK_THROWS_AS(reconstruct(h, unit, bad), std::invalid_argument);
}

TEST_CASE("dual scaling translates form a partition of unity") {
    const BiorthBasis& s = BiorthBasis::spline15();
    std::vector<std::pair<LambdaIndex, double>> ones;
    for (std::int64_t k = -8; k <= 8; ++k) ones.push_back({{-1, k}, 1.0});
    std::vector<double> grid = {0.0, 1.0 / 3.0, 0.37, 2.5};
    for (double v : reconstruct(s, ones, grid)) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("spline reconstruction recovers the flat signal") {
    // All coefficients of 1_[0,1] through level 5; interior points only see
    // finitely many terms, so the error is set by the cascade mesh.
    const BiorthBasis& s = BiorthBasis::spline15();
    Signal f = Signal::from_token("haar1");
    std::vector<std::pair<LambdaIndex, double>> coeffs;
    for (int j = -1; j <= 5; ++j) {
        std::int64_t sc = std::int64_t{1} << std::max(j, 0);
        for (std::int64_t k = -8; k < sc + 8; ++k) {
            double be = true_coeff(f, s, {j, k});
            if (be != 0.0) coeffs.push_back({{j, k}, be});
        }
    }
    std::vector<double> xs = {0.3, 0.5, 0.7};
    std::vector<double> got = reconstruct(s, coeffs, xs);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        INFO("x=" << xs[i]);
        CHECK(std::abs(got[i] - 1.0) <= 2e-3);
    }
}

TEST_CASE("frame bounds") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<LambdaIndex> lams;
    for (std::int64_t k = 0; k <= 2; ++k) lams.push_back({-1, k});
    for (int j = 0; j <= 2; ++j)
        for (std::int64_t k = 0; k <= 3; ++k) lams.push_back({j, k});

    const BiorthBasis& h = BiorthBasis::haar();
    const BiorthBasis& s = BiorthBasis::spline15();
    double rmin = 1e300, rmax = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::pair<LambdaIndex, double>> coeffs;
        double ss = 0.0;
        for (const auto& l : lams) {
            double c = unif(rng);
            ss += c * c;
            coeffs.push_back({l, c});
        }
        // Haar duals are orthonormal: the synthesis norm equals the
        // coefficient norm.  Step-function integral on the half-open mesh.
        double hn = 0.0;
        for (int i = -8; i < 4 * 8; ++i) {
            std::vector<double> x = {(i + 0.5) / 8.0};
            double v = reconstruct(h, coeffs, x)[0];
            hn += v * v / 8.0;
        }
        CHECK(hn == doctest::Approx(ss).epsilon(1e-10));

        // Spline duals form a Riesz family: ratio bounded away from 0 and inf.
        double sn = 0.0;
        const int m = 1 << 10;
        for (int i = -6 * (m / 16); i < 10 * (m / 16); ++i) {
            std::vector<double> x = {(i + 0.5) * 16.0 / m};
            double v = reconstruct(s, coeffs, x)[0];
            sn += v * v * 16.0 / m;
        }
        rmin = std::min(rmin, sn / ss);
        rmax = std::max(rmax, sn / ss);
    }
    CHECK(rmin > 0.05);
    CHECK(rmax < 20.0);
}

}  // TEST_SUITE
