#include "poisswave/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace poisswave {

double PiecewiseConstant::operator()(double x) const {
    if (x < edges.front() || x >= edges.back()) return 0.0;
    auto it = std::upper_bound(edges.begin(), edges.end(), x);
    return values[static_cast<std::size_t>(it - edges.begin()) - 1];
}

double PiecewiseConstant::moment(int q) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double a = edges[i], b = edges[i + 1];
        acc += values[i] * (std::pow(b, q + 1) - std::pow(a, q + 1)) / (q + 1);
    }
    return acc;
}

double PiecewiseConstant::sup_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double PiecewiseConstant::inf_abs() const {
    double m = std::numeric_limits<double>::infinity();
    for (double v : values) m = std::min(m, std::abs(v));
    return m;
}

namespace {

// Laurent polynomial with double coefficients (exact dyadic rationals here).
struct Laurent {
    int lo = 0;  // power of the first coefficient
    std::vector<double> c;
};

Laurent mul(const Laurent& a, const Laurent& b) {
    Laurent r;
    r.lo = a.lo + b.lo;
    r.c.assign(a.c.size() + b.c.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i)
        for (std::size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    return r;
}

Laurent add(const Laurent& a, const Laurent& b) {
    int lo = std::min(a.lo, b.lo);
    int hi = std::max(a.lo + static_cast<int>(a.c.size()), b.lo + static_cast<int>(b.c.size()));
    Laurent r;
    r.lo = lo;
    r.c.assign(static_cast<std::size_t>(hi - lo), 0.0);
    for (std::size_t i = 0; i < a.c.size(); ++i) r.c[static_cast<std::size_t>(a.lo - lo) + i] += a.c[i];
    for (std::size_t i = 0; i < b.c.size(); ++i) r.c[static_cast<std::size_t>(b.lo - lo) + i] += b.c[i];
    return r;
}

Laurent scale(Laurent a, double s) {
    for (double& x : a.c) x *= s;
    return a;
}

// Dual lowpass of the box-spline pair with 2L dual vanishing-moment factors
// split as (1, 2L-1): two-scale coefficients of the shortest filter whose
// transfer is ((1+z)/2)^{2L-1} z^{-(L-1)} P_L((2-z-1/z)/4) * 2, where
// P_L(y) = sum_{i<L} C(L-1+i, i) y^i.  For L = 3 this is the classic
// length-10 table [3, -3, -22, 22, 128, 128, 22, -22, -3, 3] / 128.
Laurent dual_lowpass_box(int L) {
    Laurent onez{0, {1.0, 1.0}};  // 1 + z
    Laurent factor{0, {1.0}};
    for (int i = 0; i < 2 * L - 1; ++i) factor = mul(factor, onez);
    Laurent y{-1, {-0.25, 0.5, -0.25}};  // (2 - z - 1/z) / 4
    Laurent P{0, {1.0}};
    Laurent ypow{0, {1.0}};
    double binom = 1.0;
    for (int i = 1; i < L; ++i) {
        ypow = mul(ypow, y);
        binom = binom * (L - 1 + i) / i;  // C(L-1+i, i)
        P = add(P, scale(ypow, binom));
    }
    Laurent r = mul(factor, P);
    r.lo -= L - 1;                                        // z^{-(L-1)}
    r = scale(r, 2.0 / std::pow(2.0, 2.0 * L - 1.0));     // 2 / 2^{2L-1}
    return r;
}

PiecewiseConstant box01() {
    return PiecewiseConstant{{0.0, 1.0}, {1.0}};
}

// psi(x) = sum_m g_m 1_{[m/2, (m+1)/2)}(x) with adjacent equal pieces merged.
PiecewiseConstant wavelet_from_pieces(int lo, const std::vector<double>& g) {
    PiecewiseConstant out;
    std::size_t i = 0;
    while (i < g.size() && g[i] == 0.0) ++i;
    std::size_t end = g.size();
    while (end > i && g[end - 1] == 0.0) --end;
    out.edges.push_back((lo + static_cast<int>(i)) * 0.5);
    for (std::size_t m = i; m < end; ++m) {
        if (!out.values.empty() && out.values.back() == g[m]) {
            out.edges.back() = (lo + static_cast<int>(m) + 1) * 0.5;
        } else {
            out.values.push_back(g[m]);
            out.edges.push_back((lo + static_cast<int>(m) + 1) * 0.5);
        }
    }
    return out;
}

}  // namespace

void BiorthBasis::build_cascade() {
    if (dual_exact_) {
        dual_lo_ = phi_.lo();
        dual_hi_ = phi_.hi();
        return;
    }
    dual_lo_ = static_cast<double>(recon_lo_off_);
    dual_hi_ = static_cast<double>(recon_lo_off_ + static_cast<int>(recon_lo_.size()) - 1);
    // Node values at the integers solve the two-scale fixed point
    // v(i) = sum_t ct_t v(2i - k_t) with unit-sum normalization (the dual
    // scaling function is continuous and vanishes at the support edges).
    // Dyadic refinement then fills the mesh; node values stay exact, so the
    // table error is interpolation only.
    int depth = cascade_depth_;
    std::int64_t span = static_cast<std::int64_t>(dual_hi_ - dual_lo_);
    int m = static_cast<int>(span) - 1;  // interior integers
    std::vector<std::vector<double>> rows;
    std::vector<double> rhs;
    for (int r = 0; r < m; ++r) {
        std::vector<double> row(static_cast<std::size_t>(m), 0.0);
        std::int64_t i = recon_lo_off_ + 1 + r;
        for (std::size_t t = 0; t < recon_lo_.size(); ++t) {
            std::int64_t target = 2 * i - (recon_lo_off_ + static_cast<std::int64_t>(t));
            std::int64_t col = target - recon_lo_off_ - 1;
            if (col >= 0 && col < m) row[static_cast<std::size_t>(col)] += recon_lo_[t];
        }
        row[static_cast<std::size_t>(r)] -= 1.0;
        rows.push_back(std::move(row));
        rhs.push_back(0.0);
    }
    rows.push_back(std::vector<double>(static_cast<std::size_t>(m), 1.0));
    rhs.push_back(1.0);
    // Least-squares via normal equations (the system is consistent; the
    // normalization row makes it full rank).
    std::vector<std::vector<double>> g(static_cast<std::size_t>(m),
                                       std::vector<double>(static_cast<std::size_t>(m), 0.0));
    std::vector<double> b(static_cast<std::size_t>(m), 0.0);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (int i = 0; i < m; ++i) {
            b[static_cast<std::size_t>(i)] += rows[r][static_cast<std::size_t>(i)] * rhs[r];
            for (int j = 0; j < m; ++j)
                g[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
                    rows[r][static_cast<std::size_t>(i)] * rows[r][static_cast<std::size_t>(j)];
        }
    }
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(g[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)]) >
                std::abs(g[static_cast<std::size_t>(piv)][static_cast<std::size_t>(col)]))
                piv = r;
        std::swap(g[static_cast<std::size_t>(col)], g[static_cast<std::size_t>(piv)]);
        std::swap(b[static_cast<std::size_t>(col)], b[static_cast<std::size_t>(piv)]);
        if (g[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)] == 0.0)
            throw std::logic_error("degenerate two-scale system");
        for (int r = col + 1; r < m; ++r) {
            double f = g[static_cast<std::size_t>(r)][static_cast<std::size_t>(col)] /
                       g[static_cast<std::size_t>(col)][static_cast<std::size_t>(col)];
            for (int c = col; c < m; ++c)
                g[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] -=
                    f * g[static_cast<std::size_t>(col)][static_cast<std::size_t>(c)];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    std::vector<double> node(static_cast<std::size_t>(m), 0.0);
    for (int i = m; i-- > 0;) {
        double s = b[static_cast<std::size_t>(i)];
        for (int c = i + 1; c < m; ++c)
            s -= g[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] *
                 node[static_cast<std::size_t>(c)];
        node[static_cast<std::size_t>(i)] = s / g[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    }
    std::vector<double> cur(static_cast<std::size_t>(span) + 1, 0.0);
    for (int i = 0; i < m; ++i) cur[static_cast<std::size_t>(i) + 1] = node[static_cast<std::size_t>(i)];
    for (int d = 1; d <= depth; ++d) {
        std::int64_t cells = span * (std::int64_t{1} << d);
        std::int64_t prev_cells = span * (std::int64_t{1} << (d - 1));
        std::vector<double> next(static_cast<std::size_t>(cells) + 1, 0.0);
        double step = std::ldexp(1.0, -d);
        for (std::int64_t i = 0; i <= cells; ++i) {
            if (i % 2 == 0) {
                next[static_cast<std::size_t>(i)] = cur[static_cast<std::size_t>(i / 2)];
                continue;
            }
            double x = dual_lo_ + static_cast<double>(i) * step;
            double acc = 0.0;
            for (std::size_t t = 0; t < recon_lo_.size(); ++t) {
                double arg = 2.0 * x - static_cast<double>(recon_lo_off_ + static_cast<int>(t));
                double rel = (arg - dual_lo_) * std::ldexp(1.0, d - 1);
                std::int64_t idx = static_cast<std::int64_t>(std::llround(rel));
                if (idx < 0 || idx > prev_cells) continue;
                acc += recon_lo_[t] * cur[static_cast<std::size_t>(idx)];
            }
            next[static_cast<std::size_t>(i)] = acc;
        }
        cur.swap(next);
    }
    dual_table_ = std::move(cur);
}

const BiorthBasis& BiorthBasis::haar() {
    static const BiorthBasis b = [] {
        BiorthBasis x;
        x.token_ = "haar";
        x.phi_ = box01();
        x.psi_ = PiecewiseConstant{{0.0, 0.5, 1.0}, {1.0, -1.0}};
        x.recon_lo_ = {1.0, 1.0};
        x.recon_lo_off_ = 0;
        x.recon_hi_ = {1.0, -1.0};
        x.recon_hi_off_ = 0;
        x.vanishing_degree_ = 0;
        x.dual_exact_ = true;
        x.build_cascade();
        return x;
    }();
    return b;
}

const BiorthBasis& BiorthBasis::spline15() {
    static const BiorthBasis b = [] {
        BiorthBasis x;
        x.token_ = "spline15";
        x.phi_ = box01();
        Laurent ct = dual_lowpass_box(3);  // length 10, powers -4..5
        x.recon_lo_ = ct.c;
        x.recon_lo_off_ = ct.lo;
        x.recon_hi_ = {1.0, -1.0};  // psid(x) = phid(2x) - phid(2x - 1)
        x.recon_hi_off_ = 0;
        // Analysis wavelet by alternating flip: g_m = (-1)^m ct_{1-m}.
        int glo = 1 - (ct.lo + static_cast<int>(ct.c.size()) - 1);
        std::vector<double> g(ct.c.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
            int m = glo + static_cast<int>(i);
            double v = ct.c[static_cast<std::size_t>(1 - m - ct.lo)];
            g[i] = (m % 2 == 0) ? v : -v;
        }
        x.psi_ = wavelet_from_pieces(glo, g);
        x.vanishing_degree_ = 4;
        x.dual_exact_ = false;
        x.build_cascade();
        return x;
    }();
    return b;
}

const BiorthBasis& BiorthBasis::from_token(const std::string& token) {
    if (token == "haar") return haar();
    if (token == "spline15") return spline15();
    throw std::invalid_argument("unknown basis token: " + token + " (valid: haar, spline15)");
}

const std::vector<std::string>& BiorthBasis::tokens() {
    static const std::vector<std::string> t = {"haar", "spline15"};
    return t;
}

double BiorthBasis::sup_norm(const LambdaIndex& l) const {
    if (l.j < 0) return phi_.sup_abs();
    return psi_.sup_abs() * std::sqrt(std::ldexp(1.0, l.j));
}

double BiorthBasis::support_lo(const LambdaIndex& l) const {
    if (l.j < 0) return phi_.lo() + static_cast<double>(l.k);
    return (psi_.lo() + static_cast<double>(l.k)) * std::ldexp(1.0, -l.j);
}

double BiorthBasis::support_hi(const LambdaIndex& l) const {
    if (l.j < 0) return phi_.hi() + static_cast<double>(l.k);
    return (psi_.hi() + static_cast<double>(l.k)) * std::ldexp(1.0, -l.j);
}

double BiorthBasis::eval_analysis(const LambdaIndex& l, double x) const {
    if (l.j < 0) return phi_(x - static_cast<double>(l.k));
    double s = std::sqrt(std::ldexp(1.0, l.j));
    return s * psi_(std::ldexp(x, l.j) - static_cast<double>(l.k));
}

double BiorthBasis::dual_phi(double x) const {
    if (dual_exact_) return phi_(x);
    if (x < dual_lo_ || x >= dual_hi_) return 0.0;
    double rel = (x - dual_lo_) * std::ldexp(1.0, cascade_depth_);
    double fl = std::floor(rel);
    std::size_t i = static_cast<std::size_t>(fl);
    if (i + 1 >= dual_table_.size()) return dual_table_.back();
    double t = rel - fl;
    return (1.0 - t) * dual_table_[i] + t * dual_table_[i + 1];
}

double BiorthBasis::dual_psi(double x) const {
    double acc = 0.0;
    for (std::size_t t = 0; t < recon_hi_.size(); ++t)
        acc += recon_hi_[t] * dual_phi(2.0 * x - static_cast<double>(recon_hi_off_ + static_cast<int>(t)));
    return acc;
}

double BiorthBasis::eval_dual(const LambdaIndex& l, double x) const {
    if (l.j < 0) return dual_phi(x - static_cast<double>(l.k));
    double s = std::sqrt(std::ldexp(1.0, l.j));
    return s * dual_psi(std::ldexp(x, l.j) - static_cast<double>(l.k));
}

double BiorthBasis::dual_support_lo(const LambdaIndex& l) const {
    if (l.j < 0) return dual_lo_ + static_cast<double>(l.k);
    double psid_lo = 0.5 * (dual_lo_ + static_cast<double>(recon_hi_off_));
    return (psid_lo + static_cast<double>(l.k)) * std::ldexp(1.0, -l.j);
}

double BiorthBasis::dual_support_hi(const LambdaIndex& l) const {
    if (l.j < 0) return dual_hi_ + static_cast<double>(l.k);
    double psid_hi =
        0.5 * (dual_hi_ + static_cast<double>(recon_hi_off_ + static_cast<int>(recon_hi_.size()) - 1));
    return (psid_hi + static_cast<double>(l.k)) * std::ldexp(1.0, -l.j);
}

namespace {

// sum over atom pieces of w(piece value) * weight, with the piece mapped
// through the lambda affine change of variables and integrated against f.
template <class W>
double integrate_atom(const Signal& f, const BiorthBasis& basis, const LambdaIndex& l, W&& w,
                      double scale_pow) {
    const PiecewiseConstant& atom = l.j < 0 ? basis.phi() : basis.psi();
    double inv = l.j < 0 ? 1.0 : std::ldexp(1.0, -l.j);
    double scale = l.j < 0 ? 1.0 : std::pow(std::ldexp(1.0, l.j), 0.5 * scale_pow);
    double acc = 0.0;
    for (std::size_t i = 0; i < atom.values.size(); ++i) {
        double a = (atom.edges[i] + static_cast<double>(l.k)) * inv;
        double b = (atom.edges[i + 1] + static_cast<double>(l.k)) * inv;
        acc += w(atom.values[i]) * (f.cdf(b) - f.cdf(a));
    }
    return scale * acc;
}

}  // namespace

double true_coeff(const Signal& f, const BiorthBasis& basis, const LambdaIndex& l) {
    return integrate_atom(f, basis, l, [](double v) { return v; }, 1.0);
}

double true_sigma2(const Signal& f, const BiorthBasis& basis, const LambdaIndex& l) {
    return integrate_atom(f, basis, l, [](double v) { return v * v; }, 2.0);
}

std::vector<double> reconstruct(const BiorthBasis& basis,
                                const std::vector<std::pair<LambdaIndex, double>>& coeffs,
                                const std::vector<double>& grid) {
    if (!std::is_sorted(grid.begin(), grid.end()))
        throw std::invalid_argument("reconstruct: grid must be sorted");
    std::vector<double> out(grid.size(), 0.0);
    for (const auto& [l, beta] : coeffs) {
        if (beta == 0.0) continue;
        double lo = basis.dual_support_lo(l), hi = basis.dual_support_hi(l);
        auto first = std::lower_bound(grid.begin(), grid.end(), lo);
        auto last = std::lower_bound(grid.begin(), grid.end(), hi);
        for (auto it = first; it != last; ++it)
            out[static_cast<std::size_t>(it - grid.begin())] += beta * basis.eval_dual(l, *it);
    }
    return out;
}

}  // namespace poisswave
