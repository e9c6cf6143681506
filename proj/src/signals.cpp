#include "poisswave/signals.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rng.hpp"

namespace poisswave {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<double> kPos = {0.1, 0.13, 0.15, 0.23, 0.25, 0.4,
                                  0.44, 0.65, 0.76, 0.78, 0.81};
const std::vector<double> kBlockH = {4, -5, 3, -4, 5, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2};
const std::vector<double> kBumpG = {4, 5, 3, 4, 5, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2};
const std::vector<double> kBumpW = {0.005, 0.005, 0.006, 0.01, 0.01, 0.03,
                                    0.01, 0.01, 0.005, 0.008, 0.005};

constexpr double kBlocksDiv = 3.551;
constexpr double kBumpsDiv = 0.284;
constexpr int kCombTerms = 50;

double gauss_cdf(double x, double mu, double sigma) {
    return 0.5 * std::erfc(-(x - mu) / (sigma * std::sqrt(2.0)));
}

double gauss_pdf(double x, double mu, double sigma) {
    double z = (x - mu) / sigma;
    return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * M_PI));
}

// Monotone bisection of F(x) = target on [lo, hi]; F nondecreasing.
template <class F>
double bisect(F&& f, double lo, double hi, double target, double xtol = 1e-12) {
    while (hi - lo > xtol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

void Signal::finish_piecewise() {
    pw_cum_.assign(pw_edges_.size(), 0.0);
    for (std::size_t i = 0; i + 1 < pw_edges_.size(); ++i)
        pw_cum_[i + 1] = pw_cum_[i] + pw_values_[i] * (pw_edges_[i + 1] - pw_edges_[i]);
    mass_ = pw_cum_.back();
    support_lo_ = pw_edges_.front();
    support_hi_ = pw_edges_.back();
}

Signal Signal::from_token(const std::string& token) {
    Signal s;
    s.token_ = token;
    if (token == "haar1") {
        s.id_ = SignalId::Haar1;
        s.pw_edges_ = {0.0, 1.0};
        s.pw_values_ = {1.0};
        s.finish_piecewise();
    } else if (token == "haar2") {
        s.id_ = SignalId::Haar2;
        s.pw_edges_ = {0.0, 0.125, 0.25, 1.0};
        s.pw_values_ = {1.5, 0.5, 1.0};
        s.finish_piecewise();
    } else if (token == "blocks") {
        s.id_ = SignalId::Blocks;
        s.pw_edges_.push_back(0.0);
        double level = 2.0;
        s.pw_values_.push_back(level / kBlocksDiv);
        for (std::size_t i = 0; i < kPos.size(); ++i) {
            s.pw_edges_.push_back(kPos[i]);
            level += kBlockH[i];
            s.pw_values_.push_back(level / kBlocksDiv);
        }
        s.pw_edges_.push_back(1.0);
        s.finish_piecewise();
    } else if (token == "comb") {
        s.id_ = SignalId::Comb;
        // Blocks of mass 2^-k on [k^2/32, (k^2+k)/32]; gaps carry density 0.
        // Truncated at kCombTerms (omitted mass 2^-50).
        for (int k = 1; k <= kCombTerms; ++k) {
            double a = k * static_cast<double>(k) / 32.0;
            double b = (k * static_cast<double>(k) + k) / 32.0;
            if (!s.pw_edges_.empty()) s.pw_values_.push_back(0.0);  // gap [prev end, a)
            s.pw_edges_.push_back(a);
            s.pw_values_.push_back(32.0 / (k * std::pow(2.0, k)));
            s.pw_edges_.push_back(b);
        }
        s.finish_piecewise();
    } else if (token == "gauss1") {
        s.id_ = SignalId::Gauss1;
        s.gauss_ = {{1.0, 0.5, 0.25}};
        s.mass_ = 1.0;
        s.support_lo_ = -kInf;
        s.support_hi_ = kInf;
    } else if (token == "gauss2") {
        s.id_ = SignalId::Gauss2;
        // (1/sqrt(2 pi)) e^{-(x-0.5)^2/(2  0.25^2)} + (3/sqrt(2 pi)) e^{-(x-5)^2/(2 0.25^2)}
        // = 0.25 N(0.5, 0.25^2) + 0.75 N(5, 0.25^2).
        s.gauss_ = {{0.25, 0.5, 0.25}, {0.75, 5.0, 0.25}};
        s.mass_ = 1.0;
        s.support_lo_ = -kInf;
        s.support_hi_ = kInf;
    } else if (token == "beta05") {
        s.id_ = SignalId::Beta05;
        s.mass_ = 1.0;
        s.support_lo_ = 0.0;
        s.support_hi_ = 1.0;
    } else if (token == "beta4") {
        s.id_ = SignalId::Beta4;
        s.mass_ = 1.0;
        s.support_lo_ = 1.0;
        s.support_hi_ = kInf;
    } else if (token == "bumps") {
        s.id_ = SignalId::Bumps;
        s.bp_ = kPos;
        s.bg_ = kBumpG;
        s.bw_ = kBumpW;
        s.support_lo_ = 0.0;
        s.support_hi_ = 1.0;
        s.mass_ = 0.0;  // set below via the antiderivative
        s.mass_ = s.bumps_antiderivative(1.0) / kBumpsDiv;
    } else {
        std::string valid;
        for (const auto& t : tokens()) valid += (valid.empty() ? "" : ", ") + t;
        throw std::invalid_argument("unknown signal token: " + token + " (valid: " + valid + ")");
    }
    return s;
}

const std::vector<std::string>& Signal::tokens() {
    static const std::vector<std::string> t = {"haar1", "haar2", "blocks", "comb", "gauss1",
                                               "gauss2", "beta05", "beta4", "bumps"};
    return t;
}

Signal Signal::uppth_adversary(std::int64_t n, double gamma, double gamma_min, int alpha) {
    if (n < 16) throw std::invalid_argument("uppth adversary requires n >= 16");
    if (!(gamma > gamma_min) || !(gamma_min > 1.0))
        throw std::invalid_argument("uppth adversary requires gamma > gamma_min > 1");
    double ln = std::log(static_cast<double>(n));
    double c = std::sqrt(2.0 * std::pow(std::sqrt(gamma) - std::sqrt(gamma_min), 2) * ln /
                         static_cast<double>(n));
    auto level_for = [&](int a) {
        double lo = static_cast<double>(n) / std::pow(ln, 1.0 + a);
        int j = static_cast<int>(std::floor(std::log2(lo))) + 1;  // smallest j with 2^j > lo
        while (std::ldexp(1.0, j) <= lo) ++j;
        while (j > 0 && std::ldexp(1.0, j - 1) > lo) --j;
        return j;
    };
    int chosen = -1;
    if (alpha > 0) {
        int j = level_for(alpha);
        if (1.0 - c * std::sqrt(std::ldexp(1.0, j)) < 0.0)
            throw std::invalid_argument("uppth adversary density negative at this alpha");
        chosen = alpha;
    } else {
        for (int a = 1; a <= 64; ++a) {
            int j = level_for(a);
            if (1.0 - c * std::sqrt(std::ldexp(1.0, j)) >= 0.0) {
                chosen = a;
                break;
            }
        }
        if (chosen < 0)
            throw std::invalid_argument("uppth adversary density negative for every alpha");
    }
    int j = level_for(chosen);
    double amp = c * std::sqrt(std::ldexp(1.0, j));  // |bump| in density units
    if (1.0 - amp < 0.0)
        throw std::invalid_argument("uppth adversary density negative");

    Signal s;
    s.id_ = SignalId::UppthAdversary;
    s.token_ = "uppth";
    s.uppth_level_ = j;
    s.uppth_coeff_ = c;
    s.uppth_alpha_ = chosen;
    std::int64_t cells = std::int64_t{1} << j;
    double h = 1.0 / std::ldexp(1.0, j);
    s.pw_edges_.reserve(2 * cells + 1);
    s.pw_values_.reserve(2 * cells);
    for (std::int64_t k = 0; k < cells; ++k) {
        s.pw_edges_.push_back(k * h);
        s.pw_values_.push_back(1.0 + amp);
        s.pw_edges_.push_back(k * h + 0.5 * h);
        s.pw_values_.push_back(1.0 - amp);
    }
    s.pw_edges_.push_back(1.0);
    s.finish_piecewise();
    return s;
}

int Signal::bump_level() const {
    if (id_ != SignalId::UppthAdversary) throw std::logic_error("not an adversarial signal");
    return uppth_level_;
}

double Signal::bump_coeff() const {
    if (id_ != SignalId::UppthAdversary) throw std::logic_error("not an adversarial signal");
    return uppth_coeff_;
}

int Signal::bump_alpha() const {
    if (id_ != SignalId::UppthAdversary) throw std::logic_error("not an adversarial signal");
    return uppth_alpha_;
}

double Signal::bumps_antiderivative(double x) const {
    // integral from 0 to x of sum_j g_j (1 + |t - p_j| / w_j)^-4 dt, x in [0, 1].
    double acc = 0.0;
    for (std::size_t i = 0; i < bp_.size(); ++i) {
        double p = bp_[i], w = bw_[i], g = bg_[i];
        auto left = [&](double t) {  // integral 0..t for t <= p
            return (w / 3.0) * (std::pow(1.0 + (p - t) / w, -3.0) - std::pow(1.0 + p / w, -3.0));
        };
        double part;
        if (x <= p)
            part = left(x);
        else
            part = left(p) + (w / 3.0) * (1.0 - std::pow(1.0 + (x - p) / w, -3.0));
        acc += g * part;
    }
    return acc;
}

double Signal::density(double x) const {
    if (piecewise()) {
        if (x < pw_edges_.front() || x >= pw_edges_.back()) return 0.0;
        auto it = std::upper_bound(pw_edges_.begin(), pw_edges_.end(), x);
        return pw_values_[static_cast<std::size_t>(it - pw_edges_.begin()) - 1];
    }
    switch (id_) {
        case SignalId::Gauss1:
        case SignalId::Gauss2: {
            double acc = 0.0;
            for (const auto& c : gauss_) acc += c.weight * gauss_pdf(x, c.mu, c.sigma);
            return acc;
        }
        case SignalId::Beta05:
            return (x > 0.0 && x <= 1.0) ? 0.5 / std::sqrt(x) : 0.0;
        case SignalId::Beta4:
            return x >= 1.0 ? 3.0 * std::pow(x, -4.0) : 0.0;
        case SignalId::Bumps:
            if (x < 0.0 || x > 1.0) return 0.0;
            {
                double acc = 0.0;
                for (std::size_t i = 0; i < bp_.size(); ++i)
                    acc += bg_[i] * std::pow(1.0 + std::abs(x - bp_[i]) / bw_[i], -4.0);
                return acc / kBumpsDiv;
            }
        default:
            throw std::logic_error("density: unhandled signal");
    }
}

double Signal::cdf(double x) const {
    if (piecewise()) {
        if (x <= pw_edges_.front()) return 0.0;
        if (x >= pw_edges_.back()) return mass_;
        auto it = std::upper_bound(pw_edges_.begin(), pw_edges_.end(), x);
        std::size_t i = static_cast<std::size_t>(it - pw_edges_.begin()) - 1;
        return pw_cum_[i] + pw_values_[i] * (x - pw_edges_[i]);
    }
    switch (id_) {
        case SignalId::Gauss1:
        case SignalId::Gauss2: {
            double acc = 0.0;
            for (const auto& c : gauss_) acc += c.weight * gauss_cdf(x, c.mu, c.sigma);
            return acc;
        }
        case SignalId::Beta05:
            if (x <= 0.0) return 0.0;
            return x >= 1.0 ? 1.0 : std::sqrt(x);
        case SignalId::Beta4:
            return x <= 1.0 ? 0.0 : 1.0 - std::pow(x, -3.0);
        case SignalId::Bumps:
            if (x <= 0.0) return 0.0;
            if (x >= 1.0) return mass_;
            return bumps_antiderivative(x) / kBumpsDiv;
        default:
            throw std::logic_error("cdf: unhandled signal");
    }
}

double Signal::tail_cut(double eps) const {
    if (eps <= 0.0) throw std::invalid_argument("tail_cut: eps must be positive");
    if (std::isfinite(support_hi_)) {
        if (id_ == SignalId::Comb) {
            // 1 - cdf(block k end) = 2^-k (+ truncation): first block end within eps.
            for (int k = 1; k <= kCombTerms; ++k)
                if (std::pow(2.0, -k) <= eps)
                    return (k * static_cast<double>(k) + k) / 32.0;
            return support_hi_;
        }
        return support_hi_;
    }
    if (id_ == SignalId::Beta4) return std::max(1.0, std::pow(eps, -1.0 / 3.0));
    // Gaussian mixtures: bisect mass - cdf(X) = eps.
    double hi = 0.0;
    for (const auto& c : gauss_) hi = std::max(hi, c.mu + 40.0 * c.sigma);
    double lo = gauss_.front().mu;
    return bisect([&](double x) { return cdf(x); }, lo, hi, mass_ - eps, 1e-13);
}

double Signal::head_cut(double eps) const {
    if (eps <= 0.0) throw std::invalid_argument("head_cut: eps must be positive");
    if (std::isfinite(support_lo_)) return support_lo_;
    double lo = 0.0;
    for (const auto& c : gauss_) lo = std::min(lo, c.mu - 40.0 * c.sigma);
    double hi = gauss_.front().mu;
    return bisect([&](double x) { return cdf(x); }, lo, hi, eps, 1e-13);
}

double Signal::quantile(double u) const {
    if (!(u > 0.0 && u < mass_)) throw std::invalid_argument("quantile: u outside (0, mass)");
    if (piecewise()) {
        auto it = std::upper_bound(pw_cum_.begin(), pw_cum_.end(), u);
        std::size_t i = static_cast<std::size_t>(it - pw_cum_.begin()) - 1;
        while (pw_values_[i] == 0.0) ++i;  // zero pieces carry no mass
        return pw_edges_[i] + (u - pw_cum_[i]) / pw_values_[i];
    }
    switch (id_) {
        case SignalId::Beta05:
            return u * u;
        case SignalId::Beta4:
            return std::pow(1.0 - u, -1.0 / 3.0);
        case SignalId::Gauss1:
        case SignalId::Gauss2: {
            double lo = gauss_.front().mu, hi = gauss_.front().mu;
            for (const auto& c : gauss_) {
                lo = std::min(lo, c.mu - 40.0 * c.sigma);
                hi = std::max(hi, c.mu + 40.0 * c.sigma);
            }
            return bisect([&](double x) { return cdf(x); }, lo, hi, u);
        }
        case SignalId::Bumps:
            return bisect([&](double x) { return cdf(x); }, 0.0, 1.0, u);
        default:
            throw std::logic_error("quantile: unhandled signal");
    }
}

PointProcess Signal::sample(std::int64_t n, std::uint64_t seed) const {
    if (n < 2) throw std::invalid_argument("sample: n must be >= 2");
    std::mt19937_64 rng(seed);
    std::int64_t count = detail::poisson_count(rng, static_cast<double>(n) * mass_);
    PointProcess pp;
    pp.n = n;
    pp.points.reserve(static_cast<std::size_t>(count));
    for (std::int64_t i = 0; i < count; ++i) {
        double u = detail::uniform01(rng) * mass_;
        while (u <= 0.0) u = detail::uniform01(rng) * mass_;
        pp.points.push_back(quantile(u));
    }
    std::sort(pp.points.begin(), pp.points.end());
    return pp;
}

}  // namespace poisswave
