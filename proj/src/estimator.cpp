#include "poisswave/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace poisswave {

ThresholdVariant variant_from_token(const std::string& token) {
    if (token == "theorem") return ThresholdVariant::TheoremForm;
    if (token == "simulation") return ThresholdVariant::SimulationForm;
    throw std::invalid_argument("unknown threshold variant: " + token);
}

const std::string& variant_token(ThresholdVariant v) {
    static const std::string theorem = "theorem", simulation = "simulation";
    return v == ThresholdVariant::TheoremForm ? theorem : simulation;
}

namespace {

struct LambdaHash {
    std::size_t operator()(const LambdaIndex& l) const {
        std::uint64_t x = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(l.j)) << 40) ^
                          static_cast<std::uint64_t>(l.k);
        x += 0x9E3779B97F4A7C15ull;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
        return static_cast<std::size_t>(x ^ (x >> 31));
    }
};

}  // namespace

CoeffTable accumulate(const PointProcess& pp, const BiorthBasis& basis, int j0) {
    if (pp.n < 2) throw std::invalid_argument("accumulate: n must be >= 2");
    if (j0 < -1) throw std::invalid_argument("accumulate: j0 must be >= -1");
    CoeffTable table;
    table.n = pp.n;
    table.basis = basis.token();
    table.j0 = j0;

    std::unordered_map<LambdaIndex, std::pair<double, double>, LambdaHash> acc;
    const double inv_n = 1.0 / static_cast<double>(pp.n);
    for (int j = -1; j <= j0; ++j) {
        const PiecewiseConstant& atom = j < 0 ? basis.phi() : basis.psi();
        const double a = atom.lo(), b = atom.hi();
        for (double t : pp.points) {
            double y = j < 0 ? t : std::ldexp(t, j);
            // k with atom support [a, b) containing y - k.  The 2^{j/2}
            // scale is applied once at the end: the raw piece values are
            // dyadic rationals, so symmetric event sets cancel to an exact
            // zero instead of leaving sqrt(2^j) rounding residue.
            std::int64_t kfirst = static_cast<std::int64_t>(std::floor(y - b)) + 1;
            std::int64_t klast = static_cast<std::int64_t>(std::floor(y - a));
            for (std::int64_t k = kfirst; k <= klast; ++k) {
                double v = atom(y - static_cast<double>(k));
                if (v == 0.0) continue;
                auto& slot = acc[LambdaIndex{j, k}];
                slot.first += v;
                slot.second += v * v;
            }
        }
    }
    table.records.reserve(acc.size());
    for (const auto& [l, sums] : acc) {
        CoeffRecord rec;
        rec.lambda = l;
        double scale = l.j < 0 ? 1.0 : std::sqrt(std::ldexp(1.0, l.j));
        double scale2 = l.j < 0 ? 1.0 : std::ldexp(1.0, l.j);
        rec.beta_hat = scale * sums.first * inv_n;
        rec.v_hat = scale2 * sums.second * inv_n * inv_n;
        table.records.push_back(rec);
    }
    std::sort(table.records.begin(), table.records.end(),
              [](const CoeffRecord& x, const CoeffRecord& y) { return x.lambda < y.lambda; });
    return table;
}

double v_tilde_at(double v_hat, double sup_norm, std::int64_t n, double u) {
    double n2 = static_cast<double>(n) * static_cast<double>(n);
    double s2 = sup_norm * sup_norm;
    return v_hat + std::sqrt(2.0 * v_hat * s2 * u / n2) + 3.0 * s2 * u / n2;
}

double v_tilde(double v_hat, double sup_norm, std::int64_t n, double gamma) {
    return v_tilde_at(v_hat, sup_norm, n, gamma * std::log(static_cast<double>(n)));
}

double threshold(double v_hat, double sup_norm, std::int64_t n, double gamma,
                 ThresholdVariant variant) {
    if (!(gamma > 0.0)) throw std::invalid_argument("threshold: gamma must be positive");
    double ln = std::log(static_cast<double>(n));
    double v = variant == ThresholdVariant::TheoremForm ? v_tilde(v_hat, sup_norm, n, gamma)
                                                        : v_hat;
    return std::sqrt(2.0 * gamma * ln * v) + gamma * ln * sup_norm / (3.0 * static_cast<double>(n));
}

void apply_threshold(CoeffTable& table, const BiorthBasis& basis, const GammaNConfig& cfg) {
    if (!(cfg.gamma > 0.0)) throw std::invalid_argument("apply_threshold: gamma must be positive");
    for (CoeffRecord& rec : table.records) {
        double sup = basis.sup_norm(rec.lambda);
        rec.v_tilde = v_tilde(rec.v_hat, sup, table.n, cfg.gamma);
        rec.eta = threshold(rec.v_hat, sup, table.n, cfg.gamma, cfg.variant);
        rec.kept = std::abs(rec.beta_hat) >= rec.eta;
    }
}

CoeffTable estimate(const PointProcess& pp, const BiorthBasis& basis, const GammaNConfig& cfg) {
    CoeffTable table = accumulate(pp, basis, cfg.j0);
    apply_threshold(table, basis, cfg);
    return table;
}

std::vector<LambdaIndex> select_bruteforce(const CoeffTable& table) {
    std::size_t m = table.records.size();
    if (m > 20) throw std::invalid_argument("select_bruteforce: more than 20 coefficients");
    // Contrast + penalty of subset S is sum_{l in S} (eta^2 - beta_hat^2).
    std::vector<double> gain(m);
    for (std::size_t i = 0; i < m; ++i)
        gain[i] = table.records[i].eta * table.records[i].eta -
                  table.records[i].beta_hat * table.records[i].beta_hat;
    std::uint32_t best_mask = 0;
    double best_value = 0.0;
    int best_card = 0;
    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        double value = 0.0;
        int card = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (1u << i)) {
                value += gain[i];
                ++card;
            }
        if (value < best_value || (value == best_value && card > best_card) ||
            (value == best_value && card == best_card && mask < best_mask)) {
            best_value = value;
            best_mask = mask;
            best_card = card;
        }
    }
    std::vector<LambdaIndex> out;
    for (std::size_t i = 0; i < m; ++i)
        if (best_mask & (1u << i)) out.push_back(table.records[i].lambda);
    return out;
}

}  // namespace poisswave
