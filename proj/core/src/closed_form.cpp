#include "peakonlab/closed_form.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peakonlab/compound.hpp"
#include "peakonlab/toda.hpp"

namespace peakonlab {

std::vector<double> first_component_evolution(const Spectrum& spec0, double t) {
    const std::size_t n = spec0.n;
    // Weight w_k = -lambda_k t; normalize by the max before exponentiating.
    double wmax = -spec0.lambdas[0] * t;
    for (std::size_t k = 1; k < n; ++k) wmax = std::max(wmax, -spec0.lambdas[k] * t);
    double denom = 0.0;
    std::vector<double> num(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = -spec0.lambdas[k] * t - wmax;
        const double phi1 = spec0.phi(0, k);
        num[k] = std::exp(0.5 * w) * phi1;
        denom += std::exp(w) * phi1 * phi1;
    }
    denom = std::sqrt(denom);
    for (double& x : num) x /= denom;
    return num;
}

double compound_projection(const Spectrum& spec_t, std::size_t k,
                           const std::vector<std::size_t>& index_set) {
    const std::size_t n = spec_t.n;
    if (k < 1 || k > n) throw std::invalid_argument("compound_projection: k out of range");
    if (index_set.size() != k) {
        throw std::invalid_argument("compound_projection: index set size must equal k");
    }
    for (std::size_t i = 0; i < k; ++i) {
        if (index_set[i] >= n || (i > 0 && index_set[i] <= index_set[i - 1])) {
            throw std::invalid_argument(
                "compound_projection: index set must be strictly increasing within 1..n");
        }
    }
    std::vector<std::size_t> rows(k);
    for (std::size_t i = 0; i < k; ++i) rows[i] = i;
    const double minor = submatrix_determinant(spec_t.phi, rows, index_set);
    return minor * minor;
}

std::vector<double> compound_closed_form(const Spectrum& spec0, double t, std::size_t k) {
    const std::size_t n = spec0.n;
    if (k < 1 || k > n) throw std::invalid_argument("compound_closed_form: k out of range");
    const auto sets = k_subsets(n, k);
    std::vector<std::size_t> rows(k);
    for (std::size_t i = 0; i < k; ++i) rows[i] = i;

    std::vector<double> m2(sets.size());
    std::vector<double> w(sets.size());
    double wmax = -1e300;
    for (std::size_t a = 0; a < sets.size(); ++a) {
        const double minor = submatrix_determinant(spec0.phi, rows, sets[a]);
        m2[a] = minor * minor;
        double lam_sum = 0.0;
        for (std::size_t i : sets[a]) lam_sum += spec0.lambdas[i];
        w[a] = lam_sum * t;
        if (m2[a] > 0.0) wmax = std::max(wmax, w[a]);
    }
    double denom = 0.0;
    std::vector<double> out(sets.size());
    for (std::size_t a = 0; a < sets.size(); ++a) {
        out[a] = m2[a] * std::exp(w[a] - wmax);
        denom += out[a];
    }
    for (double& x : out) x /= denom;
    return out;
}

double compound_evolution_check(const Spectrum& spec0, const Matrix& L0, double t,
                                std::size_t k, double dt_max) {
    const std::vector<double> closed = compound_closed_form(spec0, t, k);
    const Matrix Lt = toda_solve(L0, t, FlowSign::plus, dt_max);
    const Spectrum spec_t = eigendecompose(Lt, -1.0, EigenInput::generic);
    const auto sets = k_subsets(spec0.n, k);
    double worst = 0.0;
    for (std::size_t a = 0; a < sets.size(); ++a) {
        const double direct = compound_projection(spec_t, k, sets[a]);
        worst = std::max(worst, std::fabs(direct - closed[a]));
    }
    return worst;
}

double limit_law_indicator(const Spectrum& spec0, double t, std::size_t k) {
    const std::vector<double> values = compound_closed_form(spec0, t, k);
    return values[0]; // the lexicographically first set is {1..k}
}

} // namespace peakonlab
