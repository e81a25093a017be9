#include "peakonlab/state.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace peakonlab {

bool Sector::is_permuted() const {
    if (perm.empty()) return false;
    for (std::size_t j = 0; j < perm.size(); ++j)
        if (perm[j] != j) return true;
    return false;
}

std::string Sector::to_string() const {
    std::string s = (tag == SectorTag::S_minus) ? "S_minus" : "S_plus";
    if (is_permuted()) {
        s += "_perm(";
        for (std::size_t j = 0; j < perm.size(); ++j) {
            if (j) s += ",";
            s += std::to_string(perm[j] + 1);
        }
        s += ")";
    }
    return s;
}

namespace {

// Ordering comparison indices for a sector: the sequence that must be
// strictly decreasing (plus form) or strictly increasing (minus form).
std::vector<std::size_t> ordering_indices(const Sector& sec, std::size_t n) {
    if (sec.perm.empty()) {
        std::vector<std::size_t> id(n);
        for (std::size_t j = 0; j < n; ++j) id[j] = j;
        return id;
    }
    return sec.perm;
}

} // namespace

bool sector_ordering_holds(const PeakonState& s, double gap_tol, std::size_t* bad_index) {
    const auto idx = ordering_indices(s.sector, s.n);
    for (std::size_t j = 0; j + 1 < s.n; ++j) {
        const double gap = (s.sector.tag == SectorTag::S_plus)
                               ? s.q[idx[j]] - s.q[idx[j + 1]]
                               : s.q[idx[j + 1]] - s.q[idx[j]];
        if (!(gap > gap_tol)) {
            if (bad_index) *bad_index = j;
            return false;
        }
    }
    return true;
}

void validate_state(const PeakonState& s) {
    if (s.n == 0) throw std::invalid_argument("state: n must be >= 1");
    if (s.q.size() != s.n || s.p.size() != s.n) {
        throw std::invalid_argument("state: q/p length (" + std::to_string(s.q.size()) + "/" +
                                    std::to_string(s.p.size()) + ") does not match n=" +
                                    std::to_string(s.n));
    }
    for (std::size_t j = 0; j < s.n; ++j) {
        if (!std::isfinite(s.q[j]) || !std::isfinite(s.p[j])) {
            throw std::invalid_argument("state: entry " + std::to_string(j + 1) + " is not finite");
        }
        if (!(s.p[j] > 0.0)) {
            throw std::invalid_argument("state: momentum p_" + std::to_string(j + 1) +
                                        " must be positive");
        }
    }
    if (!s.sector.perm.empty()) {
        if (s.sector.perm.size() != s.n) {
            throw std::invalid_argument("state: permutation length does not match n");
        }
        std::vector<bool> seen(s.n, false);
        for (std::size_t v : s.sector.perm) {
            if (v >= s.n || seen[v]) {
                throw std::invalid_argument("state: sector permutation is not a bijection");
            }
            seen[v] = true;
        }
    }
    std::size_t bad = 0;
    if (!sector_ordering_holds(s, 0.0, &bad)) {
        throw std::invalid_argument("state: sector " + s.sector.to_string() +
                                    " ordering violated at slot " + std::to_string(bad + 1));
    }
}

double momentum_sum(const PeakonState& s) {
    double P = 0.0;
    for (double pj : s.p) P += pj;
    return P;
}

double hamiltonian(const PeakonState& s) {
    double H = 0.0;
    for (std::size_t i = 0; i < s.n; ++i)
        for (std::size_t j = 0; j < s.n; ++j)
            H += std::exp(-std::fabs(s.q[i] - s.q[j])) * s.p[i] * s.p[j];
    return 0.25 * H;
}

PeakonState relabel_to_plain(const PeakonState& s) {
    if (!s.sector.is_permuted()) {
        PeakonState t = s;
        t.sector.perm.clear();
        return t;
    }
    PeakonState t;
    t.n = s.n;
    t.q.resize(s.n);
    t.p.resize(s.n);
    for (std::size_t j = 0; j < s.n; ++j) {
        t.q[j] = s.q[s.sector.perm[j]];
        t.p[j] = s.p[s.sector.perm[j]];
    }
    t.sector.tag = s.sector.tag;
    return t;
}

std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& perm, std::size_t n) {
    std::vector<std::size_t> inv(n);
    if (perm.empty()) {
        for (std::size_t j = 0; j < n; ++j) inv[j] = j;
        return inv;
    }
    for (std::size_t j = 0; j < n; ++j) inv[perm[j]] = j;
    return inv;
}

namespace {

// Uniform double in [0,1) from the top 53 bits; avoids the library
// distribution objects whose streams are not specified portably.
double next_uniform(std::mt19937_64& gen) {
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

} // namespace

PeakonState generate_state(std::uint64_t seed, std::size_t n, Sector sector,
                           const GeneratorParams& gp) {
    if (n == 0) throw std::invalid_argument("generate_state: n must be >= 1");
    if (!(gp.C > 0.0) || !(gp.r > 0.0) || gp.r >= 1.0) {
        throw std::invalid_argument("generate_state: need C > 0 and 0 < r < 1");
    }
    if (!(gp.gap_base > 0.0)) {
        throw std::invalid_argument("generate_state: gap_base must be positive");
    }
    if (!sector.perm.empty() && sector.perm.size() != n) {
        throw std::invalid_argument("generate_state: permutation length does not match n");
    }
    std::mt19937_64 gen(seed);
    std::vector<double> gaps(n > 0 ? n - 1 : 0);
    for (double& g : gaps) g = gp.gap_base * (0.5 + next_uniform(gen));
    std::vector<double> p(n);
    double scale = gp.C;
    for (std::size_t j = 0; j < n; ++j) {
        scale *= gp.r;
        p[j] = scale * (0.75 + 0.5 * next_uniform(gen));
    }
    // Increasing positions centered at zero, then oriented by the sector.
    std::vector<double> asc(n, 0.0);
    for (std::size_t j = 1; j < n; ++j) asc[j] = asc[j - 1] + gaps[j - 1];
    const double mid = 0.5 * (asc.front() + asc.back());
    for (double& x : asc) x -= mid;

    PeakonState s;
    s.n = n;
    s.sector = sector;
    s.p = p;
    s.q.resize(n);
    // Fill positions so the sector ordering holds: the ordering slots get the
    // ascending (minus) or descending (plus) sequence.
    const auto idx = sector.perm.empty() ? [&] {
        std::vector<std::size_t> id(n);
        for (std::size_t j = 0; j < n; ++j) id[j] = j;
        return id;
    }() : sector.perm;
    for (std::size_t j = 0; j < n; ++j) {
        const double val = (sector.tag == SectorTag::S_plus) ? asc[n - 1 - j] : asc[j];
        s.q[idx[j]] = val;
    }
    validate_state(s);
    return s;
}

double tail_bound(std::size_t n, const GeneratorParams& gp) {
    return gp.C * std::pow(gp.r, static_cast<double>(n + 1)) / (1.0 - gp.r);
}

} // namespace peakonlab
