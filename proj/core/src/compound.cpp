#include "peakonlab/compound.hpp"

#include <stdexcept>
#include <string>

namespace peakonlab {

std::uint64_t binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0;
    if (k > n - k) k = n - k;
    std::uint64_t c = 1;
    for (std::size_t i = 1; i <= k; ++i) {
        c = c * (n - k + i) / i;
    }
    return c;
}

std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k) {
    std::vector<std::vector<std::size_t>> out;
    if (k > n) return out;
    std::vector<std::size_t> cur(k);
    for (std::size_t i = 0; i < k; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        // advance to the next lexicographic k-subset
        std::size_t i = k;
        while (i-- > 0) {
            if (cur[i] != i + n - k) {
                ++cur[i];
                for (std::size_t j = i + 1; j < k; ++j) cur[j] = cur[j - 1] + 1;
                break;
            }
            if (i == 0) return out;
        }
        if (k == 0) return out;
    }
}

CompoundMatrix compound(const Matrix& M, std::size_t k) {
    const std::size_t n = M.size();
    if (k < 1 || k > n) {
        throw std::invalid_argument("compound: order k=" + std::to_string(k) +
                                    " out of range 1.." + std::to_string(n));
    }
    const std::uint64_t m = binomial(n, k);
    if (static_cast<std::uint64_t>(k) * m > 1'000'000ULL) {
        throw std::invalid_argument("compound: refusing k*C(n,k) > 1e6 entries (n=" +
                                    std::to_string(n) + ", k=" + std::to_string(k) + ")");
    }
    CompoundMatrix C;
    C.n = n;
    C.k = k;
    C.subsets = k_subsets(n, k);
    C.entries = Matrix(static_cast<std::size_t>(m));
    for (std::size_t a = 0; a < C.subsets.size(); ++a) {
        for (std::size_t b = 0; b < C.subsets.size(); ++b) {
            C.entries(a, b) = submatrix_determinant(M, C.subsets[a], C.subsets[b]);
        }
    }
    return C;
}

} // namespace peakonlab
