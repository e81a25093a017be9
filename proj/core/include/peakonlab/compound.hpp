#pragma once

#include <cstdint>
#include <vector>

#include "peakonlab/matrix.hpp"

namespace peakonlab {

// Matrix of k x k minors acting on the k-th exterior power. Rows and columns
// are indexed by strictly increasing k-subsets of {1..n} in lexicographic
// order; that ordering is part of the public contract.
struct CompoundMatrix {
    std::size_t n = 0;
    std::size_t k = 0;
    std::vector<std::vector<std::size_t>> subsets; // 0-based index sets, lexicographic
    Matrix entries;                                // size C(n,k)
};

std::uint64_t binomial(std::size_t n, std::size_t k);

// All strictly increasing k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k);

// compound(M, k): entry (I, J) = det M[I, J]. Throws std::invalid_argument
// when k is out of range or when k * C(n,k) exceeds 1e6 entries (desk-scale
// guard). compound(M, 1) = M; compound(M, n) = [det M].
CompoundMatrix compound(const Matrix& M, std::size_t k);

} // namespace peakonlab
