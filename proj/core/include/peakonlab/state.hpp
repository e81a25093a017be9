#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace peakonlab {

// Phase-space sector: a strict ordering of the positions, possibly after a
// permutation. S_minus: q1 < q2 < ... < qn. S_plus: q1 > q2 > ... > qn.
// Permuted variants order q_{perm[0]} > q_{perm[1]} > ... (plus form) or the
// increasing analogue (minus form).
enum class SectorTag { S_minus, S_plus };

struct Sector {
    SectorTag tag = SectorTag::S_minus;
    // Empty means the identity permutation. Stored 0-based; documentation
    // and error messages print it 1-based.
    std::vector<std::size_t> perm;

    bool is_permuted() const;
    std::string to_string() const;
};

struct PeakonState {
    std::size_t n = 0;
    std::vector<double> q;
    std::vector<double> p;
    Sector sector;
};

// Throws std::invalid_argument when sizes disagree, entries are not finite,
// any momentum is <= 0, the permutation is not a bijection, or the sector
// ordering is violated (messages name the offending 1-based index).
void validate_state(const PeakonState& s);

// True when the sector ordering holds strictly with margin `gap_tol`
// (used by the integrator to detect collision-like approaches).
bool sector_ordering_holds(const PeakonState& s, double gap_tol, std::size_t* bad_index = nullptr);

// P = sum_j p_j.
double momentum_sum(const PeakonState& s);
// H = 1/4 sum_ij e^{-|q_i - q_j|} p_i p_j.
double hamiltonian(const PeakonState& s);

// Relabel a permuted-sector state into its plain S_minus / S_plus form:
// q~_j = q_{perm[j]}, p~_j = p_{perm[j]}.
PeakonState relabel_to_plain(const PeakonState& s);

// Inverse permutation (identity when empty).
std::vector<std::size_t> inverse_permutation(const std::vector<std::size_t>& perm, std::size_t n);

// Deterministic seeded state generator. Momenta follow the geometric profile
// p_j = C * r^j jittered by a factor in [0.75, 1.25]; consecutive gaps are
// gap_base * [0.5, 1.5); positions are centered around zero and oriented by
// the sector. The neglected-tail velocity bound C * r^{n+1} / (1 - r) is
// reported by tail_bound().
struct GeneratorParams {
    double C = 1.0;
    double r = 0.6;
    double gap_base = 1.0;
};

PeakonState generate_state(std::uint64_t seed, std::size_t n, Sector sector,
                           const GeneratorParams& gp = {});

double tail_bound(std::size_t n, const GeneratorParams& gp);

} // namespace peakonlab
