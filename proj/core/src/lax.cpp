#include "peakonlab/lax.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "peakonlab/algebra.hpp"
#include "peakonlab/errors.hpp"
#include "peakonlab/factorize.hpp"

namespace peakonlab {

LaxOperator lax_from_state(const PeakonState& s) {
    validate_state(s);
    LaxOperator out;
    out.n = s.n;
    out.source = s;
    out.L = Matrix(s.n);
    for (std::size_t i = 0; i < s.n; ++i) {
        out.L(i, i) = 0.5 * s.p[i];
        for (std::size_t j = i + 1; j < s.n; ++j) {
            const double val =
                0.5 * std::exp(-0.5 * std::fabs(s.q[i] - s.q[j])) * std::sqrt(s.p[i] * s.p[j]);
            out.L(i, j) = val;
            out.L(j, i) = val;
        }
    }
    // Factors follow the plain (relabeled) ordering; centering the positions
    // keeps e^{q/2} finite far into the scattering regime.
    const PeakonState plain = relabel_to_plain(s);
    double mean = 0.0;
    for (double x : plain.q) mean += x;
    mean /= static_cast<double>(s.n);
    out.u.resize(s.n);
    out.v.resize(s.n);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t j = 0; j < s.n; ++j) {
        const double qc = plain.q[j] - mean;
        const double sp = std::sqrt(plain.p[j]);
        out.u[j] = std::exp(0.5 * qc) * sp * inv_sqrt2;
        out.v[j] = std::exp(-0.5 * qc) * sp * inv_sqrt2;
    }
    return out;
}

std::vector<double> leading_minor_dets(const LaxOperator& L) {
    const PeakonState& s = L.source;
    if (s.sector.tag != SectorTag::S_minus || s.sector.is_permuted()) {
        throw std::invalid_argument(
            "leading_minor_dets: increasing orientation required; plus-sector and "
            "permuted states must be relabeled first");
    }
    std::vector<double> dets(s.n);
    double acc = 1.0;
    for (std::size_t k = 0; k < s.n; ++k) {
        if (k > 0) {
            const double e = std::exp(-0.5 * (s.q[k] - s.q[k - 1]));
            acc *= 1.0 - e * e;
        }
        acc *= 0.5 * s.p[k];
        dets[k] = acc;
    }
    return dets;
}

bool is_semiseparable(const Matrix& M, double tol) {
    const double scale = 1.0 + max_abs(M);
    if (symmetry_residual(M) > tol * scale) {
        throw std::invalid_argument("is_semiseparable: input is not symmetric within tolerance");
    }
    const std::size_t n = M.size();
    const double bound = tol * scale * scale;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t ip = i + 1; ip < n; ++ip) {
            for (std::size_t j = ip; j < n; ++j) { // i < i' <= j < j'
                for (std::size_t jp = j + 1; jp < n; ++jp) {
                    const double minor = M(i, j) * M(ip, jp) - M(i, jp) * M(ip, j);
                    if (std::fabs(minor) > bound) return false;
                }
            }
        }
    }
    return true;
}

namespace {

Matrix lower_triangular_inverse(const Matrix& T) {
    const std::size_t n = T.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(std::fabs(T(i, i)) > 0.0)) {
            throw NumericalError("coadjoint_action: b_minus is not invertible (zero diagonal at row " +
                                 std::to_string(i + 1) + ")");
        }
    }
    Matrix X(n);
    for (std::size_t c = 0; c < n; ++c) {
        X(c, c) = 1.0 / T(c, c);
        for (std::size_t i = c + 1; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t k = c; k < i; ++k) sum += T(i, k) * X(k, c);
            X(i, c) = -sum / T(i, i);
        }
    }
    return X;
}

} // namespace

Matrix coadjoint_action(const FactorizationPair& g, const Matrix& L) {
    require_same_size(g.b_minus, L, "coadjoint_action");
    require_same_size(g.b_plus, L, "coadjoint_action");
    const Matrix bm_inv = lower_triangular_inverse(g.b_minus);
    const Matrix lower_part = g.b_minus * L * bm_inv;
    const Matrix skew_part = g.b_plus * L * transpose(g.b_plus);
    return dual_project_lower(lower_part) + dual_project_skew(skew_part);
}

PeakonState lax_to_state(const Matrix& L, double q_ref, const Sector& sector) {
    const std::size_t n = L.size();
    if (n == 0) throw std::invalid_argument("lax_to_state: empty matrix");
    if (sector.is_permuted()) {
        throw std::invalid_argument("lax_to_state: plain sectors only; relabel the target instead");
    }
    PeakonState s;
    s.n = n;
    s.sector = sector;
    s.q.resize(n);
    s.p.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(L(j, j) > 0.0)) {
            throw std::invalid_argument("lax_to_state: diagonal entry " + std::to_string(j + 1) +
                                        " is not positive");
        }
        s.p[j] = 2.0 * L(j, j);
    }
    s.q[0] = q_ref;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double off = L(j, j + 1);
        if (!(off > 0.0)) {
            throw std::invalid_argument("lax_to_state: off-diagonal entry (" + std::to_string(j + 1) +
                                        "," + std::to_string(j + 2) + ") is not positive");
        }
        const double ratio = off / std::sqrt(L(j, j) * L(j + 1, j + 1));
        if (ratio >= 1.0) {
            throw NumericalError("lax_to_state: off-diagonal ratio >= 1 at (" +
                                 std::to_string(j + 1) + "," + std::to_string(j + 2) +
                                 "); matrix left the sector's image");
        }
        const double gap = -2.0 * std::log(ratio);
        s.q[j + 1] = (sector.tag == SectorTag::S_minus) ? s.q[j] + gap : s.q[j] - gap;
    }
    validate_state(s);
    return s;
}

} // namespace peakonlab
