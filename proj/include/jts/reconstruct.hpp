#ifndef JTS_RECONSTRUCT_HPP
#define JTS_RECONSTRUCT_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "core.hpp"
#include "detail/kernels.hpp"

namespace jts {

inline constexpr int depth_cap = 10;           // moment method degrades fast beyond this
inline constexpr double moment_blowup = 1e15;  // intermediate magnitude limit

/**
 * @brief Measure-to-matrix map by the discrete Stieltjes procedure: the
 *        three-term recurrence run on the discrete inner product with full
 *        reorthogonalization every step.
 *
 * A recurrence norm b_k^2 at or below 1e-24 throws BreakdownBelowTolerance;
 * values in (1e-24, 1e-16] are appended to *warnings when given.
 */
inline JacobiMatrix stieltjes_lanczos(const SpectralMeasure& rho,
                                      std::vector<std::string>* warnings = nullptr) {
    const auto& atoms = rho.atoms();
    std::vector<detail::xreal> lambda(atoms.size()), weight(atoms.size());
    for (std::size_t k = 0; k < atoms.size(); ++k) {
        lambda[k] = static_cast<detail::xreal>(atoms[k].first);
        weight[k] = static_cast<detail::xreal>(atoms[k].second);
    }
    const auto out = detail::lanczos_from_measure(lambda, weight);
    if (warnings && out.min_b2 <= static_cast<detail::xreal>(detail::lanczos_warn_floor))
        warnings->push_back("recurrence norm b_k^2 = " +
                            detail::fmt("%g", static_cast<double>(out.min_b2)) +
                            " in warning band: atoms nearly coincident");
    std::vector<double> q(out.q.begin(), out.q.end());
    std::vector<double> b(out.b.begin(), out.b.end());
    return JacobiMatrix(std::move(q), std::move(b));
}

/**
 * @brief Power moments s_m = sum w_k lambda_k^m for m = 0..m_max.
 */
inline std::vector<double> moments(const SpectralMeasure& rho, int m_max) {
    if (m_max < 0) throw std::invalid_argument("moments: m_max negative");
    const auto& atoms = rho.atoms();
    std::vector<detail::xreal> pw(atoms.size(), 1);
    std::vector<double> s(static_cast<std::size_t>(m_max) + 1);
    for (int m = 0; m <= m_max; ++m) {
        detail::xreal acc = 0;
        for (std::size_t k = 0; k < atoms.size(); ++k) {
            acc += static_cast<detail::xreal>(atoms[k].second) * pw[k];
            pw[k] *= static_cast<detail::xreal>(atoms[k].first);
        }
        s[m] = static_cast<double>(acc);
    }
    return s;
}

/**
 * @brief Leading block of a Jacobi matrix: depth diagonal entries, depth-1
 *        off-diagonal entries.
 */
struct JacobiPrefix {
    std::vector<double> q;
    std::vector<double> b;
};

/**
 * @brief Moment-driven recovery of the leading block through the recursion
 *        b_n^2 m_n(zeta) = q_n - zeta - 1/m_{n-1}(zeta).
 *
 * In x = 1/zeta each level's m is -x u(x) with u a normalized moment series;
 * the series reciprocal v = 1/u carries q_n = -v_1 and b_n^2 = -v_2, and
 * v shifted by two and renormalized is the next level's u. Two moment
 * coefficients are spent per level, so 2*depth+1 moments drive the whole run.
 */
inline JacobiPrefix ricatti_reconstruct(const SpectralMeasure& rho, int depth) {
    const int N = rho.size();
    if (depth < 1 || depth > std::min(N, depth_cap))
        throw std::invalid_argument("ricatti_reconstruct: depth " + std::to_string(depth) +
                                    " outside [1, " + std::to_string(std::min(N, depth_cap)) +
                                    "]");
    const std::size_t len = 2 * static_cast<std::size_t>(depth) + 1;
    const auto& atoms = rho.atoms();
    std::vector<detail::xreal> u(len, 0);
    {
        std::vector<detail::xreal> pw(atoms.size(), 1);
        for (std::size_t j = 0; j < len; ++j) {
            for (std::size_t k = 0; k < atoms.size(); ++k) {
                u[j] += static_cast<detail::xreal>(atoms[k].second) * pw[k];
                pw[k] *= static_cast<detail::xreal>(atoms[k].first);
            }
            if (detail::xabs(u[j]) > static_cast<detail::xreal>(moment_blowup))
                throw NumericalBlowup("moment s_" + std::to_string(j) + " exceeds " +
                                      detail::fmt("%g", moment_blowup));
        }
        for (std::size_t j = len; j-- > 0;) u[j] /= u[0];
    }

    JacobiPrefix out;
    for (int n = 1; n <= depth; ++n) {
        const auto v = detail::series_reciprocal(u, u.size());
        out.q.push_back(static_cast<double>(-v[1]));
        if (n == depth) break;
        const detail::xreal b2 = -v[2];
        if (!(b2 > 0))
            throw NumericalBlowup("level " + std::to_string(n) +
                                  ": nonpositive recurrence norm (moment degradation)");
        out.b.push_back(static_cast<double>(std::sqrt(b2)));
        std::vector<detail::xreal> next(u.size() - 2);
        for (std::size_t j = 0; j < next.size(); ++j) {
            next[j] = v[j + 2] / v[2];
            if (detail::xabs(next[j]) > static_cast<detail::xreal>(moment_blowup))
                throw NumericalBlowup("level " + std::to_string(n) + " moment " +
                                      std::to_string(j) + " exceeds " +
                                      detail::fmt("%g", moment_blowup));
        }
        u = std::move(next);
    }
    return out;
}

struct CrossValidation {
    double max_deviation = 0.0;
    bool pass = false;
};

/**
 * @brief Elementwise comparison of a full matrix against a leading block.
 */
inline CrossValidation cross_validate(const JacobiMatrix& A, const JacobiPrefix& B, double tol) {
    if (B.q.size() > static_cast<std::size_t>(A.n()) || B.b.size() > A.b().size())
        throw std::invalid_argument("cross_validate: prefix longer than matrix");
    CrossValidation r;
    for (std::size_t i = 0; i < B.q.size(); ++i)
        r.max_deviation = std::max(r.max_deviation, std::abs(A.q()[i] - B.q[i]));
    for (std::size_t i = 0; i < B.b.size(); ++i)
        r.max_deviation = std::max(r.max_deviation, std::abs(A.b()[i] - B.b[i]));
    r.pass = r.max_deviation <= tol;
    return r;
}

} // namespace jts

#endif // JTS_RECONSTRUCT_HPP
