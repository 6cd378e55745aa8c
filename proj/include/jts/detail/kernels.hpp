#ifndef JTS_DETAIL_KERNELS_HPP
#define JTS_DETAIL_KERNELS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "../errors.hpp"

namespace jts {
namespace detail {

// Internal kernels run in extended precision. Spectra and matrices are
// exchanged as binary64, but the difference mu_k - lambda_k can carry as few
// as 4-5 significant digits near the separation floor; the extra mantissa
// bits of long double keep the downstream Lanczos recursion from amplifying
// that loss into the recovered entries.
using xreal = long double;

inline xreal xabs(xreal x) { return x < 0 ? -x : x; }

/**
 * @brief Number of eigenvalues of the Jacobi matrix strictly below x,
 *        via the Sturm sequence of leading principal minors.
 */
inline int sturm_count_below(const std::vector<xreal>& q, const std::vector<xreal>& b2,
                             xreal x, xreal pivmin) {
    int cnt = 0;
    xreal d = q[0] - x;
    if (xabs(d) < pivmin) d = -pivmin;
    if (d < 0) ++cnt;
    for (std::size_t i = 1; i < q.size(); ++i) {
        d = (q[i] - x) - b2[i - 1] / d;
        if (xabs(d) < pivmin) d = -pivmin;
        if (d < 0) ++cnt;
    }
    return cnt;
}

/**
 * @brief All eigenvalues by independent bisection on Sturm counts.
 *
 * Deterministic and order-independent: each eigenvalue is bisected on the
 * Gershgorin interval until the midpoint collides with an endpoint.
 */
inline std::vector<xreal> bisect_eigenvalues(const std::vector<double>& q,
                                             const std::vector<double>& b) {
    const std::size_t n = q.size();
    std::vector<xreal> qx(q.begin(), q.end());
    std::vector<xreal> b2(b.size());
    xreal maxb2 = 1;
    for (std::size_t i = 0; i < b.size(); ++i) {
        b2[i] = static_cast<xreal>(b[i]) * static_cast<xreal>(b[i]);
        maxb2 = std::max(maxb2, b2[i]);
    }
    const xreal safmin = std::numeric_limits<xreal>::min();
    const xreal pivmin = safmin * maxb2 / std::numeric_limits<xreal>::epsilon();

    xreal lo0 = qx[0], hi0 = qx[0];
    for (std::size_t i = 0; i < n; ++i) {
        xreal r = 0;
        if (i > 0) r += xabs(static_cast<xreal>(b[i - 1]));
        if (i < b.size()) r += xabs(static_cast<xreal>(b[i]));
        lo0 = std::min(lo0, qx[i] - r);
        hi0 = std::max(hi0, qx[i] + r);
    }
    const xreal pad = (hi0 - lo0 + 1) * std::numeric_limits<xreal>::epsilon() + pivmin;
    lo0 -= pad;
    hi0 += pad;

    // Absolute resolution floor: bisection from Sturm counts cannot place an
    // eigenvalue more tightly than eps * |J| anyway, and a purely relative
    // test never terminates on an interval straddling zero.
    const xreal tol_w =
        std::numeric_limits<xreal>::epsilon() * std::max(xabs(lo0), xabs(hi0)) + 2 * pivmin;

    std::vector<xreal> lam(n);
    for (std::size_t k = 0; k < n; ++k) {
        xreal lo = lo0, hi = hi0;
        int iter = 0;
        for (; iter < 400; ++iter) {
            if (hi - lo <= tol_w) break;
            const xreal mid = (lo + hi) / 2;
            if (mid == lo || mid == hi) break;
            if (sturm_count_below(qx, b2, mid, pivmin) <= static_cast<int>(k))
                lo = mid;
            else
                hi = mid;
        }
        if (iter >= 400)
            throw ConvergenceFailure("bisection iteration cap hit at eigenvalue " +
                                     std::to_string(k + 1));
        lam[k] = (lo + hi) / 2;
    }
    return lam;
}

/**
 * @brief First-kind polynomial values [P_0(z),...,P_{n-1}(z)] at a real point,
 *        via the three-term recurrence.
 */
inline std::vector<xreal> first_kind_table(const std::vector<double>& q,
                                           const std::vector<double>& b, xreal z) {
    const std::size_t n = q.size();
    std::vector<xreal> P(n);
    P[0] = 1;
    if (n > 1) P[1] = (z - static_cast<xreal>(q[0])) / static_cast<xreal>(b[0]);
    for (std::size_t k = 2; k < n; ++k)
        P[k] = ((z - static_cast<xreal>(q[k - 1])) * P[k - 1] -
                static_cast<xreal>(b[k - 2]) * P[k - 2]) /
               static_cast<xreal>(b[k - 1]);
    return P;
}

struct EigenMeasure {
    std::vector<xreal> lambda;
    std::vector<xreal> weight; // 1 / alpha
};

/**
 * @brief Eigenvalues together with first-component spectral weights
 *        w_k = 1 / sum_j P_j(lambda_k)^2.
 */
inline EigenMeasure eigen_measure(const std::vector<double>& q, const std::vector<double>& b) {
    EigenMeasure em;
    em.lambda = bisect_eigenvalues(q, b);
    em.weight.resize(em.lambda.size());
    for (std::size_t k = 0; k < em.lambda.size(); ++k) {
        const auto P = first_kind_table(q, b, em.lambda[k]);
        xreal alpha = 0;
        for (xreal p : P) alpha += p * p;
        em.weight[k] = 1 / alpha;
    }
    return em;
}

struct LanczosOutcome {
    std::vector<xreal> q;
    std::vector<xreal> b;
    xreal min_b2 = std::numeric_limits<xreal>::infinity();
};

inline constexpr double lanczos_breakdown_floor = 1e-24; // on b_k^2
inline constexpr double lanczos_warn_floor = 1e-16;      // on b_k^2

/**
 * @brief Discrete Stieltjes procedure: Lanczos on diag(lambda) started from
 *        the weight vector, with full reorthogonalization every step.
 *
 * Two reorthogonalization passes against all previous vectors; the three-term
 * recurrence alone loses orthogonality in floating point.
 */
inline LanczosOutcome lanczos_from_measure(const std::vector<xreal>& lambda,
                                           const std::vector<xreal>& weight) {
    const std::size_t N = lambda.size();
    LanczosOutcome out;
    out.q.resize(N);
    out.b.resize(N > 0 ? N - 1 : 0);

    std::vector<std::vector<xreal>> V(N, std::vector<xreal>(N, 0));
    {
        xreal nrm = 0;
        for (std::size_t i = 0; i < N; ++i) {
            V[0][i] = std::sqrt(weight[i]);
            nrm += weight[i];
        }
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < N; ++i) V[0][i] /= nrm;
    }

    std::vector<xreal> u(N);
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t i = 0; i < N; ++i) u[i] = lambda[i] * V[k][i];
        xreal a = 0;
        for (std::size_t i = 0; i < N; ++i) a += V[k][i] * u[i];
        out.q[k] = a;
        if (k + 1 == N) break;

        for (std::size_t i = 0; i < N; ++i) u[i] -= a * V[k][i];
        if (k > 0)
            for (std::size_t i = 0; i < N; ++i) u[i] -= out.b[k - 1] * V[k - 1][i];

        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t j = 0; j <= k; ++j) {
                xreal c = 0;
                for (std::size_t i = 0; i < N; ++i) c += V[j][i] * u[i];
                for (std::size_t i = 0; i < N; ++i) u[i] -= c * V[j][i];
            }
        }

        xreal nb2 = 0;
        for (std::size_t i = 0; i < N; ++i) nb2 += u[i] * u[i];
        out.min_b2 = std::min(out.min_b2, nb2);
        if (nb2 <= static_cast<xreal>(lanczos_breakdown_floor))
            throw BreakdownBelowTolerance(
                "recurrence norm b_" + std::to_string(k + 1) + "^2 = " +
                std::to_string(static_cast<double>(nb2)) +
                " below 1e-24 (coincident atoms)");
        const xreal nb = std::sqrt(nb2);
        out.b[k] = nb;
        for (std::size_t i = 0; i < N; ++i) V[k + 1][i] = u[i] / nb;
    }
    return out;
}

/**
 * @brief Power-series reciprocal: v with u * v = 1 + O(x^len), u[0] != 0.
 */
inline std::vector<xreal> series_reciprocal(const std::vector<xreal>& u, std::size_t len) {
    std::vector<xreal> v(len, 0);
    v[0] = 1 / u[0];
    for (std::size_t j = 1; j < len; ++j) {
        xreal acc = 0;
        const std::size_t top = std::min(j, u.size() - 1);
        for (std::size_t i = 1; i <= top; ++i) acc += u[i] * v[j - i];
        v[j] = -acc / u[0];
    }
    return v;
}

} // namespace detail
} // namespace jts

#endif // JTS_DETAIL_KERNELS_HPP
