#ifndef JTS_FORWARD_HPP
#define JTS_FORWARD_HPP

#include <complex>
#include <vector>

#include "core.hpp"
#include "detail/kernels.hpp"

namespace jts {

/**
 * @brief Rank-one boundary coupling: q_1 replaced by q_1 - h, rest unchanged.
 */
inline JacobiMatrix perturb(const JacobiMatrix& J, double h) {
    if (!std::isfinite(h)) throw std::invalid_argument("perturb: h not finite");
    std::vector<double> q = J.q();
    q[0] -= h;
    return JacobiMatrix(std::move(q), J.b());
}

/**
 * @brief The matrix with first row and column removed (the operator behind
 *        the Neumann boundary condition at the origin).
 */
inline JacobiMatrix truncate_first(const JacobiMatrix& J) {
    if (J.n() < 2) throw DimensionTooSmall("truncate_first needs n >= 2");
    std::vector<double> q(J.q().begin() + 1, J.q().end());
    std::vector<double> b(J.b().begin() + (J.n() > 2 ? 1 : 0), J.b().end());
    if (J.n() == 2) b.clear();
    return JacobiMatrix(std::move(q), std::move(b));
}

/**
 * @brief Ascending eigenvalues by bisection on Sturm sequence counts.
 *
 * Deterministic and platform-stable; all eigenvalues are simple because every
 * b_k is strictly positive.
 */
inline std::vector<double> eigenvalues(const JacobiMatrix& J) {
    const auto lam = detail::bisect_eigenvalues(J.q(), J.b());
    return std::vector<double>(lam.begin(), lam.end());
}

enum class PolyKind { First, Second };

template <class Scalar>
struct PolynomialTable {
    std::vector<Scalar> values;
    PolyKind kind;
};

/**
 * @brief Table of orthogonal polynomial values [f_0(zeta),...,f_{n-1}(zeta)].
 *
 * First kind: P_0 = 1, P_1 = (zeta - q_1)/b_1. Second kind: Q_0 = 0,
 * Q_1 = 1/b_1. Both satisfy b_{k-1} f_{k-1} + q_k f_k + b_k f_{k+1} = zeta f_k.
 * Values grow like the Chebyshev scale for zeta far outside the spectrum;
 * callers needing large |zeta| should prefer the measure form of m.
 */
template <class Scalar>
PolynomialTable<Scalar> eval_polys(const JacobiMatrix& J, Scalar zeta, PolyKind kind) {
    const int n = J.n();
    const auto& q = J.q();
    const auto& b = J.b();
    PolynomialTable<Scalar> t;
    t.kind = kind;
    t.values.resize(n);
    if (kind == PolyKind::First) {
        t.values[0] = Scalar(1);
        if (n > 1) t.values[1] = (zeta - Scalar(q[0])) / Scalar(b[0]);
    } else {
        t.values[0] = Scalar(0);
        if (n > 1) t.values[1] = Scalar(1) / Scalar(b[0]);
    }
    for (int k = 2; k < n; ++k)
        t.values[k] =
            ((zeta - Scalar(q[k - 1])) * t.values[k - 1] - Scalar(b[k - 2]) * t.values[k - 2]) /
            Scalar(b[k - 1]);
    return t;
}

/**
 * @brief First-component spectral measure: atoms at the eigenvalues with
 *        weights 1/alpha_n, alpha_n = sum_k P_k(lambda_n)^2.
 */
inline SpectralMeasure normalizing_constants(const JacobiMatrix& J) {
    const auto em = detail::eigen_measure(J.q(), J.b());
    std::vector<SpectralMeasure::Atom> atoms(em.lambda.size());
    for (std::size_t k = 0; k < em.lambda.size(); ++k)
        atoms[k] = {static_cast<double>(em.lambda[k]), static_cast<double>(em.weight[k])};
    return SpectralMeasure(std::move(atoms));
}

/**
 * @brief Weyl m-function as the partial-fraction sum over the measure:
 *        m(zeta) = sum_k w_k / (lambda_k - zeta).
 */
inline std::complex<double> weyl_m(const SpectralMeasure& rho, std::complex<double> zeta) {
    const double eps = eps_sep(rho.spread());
    for (const auto& a : rho.atoms())
        if (std::abs(zeta - std::complex<double>(a.first)) < eps)
            throw PoleProximity("zeta within eps_sep of atom at " +
                                detail::fmt("%.17g", a.first));
    std::complex<long double> z(zeta.real(), zeta.imag());
    std::complex<long double> s(0, 0);
    for (const auto& a : rho.atoms())
        s += static_cast<long double>(a.second) /
             (static_cast<std::complex<long double>>(a.first) - z);
    return {static_cast<double>(s.real()), static_cast<double>(s.imag())};
}

/**
 * @brief The coupling transform of m-functions: m_h = m / (1 - h m).
 */
inline std::complex<double> m_transform(std::complex<double> m, double h) {
    const std::complex<double> den = 1.0 - h * m;
    if (std::abs(den) == 0.0)
        throw DivisionByZero("1 - h*m vanishes (zeta is an eigenvalue of the coupled matrix)");
    return m / den;
}

/**
 * @brief m-function of the truncated matrix from m of the full one:
 *        m_inf = -(1/b_1^2) * ((zeta - q_1) + 1/m).
 */
inline std::complex<double> m_infinity(std::complex<double> m, std::complex<double> zeta,
                                       double q1, double b1) {
    if (std::abs(m) == 0.0)
        throw DivisionByZero("m vanishes (zeta in the truncated spectrum)");
    return -((zeta - q1) + 1.0 / m) / (b1 * b1);
}

struct AsymptoticCoeffs {
    double c1, c2, c3; // m_h = c1/zeta + c2/zeta^2 + c3/zeta^3 + O(zeta^-4)
};

/**
 * @brief Closed-form asymptotic coefficients of m_h along any ray to infinity:
 *        (-1, -(q_1 - h), -(b_1^2 + (q_1 - h)^2)).
 */
inline AsymptoticCoeffs asymptotic_coeffs(const JacobiMatrix& J, double h) {
    if (J.n() < 2) throw DimensionTooSmall("asymptotic_coeffs needs n >= 2");
    const double d = J.q()[0] - h;
    return {-1.0, -d, -(J.b()[0] * J.b()[0] + d * d)};
}

/**
 * @brief Numeric counterpart of asymptotic_coeffs: two-radius sampling of m on
 *        the imaginary axis with Richardson-style elimination of the next
 *        order term in each component.
 *
 * With f(R) = m(iR) * iR: Re f = c1 - c3/R^2 + O(R^-4) and
 * Im f = -c2/R + c4/R^3 + O(R^-5); each pair is solved exactly from the two
 * radii, which cancels the listed next-order term.
 */
inline AsymptoticCoeffs fit_asymptotic_coeffs(const SpectralMeasure& rho, double R1 = 1e3,
                                              double R2 = 1e4) {
    if (!(R1 > 0) || !(R2 > R1)) throw std::invalid_argument("fit: need 0 < R1 < R2");
    if (R2 < 10.0 * R1) throw IllConditionedFit("sample radii span less than one decade");
    const std::complex<double> f1 = weyl_m(rho, {0.0, R1}) * std::complex<double>(0.0, R1);
    const std::complex<double> f2 = weyl_m(rho, {0.0, R2}) * std::complex<double>(0.0, R2);
    const long double x1 = 1.0L / R1, x2 = 1.0L / R2;
    // Re: [1, -x^2] * (c1, c3)^T ; Im: [-x, x^3] * (c2, c4)^T.
    const long double detRe = x1 * x1 - x2 * x2;
    const long double c1 = (f2.real() * (x1 * x1) - f1.real() * (x2 * x2)) / detRe;
    const long double c3 = (f2.real() - f1.real()) / detRe;
    const long double detIm = x2 * (x1 * x1 * x1) - x1 * (x2 * x2 * x2);
    const long double c2 = (f1.imag() * (x2 * x2 * x2) - f2.imag() * (x1 * x1 * x1)) / detIm;
    return {static_cast<double>(c1), static_cast<double>(c2), static_cast<double>(c3)};
}

/**
 * @brief Derivative of the k-th eigenvalue of the coupled matrix with respect
 *        to the coupling: d lambda_k / dh = -1/alpha_k = -w_k. k is 1-based.
 */
inline double eigen_sensitivity(const JacobiMatrix& J, double h, int k) {
    if (k < 1 || k > J.n()) throw std::out_of_range("eigen_sensitivity: k outside 1..n");
    const SpectralMeasure rho = normalizing_constants(perturb(J, h));
    return -rho.weight(k - 1);
}

} // namespace jts

#endif // JTS_FORWARD_HPP
