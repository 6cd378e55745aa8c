#ifndef JTS_INVERSE_HPP
#define JTS_INVERSE_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "forward.hpp"
#include "reconstruct.hpp"

namespace jts {

struct ConditionVerdict {
    bool pass = false;
    std::string detail;
};

/**
 * @brief Verdicts of the two-spectra characterization conditions.
 *
 * a) interlacing and min/max ordering; b) finiteness of delta (always true
 * for finite lists, value attached in rank-one mode); c) finiteness of the
 * moments (always true, first 2N moments attached when the measure can be
 * assembled); d) density of polynomials (automatic for finitely supported
 * measures); plus positivity of the tau list.
 */
struct ConditionReport {
    SpectraMode mode = SpectraMode::RankOne;
    ConditionVerdict a_interlacing;
    ConditionVerdict b_delta_finite;
    ConditionVerdict c_moments_finite;
    ConditionVerdict d_density;
    ConditionVerdict tau_positive;
    double delta = 0.0;          // rank-one mode only
    std::vector<double> moments; // first 2N power moments when available

    bool all_pass() const {
        return a_interlacing.pass && b_delta_finite.pass && c_moments_finite.pass &&
               d_density.pass && tau_positive.pass;
    }
    // Name of the first failed condition, empty when all pass.
    std::string first_failure() const {
        if (!a_interlacing.pass) return "a";
        if (!b_delta_finite.pass) return "b";
        if (!c_moments_finite.pass) return "c";
        if (!d_density.pass) return "d";
        if (!tau_positive.pass) return "tau";
        return "";
    }
};

namespace detail {

// Signed tau^-1 list straight from the product formulas, in extended
// precision with log-magnitude accumulation. Factor k of the numerator is
// paired with factor k of the denominator, which keeps each partial product
// near unit scale.
inline std::vector<xreal> tau_inverse_rank_one(const std::vector<double>& lam,
                                               const std::vector<double>& mu, xreal Delta) {
    const std::size_t N = lam.size();
    std::vector<xreal> ti(N);
    for (std::size_t n = 0; n < N; ++n) {
        xreal lg = 0;
        int sign = 1;
        for (std::size_t k = 0; k < N; ++k) {
            if (k == n) continue;
            const xreal num = static_cast<xreal>(mu[k]) - static_cast<xreal>(lam[n]);
            const xreal den = static_cast<xreal>(lam[k]) - static_cast<xreal>(lam[n]);
            lg += std::log(xabs(num)) - std::log(xabs(den));
            if (num < 0) sign = -sign;
            if (den < 0) sign = -sign;
        }
        const xreal gap = static_cast<xreal>(mu[n]) - static_cast<xreal>(lam[n]);
        ti[n] = gap / Delta * sign * std::exp(lg);
    }
    return ti;
}

inline std::vector<xreal> tau_inverse_dn(const std::vector<double>& lam,
                                         const std::vector<double>& mu) {
    const std::size_t N = lam.size();
    std::vector<xreal> ti(N);
    for (std::size_t n = 0; n < N; ++n) {
        xreal lg = 0;
        int sign = 1;
        // Numerator factor k pairs with denominator factor at the same
        // ordinal once index n is skipped; counts match (N-1 each).
        std::size_t j = 0;
        for (std::size_t k = 0; k < N; ++k) {
            if (k == n) continue;
            const xreal den = static_cast<xreal>(lam[k]) - static_cast<xreal>(lam[n]);
            const xreal num = static_cast<xreal>(mu[j]) - static_cast<xreal>(lam[n]);
            ++j;
            lg += std::log(xabs(num)) - std::log(xabs(den));
            if (num < 0) sign = -sign;
            if (den < 0) sign = -sign;
        }
        ti[n] = sign * std::exp(lg);
    }
    return ti;
}

} // namespace detail

/**
 * @brief Sum of the paired spectral shifts: Delta = sum (mu_k - lambda_k),
 *        which equals h2 - h1 exactly (trace identity).
 */
inline double delta(const InterlacedSpectra& s) {
    if (s.mode() != SpectraMode::RankOne)
        throw WrongMode("delta is defined in rank_one mode only");
    detail::xreal d = 0;
    for (std::size_t k = 0; k < s.lambdas().size(); ++k)
        d += static_cast<detail::xreal>(s.mus()[k]) - static_cast<detail::xreal>(s.lambdas()[k]);
    return static_cast<double>(d);
}

/**
 * @brief Normalizing constants from the rank-one pair:
 *        tau_n^-1 = (mu_n - lambda_n)/Delta * prod_{k!=n} (mu_k - lambda_n)/(lambda_k - lambda_n).
 */
inline std::vector<double> tau_rank_one(const InterlacedSpectra& s, double Delta) {
    if (s.mode() != SpectraMode::RankOne)
        throw WrongMode("tau_rank_one needs rank_one spectra");
    if (!(Delta > 0.0))
        throw NonPositiveTau("Delta not positive; pass spectra with lambda below mu");
    const auto ti = detail::tau_inverse_rank_one(s.lambdas(), s.mus(), Delta);
    std::vector<double> tau(ti.size());
    for (std::size_t n = 0; n < ti.size(); ++n) {
        if (!(ti[n] > 0))
            throw NonPositiveTau("tau_" + std::to_string(n + 1) +
                                 " not positive (inconsistent input ordering)");
        tau[n] = static_cast<double>(1 / ti[n]);
    }
    return tau;
}

/**
 * @brief Normalizing constants from the Dirichlet-Neumann pair: tau_n^-1 is
 *        the negated residue of prod (mu_k - zeta) / prod (lambda_k - zeta)
 *        at lambda_n; positivity is asserted rather than derived from a case
 *        split, so an orientation mistake surfaces as NonPositiveTau.
 */
inline std::vector<double> tau_dirichlet_neumann(const InterlacedSpectra& s) {
    if (s.mode() != SpectraMode::DirichletNeumann)
        throw WrongMode("tau_dirichlet_neumann needs dirichlet_neumann spectra");
    const auto ti = detail::tau_inverse_dn(s.lambdas(), s.mus());
    std::vector<double> tau(ti.size());
    for (std::size_t n = 0; n < ti.size(); ++n) {
        if (!(ti[n] > 0))
            throw NonPositiveTau("tau_" + std::to_string(n + 1) +
                                 " not positive (inconsistent input ordering)");
        tau[n] = static_cast<double>(1 / ti[n]);
    }
    return tau;
}

/**
 * @brief Assemble the spectral measure with atoms at the lambdas and weights
 *        1/tau_n; the weight sum must be 1 within tol_norm.
 */
inline SpectralMeasure build_measure(const std::vector<double>& lambdas,
                                     const std::vector<double>& taus) {
    if (lambdas.size() != taus.size())
        throw std::invalid_argument("build_measure: length mismatch");
    detail::xreal sum = 0;
    std::vector<SpectralMeasure::Atom> atoms(lambdas.size());
    for (std::size_t k = 0; k < taus.size(); ++k) {
        if (!(taus[k] > 0.0))
            throw NonPositiveTau("tau_" + std::to_string(k + 1) + " not positive");
        atoms[k] = {lambdas[k], 1.0 / taus[k]};
        sum += 1 / static_cast<detail::xreal>(taus[k]);
    }
    const double err = std::abs(static_cast<double>(sum) - 1.0);
    if (err > tol_norm)
        throw NormalizationFailure("weights sum " +
                                   detail::fmt("%g", static_cast<double>(sum)) +
                                   " ≠ 1 (inconsistent spectra)");
    return SpectralMeasure(std::move(atoms));
}

/**
 * @brief Zero-pole form of the spectral ratio function. Rank-one: front 1,
 *        zeros mu, poles lambda. Dirichlet-Neumann: the monic difference form
 *        already behaves like -1/zeta at infinity, so the front constant is
 *        likewise 1.
 */
inline MFunctionProduct mfrak_product(const InterlacedSpectra& s) {
    return MFunctionProduct(s.mus(), s.lambdas(), 1.0);
}

/**
 * @brief Evaluate front * prod (zeros_k - zeta) / (poles_k - zeta) with
 *        index-paired factors; surplus poles contribute bare reciprocals.
 *
 * Works on raw lists so degenerate data (a zero equal to a pole) evaluates by
 * exact cancellation instead of being rejected.
 */
inline std::complex<double> mfrak_eval(const std::vector<double>& zeros,
                                       const std::vector<double>& poles, double front,
                                       std::complex<double> zeta) {
    using C = std::complex<long double>;
    const C z(zeta.real(), zeta.imag());
    C acc(front, 0);
    const std::size_t paired = std::min(zeros.size(), poles.size());
    for (std::size_t k = 0; k < paired; ++k)
        acc *= (C(zeros[k], 0) - z) / (C(poles[k], 0) - z);
    for (std::size_t k = paired; k < zeros.size(); ++k) acc *= C(zeros[k], 0) - z;
    for (std::size_t k = paired; k < poles.size(); ++k) acc /= C(poles[k], 0) - z;
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

inline std::complex<double> mfrak_eval(const MFunctionProduct& p, std::complex<double> zeta) {
    return mfrak_eval(p.zeros(), p.poles(), p.front(), zeta);
}

struct MfrakFit {
    double h1_minus_h2;
    double q1_minus_h2;
};

/**
 * @brief Least-squares fit of the two leading expansion coefficients of the
 *        ratio function from samples on the imaginary axis:
 *        mfrak(zeta) = 1 + (h1-h2)/zeta + (h1-h2)(q1-h2)/zeta^2 + O(zeta^-3).
 *
 * With zeta = iR and x = 1/R: Im = -A x + (next) x^3, Re - 1 = -B x^2 +
 * (next) x^4, where A = h1-h2 and B = A (q1-h2); both pairs are fit by least
 * squares over all samples. A below 1e-12 in magnitude is the degenerate
 * lambda = mu case and returns (0, 0) by convention.
 */
inline MfrakFit mfrak_fit(
    const std::vector<std::pair<std::complex<double>, std::complex<double>>>& samples) {
    if (samples.size() < 3) throw IllConditionedFit("need at least 3 samples");
    std::vector<long double> x(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto z = samples[i].first;
        if (!(z.imag() > 0.0) || std::abs(z.real()) > 1e-9 * z.imag())
            throw std::invalid_argument("mfrak_fit: samples must lie on the positive imaginary axis");
        x[i] = 1.0L / z.imag();
        if (i > 0 && !(x[i] < x[i - 1]))
            throw std::invalid_argument("mfrak_fit: radii must be strictly ascending");
    }
    if (samples.back().first.imag() < 10.0 * samples.front().first.imag())
        throw IllConditionedFit("sample radii span less than one decade");

    // Two independent 2-parameter least-squares solves via normal equations.
    auto solve2 = [](long double a11, long double a12, long double a22, long double r1,
                     long double r2) {
        const long double det = a11 * a22 - a12 * a12;
        return std::pair<long double, long double>{(r1 * a22 - a12 * r2) / det,
                                                   (a11 * r2 - r1 * a12) / det};
    };
    long double i11 = 0, i12 = 0, i22 = 0, ir1 = 0, ir2 = 0;
    long double r11 = 0, r12 = 0, r22 = 0, rr1 = 0, rr2 = 0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const long double x1 = x[i], x3 = x1 * x1 * x1;
        const long double im = samples[i].second.imag();
        i11 += x1 * x1; i12 += x1 * x3; i22 += x3 * x3;
        ir1 += x1 * im; ir2 += x3 * im;
        const long double x2 = x1 * x1, x4 = x2 * x2;
        const long double re = samples[i].second.real() - 1.0L;
        r11 += x2 * x2; r12 += x2 * x4; r22 += x4 * x4;
        rr1 += x2 * re; rr2 += x4 * re;
    }
    const auto [cim, cim3] = solve2(i11, i12, i22, ir1, ir2);
    (void)cim3;
    const auto [cre, cre4] = solve2(r11, r12, r22, rr1, rr2);
    (void)cre4;
    const double A = static_cast<double>(-cim);
    const double B = static_cast<double>(-cre);
    if (std::abs(A) < 1e-12) return {0.0, 0.0};
    return {A, B / A};
}

/**
 * @brief Full characterization check on raw spectra data.
 *
 * Throws IndeterminateInterlacing when any merged gap is below eps_sep;
 * structural and ordering problems come back as failed verdicts.
 */
inline ConditionReport check_conditions(const SpectraData& s) {
    ConditionReport rep;
    rep.mode = s.mode;

    const auto bad = validate_spectra(s);
    for (const auto& v : bad)
        if (v.find("eps_sep") != std::string::npos) throw IndeterminateInterlacing(v);

    if (!bad.empty()) {
        rep.a_interlacing = {false, detail::join_violations(bad)};
        rep.b_delta_finite = {false, "not evaluated (interlacing failed)"};
        rep.c_moments_finite = {false, "not evaluated (interlacing failed)"};
        rep.d_density = {true, "automatic (finite support)"};
        rep.tau_positive = {false, "not evaluated (interlacing failed)"};
        return rep;
    }
    rep.a_interlacing = {true, "strict interlacing with mode ordering holds"};

    InterlacedSpectra spectra(s);
    if (s.mode == SpectraMode::RankOne) {
        rep.delta = delta(spectra);
        rep.b_delta_finite = {true, "Delta = " + detail::fmt("%.17g", rep.delta)};
    } else {
        rep.b_delta_finite = {true, "no Delta in dirichlet_neumann mode"};
    }

    std::vector<double> taus;
    try {
        taus = s.mode == SpectraMode::RankOne ? tau_rank_one(spectra, rep.delta)
                                              : tau_dirichlet_neumann(spectra);
        rep.tau_positive = {true, "all tau_n positive"};
    } catch (const NonPositiveTau& e) {
        rep.tau_positive = {false, e.what()};
    }

    if (!taus.empty()) {
        const int N = static_cast<int>(s.lambdas.size());
        detail::xreal sum = 0;
        for (double t : taus) sum += 1 / static_cast<detail::xreal>(t);
        std::vector<SpectralMeasure::Atom> atoms(s.lambdas.size());
        for (std::size_t k = 0; k < atoms.size(); ++k)
            atoms[k] = {s.lambdas[k], 1.0 / taus[k] / static_cast<double>(sum)};
        SpectralMeasure rho(std::move(atoms));
        rep.moments = moments(rho, 2 * N - 1);
        rep.c_moments_finite = {true, "first " + std::to_string(2 * N) + " moments attached"};
    } else {
        rep.c_moments_finite = {true, "finite support; moments not attached (tau unavailable)"};
    }
    rep.d_density = {true, "automatic (finite support)"};
    return rep;
}

/**
 * @brief Inverse map: spectra (plus h1 in rank-one mode) to the matrix and
 *        the recovered boundary parameter.
 *
 * Rank-one: Delta fixes h2 = h1 + Delta; the tau list gives the measure of
 * the h2-coupled matrix; Lanczos rebuilds it and q_1 is shifted back by h2.
 * Dirichlet-Neumann: the tau list is the measure of the matrix itself.
 * The recovered matrix is re-run forward; SpectrumMismatch if the spectra are
 * not reproduced within tol_spec * tol_scale.
 */
inline ReconstructionResult recover(const InterlacedSpectra& s, std::optional<double> h1,
                                    double tol_scale = 1.0) {
    const double tol = tol_spec(s.spread()) * tol_scale;

    if (s.mode() == SpectraMode::RankOne) {
        if (!h1) throw WrongMode("rank_one recovery requires h1");
        const double D = delta(s);
        const double h2 = *h1 + D;
        const auto taus = tau_rank_one(s, D);
        const SpectralMeasure rho = build_measure(s.lambdas(), taus);
        std::vector<std::string> warnings;
        const JacobiMatrix Jh2 = stieltjes_lanczos(rho, &warnings);
        std::vector<double> q = Jh2.q();
        q[0] += h2;
        JacobiMatrix J(std::move(q), Jh2.b());

        double resid = 0.0;
        {
            const auto lam = eigenvalues(perturb(J, h2));
            const auto mu = eigenvalues(perturb(J, *h1));
            for (std::size_t k = 0; k < lam.size(); ++k) {
                resid = std::max(resid, std::abs(lam[k] - s.lambdas()[k]));
                resid = std::max(resid, std::abs(mu[k] - s.mus()[k]));
            }
        }
        detail::xreal wsum = 0;
        for (const auto& a : rho.atoms()) wsum += static_cast<detail::xreal>(a.second);
        if (resid > tol)
            throw SpectrumMismatch("forward spectra of the recovered matrix deviate by " +
                                   detail::fmt("%g", resid) + " (tol " + detail::fmt("%g", tol) +
                                   ")");
        ReconstructionResult res(std::move(J), BoundaryParam::finite(h2), D);
        res.diagnostics["spectrum_residual"] = resid;
        res.diagnostics["weight_sum_error"] = std::abs(static_cast<double>(wsum) - 1.0);
        res.warnings = std::move(warnings);
        return res;
    }

    if (h1) throw WrongMode("h1 has no meaning in dirichlet_neumann recovery");
    const auto taus = tau_dirichlet_neumann(s);
    const SpectralMeasure rho = build_measure(s.lambdas(), taus);
    std::vector<std::string> warnings;
    JacobiMatrix J = stieltjes_lanczos(rho, &warnings);

    double resid = 0.0;
    {
        const auto lam = eigenvalues(J);
        for (std::size_t k = 0; k < lam.size(); ++k)
            resid = std::max(resid, std::abs(lam[k] - s.lambdas()[k]));
        if (J.n() >= 2) {
            const auto mu = eigenvalues(truncate_first(J));
            for (std::size_t k = 0; k < s.mus().size(); ++k)
                resid = std::max(resid, std::abs(mu[k] - s.mus()[k]));
        }
    }
    detail::xreal wsum = 0;
    for (const auto& a : rho.atoms()) wsum += static_cast<detail::xreal>(a.second);
    if (resid > tol)
        throw SpectrumMismatch("forward spectra of the recovered matrix deviate by " +
                               detail::fmt("%g", resid) + " (tol " + detail::fmt("%g", tol) + ")");
    ReconstructionResult res(std::move(J), BoundaryParam::neumann_infinity(), 0.0);
    res.diagnostics["spectrum_residual"] = resid;
    res.diagnostics["weight_sum_error"] = std::abs(static_cast<double>(wsum) - 1.0);
    res.warnings = std::move(warnings);
    return res;
}

} // namespace jts

#endif // JTS_INVERSE_HPP
