#ifndef JTS_CORE_HPP
#define JTS_CORE_HPP

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace jts {

// |sum of weights - 1| bound; the sum is exact in theory, slack covers rounding only.
inline constexpr double tol_norm = 1e-10;

// Minimal gap scale between any two points of lambda union mu; below it the
// interlacing test is indeterminate (product formulas divide by these gaps).
inline constexpr double eps_sep_base = 1e-12;

inline double eps_sep(double spread) { return eps_sep_base * std::max(1.0, spread); }

// Residual tolerance for spectrum round trips, scaled by the spectral spread.
inline double tol_spec(double spread) { return 1e-8 * (1.0 + spread); }

enum class SpectraMode { RankOne, DirichletNeumann };

inline const char* mode_name(SpectraMode m) {
    return m == SpectraMode::RankOne ? "rank_one" : "dirichlet_neumann";
}

namespace detail {

inline std::string fmt(const char* pattern, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, a);
    return buf;
}

inline bool strictly_ascending(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i - 1] < v[i])) return false;
    return true;
}

inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

inline double spread_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    return v.back() - v.front();
}

} // namespace detail

/**
 * @brief Raw two-spectra data as it arrives from a file or a caller.
 *
 * Carries no semantic guarantees beyond its field types; the condition
 * checker consumes this form, and InterlacedSpectra is the validated wrapper.
 */
struct SpectraData {
    SpectraMode mode = SpectraMode::RankOne;
    std::vector<double> lambdas;
    std::vector<double> mus;
};

// ---------------------------------------------------------------------------
// Report-only validation. Each function returns the list of violated
// invariants (empty = valid); nothing is thrown.
// ---------------------------------------------------------------------------

inline std::vector<std::string> validate_matrix(const std::vector<double>& q,
                                                const std::vector<double>& b) {
    std::vector<std::string> out;
    if (q.empty()) out.push_back("n < 1");
    if (!q.empty() && b.size() != q.size() - 1)
        out.push_back("b length " + std::to_string(b.size()) + " != n-1 = " +
                      std::to_string(q.size() == 0 ? 0 : q.size() - 1));
    for (std::size_t i = 0; i < q.size(); ++i)
        if (!std::isfinite(q[i]))
            out.push_back("q_" + std::to_string(i + 1) + " not finite");
    for (std::size_t i = 0; i < b.size(); ++i) {
        if (!std::isfinite(b[i]))
            out.push_back("b_" + std::to_string(i + 1) + " not finite");
        else if (!(b[i] > 0.0))
            out.push_back("b_" + std::to_string(i + 1) + " not positive");
    }
    return out;
}

inline std::vector<std::string> validate_spectra(const SpectraData& s) {
    std::vector<std::string> out;
    const std::size_t N = s.lambdas.size();
    if (N == 0) out.push_back("lambdas empty");
    if (!detail::all_finite(s.lambdas)) out.push_back("lambdas contain non-finite values");
    if (!detail::all_finite(s.mus)) out.push_back("mus contain non-finite values");
    const std::size_t want_mus =
        s.mode == SpectraMode::RankOne ? N : (N == 0 ? 0 : N - 1);
    if (s.mus.size() != want_mus)
        out.push_back("mus length " + std::to_string(s.mus.size()) + " != expected " +
                      std::to_string(want_mus) + " for " + mode_name(s.mode) + " mode");
    if (!detail::strictly_ascending(s.lambdas)) out.push_back("lambdas not strictly ascending");
    if (!detail::strictly_ascending(s.mus)) out.push_back("mus not strictly ascending");
    if (!out.empty()) return out;

    // Gap floor over the merged set comes first: below eps_sep no order
    // comparison is trustworthy, so the interlacing verdict is indeterminate
    // rather than true or false and the pattern is not even examined.
    std::vector<double> merged = s.lambdas;
    merged.insert(merged.end(), s.mus.begin(), s.mus.end());
    std::sort(merged.begin(), merged.end());
    const double eps = eps_sep(detail::spread_of(merged));
    for (std::size_t i = 1; i < merged.size(); ++i)
        if (merged[i] - merged[i - 1] < eps)
            out.push_back("gap below eps_sep between merged points " + std::to_string(i) +
                          " and " + std::to_string(i + 1) + " (indeterminate interlacing)");
    if (!out.empty()) return out;

    // Interlacing pattern. RankOne: l1 < m1 < l2 < m2 < ... < lN < mN.
    // DirichletNeumann: l1 < m1 < l2 < ... < m_{N-1} < lN (Cauchy interlacing).
    for (std::size_t k = 0; k < s.mus.size(); ++k) {
        if (!(s.lambdas[k] < s.mus[k]))
            out.push_back("interlacing violated: mu_" + std::to_string(k + 1) +
                          " not above lambda_" + std::to_string(k + 1));
        else if (k + 1 < N && !(s.mus[k] < s.lambdas[k + 1]))
            out.push_back("interlacing violated: mu_" + std::to_string(k + 1) +
                          " not in (lambda_" + std::to_string(k + 1) + ", lambda_" +
                          std::to_string(k + 2) + ")");
    }
    return out;
}

inline std::vector<std::string>
validate_measure(const std::vector<std::pair<double, double>>& atoms) {
    std::vector<std::string> out;
    if (atoms.empty()) out.push_back("no atoms");
    double sum = 0.0;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
        if (!std::isfinite(atoms[i].first))
            out.push_back("atom " + std::to_string(i + 1) + " location not finite");
        if (!std::isfinite(atoms[i].second) || !(atoms[i].second > 0.0))
            out.push_back("w_" + std::to_string(i + 1) + " not positive");
        if (i > 0 && !(atoms[i - 1].first < atoms[i].first))
            out.push_back("atom locations not strictly ascending at " + std::to_string(i + 1));
        sum += atoms[i].second;
    }
    if (!atoms.empty() && std::abs(sum - 1.0) > tol_norm)
        out.push_back("weights sum " + detail::fmt("%g", sum) + " ≠ 1");
    return out;
}

namespace detail {

inline std::string join_violations(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += "; ";
        s += v[i];
    }
    return s;
}

} // namespace detail

/**
 * @brief Finite Jacobi matrix: diagonal q (n entries), off-diagonal b (n-1
 *        entries, all strictly positive). Immutable after construction.
 */
class JacobiMatrix {
public:
    JacobiMatrix(std::vector<double> q, std::vector<double> b)
        : q_(std::move(q)), b_(std::move(b)) {
        auto bad = validate_matrix(q_, b_);
        if (!bad.empty())
            throw std::invalid_argument("JacobiMatrix: " + detail::join_violations(bad));
    }

    int n() const { return static_cast<int>(q_.size()); }
    const std::vector<double>& q() const { return q_; }
    const std::vector<double>& b() const { return b_; }

    // Row-sum norm; off-diagonal entries appear in two rows.
    double norm_inf() const {
        double m = 0.0;
        for (int i = 0; i < n(); ++i) {
            double r = std::abs(q_[i]);
            if (i > 0) r += std::abs(b_[i - 1]);
            if (i + 1 < n()) r += std::abs(b_[i]);
            m = std::max(m, r);
        }
        return m;
    }

    std::vector<std::string> validate() const { return validate_matrix(q_, b_); }

private:
    std::vector<double> q_;
    std::vector<double> b_;
};

/**
 * @brief Boundary parameter: a finite coupling h, or the Neumann limit at
 *        infinity (first row and column removed).
 */
class BoundaryParam {
public:
    static BoundaryParam finite(double h) {
        if (!std::isfinite(h)) throw std::invalid_argument("BoundaryParam: h not finite");
        BoundaryParam p;
        p.finite_ = true;
        p.h_ = h;
        return p;
    }
    static BoundaryParam neumann_infinity() { return BoundaryParam(); }

    bool is_finite() const { return finite_; }
    double h() const {
        if (!finite_) throw WrongMode("BoundaryParam is NeumannInfinity, no finite h");
        return h_;
    }

private:
    BoundaryParam() = default;
    bool finite_ = false;
    double h_ = 0.0;
};

/**
 * @brief Validated two-spectra data: strictly ascending lists, mode-correct
 *        lengths, strict interlacing, and all merged gaps >= eps_sep.
 *
 * Construction throws IndeterminateInterlacing when the only obstruction is a
 * sub-eps_sep gap, std::invalid_argument for structural violations.
 */
class InterlacedSpectra {
public:
    explicit InterlacedSpectra(SpectraData d) : d_(std::move(d)) {
        auto bad = validate_spectra(d_);
        if (!bad.empty()) {
            bool all_gap = true;
            for (const auto& v : bad)
                if (v.find("eps_sep") == std::string::npos) all_gap = false;
            if (all_gap)
                throw IndeterminateInterlacing(detail::join_violations(bad));
            throw std::invalid_argument("InterlacedSpectra: " + detail::join_violations(bad));
        }
    }

    InterlacedSpectra(SpectraMode mode, std::vector<double> lambdas, std::vector<double> mus)
        : InterlacedSpectra(SpectraData{mode, std::move(lambdas), std::move(mus)}) {}

    SpectraMode mode() const { return d_.mode; }
    const std::vector<double>& lambdas() const { return d_.lambdas; }
    const std::vector<double>& mus() const { return d_.mus; }
    const SpectraData& data() const { return d_; }

    // Spread of the merged point set.
    double spread() const {
        double lo = d_.lambdas.front(), hi = d_.lambdas.back();
        if (!d_.mus.empty()) {
            lo = std::min(lo, d_.mus.front());
            hi = std::max(hi, d_.mus.back());
        }
        return hi - lo;
    }

    std::vector<std::string> validate() const { return validate_spectra(d_); }

private:
    SpectraData d_;
};

/**
 * @brief Finitely supported probability measure: atoms at strictly ascending
 *        locations with positive weights summing to 1 within tol_norm.
 *
 * The constructor canonicalizes by sorting atoms by location, so the input
 * order does not matter; coincident locations are rejected.
 */
class SpectralMeasure {
public:
    using Atom = std::pair<double, double>; // (location, weight)

    explicit SpectralMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
        std::sort(atoms_.begin(), atoms_.end(),
                  [](const Atom& a, const Atom& b) { return a.first < b.first; });
        auto bad = validate_measure(atoms_);
        if (!bad.empty()) {
            for (const auto& v : bad)
                if (v.find("weights sum") != std::string::npos)
                    throw NormalizationFailure(v);
            throw std::invalid_argument("SpectralMeasure: " + detail::join_violations(bad));
        }
    }

    int size() const { return static_cast<int>(atoms_.size()); }
    const std::vector<Atom>& atoms() const { return atoms_; }
    double location(int k) const { return atoms_.at(k).first; }
    double weight(int k) const { return atoms_.at(k).second; }

    double spread() const {
        return atoms_.size() < 2 ? 0.0 : atoms_.back().first - atoms_.front().first;
    }

    // Cumulative distribution: sum of weights at locations <= t.
    double rho(double t) const {
        double s = 0.0;
        for (const auto& a : atoms_)
            if (a.first <= t) s += a.second;
        return s;
    }

    std::vector<std::string> validate() const { return validate_measure(atoms_); }

private:
    std::vector<Atom> atoms_;
};

/**
 * @brief Zero-pole product form of an m-function ratio: front * prod (z_k - zeta) / (p_k - zeta).
 */
class MFunctionProduct {
public:
    MFunctionProduct(std::vector<double> zeros, std::vector<double> poles, double front)
        : zeros_(std::move(zeros)), poles_(std::move(poles)), front_(front) {
        if (!detail::strictly_ascending(poles_))
            throw std::invalid_argument("MFunctionProduct: poles not strictly ascending");
        for (double z : zeros_)
            for (double p : poles_)
                if (z == p)
                    throw std::invalid_argument("MFunctionProduct: zero coincides with pole");
    }

    const std::vector<double>& zeros() const { return zeros_; }
    const std::vector<double>& poles() const { return poles_; }
    double front() const { return front_; }

private:
    std::vector<double> zeros_;
    std::vector<double> poles_;
    double front_;
};

/**
 * @brief Outcome of an inverse run: the matrix, the recovered boundary
 *        parameter (finite h2 in rank-one mode, NeumannInfinity otherwise),
 *        delta, and named residual diagnostics.
 */
struct ReconstructionResult {
    JacobiMatrix matrix;
    BoundaryParam recovered_param;
    double delta = 0.0; // h2 - h1 in rank-one mode; 0 in Dirichlet-Neumann mode
    std::map<std::string, double> diagnostics;
    std::vector<std::string> warnings;

    ReconstructionResult(JacobiMatrix m, BoundaryParam p, double d)
        : matrix(std::move(m)), recovered_param(p), delta(d) {
        if (recovered_param.is_finite() && !(delta > 0.0))
            throw std::invalid_argument("ReconstructionResult: delta not positive in rank-one mode");
    }
};

} // namespace jts

#endif // JTS_CORE_HPP
