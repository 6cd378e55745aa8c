#ifndef JTS_RNG_HPP
#define JTS_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "core.hpp"
#include "forward.hpp"

namespace jts {

// Mixing step used to derive independent per-trial seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial) {
    return splitmix64(master + (trial + 1) * 0x9E3779B97F4A7C15ULL);
}

/**
 * @brief Deterministic portable generator: mt19937_64 with fixed derivations,
 *        no distribution objects, so streams match across implementations.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    // Uniform in [0,1) with 53 random bits.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    // Uniform in {0,...,n-1} by rejection, bias-free.
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_int: n must be positive");
        const std::uint64_t threshold = (-n) % n;
        for (;;) {
            const std::uint64_t r = gen_();
            if (r >= threshold) return r % n;
        }
    }

private:
    std::mt19937_64 gen_;
};

inline JacobiMatrix random_matrix(Rng& rng, int n) {
    std::vector<double> q(n), b(n > 0 ? n - 1 : 0);
    for (auto& x : q) x = rng.uniform(-2.0, 2.0);
    for (auto& x : b) x = rng.uniform(0.5, 2.0);
    return JacobiMatrix(std::move(q), std::move(b));
}

/**
 * @brief A generated inverse-problem instance: the source matrix, the
 *        couplings (rank-one mode only), and the forward spectra.
 */
struct TwoSpectraTrial {
    JacobiMatrix J;
    double h1 = 0.0;
    double h2 = 0.0;
    SpectraData data;
};

namespace detail {

// Two spectra stored in binary64 carry the matrix only when the instance is
// resolvable at that storage precision. Two statistics control this. Atom
// mass: below ~3e-7 a weight pushes its interlacing gap into the last bits of
// the eigenvalues and the information is simply gone; recovery error grows
// like n*eps/w_min well before that. Merged gap: the norming-constant
// products divide by differences of spectra points, so a gap near
// eps*scale/gap_rel costs that many digits regardless of the weights (small
// h2-h1 squeezes every rank-one gap this way). Generators redraw instances
// failing either floor; they are ill-posed at this storage precision, not
// wrong.
inline constexpr double min_atom_mass = 1e-6;
inline constexpr double min_rel_gap = 1e-6;
inline constexpr int redraw_cap = 10000;

inline bool weights_resolvable(const JacobiMatrix& J) {
    // Raw kernel output on purpose: strongly localized candidates amplify
    // recurrence rounding until the weight sum drifts past tol_norm, and the
    // measure constructor would throw where a redraw is the right outcome.
    const auto em = eigen_measure(J.q(), J.b());
    xreal sum = 0;
    for (xreal w : em.weight) {
        if (!(w >= min_atom_mass)) return false;
        sum += w;
    }
    return xabs(sum - 1) <= tol_norm;
}

inline bool gaps_resolvable(const SpectraData& d) {
    std::vector<double> merged(d.lambdas);
    merged.insert(merged.end(), d.mus.begin(), d.mus.end());
    std::sort(merged.begin(), merged.end());
    if (merged.size() < 2) return true;
    const double floor = min_rel_gap * std::max(1.0, merged.back() - merged.front());
    for (std::size_t i = 0; i + 1 < merged.size(); ++i)
        if (merged[i + 1] - merged[i] < floor) return false;
    return true;
}

} // namespace detail

/**
 * @brief Draw a rank-one instance: random J, h1 < h2 in [-3,3], spectra of
 *        (J_{h2}, J_{h1}). Redraws until the pair passes the validity check
 *        and both resolvability floors; ConvergenceFailure after max_draws
 *        tries. The acceptance rate falls steeply with n (localized edge
 *        eigenvectors shrink weights), so callers sampling large n should
 *        bound max_draws and treat the failure as "pick another n".
 */
inline TwoSpectraTrial draw_rank_one_trial(Rng& rng, int n, int max_draws = detail::redraw_cap) {
    for (int t = 0; t < max_draws; ++t) {
        JacobiMatrix J = random_matrix(rng, n);
        double h1 = rng.uniform(-3.0, 3.0);
        double h2 = rng.uniform(-3.0, 3.0);
        if (h1 > h2) std::swap(h1, h2);
        if (h1 == h2) continue;
        SpectraData d;
        d.mode = SpectraMode::RankOne;
        d.lambdas = eigenvalues(perturb(J, h2));
        d.mus = eigenvalues(perturb(J, h1));
        if (!validate_spectra(d).empty()) continue;
        if (!detail::gaps_resolvable(d)) continue;
        if (!detail::weights_resolvable(perturb(J, h2))) continue;
        return {std::move(J), h1, h2, std::move(d)};
    }
    throw ConvergenceFailure("no well-posed rank_one instance after " +
                             std::to_string(max_draws) + " draws");
}

/**
 * @brief Draw a Dirichlet-Neumann instance: random J, spectra of (J, J with
 *        first row and column removed). Same resolvability policy.
 */
inline TwoSpectraTrial draw_dn_trial(Rng& rng, int n, int max_draws = detail::redraw_cap) {
    for (int t = 0; t < max_draws; ++t) {
        JacobiMatrix J = random_matrix(rng, n);
        SpectraData d;
        d.mode = SpectraMode::DirichletNeumann;
        d.lambdas = eigenvalues(J);
        if (n >= 2) d.mus = eigenvalues(truncate_first(J));
        if (!validate_spectra(d).empty()) continue;
        if (!detail::gaps_resolvable(d)) continue;
        if (!detail::weights_resolvable(J)) continue;
        return {std::move(J), 0.0, 0.0, std::move(d)};
    }
    throw ConvergenceFailure("no well-posed dirichlet_neumann instance after " +
                             std::to_string(max_draws) + " draws");
}

} // namespace jts

#endif // JTS_RNG_HPP
