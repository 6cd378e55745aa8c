#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "jts/core.hpp"

using namespace jts;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("tolerance formulas", "[core]") {
    CHECK(eps_sep(0.0) == 1e-12);
    CHECK(eps_sep(0.5) == 1e-12);
    CHECK(eps_sep(10.0) == Catch::Approx(1e-11));
    CHECK(tol_spec(0.0) == Catch::Approx(1e-8));
    CHECK(tol_spec(3.0) == Catch::Approx(4e-8));
    CHECK(tol_norm == 1e-10);
}

TEST_CASE("mode names", "[core]") {
    CHECK(std::string(mode_name(SpectraMode::RankOne)) == "rank_one");
    CHECK(std::string(mode_name(SpectraMode::DirichletNeumann)) == "dirichlet_neumann");
}

TEST_CASE("JacobiMatrix construction and accessors", "[core]") {
    JacobiMatrix J({0.0, 0.0}, {1.0});
    CHECK(J.n() == 2);
    CHECK(J.q() == std::vector<double>{0.0, 0.0});
    CHECK(J.b() == std::vector<double>{1.0});

    JacobiMatrix single({3.5}, {});
    CHECK(single.n() == 1);

    SECTION("rejects nonpositive off-diagonals") {
        REQUIRE_THROWS_WITH(JacobiMatrix({0.0, 0.0}, {0.0}), ContainsSubstring("b_1 not positive"));
        REQUIRE_THROWS_WITH(JacobiMatrix({0.0, 0.0, 0.0}, {1.0, -2.0}),
                            ContainsSubstring("b_2 not positive"));
    }
    SECTION("rejects wrong lengths and non-finite entries") {
        REQUIRE_THROWS_AS(JacobiMatrix({}, {}), std::invalid_argument);
        REQUIRE_THROWS_AS(JacobiMatrix({0.0, 0.0}, {1.0, 1.0}), std::invalid_argument);
        REQUIRE_THROWS_AS(JacobiMatrix({std::nan(""), 0.0}, {1.0}), std::invalid_argument);
        REQUIRE_THROWS_AS(JacobiMatrix({0.0, INFINITY}, {1.0}), std::invalid_argument);
    }
}

TEST_CASE("JacobiMatrix norm_inf sums rows", "[core]") {
    // Row 2 of the 3x3 below is b_1 + |q_2| + b_2 = 2 + 3 + 4.
    JacobiMatrix J({1.0, -3.0, 0.5}, {2.0, 4.0});
    CHECK(J.norm_inf() == Catch::Approx(9.0));
    CHECK(JacobiMatrix({-7.0}, {}).norm_inf() == Catch::Approx(7.0));
}

TEST_CASE("BoundaryParam", "[core]") {
    const BoundaryParam f = BoundaryParam::finite(1.5);
    CHECK(f.is_finite());
    CHECK(f.h() == 1.5);

    const BoundaryParam inf = BoundaryParam::neumann_infinity();
    CHECK_FALSE(inf.is_finite());
    REQUIRE_THROWS_AS(inf.h(), WrongMode);
    REQUIRE_THROWS_AS(BoundaryParam::finite(INFINITY), std::invalid_argument);
}

TEST_CASE("InterlacedSpectra accepts the golden pair", "[core]") {
    const double s5 = std::sqrt(5.0);
    InterlacedSpectra s(SpectraMode::RankOne, {(-1 - s5) / 2, (-1 + s5) / 2}, {-1.0, 1.0});
    CHECK(s.lambdas().size() == 2);
    CHECK(s.spread() == Catch::Approx(1 + (1 + s5) / 2));
    CHECK(s.validate().empty());
}

TEST_CASE("InterlacedSpectra rejects broken ordering", "[core]") {
    SECTION("non-ascending lambdas") {
        REQUIRE_THROWS_WITH(InterlacedSpectra(SpectraMode::RankOne, {1.0, -1.0}, {-0.5, 1.5}),
                            ContainsSubstring("lambdas not strictly ascending"));
    }
    SECTION("interlacing violated") {
        // mu_1 must sit in (lambda_1, lambda_2).
        REQUIRE_THROWS_WITH(InterlacedSpectra(SpectraMode::RankOne, {-1.0, 1.0}, {2.0, 3.0}),
                            ContainsSubstring("interlacing violated"));
    }
    SECTION("rank-one length mismatch") {
        REQUIRE_THROWS_AS(InterlacedSpectra(SpectraMode::RankOne, {-1.0, 1.0}, {0.0}),
                          std::invalid_argument);
    }
    SECTION("dirichlet-neumann needs N-1 mus") {
        REQUIRE_THROWS_AS(
            InterlacedSpectra(SpectraMode::DirichletNeumann, {-1.0, 1.0}, {0.0, 2.0}),
            std::invalid_argument);
    }
}

TEST_CASE("InterlacedSpectra dirichlet-neumann shapes", "[core]") {
    InterlacedSpectra s(SpectraMode::DirichletNeumann, {-1.0, 1.0}, {0.0});
    CHECK(s.mode() == SpectraMode::DirichletNeumann);

    // N=1 has an empty second spectrum.
    InterlacedSpectra one(SpectraMode::DirichletNeumann, {0.5}, {});
    CHECK(one.mus().empty());
    CHECK(one.spread() == 0.0);
}

TEST_CASE("sub-eps_sep gaps are indeterminate, not invalid", "[core]") {
    const double eps = 1e-13; // below eps_sep for spread ~2
    REQUIRE_THROWS_AS(InterlacedSpectra(SpectraMode::RankOne, {-1.0, 1.0}, {-1.0 + eps, 2.0}),
                      IndeterminateInterlacing);
    REQUIRE_THROWS_WITH(InterlacedSpectra(SpectraMode::RankOne, {-1.0, 1.0}, {-1.0 + eps, 2.0}),
                        ContainsSubstring("eps_sep"));
    // IndeterminateInterlacing is not reported for plain violations.
    REQUIRE_THROWS_AS(InterlacedSpectra(SpectraMode::RankOne, {-1.0, 1.0}, {2.0, 3.0}),
                      std::invalid_argument);
}

TEST_CASE("validate_spectra reports instead of throwing", "[core]") {
    SpectraData d;
    d.mode = SpectraMode::RankOne;
    d.lambdas = {-1.0, 1.0};
    d.mus = {2.0, 3.0};
    const auto bad = validate_spectra(d);
    REQUIRE_FALSE(bad.empty());
    CHECK_THAT(bad.front(), ContainsSubstring("mu_1"));

    d.mus = {0.0, 2.0};
    CHECK(validate_spectra(d).empty());
}

TEST_CASE("SpectralMeasure canonicalizes and validates", "[core]") {
    SpectralMeasure rho({{1.0, 0.25}, {-1.0, 0.75}});
    CHECK(rho.size() == 2);
    CHECK(rho.location(0) == -1.0); // sorted on construction
    CHECK(rho.weight(0) == 0.75);
    CHECK(rho.spread() == 2.0);

    SECTION("cumulative distribution") {
        CHECK(rho.rho(-2.0) == 0.0);
        CHECK(rho.rho(-1.0) == 0.75);
        CHECK(rho.rho(0.0) == 0.75);
        CHECK(rho.rho(1.0) == 1.0);
    }
    SECTION("normalization failures carry the sum") {
        REQUIRE_THROWS_AS(SpectralMeasure({{-1.0, 0.5}, {1.0, 0.6}}), NormalizationFailure);
        REQUIRE_THROWS_WITH(SpectralMeasure({{-1.0, 0.5}, {1.0, 0.6}}),
                            ContainsSubstring("weights sum 1.1"));
    }
    SECTION("weight positivity") {
        REQUIRE_THROWS_WITH(SpectralMeasure({{-1.0, 0.0}, {1.0, 1.0}}),
                            ContainsSubstring("w_1 not positive"));
    }
    SECTION("coincident atoms") {
        REQUIRE_THROWS_AS(SpectralMeasure({{1.0, 0.5}, {1.0, 0.5}}), std::invalid_argument);
    }
    SECTION("single atom must carry full mass") {
        CHECK(SpectralMeasure({{2.0, 1.0}}).size() == 1);
        REQUIRE_THROWS_AS(SpectralMeasure({{2.0, 0.5}}), NormalizationFailure);
    }
}

TEST_CASE("MFunctionProduct guards its lists", "[core]") {
    MFunctionProduct p({-1.0, 1.0}, {-1.618, 0.618}, 1.0);
    CHECK(p.front() == 1.0);
    REQUIRE_THROWS_AS(MFunctionProduct({1.0}, {1.0}, 1.0), std::invalid_argument);
    REQUIRE_THROWS_AS(MFunctionProduct({0.0}, {1.0, -1.0}, 1.0), std::invalid_argument);
}

TEST_CASE("ReconstructionResult requires positive delta with finite param", "[core]") {
    JacobiMatrix J({0.0}, {});
    CHECK_NOTHROW(ReconstructionResult(J, BoundaryParam::finite(1.0), 0.5));
    CHECK_NOTHROW(ReconstructionResult(J, BoundaryParam::neumann_infinity(), 0.0));
    REQUIRE_THROWS_AS(ReconstructionResult(J, BoundaryParam::finite(1.0), 0.0),
                      std::invalid_argument);
}
