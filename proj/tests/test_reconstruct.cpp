#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "jts/forward.hpp"
#include "jts/reconstruct.hpp"
#include "jts/rng.hpp"

using namespace jts;

TEST_CASE("stieltjes_lanczos on hand-solved measures", "[reconstruct]") {
    SECTION("symmetric two-point measure gives the golden matrix") {
        const JacobiMatrix J = stieltjes_lanczos(SpectralMeasure({{-1.0, 0.5}, {1.0, 0.5}}));
        CHECK(std::abs(J.q()[0]) < 1e-15);
        CHECK(std::abs(J.q()[1]) < 1e-15);
        CHECK(J.b()[0] == Catch::Approx(1.0).margin(1e-15));
    }
    SECTION("single atom") {
        const JacobiMatrix J = stieltjes_lanczos(SpectralMeasure({{2.5, 1.0}}));
        REQUIRE(J.n() == 1);
        CHECK(J.q()[0] == 2.5);
    }
    SECTION("golden coupled measure") {
        const JacobiMatrix J = stieltjes_lanczos(normalizing_constants(perturb(
            JacobiMatrix({0.0, 0.0}, {1.0}), 1.0)));
        CHECK(J.q()[0] == Catch::Approx(-1.0).margin(1e-13));
        CHECK(J.q()[1] == Catch::Approx(0.0).margin(1e-13));
        CHECK(J.b()[0] == Catch::Approx(1.0).margin(1e-13));
    }
}

TEST_CASE("stieltjes_lanczos breakdown and warning band", "[reconstruct]") {
    // Two atoms at distance d: b_1^2 = w1 w2 d^2.
    SECTION("coincident-scale atoms break down") {
        REQUIRE_THROWS_AS(stieltjes_lanczos(SpectralMeasure({{0.0, 0.5}, {1e-13, 0.5}})),
                          BreakdownBelowTolerance);
    }
    SECTION("nearly coincident atoms warn") {
        std::vector<std::string> warnings;
        const JacobiMatrix J =
            stieltjes_lanczos(SpectralMeasure({{0.0, 0.5}, {1e-9, 0.5}}), &warnings);
        CHECK(J.b()[0] == Catch::Approx(0.5e-9).epsilon(1e-10));
        REQUIRE(warnings.size() == 1);
        CHECK(warnings[0].find("warning band") != std::string::npos);
    }
    SECTION("comfortable separation stays silent") {
        std::vector<std::string> warnings;
        stieltjes_lanczos(SpectralMeasure({{0.0, 0.5}, {1.0, 0.5}}), &warnings);
        CHECK(warnings.empty());
    }
}

TEST_CASE("stieltjes_lanczos inverts normalizing_constants", "[reconstruct]") {
    Rng rng(trial_seed(5, 0));
    for (int n : {1, 3, 7, 15, 30}) {
        const JacobiMatrix J = random_matrix(rng, n);
        const JacobiMatrix R = stieltjes_lanczos(normalizing_constants(J));
        double dev = 0.0;
        for (int i = 0; i < n; ++i) dev = std::max(dev, std::abs(R.q()[i] - J.q()[i]));
        for (int i = 0; i + 1 < n; ++i) dev = std::max(dev, std::abs(R.b()[i] - J.b()[i]));
        CHECK(dev < 1e-9);
    }
}

TEST_CASE("atom order does not matter", "[reconstruct]") {
    // The discrete inner product is a sum; SpectralMeasure canonicalizes, so
    // a permuted atom list reconstructs the identical matrix.
    const std::vector<SpectralMeasure::Atom> fwd{{-2.0, 0.3}, {0.5, 0.2}, {1.0, 0.5}};
    std::vector<SpectralMeasure::Atom> rev(fwd.rbegin(), fwd.rend());
    const JacobiMatrix A = stieltjes_lanczos(SpectralMeasure(fwd));
    const JacobiMatrix B = stieltjes_lanczos(SpectralMeasure(rev));
    CHECK(A.q() == B.q());
    CHECK(A.b() == B.b());
}

TEST_CASE("moments", "[reconstruct]") {
    SECTION("symmetric measure alternates") {
        const auto s = moments(SpectralMeasure({{-1.0, 0.5}, {1.0, 0.5}}), 5);
        REQUIRE(s.size() == 6);
        CHECK(s[0] == 1.0);
        CHECK(s[1] == 0.0);
        CHECK(s[2] == 1.0);
        CHECK(s[3] == 0.0);
        CHECK(s[5] == 0.0);
    }
    SECTION("single atom powers") {
        const auto s = moments(SpectralMeasure({{-0.5, 1.0}}), 4);
        for (int m = 0; m <= 4; ++m) CHECK(s[m] == Catch::Approx(std::pow(-0.5, m)));
    }
    SECTION("golden measure first moment is the trace weight") {
        const auto s = moments(
            normalizing_constants(perturb(JacobiMatrix({0.0, 0.0}, {1.0}), 1.0)), 1);
        CHECK(s[1] == Catch::Approx(-1.0).margin(1e-14)); // q_1 - h_2
    }
    REQUIRE_THROWS_AS(moments(SpectralMeasure({{0.0, 1.0}}), -1), std::invalid_argument);
}

TEST_CASE("ricatti_reconstruct on hand-solved measures", "[reconstruct]") {
    SECTION("golden coupled measure at depth 2") {
        const auto P = ricatti_reconstruct(
            normalizing_constants(perturb(JacobiMatrix({0.0, 0.0}, {1.0}), 1.0)), 2);
        REQUIRE(P.q.size() == 2);
        REQUIRE(P.b.size() == 1);
        CHECK(P.q[0] == Catch::Approx(-1.0).margin(1e-12));
        CHECK(P.q[1] == Catch::Approx(0.0).margin(1e-12));
        CHECK(P.b[0] == Catch::Approx(1.0).margin(1e-12));
    }
    SECTION("single atom at depth 1") {
        const auto P = ricatti_reconstruct(SpectralMeasure({{2.5, 1.0}}), 1);
        REQUIRE(P.q.size() == 1);
        CHECK(P.b.empty());
        CHECK(P.q[0] == Catch::Approx(2.5).margin(1e-14));
    }
    SECTION("symmetric measure at depth 2") {
        const auto P = ricatti_reconstruct(SpectralMeasure({{-1.0, 0.5}, {1.0, 0.5}}), 2);
        CHECK(std::abs(P.q[0]) < 1e-14);
        CHECK(std::abs(P.q[1]) < 1e-14);
        CHECK(P.b[0] == Catch::Approx(1.0).margin(1e-13));
    }
}

TEST_CASE("ricatti_reconstruct depth validation", "[reconstruct]") {
    const SpectralMeasure rho({{-1.0, 0.5}, {1.0, 0.5}});
    REQUIRE_THROWS_AS(ricatti_reconstruct(rho, 0), std::invalid_argument);
    REQUIRE_THROWS_AS(ricatti_reconstruct(rho, 3), std::invalid_argument); // depth > N

    // depth_cap limits large measures regardless of N.
    std::vector<SpectralMeasure::Atom> atoms;
    for (int k = 0; k < 12; ++k) atoms.emplace_back(k * 0.3 - 1.8, 1.0 / 12);
    REQUIRE_THROWS_AS(ricatti_reconstruct(SpectralMeasure(atoms), 11), std::invalid_argument);
    CHECK_NOTHROW(ricatti_reconstruct(SpectralMeasure(atoms), 10));
}

TEST_CASE("ricatti_reconstruct blows up loudly on huge moments", "[reconstruct]") {
    // Locations at 1e8 push s_2 to 1e16, past the documented 1e15 guard.
    REQUIRE_THROWS_AS(
        ricatti_reconstruct(SpectralMeasure({{-1e8, 0.5}, {1e8, 0.5}}), 2), NumericalBlowup);
}

TEST_CASE("engine agreement at depth 8", "[reconstruct]") {
    Rng rng(trial_seed(13, 1));
    for (int t = 0; t < 3; ++t) {
        const JacobiMatrix J = random_matrix(rng, 12);
        const SpectralMeasure rho = normalizing_constants(J);
        const JacobiMatrix A = stieltjes_lanczos(rho);
        const auto B = ricatti_reconstruct(rho, 8);
        const auto rep = cross_validate(A, B, 1e-6);
        CHECK(rep.pass);
        REQUIRE(B.q.size() == 8);
        REQUIRE(B.b.size() == 7);
    }
}

TEST_CASE("cross_validate", "[reconstruct]") {
    const JacobiMatrix A({1.0, 2.0, 3.0}, {0.5, 0.25});
    SECTION("identical prefix") {
        const auto rep = cross_validate(A, {{1.0, 2.0}, {0.5}}, 1e-12);
        CHECK(rep.pass);
        CHECK(rep.max_deviation == 0.0);
    }
    SECTION("reports the deviation it found") {
        const auto rep = cross_validate(A, {{1.0 + 1e-7, 2.0}, {0.5}}, 1e-6);
        CHECK(rep.pass);
        CHECK(rep.max_deviation == Catch::Approx(1e-7));
        CHECK_FALSE(cross_validate(A, {{1.0 + 1e-7, 2.0}, {0.5}}, 1e-8).pass);
    }
    SECTION("prefix must fit inside the matrix") {
        REQUIRE_THROWS_AS(cross_validate(A, {{1, 2, 3, 4}, {}}, 1.0), std::invalid_argument);
    }
}
