// Command-line surface: forward spectra generation, inverse recovery,
// condition checking, round-trip fuzzing, m-function traces.
//
// Exit codes: 0 success, 2 parse or flag failure, 3 numerical failure,
// 4 condition-check failure, 5 round-trip tolerance failure.

#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jts/jts.hpp"

namespace {

double tol_scale_from_env() {
    const char* e = std::getenv("JTS_TOL_OVERRIDE");
    if (!e) return 1.0;
    char* end = nullptr;
    const double v = std::strtod(e, &end);
    if (end == e || *end != '\0' || !(v > 0.0))
        throw jts::ParseError(std::string("JTS_TOL_OVERRIDE not a positive float: \"") + e + "\"");
    return v;
}

struct ForwardOpts {
    std::string matrix_file;
    std::string out = "spectra.json";
    double h1 = 0.0, h2 = 0.0;
    bool have_h1 = false, have_h2 = false;
    bool dn = false;
};

int cmd_forward(const ForwardOpts& o) {
    if (o.dn == (o.have_h1 || o.have_h2)) {
        std::cerr << "forward: pass either --h1 and --h2, or --dn\n";
        return 2;
    }
    if (!o.dn) {
        if (!(o.have_h1 && o.have_h2)) {
            std::cerr << "forward: rank-one mode needs both --h1 and --h2\n";
            return 2;
        }
        if (!(o.h1 < o.h2)) {
            std::cerr << "forward: need h1 < h2\n";
            return 2;
        }
    }
    const jts::JacobiMatrix J = jts::matrix_from_json(jts::read_file(o.matrix_file));
    jts::SpectraData d;
    if (o.dn) {
        d.mode = jts::SpectraMode::DirichletNeumann;
        d.lambdas = jts::eigenvalues(J);
        if (J.n() >= 2) d.mus = jts::eigenvalues(jts::truncate_first(J));
    } else {
        d.mode = jts::SpectraMode::RankOne;
        d.lambdas = jts::eigenvalues(jts::perturb(J, o.h2));
        d.mus = jts::eigenvalues(jts::perturb(J, o.h1));
    }
    jts::write_file(o.out, jts::to_json(d));
    std::cout << "wrote " << o.out << "\n";
    return 0;
}

struct InverseOpts {
    std::string spectra_file;
    std::string out = "result.json";
    double h1 = 0.0;
    bool have_h1 = false;
    bool dn = false;
};

int cmd_inverse(const InverseOpts& o) {
    if (o.have_h1 == o.dn) {
        std::cerr << "inverse: pass either --h1, or --dn\n";
        return 2;
    }
    const jts::SpectraData d = jts::spectra_from_json(jts::read_file(o.spectra_file));
    if (o.dn != (d.mode == jts::SpectraMode::DirichletNeumann)) {
        std::cerr << "inverse: flags disagree with file mode \"" << jts::mode_name(d.mode)
                  << "\"\n";
        return 2;
    }
    const jts::ConditionReport rep = jts::check_conditions(d);
    if (!rep.all_pass()) {
        const std::string f = rep.first_failure();
        if (f == "tau")
            std::cerr << "inverse: tau positivity failed: " << rep.tau_positive.detail << "\n";
        else
            std::cerr << "inverse: condition " << f << ") failed: "
                      << (f == "a" ? rep.a_interlacing.detail
                                   : f == "b" ? rep.b_delta_finite.detail
                                              : rep.c_moments_finite.detail)
                      << "\n";
        return 4;
    }
    const jts::InterlacedSpectra s(d);
    const auto res = jts::recover(
        s, o.dn ? std::nullopt : std::optional<double>(o.h1), tol_scale_from_env());
    jts::write_file(o.out, jts::to_json(res));
    std::cout << "wrote " << o.out << "\n";
    return 0;
}

int cmd_check(const std::string& spectra_file) {
    const jts::SpectraData d = jts::spectra_from_json(jts::read_file(spectra_file));
    const jts::ConditionReport rep = jts::check_conditions(d);
    std::cout << jts::to_json(rep) << "\n";
    return rep.all_pass() ? 0 : 4;
}

struct RoundtripOpts {
    int n = 10;
    int trials = 100;
    std::uint64_t seed = 1;
    std::string mode = "rank-one";
    std::string out = "roundtrip.csv";
};

int cmd_roundtrip(const RoundtripOpts& o) {
    const bool dn = o.mode == "dn";
    if (!dn && o.mode != "rank-one") {
        std::cerr << "roundtrip: --mode must be rank-one or dn\n";
        return 2;
    }
    const double tol_scale = tol_scale_from_env();
    std::ofstream csv(o.out, std::ios::binary);
    if (!csv) throw jts::ParseError("cannot write " + o.out);
    csv << "trial,n,matrix_residual,h2_residual,pass\n";

    int failures = 0;
    double worst_matrix = 0.0, worst_h2 = 0.0;
    std::string first_error;
    for (int t = 0; t < o.trials; ++t) {
        jts::Rng rng(jts::trial_seed(o.seed, static_cast<std::uint64_t>(t)));
        double mres = std::numeric_limits<double>::quiet_NaN();
        double hres = 0.0;
        bool pass = false;
        try {
            const jts::TwoSpectraTrial trial =
                dn ? jts::draw_dn_trial(rng, o.n) : jts::draw_rank_one_trial(rng, o.n);
            const jts::InterlacedSpectra s(trial.data);
            const auto res = jts::recover(
                s, dn ? std::nullopt : std::optional<double>(trial.h1), tol_scale);
            mres = 0.0;
            for (int i = 0; i < trial.J.n(); ++i)
                mres = std::max(mres, std::abs(res.matrix.q()[i] - trial.J.q()[i]));
            for (int i = 0; i + 1 < trial.J.n(); ++i)
                mres = std::max(mres, std::abs(res.matrix.b()[i] - trial.J.b()[i]));
            if (!dn) hres = std::abs(res.recovered_param.h() - trial.h2);
            pass = mres <= 1e-8 && hres <= 1e-10;
            worst_matrix = std::max(worst_matrix, mres);
            worst_h2 = std::max(worst_h2, hres);
        } catch (const std::exception& e) {
            if (first_error.empty()) first_error = e.what();
        }
        if (!pass) ++failures;
        csv << t << "," << o.n << "," << jts::detail::fmt("%.17g", mres) << ","
            << jts::detail::fmt("%.17g", hres) << "," << (pass ? 1 : 0) << "\n";
    }
    std::cout << "mode=" << o.mode << " n=" << o.n << " trials=" << o.trials
              << " failures=" << failures
              << " max_matrix_residual=" << jts::detail::fmt("%.3g", worst_matrix)
              << " max_h2_residual=" << jts::detail::fmt("%.3g", worst_h2) << "\n";
    if (!first_error.empty()) std::cerr << "first failure: " << first_error << "\n";
    return failures == 0 ? 0 : 5;
}

struct MtraceOpts {
    std::string matrix_file;
    std::string out = "mtrace.csv";
    double h = 0.0;
    std::string axis = "imag";
    double from = 10.0;
    double to = 1e4;
    int points = 50;
};

int cmd_mtrace(const MtraceOpts& o) {
    if (o.axis != "imag") {
        std::cerr << "mtrace: only --axis imag is available\n";
        return 2;
    }
    if (!(o.from > 0.0) || !(o.to > o.from) || o.points < 2) {
        std::cerr << "mtrace: need 0 < --from < --to and --points >= 2\n";
        return 2;
    }
    const jts::JacobiMatrix J = jts::matrix_from_json(jts::read_file(o.matrix_file));
    const jts::SpectralMeasure rho = jts::normalizing_constants(jts::perturb(J, o.h));
    // 1x1 matrices have no b_1; the expansion holds with b_1 = 0.
    const double d0 = J.q()[0] - o.h;
    const jts::AsymptoticCoeffs c =
        J.n() >= 2 ? jts::asymptotic_coeffs(J, o.h)
                   : jts::AsymptoticCoeffs{-1.0, -d0, -(d0 * d0)};

    std::ofstream csv(o.out, std::ios::binary);
    if (!csv) throw jts::ParseError("cannot write " + o.out);
    csv << "xi,re_m,im_m,pred_re_o2,pred_im_o3\n";
    for (int i = 0; i < o.points; ++i) {
        const double xi =
            o.from * std::pow(o.to / o.from, static_cast<double>(i) / (o.points - 1));
        const std::complex<double> m = jts::weyl_m(rho, {0.0, xi});
        const double pred_re = -c.c2 / (xi * xi);
        const double pred_im = -c.c1 / xi + c.c3 / (xi * xi * xi);
        csv << jts::detail::fmt("%.17g", xi) << "," << jts::detail::fmt("%.17g", m.real())
            << "," << jts::detail::fmt("%.17g", m.imag()) << ","
            << jts::detail::fmt("%.17g", pred_re) << "," << jts::detail::fmt("%.17g", pred_im)
            << "\n";
    }
    std::cout << "wrote " << o.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"two-spectra inverse toolkit for finite Jacobi matrices"};
    app.require_subcommand(1);

    ForwardOpts fo;
    auto* fwd = app.add_subcommand("forward", "spectra of (J_h1, J_h2) or (J, J_inf)");
    fwd->add_option("matrix-file", fo.matrix_file, "JacobiMatrix JSON")->required();
    fwd->add_option("--h1", fo.h1, "smaller coupling")->each([&](const std::string&) { fo.have_h1 = true; });
    fwd->add_option("--h2", fo.h2, "larger coupling")->each([&](const std::string&) { fo.have_h2 = true; });
    fwd->add_flag("--dn", fo.dn, "Dirichlet-Neumann pair");
    fwd->add_option("--out", fo.out, "output file (default spectra.json)");

    InverseOpts io_;
    auto* inv = app.add_subcommand("inverse", "recover (J, h2) or J from spectra");
    inv->add_option("spectra-file", io_.spectra_file, "spectra JSON")->required();
    inv->add_option("--h1", io_.h1, "known smaller coupling")->each([&](const std::string&) { io_.have_h1 = true; });
    inv->add_flag("--dn", io_.dn, "Dirichlet-Neumann mode");
    inv->add_option("--out", io_.out, "output file (default result.json)");

    std::string check_file;
    auto* chk = app.add_subcommand("check", "characterization conditions report");
    chk->add_option("spectra-file", check_file, "spectra JSON")->required();

    RoundtripOpts ro;
    auto* rt = app.add_subcommand("roundtrip", "generate-recover fuzzing");
    rt->add_option("--n", ro.n, "matrix dimension")->check(CLI::PositiveNumber);
    rt->add_option("--trials", ro.trials, "number of trials")->check(CLI::PositiveNumber);
    rt->add_option("--seed", ro.seed, "master seed");
    rt->add_option("--mode", ro.mode, "rank-one or dn");
    rt->add_option("--out", ro.out, "per-trial CSV (default roundtrip.csv)");

    MtraceOpts mo;
    auto* mt = app.add_subcommand("mtrace", "m(i*xi) trace with predicted asymptotes");
    mt->set_help_flag("--help", "print help"); // frees -h so --h can be the coupling
    mt->add_option("matrix-file", mo.matrix_file, "JacobiMatrix JSON")->required();
    mt->add_option("--h", mo.h, "coupling");
    mt->add_option("--axis", mo.axis, "sampling axis (imag)");
    mt->add_option("--from", mo.from, "smallest xi");
    mt->add_option("--to", mo.to, "largest xi");
    mt->add_option("--points", mo.points, "sample count");
    mt->add_option("--out", mo.out, "output CSV (default mtrace.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fwd->parsed()) return cmd_forward(fo);
        if (inv->parsed()) return cmd_inverse(io_);
        if (chk->parsed()) return cmd_check(check_file);
        if (rt->parsed()) return cmd_roundtrip(ro);
        return cmd_mtrace(mo);
    } catch (const jts::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const jts::IndeterminateInterlacing& e) {
        std::cerr << "condition check: " << e.what() << "\n";
        return 4;
    } catch (const jts::NonPositiveTau& e) {
        std::cerr << "condition check: " << e.what() << "\n";
        return 4;
    } catch (const jts::Error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
