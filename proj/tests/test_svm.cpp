#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pnntrain/errors.hpp"
#include "pnntrain/rng.hpp"
#include "pnntrain/svm.hpp"
#include "test_util.hpp"

using namespace pnntrain;

namespace {

FeatureMatrix matrix_from(const std::vector<std::vector<double>>& rows) {
    FeatureMatrix x;
    x.cols = rows.empty() ? 0 : rows[0].size();
    for (const auto& r : rows) x.append_row(r.data());
    return x;
}

struct RandomProblem {
    FeatureMatrix x;
    std::vector<std::vector<double>> points;
    std::vector<int> y;
};

RandomProblem random_problem(Rng& rng, std::size_t n, std::size_t dim) {
    RandomProblem p;
    p.x.cols = dim;
    for (std::size_t i = 0; i < n; ++i) {
        auto v = testutil::random_vector(rng, dim, -2.0, 2.0);
        p.points.push_back(v);
        p.x.append_row(v.data());
        p.y.push_back(i < n / 2 ? -1 : +1);  // both signs always present
    }
    return p;
}

std::vector<std::vector<double>> gram(const RandomProblem& p, bool rbf,
                                      double gamma) {
    const std::size_t n = p.points.size();
    std::vector<std::vector<double>> k(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            k[i][j] = oracles::kernel_value(rbf, gamma, p.points[i],
                                            p.points[j]);
        }
    }
    return k;
}

// Recover (alpha, y) of the support vectors from the stored coefficients
// and recompute the dual objective with the reference formula.
double objective_from_model(const SvmBinaryModel& m) {
    std::vector<std::vector<double>> svs;
    std::vector<double> alpha;
    std::vector<int> y;
    for (std::size_t i = 0; i < m.support_vectors.rows; ++i) {
        svs.push_back(m.support_vectors.row_vector(i));
        alpha.push_back(std::fabs(m.sv_coeffs[i]));
        y.push_back(m.sv_coeffs[i] >= 0.0 ? +1 : -1);
    }
    const bool rbf = m.kernel.family == KernelFamily::rbf;
    const std::size_t n = svs.size();
    std::vector<std::vector<double>> k(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            k[i][j] = oracles::kernel_value(rbf, m.kernel.gamma, svs[i], svs[j]);
        }
    }
    return oracles::dual_objective(alpha, y, k);
}

}  // namespace

TEST_CASE("kernel family names parse both ways") {
    CHECK(parse_kernel_family("linear") == KernelFamily::linear);
    CHECK(parse_kernel_family("rbf") == KernelFamily::rbf);
    CHECK_THROWS_AS(parse_kernel_family("poly"), ConfigError);
    CHECK(kernel_family_name(KernelFamily::linear) == "linear");
    CHECK(kernel_family_name(KernelFamily::rbf) == "rbf");
}

TEST_CASE("kernel values on worked examples") {
    const KernelSpec lin{KernelFamily::linear, 0.0};
    CHECK(kernel_eval(lin, {1.0, 2.0}, {3.0, 4.0}) == 11.0);

    const KernelSpec rbf{KernelFamily::rbf, 0.5};
    CHECK(kernel_eval(rbf, {0.0, 0.0}, {2.0, 0.0}) ==
          doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(kernel_eval(rbf, {1.5, -0.5}, {1.5, -0.5}) == 1.0);

    CHECK_THROWS_AS(kernel_eval(lin, {1.0, 2.0}, {3.0}), DataError);
}

TEST_CASE("kernel symmetry and rbf range on random pairs") {
    Rng rng(17);
    for (int t = 0; t < 100; ++t) {
        const auto a = testutil::random_vector(rng, 4, -3.0, 3.0);
        const auto b = testutil::random_vector(rng, 4, -3.0, 3.0);
        for (const KernelSpec spec : {KernelSpec{KernelFamily::linear, 0.0},
                                      KernelSpec{KernelFamily::rbf, 0.7}}) {
            const double kab = kernel_eval(spec, a, b);
            const double kba = kernel_eval(spec, b, a);
            CHECK(kab == kba);
            CHECK(kernel_eval(spec, a, b) ==
                  doctest::Approx(oracles::kernel_value(
                                      spec.family == KernelFamily::rbf,
                                      spec.gamma, a, b))
                      .epsilon(1e-14));
            if (spec.family == KernelFamily::rbf) {
                CHECK(kab > 0.0);
                CHECK(kab <= 1.0);
            }
        }
    }
}

TEST_CASE("two opposite points on the line, C = 10") {
    const FeatureMatrix x = matrix_from({{-1.0}, {1.0}});
    const std::vector<int> y{-1, +1};
    SolveOptions opts;
    opts.c = 10.0;
    const SolveResult r =
        solve_dual(x, y, KernelSpec{KernelFamily::linear, 0.0}, opts);

    CHECK(r.stats.converged);
    CHECK(r.stats.kkt_gap < opts.tol);
    CHECK(r.stats.dual_objective == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.stats.support_vectors == 2);

    REQUIRE(r.model.support_vectors.rows == 2);
    CHECK(r.model.sv_coeffs[0] == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(r.model.sv_coeffs[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.model.bias == doctest::Approx(0.0).epsilon(1e-12));

    CHECK(decision_value(r.model, {2.0}) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(decision_value(r.model, {-1.0}) ==
          doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(predict_binary(r.model, {0.5}) == +1);
    CHECK(predict_binary(r.model, {-0.5}) == -1);
}

TEST_CASE("solutions are always dual feasible") {
    Rng rng(404);
    for (int t = 0; t < 20; ++t) {
        RandomProblem p = random_problem(rng, 6 + rng.index(10), 3);
        SolveOptions opts;
        opts.c = (t % 3 == 0) ? 0.1 : (t % 3 == 1) ? 1.0 : 10.0;
        const bool rbf = t % 2 == 0;
        const KernelSpec spec{rbf ? KernelFamily::rbf : KernelFamily::linear,
                              0.5};
        const SolveResult r = solve_dual(p.x, p.y, spec, opts);

        double coeff_sum = 0.0;
        for (double cf : r.model.sv_coeffs) {
            CHECK(std::fabs(cf) <= opts.c * (1.0 + 1e-12));
            CHECK(std::fabs(cf) > 0.0);
            coeff_sum += cf;
        }
        // sum(alpha_i y_i) = 0 carries over to the stored coefficients.
        CHECK(std::fabs(coeff_sum) <= 1e-9 * std::max(1.0, opts.c));
        CHECK(r.stats.support_vectors == r.model.sv_coeffs.size());
        if (r.stats.converged) CHECK(r.stats.kkt_gap < opts.tol);
    }
}

TEST_CASE("reported dual objective matches the reference formula") {
    Rng rng(808);
    for (int t = 0; t < 10; ++t) {
        RandomProblem p = random_problem(rng, 10, 2);
        SolveOptions opts;
        opts.c = 2.0;
        const KernelSpec spec{t % 2 ? KernelFamily::linear : KernelFamily::rbf,
                              0.8};
        const SolveResult r = solve_dual(p.x, p.y, spec, opts);
        CHECK(r.stats.dual_objective ==
              doctest::Approx(objective_from_model(r.model)).epsilon(1e-9));
    }
}

TEST_CASE("grid search confirms its own exhaustive maximum") {
    Rng rng(55);
    for (int t = 0; t < 4; ++t) {
        RandomProblem p = random_problem(rng, 4, 2);
        oracles::GridQp grid;
        grid.k = gram(p, t % 2 == 0, 0.5);
        grid.y = p.y;
        grid.c = 1.0;
        grid.steps = 8;
        const double ascent = grid.solve();
        const double exhaustive = grid.solve_exhaustive();
        CHECK(ascent <= exhaustive + 1e-9);
        CHECK(ascent >= 0.98 * exhaustive - 1e-9);
    }
}

TEST_CASE("solver matches or beats the grid lower bound") {
    Rng rng(3131);
    for (int t = 0; t < 12; ++t) {
        RandomProblem p = random_problem(rng, 5 + rng.index(6), 2);
        const double c = (t % 3 == 0) ? 0.1 : (t % 3 == 1) ? 1.0 : 10.0;
        const bool rbf = t % 2 == 0;
        const KernelSpec spec{rbf ? KernelFamily::rbf : KernelFamily::linear,
                              0.5};
        SolveOptions opts;
        opts.c = c;
        opts.verify_ascent = true;
        const SolveResult r = solve_dual(p.x, p.y, spec, opts);

        oracles::GridQp grid;
        grid.k = gram(p, rbf, 0.5);
        grid.y = p.y;
        grid.c = c;
        const double bound = grid.solve();
        CHECK(r.stats.dual_objective >= bound - 0.02 * std::fabs(bound) - 1e-9);
    }
}

TEST_CASE("decision values equal the plain kernel expansion") {
    Rng rng(9001);
    RandomProblem p = random_problem(rng, 14, 3);
    const KernelSpec spec{KernelFamily::rbf, 0.6};
    SolveOptions opts;
    opts.c = 5.0;
    const SolveResult r = solve_dual(p.x, p.y, spec, opts);

    std::vector<std::vector<double>> svs;
    for (std::size_t i = 0; i < r.model.support_vectors.rows; ++i) {
        svs.push_back(r.model.support_vectors.row_vector(i));
    }
    for (int t = 0; t < 50; ++t) {
        const auto x = testutil::random_vector(rng, 3, -3.0, 3.0);
        const double want = oracles::decision_loop(
            true, spec.gamma, svs, r.model.sv_coeffs, r.model.bias, x);
        CHECK(decision_value(r.model, x) ==
              doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("separable data is classified exactly at large C") {
    const auto blobs = testutil::make_blobs(20, 2, 2, 8.0, 0.3, 99);
    FeatureMatrix x;
    x.cols = 2;
    std::vector<int> y;
    for (const auto& s : blobs) {
        x.append_row(s.features.data());
        y.push_back(*s.label == 1 ? +1 : -1);
    }
    SolveOptions opts;
    opts.c = 1000.0;
    const SolveResult r =
        solve_dual(x, y, KernelSpec{KernelFamily::linear, 0.0}, opts);
    CHECK(r.stats.converged);
    for (std::size_t i = 0; i < x.rows; ++i) {
        CHECK(predict_binary(r.model, x.row_vector(i)) == y[i]);
    }
    // No margin violations, so every multiplier sits below the box bound.
    for (double cf : r.model.sv_coeffs) CHECK(std::fabs(cf) < opts.c);
}

TEST_CASE("iteration cap returns an honest unconverged result") {
    Rng rng(616);
    RandomProblem p = random_problem(rng, 30, 2);
    SolveOptions opts;
    opts.c = 10.0;
    opts.max_iter = 1;
    const SolveResult r =
        solve_dual(p.x, p.y, KernelSpec{KernelFamily::rbf, 1.0}, opts);
    CHECK(!r.stats.converged);
    CHECK(r.stats.iterations == 1);
    CHECK(r.stats.kkt_gap >= opts.tol);
    CHECK(r.model.support_vectors.rows > 0);
    CHECK(std::isfinite(decision_value(r.model, {0.0, 0.0})));
}

TEST_CASE("solver input validation") {
    const FeatureMatrix x = matrix_from({{0.0}, {1.0}});
    const KernelSpec lin{KernelFamily::linear, 0.0};
    SolveOptions opts;

    CHECK_THROWS_AS(solve_dual(FeatureMatrix{}, {}, lin, opts), DataError);
    CHECK_THROWS_AS(solve_dual(x, {1}, lin, opts), DataError);
    CHECK_THROWS_AS(solve_dual(x, {1, 2}, lin, opts), DataError);
    CHECK_THROWS_AS(solve_dual(x, {1, 1}, lin, opts), DataError);

    SolveOptions bad_c = opts;
    bad_c.c = 0.0;
    CHECK_THROWS_AS(solve_dual(x, {-1, 1}, lin, bad_c), ConfigError);
    SolveOptions bad_tol = opts;
    bad_tol.tol = 0.0;
    CHECK_THROWS_AS(solve_dual(x, {-1, 1}, lin, bad_tol), ConfigError);
}

TEST_CASE("power-of-two input scaling with gamma / 4 reproduces the solve") {
    Rng rng(2718);
    RandomProblem p = random_problem(rng, 16, 3);
    RandomProblem scaled = p;
    for (double& v : scaled.x.values) v *= 2.0;

    SolveOptions opts;
    opts.c = 3.0;
    const SolveResult a =
        solve_dual(p.x, p.y, KernelSpec{KernelFamily::rbf, 1.0}, opts);
    const SolveResult b =
        solve_dual(scaled.x, scaled.y, KernelSpec{KernelFamily::rbf, 0.25},
                   opts);

    // The kernel matrix is bitwise unchanged, so the whole optimization
    // replays exactly.
    CHECK(a.stats.iterations == b.stats.iterations);
    CHECK(a.stats.dual_objective == b.stats.dual_objective);
    CHECK(a.model.sv_coeffs == b.model.sv_coeffs);
    CHECK(a.model.bias == b.model.bias);

    for (int t = 0; t < 20; ++t) {
        const auto x = testutil::random_vector(rng, 3, -2.0, 2.0);
        std::vector<double> x2 = x;
        for (double& v : x2) v *= 2.0;
        CHECK(decision_value(a.model, x) == decision_value(b.model, x2));
    }
}

TEST_CASE("kernel cache returns exact rows under heavy eviction") {
    Rng rng(121);
    RandomProblem p = random_problem(rng, 40, 3);
    const KernelSpec spec{KernelFamily::rbf, 0.4};
    KernelCache cache(p.x, spec, 1);  // budget floor: two rows
    CHECK(cache.size() == 40);

    for (int t = 0; t < 200; ++t) {
        const std::size_t i = rng.index(40);
        const std::size_t j = rng.index(40);
        const auto [ri, rj] = cache.rows(i, j);
        CHECK(cache.computed_rows() <= 2);
        for (std::size_t col : {std::size_t(0), std::size_t(17),
                                std::size_t(39)}) {
            const double want_i = oracles::kernel_value(
                true, spec.gamma, p.points[i], p.points[col]);
            const double want_j = oracles::kernel_value(
                true, spec.gamma, p.points[j], p.points[col]);
            CHECK(ri[col] == doctest::Approx(want_i).epsilon(1e-14));
            CHECK(rj[col] == doctest::Approx(want_j).epsilon(1e-14));
        }
        CHECK(cache.diag(i) == doctest::Approx(1.0).epsilon(1e-14));
    }
}

TEST_CASE("cache size does not change the solution") {
    Rng rng(565);
    RandomProblem p = random_problem(rng, 24, 3);
    const KernelSpec spec{KernelFamily::rbf, 0.9};
    SolveOptions roomy;
    roomy.c = 4.0;
    SolveOptions tight = roomy;
    tight.cache_bytes = 1;

    const SolveResult a = solve_dual(p.x, p.y, spec, roomy);
    const SolveResult b = solve_dual(p.x, p.y, spec, tight);
    CHECK(a.stats.iterations == b.stats.iterations);
    CHECK(a.stats.dual_objective == b.stats.dual_objective);
    CHECK(a.model.sv_coeffs == b.model.sv_coeffs);
    CHECK(a.model.bias == b.model.bias);
}

TEST_CASE("one-vs-all separates three blobs") {
    const auto blobs = testutil::make_blobs(15, 3, 2, 6.0, 0.25, 7);
    FeatureMatrix x;
    x.cols = 2;
    std::vector<int> labels;
    for (const auto& s : blobs) {
        x.append_row(s.features.data());
        labels.push_back(*s.label);
    }
    SolveOptions opts;
    opts.c = 10.0;
    const MulticlassResult r = train_one_vs_all(
        x, labels, 3, KernelSpec{KernelFamily::rbf, 0.5}, opts);

    CHECK(r.model.num_classes == 3);
    REQUIRE(r.model.per_class.size() == 3);
    REQUIRE(r.stats.size() == 3);
    for (const auto& s : r.stats) CHECK(s.converged);

    for (std::size_t i = 0; i < x.rows; ++i) {
        CHECK(predict_multiclass(r.model, x.row_vector(i)) == labels[i]);
    }
    const auto values = decision_values(r.model, x.row_vector(0));
    CHECK(values.size() == 3);
    CHECK(values[0] > values[1]);
    CHECK(values[0] > values[2]);
}

TEST_CASE("two-class one-vs-all agrees with the direct binary machine") {
    const auto blobs = testutil::make_blobs(12, 2, 2, 7.0, 0.3, 41);
    FeatureMatrix x;
    x.cols = 2;
    std::vector<int> labels;
    std::vector<int> y;
    for (const auto& s : blobs) {
        x.append_row(s.features.data());
        labels.push_back(*s.label);
        y.push_back(*s.label == 1 ? +1 : -1);
    }
    SolveOptions opts;
    opts.c = 5.0;
    const KernelSpec spec{KernelFamily::rbf, 0.5};
    const MulticlassResult ova = train_one_vs_all(x, labels, 2, spec, opts);
    const SolveResult bin = solve_dual(x, y, spec, opts);
    for (std::size_t i = 0; i < x.rows; ++i) {
        const auto v = x.row_vector(i);
        const int from_ova = predict_multiclass(ova.model, v);
        const int from_bin = predict_binary(bin.model, v) == +1 ? 1 : 0;
        CHECK(from_ova == from_bin);
        CHECK(from_ova == labels[i]);
    }
}

TEST_CASE("one-vs-all input validation") {
    const FeatureMatrix x = matrix_from({{0.0, 0.0}, {1.0, 1.0}});
    const KernelSpec lin{KernelFamily::linear, 0.0};
    SolveOptions opts;

    CHECK_THROWS_AS(train_one_vs_all(x, {0, 1}, 1, lin, opts), ConfigError);
    CHECK_THROWS_AS(train_one_vs_all(x, {0}, 2, lin, opts), DataError);
    CHECK_THROWS_AS(train_one_vs_all(x, {0, 2}, 2, lin, opts), DataError);
    try {
        train_one_vs_all(x, {0, 0}, 2, lin, opts);
        FAIL("expected missing-class error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("class 1") != std::string::npos);
    }
}
