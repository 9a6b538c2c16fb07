#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "few/errors.hpp"
#include "few/fitness.hpp"
#include "few/rng.hpp"

using namespace few;
using namespace few::fitness;

namespace {

// Independent oracle: silhouette via the literal double loop (self excluded
// from cohesion, contrast class chosen by centroid distance).
std::vector<double> silhouette_naive(const std::vector<double>& phi, const std::vector<int>& y,
                                     int k) {
    const std::size_t n = phi.size();
    std::vector<double> centroid(static_cast<std::size_t>(k), 0.0);
    std::vector<int> count(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < n; ++i) {
        centroid[static_cast<std::size_t>(y[i])] += phi[i];
        count[static_cast<std::size_t>(y[i])] += 1;
    }
    for (int c = 0; c < k; ++c) {
        if (count[static_cast<std::size_t>(c)] > 0) {
            centroid[static_cast<std::size_t>(c)] /= count[static_cast<std::size_t>(c)];
        }
    }
    std::vector<double> s(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const int c = y[i];
        if (count[static_cast<std::size_t>(c)] <= 1) continue;
        int other = -1;
        double best = 0.0;
        for (int o = 0; o < k; ++o) {
            if (o == c || count[static_cast<std::size_t>(o)] == 0) continue;
            const double dist = std::fabs(centroid[static_cast<std::size_t>(c)] -
                                          centroid[static_cast<std::size_t>(o)]);
            if (other < 0 || dist < best) {
                other = o;
                best = dist;
            }
        }
        double a = 0.0;
        double b = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double d2 = (phi[i] - phi[j]) * (phi[i] - phi[j]);
            if (y[j] == c && j != i) a += d2;
            if (y[j] == other) b += d2;
        }
        a /= static_cast<double>(count[static_cast<std::size_t>(c)] - 1);
        b /= static_cast<double>(count[static_cast<std::size_t>(other)]);
        const double denom = std::max(a, b);
        s[i] = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return s;
}

constexpr double kTol = 1e-9;

}  // namespace

TEST_CASE("r2 examples") {
    std::vector<int> y = {0, 0, 1, 1};
    CHECK(r2_fitness(std::vector<double>{0, 0, 1, 1}, y) == doctest::Approx(1.0).epsilon(kTol));
    CHECK(r2_fitness(std::vector<double>{0.5, 0.5, 0.5, 0.5}, y) ==
          doctest::Approx(0.0).epsilon(kTol));
    CHECK(r2_fitness(std::vector<double>{0.1, 0.0, 0.9, 1.0}, y) ==
          doctest::Approx(0.98).epsilon(kTol));
    CHECK_THROWS_AS(r2_fitness(std::vector<double>{1, 2, 3}, std::vector<int>{1, 1, 1}),
                    DegenerateTargetError);
}

TEST_CASE("r2 is invariant to permuting samples") {
    Rng rng(17);
    std::uniform_real_distribution<double> val(-2.0, 2.0);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<double> phi(40);
        std::vector<int> y(40);
        for (std::size_t i = 0; i < phi.size(); ++i) {
            phi[i] = val(rng);
            y[i] = static_cast<int>(i % 3);
        }
        const double before = r2_fitness(phi, y);
        std::vector<std::size_t> perm(phi.size());
        std::iota(perm.begin(), perm.end(), 0u);
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<double> phi_p(phi.size());
        std::vector<int> y_p(y.size());
        for (std::size_t i = 0; i < perm.size(); ++i) {
            phi_p[i] = phi[perm[i]];
            y_p[i] = y[perm[i]];
        }
        CHECK(r2_fitness(phi_p, y_p) == doctest::Approx(before).epsilon(1e-12));
    }
}

TEST_CASE("fisher examples") {
    // Identical distributions in both classes.
    CHECK(fisher_fitness(std::vector<double>{1, 2, 1, 2}, std::vector<int>{0, 0, 1, 1}, 2) ==
          doctest::Approx(0.0).epsilon(kTol));
    // Means 0 and 1, population sigma 1 in each class.
    CHECK(fisher_fitness(std::vector<double>{-1, 1, 0, 2}, std::vector<int>{0, 0, 1, 1}, 2) ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(kTol));
    // Three classes at means 0, 1, 2 with sigma 1: pairs (0,1), (0,2), (1,2).
    CHECK(fisher_fitness(std::vector<double>{-1, 1, 0, 2, 1, 3},
                         std::vector<int>{0, 0, 1, 1, 2, 2}, 3) ==
          doctest::Approx(4.0 / std::sqrt(2.0)).epsilon(kTol));
    // Zero variance with unequal means hits the guarded denominator.
    const double guarded =
        fisher_fitness(std::vector<double>{0, 0, 1, 1}, std::vector<int>{0, 0, 1, 1}, 2);
    CHECK(guarded == doctest::Approx(1.0 / 1e-9).epsilon(kTol));
}

TEST_CASE("fisher scales like c * F under phi -> c*phi + b") {
    Rng rng(23);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    std::vector<double> phi(60);
    std::vector<int> y(60);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        phi[i] = val(rng);
        y[i] = static_cast<int>(i % 4);
    }
    const double base = fisher_fitness(phi, y, 4);
    for (double c : {0.5, 2.0, 7.25}) {
        std::vector<double> t(phi.size());
        for (std::size_t i = 0; i < phi.size(); ++i) t[i] = c * phi[i] + 3.0;
        CHECK(fisher_fitness(t, y, 4) == doctest::Approx(c * base).epsilon(1e-9));
    }
}

TEST_CASE("silhouette examples") {
    SUBCASE("perfectly separated pairs") {
        const auto r =
            silhouette_fitness(std::vector<double>{0, 0, 10, 10}, std::vector<int>{0, 0, 1, 1}, 2);
        CHECK(r.mean == doctest::Approx(1.0).epsilon(kTol));
        for (double s : r.per_sample) CHECK(s == doctest::Approx(1.0).epsilon(kTol));
    }
    SUBCASE("all samples share one value") {
        const auto r =
            silhouette_fitness(std::vector<double>{3, 3, 3, 3}, std::vector<int>{0, 0, 1, 1}, 2);
        CHECK(r.mean == doctest::Approx(0.0).epsilon(kTol));
        for (double s : r.per_sample) CHECK(s == 0.0);
    }
    SUBCASE("singleton class convention") {
        const auto r =
            silhouette_fitness(std::vector<double>{0, 1, 9}, std::vector<int>{0, 0, 1}, 2);
        CHECK(r.per_sample[2] == 0.0);
    }
}

TEST_CASE("silhouette matches the naive oracle on random draws") {
    Rng rng(31);
    std::uniform_real_distribution<double> val(-3.0, 3.0);
    std::uniform_int_distribution<int> klass(0, 2);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 3 + static_cast<std::size_t>(rep % 40);
        std::vector<double> phi(n);
        std::vector<int> y(n);
        y[0] = 0;
        y[1] = 1;  // ensure two populated classes
        for (std::size_t i = 0; i < n; ++i) {
            phi[i] = val(rng);
            if (i >= 2) y[i] = klass(rng);
        }
        const auto got = silhouette_fitness(phi, y, 3);
        const auto want = silhouette_naive(phi, y, 3);
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(got.per_sample[i] == doctest::Approx(want[i]).epsilon(1e-9));
            CHECK(got.per_sample[i] >= -1.0);
            CHECK(got.per_sample[i] <= 1.0);
        }
    }
}

TEST_CASE("mean silhouette approaches 1 as separation grows") {
    std::vector<int> y = {0, 0, 0, 1, 1, 1};
    double last = -1.0;
    for (double gap : {1.0, 10.0, 100.0, 1000.0}) {
        std::vector<double> phi = {0.0, 0.5, 1.0, gap, gap + 0.5, gap + 1.0};
        const double mean = silhouette_fitness(phi, y, 2).mean;
        CHECK(mean > last);
        last = mean;
    }
    CHECK(last > 0.999);
}

TEST_CASE("nearest_other_class examples") {
    // Centroids A:0, B:1, C:5.
    std::vector<double> phi = {0, 1, 5};
    std::vector<int> y = {0, 1, 2};
    CHECK(nearest_other_class(phi, y, 3, 0) == 1);
    CHECK(nearest_other_class(phi, y, 3, 2) == 1);
    // Two classes: always the other one.
    std::vector<double> p2 = {0, 9};
    std::vector<int> y2 = {0, 1};
    CHECK(nearest_other_class(p2, y2, 2, 0) == 1);
    CHECK(nearest_other_class(p2, y2, 2, 1) == 0);
    // Tie |A-B| == |A-C|: lowest class index wins.
    std::vector<double> p3 = {0, -2, 2};
    std::vector<int> y3 = {0, 1, 2};
    CHECK(nearest_other_class(p3, y3, 3, 0) == 1);
}

TEST_CASE("per-case error examples") {
    std::vector<int> y = {0, 0, 1, 1};
    SUBCASE("r2 zero vector on a perfect feature") {
        const auto e = per_case_errors(Metric::r2, std::vector<double>{0, 0, 1, 1}, y, 2);
        for (double v : e) CHECK(v == 0.0);
    }
    SUBCASE("r2 squared residuals") {
        const auto e = per_case_errors(Metric::r2, std::vector<double>{0.1, 0.0, 0.9, 1.0}, y, 2);
        REQUIRE(e.size() == 4);
        CHECK(e[0] == doctest::Approx(0.01).epsilon(kTol));
        CHECK(e[1] == doctest::Approx(0.0).epsilon(kTol));
        CHECK(e[2] == doctest::Approx(0.01).epsilon(kTol));
        CHECK(e[3] == doctest::Approx(0.0).epsilon(kTol));
    }
    SUBCASE("silhouette errors vanish on separated clusters") {
        const auto e =
            per_case_errors(Metric::silhouette, std::vector<double>{0, 0, 10, 10}, y, 2);
        for (double v : e) {
            CHECK(v == doctest::Approx(0.0).epsilon(kTol));
        }
    }
    SUBCASE("fisher has no decomposition") {
        CHECK_THROWS_AS(per_case_errors(Metric::fisher, std::vector<double>{0, 0, 1, 1}, y, 2),
                        UnsupportedError);
    }
}

TEST_CASE("aggregate R2 equals 1 - sum(per_case)/SS_tot on random draws") {
    Rng rng(41);
    std::uniform_real_distribution<double> val(-4.0, 4.0);
    std::uniform_int_distribution<int> klass(0, 2);
    for (int rep = 0; rep < 1000; ++rep) {
        const std::size_t n = 4 + static_cast<std::size_t>(rep % 60);
        std::vector<double> phi(n);
        std::vector<int> y(n);
        y[0] = 0;
        y[1] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            phi[i] = val(rng);
            if (i >= 2) y[i] = klass(rng);
        }
        double mean = 0.0;
        for (int v : y) mean += v;
        mean /= static_cast<double>(n);
        double ss_tot = 0.0;
        for (int v : y) ss_tot += (v - mean) * (v - mean);
        const auto e = per_case_errors(Metric::r2, phi, y, 3);
        const double recomposed =
            1.0 - std::accumulate(e.begin(), e.end(), 0.0) / ss_tot;
        CHECK(r2_fitness(phi, y) == doctest::Approx(recomposed).epsilon(1e-9));
    }
}

TEST_CASE("evaluate attaches per-case errors for the right metrics") {
    std::vector<double> phi = {0.2, 0.1, 0.8, 0.9};
    std::vector<int> y = {0, 0, 1, 1};
    CHECK(evaluate(Metric::r2, phi, y, 2).per_case.has_value());
    CHECK(evaluate(Metric::silhouette, phi, y, 2).per_case.has_value());
    CHECK(!evaluate(Metric::fisher, phi, y, 2).per_case.has_value());
    CHECK(evaluate(Metric::r2, phi, y, 2).aggregate == doctest::Approx(r2_fitness(phi, y)));
}
