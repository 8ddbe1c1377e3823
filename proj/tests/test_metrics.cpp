#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "neva/metrics.hpp"
#include "test_utils.hpp"

using namespace neva;

namespace {

// Full DP table edit-distance oracle, independent of the rolling-row
// implementation under test.
int sed_oracle(const ScanpathString& a, const ScanpathString& b) {
    std::vector<std::vector<int>> d(a.size() + 1, std::vector<int>(b.size() + 1));
    for (std::size_t i = 0; i <= a.size(); ++i) d[i][0] = static_cast<int>(i);
    for (std::size_t j = 0; j <= b.size(); ++j) d[0][j] = static_cast<int>(j);
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = std::min({d[i - 1][j] + 1, d[i][j - 1] + 1,
                                d[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1)});
    return d[a.size()][b.size()];
}

double sbtde_oracle(const ScanpathString& a, const ScanpathString& b, int k) {
    const int n = static_cast<int>(a.size());
    double total = 0.0;
    for (int i = 0; i + k <= n; ++i) {
        int best = k;
        for (int j = 0; j + k <= n; ++j) {
            ScanpathString x(a.begin() + i, a.begin() + i + k);
            ScanpathString y(b.begin() + j, b.begin() + j + k);
            best = std::min(best, sed_oracle(x, y));
        }
        total += static_cast<double>(best) / k;
    }
    return total / (n - k + 1);
}

ScanpathString random_string(int n, int alphabet, Rng& rng) {
    ScanpathString s(n);
    for (int& v : s) v = static_cast<int>(rng.uniform_int(alphabet));
    return s;
}

Scanpath path_of(std::vector<Point> pts) {
    Scanpath p;
    p.stimulus_id = "s";
    p.fixations = std::move(pts);
    return p;
}

}  // namespace

TEST_CASE("quantize maps fixations to grid cells") {
    GridQuantizer q{2, 100, 100};
    CHECK(quantize(path_of({{10, 10}}), q) == ScanpathString{0});
    CHECK(quantize(path_of({{99.9, 99.9}}), q) == ScanpathString{3});
    CHECK(quantize(path_of({{60, 10}}), q) == ScanpathString{1});
    CHECK(quantize(path_of({{10, 60}}), q) == ScanpathString{2});
    CHECK_THROWS_AS(quantize(path_of({{150, 10}}), q), invalid_input);
}

TEST_CASE("quantization is invariant under joint scaling") {
    Rng rng(61);
    GridQuantizer q1{5, 200, 120};
    GridQuantizer q2{5, 600, 360};
    for (int trial = 0; trial < 50; ++trial) {
        Point p{rng.uniform() * 199, rng.uniform() * 119};
        auto a = quantize(path_of({p}), q1);
        auto b = quantize(path_of({{p.x * 3, p.y * 3}}), q2);
        CHECK(a == b);
    }
}

TEST_CASE("grid quantizer validation") {
    GridQuantizer q{1, 10, 10};
    CHECK_THROWS_AS(q.validate(), invalid_parameter);
    q = {27, 10, 10};  // 27^2 > 26^2
    CHECK_THROWS_AS(q.validate(), invalid_parameter);
}

TEST_CASE("sed basic cases") {
    CHECK(sed({1, 2, 3}, {1, 2, 3}) == 0);
    // "kitten" vs "sittin" as symbols: k->s substitution, e->i substitution
    ScanpathString kitten{10, 8, 19, 19, 4, 13};
    ScanpathString sittin{18, 8, 19, 19, 8, 13};
    CHECK(sed(kitten, sittin) == 2);
    CHECK(sed({1, 2, 3, 4}, {5, 6, 7, 8}) == 4);  // disjoint alphabets
    CHECK_THROWS_AS(sed({1, 2}, {1, 2, 3}), invalid_input);
}

TEST_CASE("sed matches the DP oracle and satisfies metric axioms") {
    Rng rng(62);
    for (int trial = 0; trial < 300; ++trial) {
        const int n = 1 + static_cast<int>(rng.uniform_int(12));
        const int alphabet = 2 + static_cast<int>(rng.uniform_int(24));
        auto a = random_string(n, alphabet, rng);
        auto b = random_string(n, alphabet, rng);
        auto c = random_string(n, alphabet, rng);
        const int dab = sed(a, b);
        CHECK(dab == sed_oracle(a, b));
        CHECK(dab == sed(b, a));                       // symmetry
        CHECK(dab >= 0);
        CHECK(dab <= n);
        CHECK((dab == 0) == (a == b));                 // identity of indiscernibles
        CHECK(sed(a, c) <= dab + sed(b, c));           // triangle inequality
    }
}

TEST_CASE("sbtde_k equals exhaustive window enumeration") {
    Rng rng(63);
    for (int trial = 0; trial < 20; ++trial) {
        auto a = random_string(10, 6, rng);
        auto b = random_string(10, 6, rng);
        for (int k = 1; k <= 10; ++k) {
            const double got = sbtde_k(a, b, k);
            CHECK(std::abs(got - sbtde_oracle(a, b, k)) < 1e-12);
            CHECK(got >= 0.0);
            CHECK(got <= 1.0);
        }
        for (int k = 1; k <= 10; ++k) CHECK(sbtde_k(a, a, k) == 0.0);
    }
}

TEST_CASE("sbtde k=1 equals fraction of symbols absent from the other string") {
    Rng rng(64);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_string(8, 5, rng);
        auto b = random_string(8, 5, rng);
        std::set<int> bset(b.begin(), b.end());
        int absent = 0;
        for (int v : a)
            if (!bset.count(v)) ++absent;
        CHECK(sbtde_k(a, b, 1) == doctest::Approx(absent / 8.0).epsilon(1e-12));
    }
}

TEST_CASE("sbtde asymmetry witness exists") {
    // a's windows all match inside b, but not conversely
    ScanpathString a{1, 1, 1, 2};
    ScanpathString b{1, 2, 3, 4};
    const double ab = sbtde_k(a, b, 2);
    const double ba = sbtde_k(b, a, 2);
    CHECK(ab != ba);
}

TEST_CASE("sbtde rejects bad k") {
    ScanpathString a{1, 2, 3};
    CHECK_THROWS_AS(sbtde_k(a, a, 0), invalid_input);
    CHECK_THROWS_AS(sbtde_k(a, a, 4), invalid_input);
    CHECK_THROWS_AS(sbtde_k(a, {1, 2}, 1), invalid_input);
}

TEST_CASE("aggregation") {
    CHECK(aggregate_mean({{5.0}}) == 5.0);
    CHECK(aggregate_spp({{5.0}}) == 5.0);
    CHECK(aggregate_mean({{2, 4}, {3, 5}}) == doctest::Approx(3.5));
    CHECK(aggregate_spp({{2, 4}, {3, 5}}) == doctest::Approx(2.5));
    CHECK_THROWS_AS(aggregate_mean({}), invalid_input);
    CHECK_THROWS_AS(aggregate_spp({{1.0}, {}}), invalid_input);

    // flat-loop oracle + SPP <= Mean on random tables
    Rng rng(65);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::vector<double>> table(1 + rng.uniform_int(5));
        double flat = 0.0;
        for (auto& row : table) {
            row.resize(1 + rng.uniform_int(6));
            double s = 0.0;
            for (double& v : row) {
                v = rng.uniform() * 10;
                s += v;
            }
            flat += s / row.size();
        }
        flat /= table.size();
        CHECK(aggregate_mean(table) == doctest::Approx(flat).epsilon(1e-12));
        CHECK(aggregate_spp(table) <= aggregate_mean(table) + 1e-15);
    }
}

TEST_CASE("human baseline leave-one-out") {
    auto sed_score = [](const ScanpathString& a, const ScanpathString& b) {
        return static_cast<double>(sed(a, b));
    };

    // two identical subjects -> 0
    std::vector<std::vector<ScanpathString>> same{{{1, 2, 3}, {1, 2, 3}}};
    auto r = human_baseline(same, sed_score);
    CHECK(r.mean == 0.0);
    CHECK(r.spp == 0.0);

    // two subjects on disjoint cells -> N
    std::vector<std::vector<ScanpathString>> disjoint{{{1, 1, 1}, {2, 2, 2}}};
    r = human_baseline(disjoint, sed_score);
    CHECK(r.mean == 3.0);
    CHECK(r.spp == 3.0);

    // 3-subject toy set vs hand enumeration:
    // d(A,B)=1, d(A,C)=2, d(B,C)=2
    // mean rows: A:(1+2)/2=1.5  B:(1+2)/2=1.5  C:(2+2)/2=2 -> mean 5/3
    // spp rows:  A:1  B:1  C:2 -> mean 4/3
    ScanpathString A{1, 2, 3}, B{1, 2, 4}, C{5, 2, 6};
    REQUIRE(sed(A, B) == 1);
    REQUIRE(sed(A, C) == 2);
    REQUIRE(sed(B, C) == 2);
    r = human_baseline({{A, B, C}}, sed_score);
    CHECK(r.mean == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
    CHECK(r.spp == doctest::Approx(4.0 / 3.0).epsilon(1e-12));

    // single-subject stimuli are skipped; all-skipped is an error
    std::vector<std::vector<ScanpathString>> skip{{{1, 2}}, {{1, 2}, {3, 4}}};
    CHECK_NOTHROW(human_baseline(skip, sed_score));
    CHECK_THROWS_AS(human_baseline({{{1, 2}}}, sed_score), invalid_input);
}

TEST_CASE("n_score anchors and Table-1 spot value") {
    CHECK(n_score(3.74, 3.74, 5.09).value() == 0.0);
    CHECK(n_score(5.09, 3.74, 5.09).value() == 1.0);
    CHECK(n_score(4.30, 3.74, 5.09).value() == doctest::Approx(0.4148).epsilon(1e-3));
    CHECK_FALSE(n_score(1.0, 2.0, 2.0).has_value());
}
