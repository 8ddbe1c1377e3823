#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "neva/generators.hpp"
#include "neva_o_check.hpp"
#include "test_utils.hpp"

using namespace neva;

namespace {

FoveationConfig fcfg(double gamma = 0.3) {
    FoveationConfig c;
    c.sigma_p = 4.0;
    c.sigma_xi = 6.0;
    c.gamma = gamma;
    return c;
}

// Two-class linear classifier on a 64x64 greyscale input: class 0 sums
// the left half, class 1 the right half.
TaskLossModel bright_left_classifier() {
    TaskLossModel m;
    m.kind = TaskKind::mlp_classifier;
    m.input_spec = {64, 64, 1};
    MlpLayer l;
    l.rows = 2;
    l.cols = 64 * 64;
    l.weights.assign(2 * 64 * 64, 0.0);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * 64 + x;
            l.weights[(x < 32 ? 0 : 1) * 64 * 64 + i] = 0.05;
        }
    l.bias = {0.0, 0.0};
    l.activation = Activation::softmax;
    m.mlp.layers = {l};
    m.mlp.loss_kind = LossKind::cross_entropy;
    m.mlp.target_index = 0;
    return m;
}

// Dark field with a cluster of sharp bright pixels in the left half.
Stimulus bright_left_stimulus() {
    Stimulus s = testutil::constant_stimulus(64, 64, 1, 0.1);
    s.id = "bright_left";
    for (int y = 24; y < 40; y += 2)
        for (int x = 8; x < 24; x += 2) s.at(x, y) = 1.0;
    return s;
}

// Constant image except for a checkerboard in the top-left quadrant.
Stimulus detail_quadrant_stimulus() {
    Stimulus s = testutil::constant_stimulus(64, 64, 1, 0.5);
    s.id = "detail_quadrant";
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) s.at(x, y) = (x + y) % 2 ? 1.0 : 0.0;
    return s;
}

bool same_path(const Scanpath& a, const Scanpath& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a.fixations[i].x != b.fixations[i].x || a.fixations[i].y != b.fixations[i].y)
            return false;
    return true;
}

}  // namespace

TEST_CASE("candidate grid is evenly spaced and in bounds") {
    auto grid = candidate_grid(64, 48, 4, 4);
    CHECK(grid.size() == 16);
    for (const auto& p : grid) {
        CHECK(p.x >= 0);
        CHECK(p.x <= 63);
        CHECK(p.y >= 0);
        CHECK(p.y <= 47);
    }
    CHECK(grid[0].x == doctest::Approx(7.5));
    CHECK(grid[0].y == doctest::Approx(5.5));
    CHECK(grid[5].x == doctest::Approx(23.5));  // row-major order
    CHECK(grid[5].y == doctest::Approx(17.5));
}

TEST_CASE("neva_o steers toward the bright-left target") {
    GeneratorConfig g;
    g.n_fixations = 3;
    auto path = neva_o(bright_left_stimulus(), bright_left_classifier(), fcfg(), g);
    REQUIRE(path.size() == 3);
    CHECK(path.fixations[0].x < 32.0);
    CHECK(testutil::neva_o_is_greedy_optimal(bright_left_stimulus(), bright_left_classifier(),
                                             fcfg(), g, path));
}

TEST_CASE("neva_o with the reconstruction proxy prefers the detailed quadrant") {
    GeneratorConfig g;
    g.n_fixations = 2;
    auto s = detail_quadrant_stimulus();
    auto path = neva_o(s, TaskLossModel::proxy(), fcfg(), g);
    CHECK(path.fixations[0].x < 32.0);
    CHECK(path.fixations[0].y < 32.0);
    CHECK(testutil::neva_o_is_greedy_optimal(s, TaskLossModel::proxy(), fcfg(), g, path));
}

TEST_CASE("neva_o propagates model failures as generation errors") {
    TaskLossModel broken;
    broken.kind = TaskKind::mlp_classifier;
    broken.input_spec = {4, 4, 1};
    // no layers -> invalid model at evaluation time
    GeneratorConfig g;
    g.n_fixations = 1;
    auto s = testutil::constant_stimulus(16, 16, 1, 0.5);
    CHECK_THROWS_AS(neva_o(s, broken, fcfg(), g), generation_error);
}

TEST_CASE("wta picks peaks and honors inhibition") {
    ViewingGeometry geom{1120, 840, 40, 30, 70};
    const double radius = degrees_to_pixels(1.0, geom);

    ScalarField f(64, 64, 0.0);
    f.at(10, 10) = 1.0;
    SaliencyMap map{f, SaliencySource::external};
    GeneratorConfig g;
    g.n_fixations = 3;
    auto path = wta(map, geom, g);
    CHECK(path.fixations[0].x == 10.0);
    CHECK(path.fixations[0].y == 10.0);

    // second equal peak outside the inhibition radius
    ScalarField f2(128, 64, 0.0);
    f2.at(10, 10) = 1.0;
    f2.at(100, 40) = 1.0;
    GeneratorConfig g2;
    g2.n_fixations = 2;
    auto p2 = wta({f2, SaliencySource::external}, geom, g2);
    CHECK(p2.fixations[0].x == 10.0);  // tie broken by lowest row-major index
    CHECK(p2.fixations[1].x == 100.0);
    CHECK(p2.fixations[1].y == 40.0);

    // random maps: no two fixations within the radius
    Rng rng(51);
    for (int trial = 0; trial < 20; ++trial) {
        ScalarField rf(96, 96);
        for (double& v : rf.values) v = rng.uniform();
        GeneratorConfig g3;
        g3.n_fixations = 8;
        g3.inhibition_radius_deg = 0.3;  // keeps 8 disks inside a 96x96 map
        auto p3 = wta({rf, SaliencySource::external}, geom, g3);
        const double radius3 = degrees_to_pixels(0.3, geom);
        for (std::size_t i = 0; i < p3.size(); ++i)
            for (std::size_t j = i + 1; j < p3.size(); ++j) {
                const double dx = p3.fixations[i].x - p3.fixations[j].x;
                const double dy = p3.fixations[i].y - p3.fixations[j].y;
                CHECK(std::sqrt(dx * dx + dy * dy) > radius3);
            }
    }

    SaliencyMap zero{ScalarField(8, 8, 0.0), SaliencySource::external};
    CHECK_THROWS_AS(wta(zero, geom, g), generation_error);
}

TEST_CASE("levy jump lengths follow the Pareto tail (KS test)") {
    const double alpha = 1.5;
    Rng rng(52);
    const int n = 10000;
    std::vector<double> samples(n);
    for (double& v : samples) v = levy_jump_length(alpha, rng);
    std::sort(samples.begin(), samples.end());
    // KS statistic against F(x) = 1 - x^-alpha, x >= 1
    double d = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = 1.0 - std::pow(samples[i], -alpha);
        d = std::max(d, std::abs(f - (i + 1.0) / n));
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
    }
    // asymptotic Kolmogorov p-value
    const double lambda = (std::sqrt(static_cast<double>(n)) + 0.12 + 0.11 / std::sqrt(static_cast<double>(n))) * d;
    double p = 0.0;
    for (int k = 1; k <= 100; ++k)
        p += 2.0 * (k % 2 ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
    CHECK(p > 0.01);
    for (double v : samples) CHECK(v >= 1.0);
}

TEST_CASE("cle on uniform saliency accepts every proposal") {
    SaliencyMap uniform{ScalarField(256, 256, 1.0), SaliencySource::external};
    GeneratorConfig g;
    g.n_fixations = 200;
    auto path = cle_levy(uniform, g, Rng(53));
    CHECK(path.size() == 200);
    // with full acceptance consecutive fixations differ unless clamped
    int moved = 0;
    for (std::size_t i = 1; i < path.size(); ++i)
        if (path.fixations[i].x != path.fixations[i - 1].x ||
            path.fixations[i].y != path.fixations[i - 1].y)
            ++moved;
    CHECK(moved == 199);
}

TEST_CASE("cle concentrates on a saliency peak") {
    // sharp peak at (16,16) with a rapidly vanishing tail
    ScalarField f(32, 32, 0.0);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
            const double d2 = (x - 16.0) * (x - 16.0) + (y - 16.0) * (y - 16.0);
            const double v = std::exp(-d2 / (2.0 * 2.0 * 2.0));
            f.at(x, y) = v < 1e-4 ? 0.0 : v;
        }
    GeneratorConfig g;
    g.n_fixations = 1000;
    auto path = cle_levy({f, SaliencySource::external}, g, Rng(54));
    int near = 0;
    for (const auto& p : path.fixations) {
        const double dx = p.x - 16.0, dy = p.y - 16.0;
        if (std::sqrt(dx * dx + dy * dy) <= 3.0) ++near;
    }
    CHECK(near >= 600);
}

TEST_CASE("cle is deterministic under a fixed seed") {
    Rng rng(55);
    ScalarField f(48, 48);
    for (double& v : f.values) v = rng.uniform();
    SaliencyMap map{f, SaliencySource::external};
    GeneratorConfig g;
    g.n_fixations = 10;
    CHECK(same_path(cle_levy(map, g, Rng(99)), cle_levy(map, g, Rng(99))));
    CHECK_FALSE(same_path(cle_levy(map, g, Rng(99)), cle_levy(map, g, Rng(100))));
}

TEST_CASE("random baseline statistics and determinism") {
    GeneratorConfig g;
    g.n_fixations = 10000;
    auto a = random_baseline(640, 480, g, Rng(56));
    auto b = random_baseline(640, 480, g, Rng(56));
    CHECK(same_path(a, b));

    double mean_x = 0.0;
    for (const auto& p : a.fixations) {
        CHECK(p.x >= 0);
        CHECK(p.x <= 639);
        CHECK(p.y >= 0);
        CHECK(p.y <= 479);
        mean_x += p.x;
    }
    mean_x /= a.size();
    CHECK(std::abs(mean_x - 320.0) < 0.02 * 640.0);
}

TEST_CASE("center baseline statistics") {
    GeneratorConfig g;
    g.n_fixations = 10000;
    g.center_sigma_frac = 0.1;  // small sigma: rejection is rare, stats are clean
    auto path = center_baseline(1000, 800, g, Rng(57));
    double mx = 0, my = 0;
    for (const auto& p : path.fixations) {
        CHECK(p.x >= 0);
        CHECK(p.x <= 999);
        mx += p.x;
        my += p.y;
    }
    mx /= path.size();
    my /= path.size();
    CHECK(std::abs(mx - 499.5) < 0.02 * 1000);
    CHECK(std::abs(my - 399.5) < 0.02 * 800);

    double var = 0;
    for (const auto& p : path.fixations) var += (p.x - mx) * (p.x - mx);
    const double sigma = std::sqrt(var / path.size());
    CHECK(std::abs(sigma - 80.0) < 0.05 * 80.0);  // 0.1 * min(1000,800)
}

TEST_CASE("every generator emits exactly n_fixations in bounds") {
    GeneratorConfig g;
    g.n_fixations = 7;
    ViewingGeometry geom{1120, 840, 40, 30, 70};
    Rng rng(58);
    ScalarField f(40, 30);
    for (double& v : f.values) v = rng.uniform();
    SaliencyMap map{f, SaliencySource::external};

    g.inhibition_radius_deg = 0.1;  // 1 degree disks would exhaust a 40x30 map
    std::vector<Scanpath> paths;
    paths.push_back(wta(map, geom, g));
    paths.push_back(cle_levy(map, g, Rng(1)));
    paths.push_back(random_baseline(40, 30, g, Rng(2)));
    paths.push_back(center_baseline(40, 30, g, Rng(3)));
    GeneratorConfig g4 = g;
    g4.grid_rows = g4.grid_cols = 4;
    paths.push_back(neva_o(testutil::random_stimulus(40, 30, 1, rng), TaskLossModel::proxy(),
                           fcfg(), g4));
    for (const auto& p : paths) {
        CHECK(p.size() == 7);
        for (const auto& fx : p.fixations) {
            CHECK(fx.x >= 0);
            CHECK(fx.x <= 39);
            CHECK(fx.y >= 0);
            CHECK(fx.y <= 29);
        }
    }
}

TEST_CASE("generator config validation") {
    GeneratorConfig g;
    g.n_fixations = 0;
    CHECK_THROWS_AS(g.validate(), invalid_parameter);
    g.n_fixations = 5;
    g.grid_rows = 1;
    CHECK_THROWS_AS(g.validate(), invalid_parameter);
}
