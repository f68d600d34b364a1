#include <doctest.h>

#include <initializer_list>
#include <stdexcept>

#include <cmath>

#include "reorg/sweep.hpp"

using namespace reorg;

namespace {
SweepGrid small_grid() {
    SweepGrid g;
    g.ei = {20, 28, 4};
    g.de = {8, 8, 1};
    g.dp = {40, 40, 1};
    g.alpha = 0.45;
    g.n1 = 4;
    g.n2 = 3;
    g.samples_per_cell = 20000;
    g.seed = 42;
    return g;
}
}  // namespace

TEST_CASE("grid range parsing") {
    const GridRange r = parse_grid_range("0:32:4");
    CHECK(r.count() == 9);
    CHECK(r.value(0) == 0);
    CHECK(r.value(8) == 32);
    CHECK_THROWS_AS(parse_grid_range("5:1:2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_grid_range("1:5"), std::invalid_argument);
}

TEST_CASE("objective weight collapses at beta 0 and 1") {
    SweepGrid g = small_grid();
    g.beta = 0.0;
    auto cells = run_sweep(g);
    for (const auto& c : cells) CHECK(c.objective == doctest::Approx(c.o1.p_hat));
    g.beta = 1.0;
    cells = run_sweep(g);
    for (const auto& c : cells) CHECK(c.objective == doctest::Approx(c.o2.p_hat));
}

TEST_CASE("cell values are reproducible from the master seed alone") {
    const SweepGrid g = small_grid();
    const auto cells = run_sweep(g);
    // the same tuple evaluated via a different sub-grid gives identical numbers
    const SweepCell solo = run_cell(g, 24, 8, 40);
    bool found = false;
    for (const auto& c : cells)
        if (c.params.initial_endorsers == 24 && c.params.delay_endorse == 8 &&
            c.params.delay_priority == 40) {
            found = true;
            CHECK(c.o1.p_hat == solo.o1.p_hat);
            CHECK(c.o2.p_hat == solo.o2.p_hat);
        }
    CHECK(found);
}

TEST_CASE("sweep output is independent of the thread count") {
    SweepGrid g = small_grid();
    g.threads = 1;
    const auto a = run_sweep(g);
    g.threads = 5;
    const auto b = run_sweep(g);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].o1.p_hat == b[i].o1.p_hat);
        CHECK(a[i].o2.p_hat == b[i].o2.p_hat);
    }
}

TEST_CASE("compare ratios") {
    std::vector<CompareCell> cells = {
        {{24, 8, 40}, 0.06, 0.0024},
        {{15, 5, 8}, 0.01, 0.001},
        {{0, 4, 0}, 0.20, 0.30},
    };
    const auto rows = compare_designs(cells, {{{15, 5, 8}}}, {0.5});
    REQUIRE(rows.size() == 1);
    // minimum objective belongs to (15,5,8) itself here
    CHECK(rows[0].ratio == doctest::Approx(1.0));

    const auto rows2 = compare_designs(cells, {{{24, 8, 40}}}, {0.0});
    CHECK(rows2[0].ratio == doctest::Approx(0.01 / 0.06));

    CHECK_THROWS_AS(compare_designs(cells, {{{1, 2, 3}}}, {0.5}), std::invalid_argument);
}

TEST_CASE("smoothing: identity at sigma 0, constant grids unchanged, kernel normalized") {
    std::vector<double> flat(3 * 4 * 5, 2.5);
    CHECK(smooth_grid(flat, 3, 4, 5, 0.0) == flat);
    const auto smoothed = smooth_grid(flat, 3, 4, 5, 1.0);
    for (double v : smoothed) CHECK(v == doctest::Approx(2.5).epsilon(1e-9));

    // impulse: total mass is preserved by the normalized separable kernel
    std::vector<double> impulse(7 * 7 * 7, 0.0);
    impulse[(3 * 7 + 3) * 7 + 3] = 1.0;
    const auto out = smooth_grid(impulse, 7, 7, 7, 1.0);
    double total = 0.0;
    for (double v : out) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));

    CHECK_THROWS_AS(smooth_grid(flat, 2, 2, 2, 1.0), std::invalid_argument);
}

TEST_CASE("argmin is invariant to scaling the objective") {
    std::vector<CompareCell> cells = {
        {{24, 8, 40}, 0.06, 0.0024}, {{15, 5, 8}, 0.01, 0.001}, {{0, 4, 0}, 0.20, 0.30}};
    for (double beta : {0.1, 0.5, 0.9}) {
        std::size_t arg1 = 0, arg2 = 0;
        double best1 = 1e300, best2 = 1e300;
        for (std::size_t i = 0; i < cells.size(); ++i) {
            const double o = (1 - beta) * cells[i].o1 + beta * cells[i].o2;
            if (o < best1) { best1 = o; arg1 = i; }
            if (7.0 * o < best2) { best2 = 7.0 * o; arg2 = i; }
        }
        CHECK(arg1 == arg2);
    }
}
