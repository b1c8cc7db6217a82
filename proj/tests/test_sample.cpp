#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "truncext/model.hpp"
#include "truncext/rng.hpp"
#include "truncext/sample.hpp"

using namespace truncext;

namespace {

TruncatedSample random_sample(std::size_t n, std::uint64_t seed) {
    const auto model = BurrTruncationModel::from_gammas(0.6, 1.4, 1.0);
    TruncatedSample s = sample_truncated_pairs(model, 4 * n, RngSeed{seed});
    REQUIRE(s.size() >= n);
    return s;
}

struct TempCsv {
    std::string path;
    explicit TempCsv(const std::string& content) {
        path = std::string(std::tmpnam(nullptr)) + ".csv";
        std::ofstream out(path);
        out << content;
    }
    ~TempCsv() { std::remove(path.c_str()); }
};

} // namespace

TEST_CASE("validation reports the offending index") {
    using pairs_t = std::vector<std::pair<double, double>>;
    CHECK_THROWS_WITH_AS(TruncatedSample::from_pairs(pairs_t{}),
                         "TruncatedSample: empty pair list", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        TruncatedSample::from_pairs(pairs_t{{1.0, 2.0}, {3.0, 2.0}}),
        "TruncatedSample: x > y at index 1", std::invalid_argument);
    CHECK_THROWS_WITH_AS(
        TruncatedSample::from_pairs(pairs_t{{-1.0, 2.0}}),
        "TruncatedSample: non-positive entry at index 0", std::invalid_argument);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_WITH_AS(
        TruncatedSample::from_pairs(pairs_t{{1.0, 2.0}, {1.0, inf}}),
        "TruncatedSample: non-finite entry at index 1", std::invalid_argument);
}

TEST_CASE("order statistics are one-based and sorted") {
    const auto s = TruncatedSample::from_pairs({{3.0, 5.0}, {1.0, 9.0}, {2.0, 2.0}});
    CHECK(s.order_stat(Margin::X, 1) == 1.0);
    CHECK(s.order_stat(Margin::X, 3) == 3.0);
    CHECK(s.order_stat(Margin::Y, 1) == 2.0);
    CHECK(s.order_stat(Margin::Y, 3) == 9.0);
    CHECK_THROWS_AS(s.order_stat(Margin::X, 0), std::out_of_range);
    CHECK_THROWS_AS(s.order_stat(Margin::X, 4), std::out_of_range);
}

TEST_CASE("c_n matches a brute-force count") {
    const auto s = random_sample(200, 11);
    const double n = static_cast<double>(s.size());
    for (double x : {0.1, 0.5, 1.0, 2.0, 5.0, 50.0}) {
        std::size_t count = 0;
        for (const auto& [xi, yi] : s.pairs()) {
            if (xi <= x && x <= yi) {
                ++count;
            }
        }
        CHECK(s.c_n(x) == static_cast<double>(count) / n);
    }
    // Closed indicator: evaluate exactly at observed points.
    for (std::size_t i = 0; i < 20; ++i) {
        const double x = s.pairs()[i].first;
        std::size_t count = 0;
        for (const auto& [xi, yi] : s.pairs()) {
            if (xi <= x && x <= yi) {
                ++count;
            }
        }
        CHECK(s.c_n(x) == static_cast<double>(count) / n);
    }
}

TEST_CASE("empirical tails match brute-force counts") {
    const auto s = random_sample(150, 12);
    const double n = static_cast<double>(s.size());
    for (double x : {0.2, 1.0, 3.0, s.pairs()[0].first, s.pairs()[5].second}) {
        std::size_t above_x = 0;
        std::size_t above_y = 0;
        for (const auto& [xi, yi] : s.pairs()) {
            above_x += xi > x ? 1 : 0;
            above_y += yi > x ? 1 : 0;
        }
        CHECK(s.empirical_tail(Margin::X, x) == static_cast<double>(above_x) / n);
        CHECK(s.empirical_tail(Margin::Y, x) == static_cast<double>(above_y) / n);
    }
}

TEST_CASE("csv round trip") {
    TempCsv csv("x,y\n1.5,2.25\n0.5,0.75\n3,3\n");
    const auto pairs = read_pairs_csv(csv.path);
    REQUIRE(pairs.size() == 3);
    CHECK(pairs[0] == std::pair{1.5, 2.25});
    CHECK(pairs[1] == std::pair{0.5, 0.75});
    CHECK(pairs[2] == std::pair{3.0, 3.0});
}

TEST_CASE("csv tolerates BOM and CRLF") {
    TempCsv csv("\xEF\xBB\xBFx,y\r\n1,2\r\n\r\n2,4\r\n");
    const auto pairs = read_pairs_csv(csv.path);
    REQUIRE(pairs.size() == 2);
    CHECK(pairs[1] == std::pair{2.0, 4.0});
}

TEST_CASE("csv errors carry line numbers") {
    TempCsv bad_header("a,b\n1,2\n");
    CHECK_THROWS_WITH_AS(read_pairs_csv(bad_header.path),
                         doctest::Contains(":1: expected header"),
                         std::runtime_error);
    TempCsv bad_row("x,y\n1,2\n1,zzz\n");
    CHECK_THROWS_WITH_AS(read_pairs_csv(bad_row.path),
                         doctest::Contains(":3: malformed row"), std::runtime_error);
    TempCsv no_comma("x,y\n12\n");
    CHECK_THROWS_WITH_AS(read_pairs_csv(no_comma.path),
                         doctest::Contains(":2: missing comma"), std::runtime_error);
    TempCsv empty("");
    CHECK_THROWS_WITH_AS(read_pairs_csv(empty.path), doctest::Contains("empty file"),
                         std::runtime_error);
    TempCsv header_only("x,y\n");
    CHECK_THROWS_WITH_AS(read_pairs_csv(header_only.path),
                         doctest::Contains("no data rows"), std::runtime_error);
    CHECK_THROWS_AS(read_pairs_csv("/nonexistent/file.csv"), std::runtime_error);
}
