#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <set>

#include "divekit/base_graph.hpp"

using namespace divekit;

namespace {

const std::string kDataDir = DIVEKIT_DATA_DIR;

BaseGraph toy_graph() {
    // 2x4, info cols {0,1}, both rows touch both info cols
    std::map<std::pair<int, int>, EdgeSpec> e;
    e[{0, 0}] = {1, {0}};
    e[{0, 1}] = {1, {0}};
    e[{0, 2}] = {1, {0}};
    e[{1, 0}] = {1, {0}};
    e[{1, 1}] = {1, {0}};
    e[{1, 3}] = {1, {0}};
    return BaseGraph(2, 4, 2, 1, {}, std::move(e));
}

std::string write_temp(const std::string& text) {
    static int counter = 0;
    std::string path = "tp_graph_" + std::to_string(counter++) + ".bg";
    std::ofstream out(path);
    out << text;
    return path;
}

}  // namespace

TEST_CASE("5G base graphs load with the standardized shapes") {
    const auto bg1 = BaseGraph::load(kDataDir + "/nr_bg1_z240.bg", 240);
    CHECK(bg1.rows() == 46);
    CHECK(bg1.cols() == 68);
    CHECK(bg1.info_cols() == 22);
    CHECK(bg1.punctured_cols() == std::vector<int>{0, 1});
    CHECK(bg1.entries().size() == 316);

    const auto bg2 = BaseGraph::load(kDataDir + "/nr_bg2_z20.bg", 20);
    CHECK(bg2.rows() == 42);
    CHECK(bg2.cols() == 52);
    CHECK(bg2.info_cols() == 10);
    CHECK(bg2.punctured_cols() == std::vector<int>{0, 1});
    CHECK(bg2.entries().size() == 197);
}

TEST_CASE("round-trip serialization is field-identical") {
    const auto bg2 = BaseGraph::load(kDataDir + "/nr_bg2_z20.bg", 20);
    const std::string tmp = "tp_roundtrip.bg";
    bg2.save(tmp);
    const auto again = BaseGraph::load(tmp, 20);
    CHECK(bg2 == again);
    std::remove(tmp.c_str());
}

TEST_CASE("zero column is rejected as a disconnected VN") {
    const auto path = write_temp("bg 2 4 2 -\n0 0 0\n0 1 0\n1 0 0\n1 3 0\n");
    CHECK_THROWS_WITH_AS(BaseGraph::load(path, 1), doctest::Contains("disconnected VN"),
                         ValidationError);
    std::remove(path.c_str());
}

TEST_CASE("parse errors carry line numbers") {
    const auto path = write_temp("bg 2 4 2 -\n0 0 0\nbogus line here\n");
    CHECK_THROWS_WITH_AS(BaseGraph::load(path, 1), doctest::Contains("line 3"), ParseError);
    std::remove(path.c_str());
}

TEST_CASE("checksum mismatch is detected") {
    const auto path = write_temp(
        "# checksum fnv1a64 0123456789abcdef\nbg 2 4 2 -\n0 0 0\n0 1 0\n0 2 0\n1 0 0\n1 1 0\n1 3 "
        "0\n");
    CHECK_THROWS_WITH_AS(BaseGraph::load(path, 1), doctest::Contains("checksum"), ValidationError);
    std::remove(path.c_str());
}

TEST_CASE("shift out of range rejected") {
    const auto path = write_temp("bg 2 4 2 -\n0 0 5\n0 1 0\n0 2 0\n1 0 0\n1 1 0\n1 3 0\n");
    CHECK_THROWS_AS(BaseGraph::load(path, 4), ValidationError);
    std::remove(path.c_str());
}

TEST_CASE("rate selection arithmetic") {
    const auto bg1 = BaseGraph::load(kDataDir + "/nr_bg1_z240.bg", 240);
    const auto sel1 = select_rate(bg1, 26);
    CHECK(sel1.active_cols == 48);
    CHECK(sel1.active_rows == 26);
    CHECK(sel1.rate == Rational(22, 46));
    CHECK(transmitted_cols(bg1, sel1) == 46);

    const auto bg2 = BaseGraph::load(kDataDir + "/nr_bg2_z20.bg", 20);
    const auto sel2 = select_rate(bg2, 16);
    CHECK(sel2.active_cols == 26);
    CHECK(sel2.rate == Rational(10, 24));

    CHECK_NOTHROW(select_rate(bg2, 42));
    CHECK_THROWS_AS(select_rate(bg2, 43), ValidationError);

    for (int p = 1; p <= bg2.rows(); ++p) {
        const auto sel = select_rate(bg2, p);
        CHECK(sel.active_cols - sel.active_rows == bg2.info_cols());
    }
}

TEST_CASE("parity cols resolved from a requested rate") {
    const auto bg2 = BaseGraph::load(kDataDir + "/nr_bg2_z20.bg", 20);
    CHECK(parity_cols_for_rate(bg2, Rational(1, 2)) == 12);    // 10/20
    CHECK(parity_cols_for_rate(bg2, Rational(10, 24)) == 16);
}

TEST_CASE("identical neighborhood pairs: toy graphs") {
    const auto bg = toy_graph();
    const auto sel = select_rate(bg, 1);  // only row 0 active, cols 0..2
    const auto pairs = identical_neighborhood_pairs(bg, sel);
    // all three active columns see exactly {row 0}
    CHECK(pairs == std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}});

    const auto sel2 = select_rate(bg, 2);
    const auto pairs2 = identical_neighborhood_pairs(bg, sel2);
    CHECK(pairs2 == std::vector<std::pair<int, int>>{{0, 1}});  // cols 2,3 differ now
}

TEST_CASE("identical neighborhood pairs agree with a brute-force set oracle") {
    const auto bg2 = BaseGraph::load(kDataDir + "/nr_bg2_z20.bg", 20);
    const auto sel = select_rate(bg2, 16);
    const auto pairs = identical_neighborhood_pairs(bg2, sel);

    std::set<std::pair<int, int>> oracle;
    for (int a = 0; a < sel.active_cols; ++a)
        for (int b = a + 1; b < sel.active_cols; ++b) {
            std::set<int> na, nb;
            for (const int j : bg2.col_rows(a))
                if (j < sel.active_rows) na.insert(j);
            for (const int j : bg2.col_rows(b))
                if (j < sel.active_rows) nb.insert(j);
            if (!na.empty() && na == nb) oracle.insert({a, b});
        }
    CHECK(std::set<std::pair<int, int>>(pairs.begin(), pairs.end()) == oracle);
}

TEST_CASE("singleton bound") {
    CHECK(singleton_bound(2, Rational(1, 2)) == 2);
    CHECK(singleton_bound(2, Rational(22, 46)) == 2);  // 1 + floor(2*24/46)
    CHECK(singleton_bound(2, Rational(10, 24)) == 2);
    CHECK(singleton_bound(4, Rational(1, 1)) == 1);
    CHECK(singleton_bound(2, Rational(23, 46)) == 2);      // exactly 1/2
    CHECK(singleton_bound(2, Rational(24, 46)) == 1);      // just above 1/2
    CHECK(singleton_bound(7, Rational(3, 7)) == 5);

    // monotone nonincreasing in rate for fixed M
    for (int m = 1; m <= 6; ++m) {
        int prev = m + 1;
        for (int p = 1; p <= 40; ++p) {
            const int b = singleton_bound(m, Rational(p, 40));
            CHECK(b <= prev);
            prev = b;
        }
    }
}
