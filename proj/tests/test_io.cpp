#include <catch_amalgamated.hpp>

#include <sstream>
#include <string>

#include "normtest/io.hpp"

using namespace normtest;

namespace {

DataMatrix parse(const std::string& text, const CsvOptions& opt = {}) {
    std::istringstream in(text);
    return parse_csv(in, opt);
}

}  // namespace

TEST_CASE("numeric CSV with and without header", "[io]") {
    const DataMatrix plain = parse("1,2\n3,4\n5,6\n");
    CHECK(plain.rows() == 3);
    CHECK(plain.values()(2, 1) == 6.0);

    const DataMatrix auto_header = parse("x,y\n1,2\n3,4\n");
    CHECK(auto_header.rows() == 2);

    CsvOptions forced;
    forced.header = true;
    CHECK(parse("1,2\n3,4\n", forced).rows() == 1);

    CsvOptions none;
    none.header = false;
    CHECK_THROWS_AS(parse("x,y\n1,2\n", none), ParseError);
}

TEST_CASE("quoting, delimiters and line endings", "[io]") {
    const DataMatrix q = parse("\"a,b\",\"c\"\"d\"\r\n\"1.5\",-2e3\r\n\r\n+3,4\n");
    CHECK(q.rows() == 2);
    CHECK(q.values()(0, 0) == 1.5);
    CHECK(q.values()(0, 1) == -2000.0);
    CHECK(q.values()(1, 0) == 3.0);

    CsvOptions semi;
    semi.delimiter = ';';
    CHECK(parse("1;2;3\n4;5;6\n", semi).cols() == 3);
}

TEST_CASE("malformed input names the offending position", "[io]") {
    try {
        (void)parse("1,2\n3,x\n");
        FAIL("no exception");
    } catch (const ParseError& e) {
        CHECK_THAT(e.what(), Catch::Matchers::ContainsSubstring("line 2, column 2"));
    }
    CHECK_THROWS_WITH(parse("1,2\n3\n"), Catch::Matchers::ContainsSubstring("line 2"));
    CHECK_THROWS_AS(parse("\"1,2\n"), ParseError);
    CHECK_THROWS_AS(parse(""), ParseError);
    CHECK_THROWS_AS(parse("a,b\n"), ParseError);
    CHECK_THROWS_AS(read_csv("/nonexistent/file.csv"), ParseError);
}

TEST_CASE("bundled Iris fixtures load", "[io]") {
    const DataMatrix setosa = read_csv(std::string(NORMTEST_DATA_DIR) + "/iris_setosa.csv");
    CHECK(setosa.rows() == 50);
    CHECK(setosa.cols() == 4);
    CHECK(read_csv(std::string(NORMTEST_DATA_DIR) + "/iris_all.csv").rows() == 150);
}

TEST_CASE("shortest round-trip formatting", "[io]") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    for (double v : {1.0 / 3.0, 1e-300, 123456.789, -0.04362}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

TEST_CASE("critical-value tables serialise to CSV and JSON", "[io]") {
    CriticalValueTable t;
    t.entries.push_back({1, 20, 0.25, 0.05, 2.73, 100000, 1});
    t.entries.push_back({2, std::nullopt, 3.0, 0.05, 0.598, 100000, 7});

    std::ostringstream csv;
    write_csv(csv, t);
    CHECK(csv.str() == "d,n,a,alpha,quantile,replications,seed\n1,20,0.25,0.05,2.73,100000,1\n"
                       "2,inf,3,0.05,0.598,100000,7\n");

    const auto j = to_json(t);
    CHECK(j[1]["n"] == "inf");
    const CriticalValueTable back = table_from_json(nlohmann::ordered_json::parse(j.dump()));
    REQUIRE(back.entries.size() == 2);
    CHECK_FALSE(back.entries[1].n.has_value());
    CHECK(back.entries[0].quantile == 2.73);
    CHECK(to_json(back).dump() == j.dump());

    CHECK_THROWS_AS(table_from_json(nlohmann::ordered_json::object()), ParseError);
    CHECK_THROWS_AS(table_from_json(nlohmann::ordered_json::parse(R"([{"d":1}])")), ParseError);
    CHECK_THROWS_AS(table_from_json(nlohmann::ordered_json::parse(
                        R"([{"d":1,"n":"many","a":1,"alpha":0.05,"quantile":1,"replications":1,"seed":1}])")),
                    ParseError);
}
