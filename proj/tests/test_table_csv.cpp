#include "doctest.h"

#include <cmath>

#include "json.hpp"

#include "ddcor/csv.hpp"
#include "ddcor/errors.hpp"
#include "ddcor/table.hpp"

using namespace ddcor;

TEST_CASE("csv emission round-trips values exactly") {
    Table t;
    t.columns = {"name", "value", "count"};
    t.set_meta("seed", "42");
    t.set_meta("note", "alpha=0.05");
    t.add_row({std::string("plain"), 1.0 / 3.0, std::int64_t{7}});
    t.add_row({std::string("quote\"and,comma"), -1.2345678901234567e-11, std::int64_t{-3}});
    t.add_row({std::string("line\nbreak"), 0.1 + 0.2, std::int64_t{0}});

    const std::string text = to_csv(t);
    const Table back = table_from_csv(text);
    REQUIRE(back.columns == t.columns);
    REQUIRE(back.rows.size() == t.rows.size());
    CHECK(back.metadata == t.metadata);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        CHECK(std::get<std::string>(back.rows[r][0]) == std::get<std::string>(t.rows[r][0]));
        CHECK(std::get<double>(back.rows[r][1]) == std::get<double>(t.rows[r][1]));
        CHECK(std::get<std::int64_t>(back.rows[r][2]) == std::get<std::int64_t>(t.rows[r][2]));
    }
}

TEST_CASE("json emission carries metadata, columns and typed rows") {
    Table t;
    t.columns = {"method", "value"};
    t.set_meta("seed", "1");
    t.add_row({std::string("ddc"), 0.5});
    const auto j = nlohmann::json::parse(to_json(t));
    CHECK(j["metadata"]["seed"] == "1");
    CHECK(j["columns"][0] == "method");
    CHECK(j["rows"][0]["method"] == "ddc");
    CHECK(j["rows"][0]["value"] == 0.5);
}

TEST_CASE("pivot_wide spreads a long table") {
    Table t;
    t.columns = {"model", "method", "lambda", "power"};
    t.add_row({std::string("linear"), std::string("ddc"), 0.1, 0.9});
    t.add_row({std::string("linear"), std::string("ddc"), 0.5, 0.4});
    t.add_row({std::string("linear"), std::string("dc"), 0.1, 0.95});
    t.add_row({std::string("linear"), std::string("dc"), 0.5, 0.6});
    const Table wide = pivot_wide(t, {"model", "method"}, "lambda", "power");
    REQUIRE(wide.rows.size() == 2);
    REQUIRE(wide.columns.size() == 4); // model, method, 0.1, 0.5
    CHECK(std::get<double>(wide.rows[0][2]) == 0.9);
    CHECK(std::get<double>(wide.rows[1][3]) == 0.6);
}

TEST_CASE("format_double survives strtod round-trips") {
    for (const double v : {1.0 / 3.0, 1e-300, -2.2250738585072014e-308, 12345.6789,
                           9.865876450377018e-10}) {
        CHECK(std::strtod(format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("delimited parsing handles quoting and headers") {
    const std::string text = "a,b,c\n1,\"two, three\",3\n4,\"say \"\"hi\"\"\",6\n";
    const Dataset ds = parse_delimited(text);
    REQUIRE(ds.columns == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(ds.n() == 2);
    CHECK(ds.cells[0][1] == "two, three");
    CHECK(ds.cells[1][1] == "say \"hi\"");

    const Dataset no_header = parse_delimited("1,2\n3,4\n", ',', false);
    CHECK(no_header.columns == std::vector<std::string>{"1", "2"});
    CHECK(no_header.n() == 2);
}

TEST_CASE("delimited parsing reports structural problems") {
    CHECK_THROWS_AS(parse_delimited("a,b\n1\n"), parse_error);
    CHECK_THROWS_AS(parse_delimited("a,b\n\"unterminated\n"), parse_error);
    CHECK_THROWS_AS(parse_delimited(""), parse_error);
    CHECK_THROWS_AS(read_delimited("/nonexistent/file.csv"), parse_error);
}

TEST_CASE("numeric columns validate values") {
    const Dataset ds = parse_delimited("x,y,id\n1.5,2,g1\n-0.25,4,g2\n");
    CHECK(ds.numeric_column("x") == std::vector<double>{1.5, -0.25});
    CHECK_THROWS_AS(ds.numeric_column("id"), parse_error);
    CHECK_THROWS_AS(ds.numeric_column("missing"), config_error);

    const Dataset bad = parse_delimited("x\ninf\n");
    CHECK_THROWS_AS(bad.numeric_column("x"), parse_error);
    const Dataset nan_ds = parse_delimited("x\nnan\n");
    CHECK_THROWS_AS(nan_ds.numeric_column("x"), parse_error);
}

TEST_CASE("comment lines before the header are skipped") {
    const Dataset ds = parse_delimited("# produced by a tool\n# seed=1\nx,y\n1,2\n");
    CHECK(ds.columns == std::vector<std::string>{"x", "y"});
    CHECK(ds.n() == 1);
}

TEST_CASE("standardize centers and scales") {
    std::vector<double> v = {1, 2, 3, 4, 5};
    standardize(v);
    double mean = 0, ss = 0;
    for (double x : v) mean += x;
    mean /= 5.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    CHECK(std::fabs(mean) < 1e-14);
    CHECK(std::fabs(ss / 4.0 - 1.0) < 1e-12);

    std::vector<double> constant = {3, 3, 3};
    standardize(constant);
    CHECK(constant == std::vector<double>{0, 0, 0});
}
