#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dsf/csv.hpp"
#include "dsf/errors.hpp"

using namespace dsf;

TEST_CASE("numbers use 17 significant digits in scientific form") {
    CHECK(format_number(1.0) == "1.0000000000000000e+00");
    CHECK(format_number(-0.1411) == "-1.4110000000000000e-01");
    CHECK(format_number(-0.0) == "0.0000000000000000e+00");
    CHECK(format_number(NAN) == "nan");
    CHECK(format_number(-INFINITY) == "-inf");
}

TEST_CASE("tables are comma separated with LF endings") {
    CsvTable t;
    t.header = {"t", "P1"};
    t.add_row({0.0, 0.5});
    std::ostringstream os;
    write_csv(os, t);
    CHECK(os.str() == "t,P1\n0.0000000000000000e+00,5.0000000000000000e-01\n");
    CHECK_THROWS_AS(t.add_row({1.0}), ValidationError);
}

TEST_CASE("files round-trip bit for bit") {
    CsvTable t;
    t.header = {"a", "b", "c"};
    t.add_row({0.1, -2.5e-300, 1.0 / 3.0});
    t.add_row({NAN, 7.0, 1e17});
    const std::string path = "dsf_test_roundtrip.csv";
    write_csv(path, t);
    const CsvTable back = read_csv(path);
    CHECK(back.header == t.header);
    REQUIRE(back.rows.size() == 2);
    CHECK(back.rows[0][2] == t.rows[0][2]);
    CHECK(back.rows[0][1] == t.rows[0][1]);
    CHECK(std::isnan(back.rows[1][0]));
    std::remove(path.c_str());
    CHECK_THROWS_AS(read_csv("/nonexistent/x.csv"), ValidationError);
}
