#include <doctest.h>

#include <sstream>

#include "wfa/io.hpp"

using namespace wfa;

TEST_CASE("number formatting") {
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(fmt17(2) == "2");
    CHECK(fmt17(1e-300) == "1e-300");
    CHECK(fmt17(1.0 / 3) == "0.33333333333333331");
    CHECK(fmt17(std::nan("")) == "null");
}

TEST_CASE("json is deterministic and sorted") {
    Json a;
    a["zeta"] = 1.5;
    a["alpha"] = {{"b", 2}, {"a", true}};
    a["mid"] = Json::array({0.1, nullptr});
    Json b;
    b["mid"] = Json::array({0.1, nullptr});
    b["alpha"] = {{"a", true}, {"b", 2}};
    b["zeta"] = 1.5;
    CHECK(dump_json(a) == dump_json(b));
    CHECK(dump_json(a, false) == R"({"alpha":{"a":true,"b":2},"mid":[0.10000000000000001,null],"zeta":1.5})");
    CHECK(dump_json(Json(INFINITY)) == "null");
    CHECK(dump_json(Json::parse(dump_json(a))) == dump_json(a));
}

TEST_CASE("infinite speeds") {
    CHECK(dump_json(speed_json(Speed::inf()), false) == R"({"inf":true})");
    CHECK(dump_json(speed_json(Speed::of(2)), false) == "2");
    CHECK(csv_cell(Speed::inf()).empty());
    CHECK(csv_cell(Speed::of(0.5)) == "0.5");
}

TEST_CASE("csv writer") {
    std::ostringstream os;
    CsvWriter w(os, {"h", "c"}, "cfg");
    w.row({"1", csv_cell(Speed::inf())});
    CHECK(os.str() == "# cfg\nh,c\n1,\n");
    CHECK_THROWS_AS(w.row({"1"}), std::logic_error);
}
