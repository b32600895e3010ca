#include "doctest_main.hpp"

#include "zlab/report_io.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <locale>
#include <stdexcept>

using namespace zlab;
using io::format_number;

TEST_CASE("number formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(-0.0) == "0");
  CHECK(format_number(-2.5) == "-2.5");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(format_number(std::nan("")) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_number(Real(0.5)) == "0.5");
  for (double x : {0.1, 1.0 / 3, 6.02214076e23, -1.4603545088095868, 5e-324}) {
    CHECK(std::strtod(format_number(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("number formatting ignores the global locale") {
  std::locale previous;
  try {
    std::locale::global(std::locale("de_DE.UTF-8"));
  } catch (const std::runtime_error&) {
    // locale not installed; the check below still runs under the default
  }
  CHECK(format_number(1234.5) == "1234.5");
  std::locale::global(previous);
}

TEST_CASE("json quoting") {
  CHECK(io::json_quote("plain") == "\"plain\"");
  CHECK(io::json_quote("a\"b\\c\n") == "\"a\\\"b\\\\c\\n\"");
  CHECK(io::json_quote(std::string(1, '\x01')) == "\"\\u0001\"");
}

TEST_CASE("header and table rendering") {
  io::Header h;
  h.add("command", "zeros");
  h.add("t_max", "30");
  CHECK(h.render() == "# command: zeros\n# t_max: 30\n");

  io::CsvTable t;
  t.columns = {"a", "b"};
  t.rows = {{"1", "2"}, {"3", ""}};
  CHECK(t.render() == "a,b\n1,2\n3,\n");
}

TEST_CASE("parallel map keeps order") {
  std::vector<int> items(101);
  for (int i = 0; i < 101; ++i) items[i] = i;
  for (int jobs : {1, 2, 3, 8, 500}) {
    auto out = io::parallel_map(items, jobs, [](int x) { return x * x; });
    REQUIRE(out.size() == items.size());
    for (int i = 0; i < 101; ++i) CHECK(out[i] == i * i);
  }
  std::vector<int> none;
  CHECK(io::parallel_map(none, 4, [](int x) { return x; }).empty());
}

TEST_CASE("parallel map rethrows the lowest failing index") {
  std::vector<int> items(40);
  for (int i = 0; i < 40; ++i) items[i] = i;
  for (int jobs : {1, 4}) {
    try {
      io::parallel_map(items, jobs, [](int x) {
        if (x == 7 || x == 30) throw std::runtime_error("item " + std::to_string(x));
        return x;
      });
      FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()) == "item 7");
    }
  }
}

TEST_CASE("file writing") {
  CHECK_THROWS_AS(io::write_file("/nonexistent-dir/out.csv", "x"), std::runtime_error);
  CHECK(io::default_jobs() >= 1);
}
