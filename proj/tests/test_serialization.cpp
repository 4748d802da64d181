#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <sstream>
#include <string>

#include "kreinosc/operators.hpp"
#include "kreinosc/serialization.hpp"

using namespace kreinosc;

TEST_CASE("full-precision formatting round trips through text", "[serialization]") {
  for (double v : {0.1, 1.0 / 3.0, -6.209061594846465, 1e-301, 4.0, 0.0}) {
    CHECK(std::stod(format_full(v)) == v);
  }
}

TEST_CASE("state files round trip a coherent state exactly", "[serialization]") {
  const auto basis = make_basis(6);
  const FourVector p{0.1, -0.2, 0.3, 0.0}, x{0.05, 0.4, 0.0, -0.3};
  const KreinVector v = coherent_state(basis, p, x);

  const ojson j = krein_vector_to_json(v);
  CHECK(j.at("schema") == kStateSchema);
  CHECK(j.at("n_max") == 6);

  // Through text, as a file would go.
  const ojson parsed = ojson::parse(j.dump(2));
  const KreinVector back = krein_vector_from_json(parsed);
  REQUIRE(back.basis()->size() == v.basis()->size());
  for (std::int64_t i = 0; i < v.basis()->size(); ++i)
    CHECK(back.coeffs()(i) == v.coeffs()(i));  // bitwise: dump is shortest round trip
}

TEST_CASE("state reader rejects malformed documents", "[serialization]") {
  CHECK_THROWS_AS(krein_vector_from_json(ojson{{"schema", "other/1"}}), std::invalid_argument);
  ojson bad;
  bad["schema"] = kStateSchema;
  bad["n_max"] = 2;
  bad["coefficients"] = ojson::array({ojson::array({0, 0, 0, 1.0})});
  CHECK_THROWS_AS(krein_vector_from_json(bad), std::invalid_argument);

  ojson outside;
  outside["schema"] = kStateSchema;
  outside["n_max"] = 1;
  outside["coefficients"] = ojson::array({ojson::array({2, 0, 0, 0, 1.0, 0.0})});
  CHECK_THROWS_AS(krein_vector_from_json(outside), std::out_of_range);
}

TEST_CASE("check reports carry pass flags against the tolerance", "[serialization]") {
  std::vector<IdentityCheck> checks = {{"alpha", 2, 1e-12}, {"beta", 0, 3e-9}};
  CHECK(all_pass(checks, 1e-8));
  CHECK(!all_pass(checks, 1e-10));

  const ojson arr = checks_to_json(checks, 1e-10);
  REQUIRE(arr.size() == 2);
  CHECK(arr[0].at("identity") == "alpha");
  CHECK(arr[0].at("guard") == 2);
  CHECK(arr[0].at("pass") == true);
  CHECK(arr[1].at("pass") == false);

  const ojson env = report_envelope("spectrum", ojson{{"n_max", 6}}, 7);
  CHECK(env.at("schema") == kReportSchema);
  CHECK(env.at("toolkit_version") == std::string(kToolkitVersion));
  CHECK(env.at("seed") == 7);
  CHECK(env.at("config").at("n_max") == 6);
}

TEST_CASE("csv tables write a commented preamble and aligned rows", "[serialization]") {
  CsvTable t;
  t.preamble = {{"command", "demo"}};
  t.header = {"a", "b"};
  t.rows = {{"1", "2"}, {format_full(0.5), format_full(-3.25)}};

  std::ostringstream os;
  write_csv(os, t);
  const std::string expect = std::string("# ") + kScanSchema +
                             "\n# toolkit_version=" + kToolkitVersion +
                             "\n# command=demo\na,b\n1,2\n0.5,-3.25\n";
  CHECK(os.str() == expect);

  CsvTable bad = t;
  bad.rows.push_back({"only-one"});
  std::ostringstream sink;
  CHECK_THROWS_AS(write_csv(sink, bad), std::invalid_argument);
}
