#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "sf/cli.hpp"
#include "sf/report.hpp"

using namespace sf;

namespace {

struct RunResult {
  int rc;
  std::string out, err;
  json payload, timings;
};

RunResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  RunResult r;
  r.rc = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  if (!r.out.empty() && r.out.front() == '{') {
    const json whole = json::parse(r.out);
    if (whole.contains("payload")) {
      r.payload = whole.at("payload");
      r.timings = whole.at("timings");
    }
  }
  return r;
}

std::string payload_bytes(const std::string& stdout_text) {
  const json whole = json::parse(stdout_text);
  return canonical_dump(whole.at("payload"));
}

json load_schema(const std::string& name) {
#ifdef SF_SOURCE_DIR
  const std::filesystem::path dir = std::filesystem::path(SF_SOURCE_DIR) / "schemas";
#else
  const std::filesystem::path dir = "schemas";
#endif
  std::ifstream in(dir / (name + ".schema.json"));
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path;
}

}  // namespace

TEST_CASE("field-info: payload, schema, determinism") {
  const auto r1 = run_cli({"field-info", "--p", "3", "--m", "6"});
  CHECK(r1.rc == 0);
  std::string err;
  CHECK_MESSAGE(validate_schema(r1.payload, load_schema("field-info"), &err), err);
  CHECK(r1.payload.at("order") == 729);
  CHECK(r1.payload.at("zsigmondy_prime") == 7);
  CHECK(r1.payload.at("sylow_order") == 7);
  const auto r2 = run_cli({"field-info", "--p", "3", "--m", "6"});
  CHECK(payload_bytes(r1.out) == payload_bytes(r2.out));
}

TEST_CASE("construct emits canonical map JSON; identical runs are byte-identical") {
  const std::vector<std::string> args{"construct", "--family", "S", "--p", "3",
                                      "--m", "6", "--k", "2", "--B", "1", "--a", "0"};
  const auto r1 = run_cli(args), r2 = run_cli(args);
  CHECK(r1.rc == 0);
  std::string err;
  CHECK_MESSAGE(validate_schema(r1.payload, load_schema("map"), &err), err);
  CHECK(payload_bytes(r1.out) == payload_bytes(r2.out));
  // The payload parses back into the same map.
  const PlanarMap F = planar_from_json(r1.payload);
  CHECK(planar_to_json(F, nullptr).at("kind") == "biproj");
}

TEST_CASE("construct: parameter errors exit 2 with a named condition") {
  const auto bad = run_cli({"construct", "--family", "S", "--p", "4", "--m", "6", "--k", "2"});
  CHECK(bad.rc == 2);
  CHECK(bad.err.find("p_odd_prime") != std::string::npos);
  const auto bad2 = run_cli({"construct", "--family", "S", "--p", "3", "--m", "6", "--k", "3"});
  CHECK(bad2.rc == 2);
  CHECK(bad2.err.find("m_over_e_odd") != std::string::npos);
}

TEST_CASE("verify: planar map exits 0, non-planar exits 1 with a witness") {
  const auto con = run_cli({"construct", "--family", "dickson", "--p", "3", "--m", "2", "--k", "1"});
  REQUIRE(con.rc == 0);
  const auto good = temp_file("sf_cli_good.json", canonical_dump(con.payload));
  const auto ok = run_cli({"verify", "--in", good.string()});
  CHECK(ok.rc == 0);
  std::string err;
  CHECK_MESSAGE(validate_schema(ok.payload, load_schema("certificate"), &err), err);
  CHECK(ok.payload.at("planar") == true);

  // a0 = a1 = 0 pair: never planar.
  json bad_map = con.payload;
  bad_map["f"] = json::array({json::array({0, 0}), json::array({1, 0}), json::array({0, 0}),
                              json::array({1, 0})});
  bad_map["g"] = json::array({json::array({0, 0}), json::array({1, 0}), json::array({1, 0}),
                              json::array({0, 0})});
  bad_map.erase("family");
  bad_map.erase("params");
  bad_map.erase("predicted_nuclei");
  bad_map.erase("count_note");
  const auto badf = temp_file("sf_cli_bad.json", canonical_dump(bad_map));
  const auto fail = run_cli({"verify", "--in", badf.string()});
  CHECK(fail.rc == 1);
  CHECK(fail.payload.at("planar") == false);
  bool has_witness = false;
  for (const auto& r : fail.payload.at("runs"))
    if (r.contains("witness")) has_witness = true;
  CHECK(has_witness);
}

TEST_CASE("verify --oracle forces the brute-force run") {
  const auto con = run_cli({"construct", "--family", "zp", "--p", "3", "--m", "3", "--k", "1", "--j", "1"});
  REQUIRE(con.rc == 0);
  const auto f = temp_file("sf_cli_zp.json", canonical_dump(con.payload));
  const auto r = run_cli({"verify", "--in", f.string(), "--oracle"});
  CHECK(r.rc == 0);
  bool brute_seen = false;
  for (const auto& run : r.payload.at("runs"))
    if (run.at("name") == "bruteforce_polarization") brute_seen = run.at("pass").get<bool>();
  CHECK(brute_seen);
}

TEST_CASE("nuclei subcommand matches the table predictions") {
  const auto con = run_cli({"construct", "--family", "dickson", "--p", "3", "--m", "2", "--k", "1"});
  const auto f = temp_file("sf_cli_nuc.json", canonical_dump(con.payload));
  const auto r = run_cli({"nuclei", "--in", f.string()});
  CHECK(r.rc == 0);
  std::string err;
  CHECK_MESSAGE(validate_schema(r.payload, load_schema("nuclei"), &err), err);
  CHECK(r.payload.at("Nl") == 3);
  CHECK(r.payload.at("Nm") == 9);
  CHECK(r.payload.at("Nr") == 3);
  CHECK(r.payload.at("match") == true);
}

TEST_CASE("orbit subcommand: sorted discrete logs, deterministic bytes") {
  const std::vector<std::string> args{"orbit", "--p", "3", "--m", "6", "--k", "2",
                                      "--B", "1", "--a", "0"};
  const auto r1 = run_cli(args), r2 = run_cli(args);
  CHECK(r1.rc == 0);
  std::string err;
  CHECK_MESSAGE(validate_schema(r1.payload, load_schema("orbit"), &err), err);
  CHECK(payload_bytes(r1.out) == payload_bytes(r2.out));
  const auto& orbit = r1.payload.at("orbit");
  CHECK(orbit.size() <= 12);
  for (size_t i = 1; i < orbit.size(); ++i)
    CHECK(orbit[i - 1].get<int64_t>() < orbit[i].get<int64_t>());
  CHECK(r1.payload.at("neg_pairing") == true);
}

TEST_CASE("centralizer subcommand on a family-S map, with the audit path") {
  const auto con = run_cli({"construct", "--family", "S", "--p", "3", "--m", "6", "--k", "2",
                            "--B", "1", "--a", "0"});
  REQUIRE(con.rc == 0);
  const auto f = temp_file("sf_cli_cent.json", canonical_dump(con.payload));
  const auto r = run_cli({"centralizer", "--in", f.string(), "--audit"});
  CHECK(r.rc == 0);
  std::string err;
  CHECK_MESSAGE(validate_schema(r.payload, load_schema("centralizer"), &err), err);
  CHECK(r.payload.at("size") == 5824);
  CHECK(r.payload.at("condition_c") == true);
  CHECK(r.payload.at("pprime") == 7);
}

TEST_CASE("classify subcommand edge case: empty family at m = 2") {
  const auto r = run_cli({"classify", "--family", "S", "--p", "3", "--m", "2"});
  CHECK(r.rc == 0);
  std::string err;
  CHECK_MESSAGE(validate_schema(r.payload, load_schema("classify"), &err), err);
  CHECK(r.payload.at("class_count") == 0);
  CHECK(r.payload.at("bound_ok") == true);
}

TEST_CASE("compare subcommand: different orders resolve by invariants") {
  const auto a = run_cli({"construct", "--family", "dickson", "--p", "3", "--m", "2", "--k", "1"});
  const auto b = run_cli({"construct", "--family", "dickson", "--p", "3", "--m", "3", "--k", "1"});
  const auto fa = temp_file("sf_cli_cmp_a.json", canonical_dump(a.payload));
  const auto fb = temp_file("sf_cli_cmp_b.json", canonical_dump(b.payload));
  const auto r = run_cli({"compare", "--a", fa.string(), "--b", fb.string()});
  CHECK(r.rc == 0);
  std::string err;
  CHECK_MESSAGE(validate_schema(r.payload, load_schema("compare"), &err), err);
  CHECK(r.payload.at("verdict") == "non_isotopic");
  CHECK(r.payload.at("evidence") == "invariant");
}

TEST_CASE("table1 CSV: header plus deterministic rows") {
  std::ostringstream out1, out2, err;
  CHECK(cli::run({"table1", "--p", "3", "--m", "2"}, out1, err) == 0);
  CHECK(cli::run({"table1", "--p", "3", "--m", "2"}, out2, err) == 0);
  CHECK(out1.str() == out2.str());
  CHECK(out1.str().find("family,params,constructible") == 0);
  CHECK(out1.str().find("\ndickson,") != std::string::npos);
  CHECK(out1.str().find("\nbh,") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli({"bogus"}).rc == 2);
  CHECK(run_cli({"field-info"}).rc == 2);
  CHECK(run_cli({}).rc == 2);
}
