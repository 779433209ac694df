#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "json.hpp"
#include "jpe/io.hpp"
#include "jpe/raster.hpp"

using namespace jpe;

TEST_CASE("fmt prints shortest round-tripping decimals") {
  CHECK(fmt(0.0) == "0");
  CHECK(fmt(1.0) == "1");
  CHECK(fmt(0.1) == "0.1");
  CHECK(fmt(-2.5) == "-2.5");
  CHECK(fmt(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(fmt(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(fmt(std::nan("")) == "nan");
  // Round trip on awkward values.
  for (double x : {1.0 / 3.0, 1e-300, 6.02214076e23, 0.30000000000000004}) {
    CHECK(std::strtod(fmt(x).c_str(), nullptr) == x);
  }
}

TEST_CASE("fnv1a known vectors") {
  CHECK(fnv1a("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("label_name") {
  CHECK(std::string(label_name(RegionLabel::E0)) == "E0");
  CHECK(std::string(label_name(RegionLabel::E)) == "E");
  CHECK(std::string(label_name(RegionLabel::E1)) == "E1");
  CHECK(std::string(label_name(RegionLabel::Em1)) == "Em1");
  CHECK(std::string(label_name(RegionLabel::OnBoundary)) == "OnBoundary");
}

TEST_CASE("region_map_csv header and determinism") {
  SymbolTriple t = parse_triple("U=[-1,1];V=[0];W=[2]");
  ComplexGrid g(-3.2, 3.2, -3.2, 3.2, 9, 9);
  RegionMap m = region_map(t, g);
  std::string csv = region_map_csv(m);
  CHECK(csv.substr(0, 10) == "x,y,label\n");
  CHECK(csv.back() == '\n');
  CHECK(csv == region_map_csv(m));
  bool has_label = csv.find("OnBoundary") != std::string::npos ||
                   csv.find("E0") != std::string::npos;
  CHECK(has_label);
}

TEST_CASE("field, eps-set, mask and profile CSV shapes") {
  SymbolTriple t = parse_triple("U=[0];V=[2];W=[0]");
  ComplexGrid g(0, 4, -1, 1, 5, 3);
  ResolventField f = resolvent_field(DiagonalStream(t, 1), 3, g, NormKind::P2);
  std::string fc = field_csv(f);
  CHECK(fc.substr(0, fc.find('\n')) == "x,y,value");
  CHECK(std::count(fc.begin(), fc.end(), '\n') == 1 + 15);

  EpsSet s = eps_set(f, 0.5);
  std::string sc = eps_set_csv(s);
  CHECK(sc.substr(0, sc.find('\n')) == "x,y");
  // Member rows only: header + one line per member.
  CHECK(std::count(sc.begin(), sc.end(), '\n') ==
        1 + static_cast<long>(s.count()));

  std::string mc = mask_csv(g, s.membership);
  CHECK(mc.substr(0, mc.find('\n')) == "x,y");
  CHECK(mc == sc);

  std::vector<int> sizes = {4, 8};
  std::vector<NormEstimate> prof = {
      {.value = 2.0, .certified_lower = true, .iterations = 10},
      {.value = 3.0, .certified_lower = false, .iterations = 20}};
  std::string pc = profile_csv(sizes, prof);
  CHECK(pc.substr(0, pc.find('\n')) == "n,value,certified_lower,iterations");
  CHECK(pc.find("4,2,1,10") != std::string::npos);
  CHECK(pc.find("8,3,0,20") != std::string::npos);
}

TEST_CASE("fsm_report_json parses and carries the fields") {
  SymbolTriple t = parse_triple("U=[0];V=[2];W=[1]");
  FsmProblem p{DiagonalStream(t, 1), Side::SemiInfinite, Rhs::unit(1),
               make_cutoffs(Side::SemiInfinite, 5, 10), 0};
  FsmReport r = fsm_solve(p);
  nlohmann::json j = nlohmann::json::parse(fsm_report_json(r));
  CHECK(j.at("converged").get<bool>());
  CHECK(!j.contains("failure_mode"));
  CHECK(j.at("final_error_estimate").get<double>() < 1e-7);
  CHECK(j.at("stability_profile").is_array());
  auto sol = j.at("solution");
  REQUIRE(sol.is_array());
  bool found = false;
  for (const auto& e : sol)
    if (e.at("j").get<std::int64_t>() == 1) {
      CHECK(e.at("re").get<double>() == doctest::Approx(0.5));
      CHECK(e.at("im").get<double>() == doctest::Approx(0.0));
      found = true;
    }
  CHECK(found);
}

TEST_CASE("manifest JSON is valid and lists outputs as 16-digit hex") {
  RunManifest m;
  m.command = "regions";
  m.triple = "U=[0];V=[0];W=[1]";
  m.seed = 42;
  m.params = {{"grid", "9x9"}};
  m.outputs = {{"regions.csv", fnv1a("hello")}};
  nlohmann::json j = nlohmann::json::parse(m.to_json());
  CHECK(j.at("command") == "regions");
  CHECK(j.at("seed") == 42);
  CHECK(j.at("version") == "1.0.0");
  std::string h = j.at("outputs").at("regions.csv").get<std::string>();
  CHECK(h.size() == 16);
  CHECK(h.find_first_not_of("0123456789abcdef") == std::string::npos);
}

TEST_CASE("netpbm headers and payload sizes") {
  std::vector<std::uint8_t> gray(6, 128);
  std::string pgm = pgm_bytes(3, 2, gray);
  CHECK(pgm.substr(0, 11) == "P5\n3 2\n255\n");
  CHECK(pgm.size() == 11 + 6);

  std::vector<std::uint8_t> rgb(18, 7);
  std::string ppm = ppm_bytes(3, 2, rgb);
  CHECK(ppm.substr(0, 11) == "P6\n3 2\n255\n");
  CHECK(ppm.size() == 11 + 18);

  // PBM: 10 columns pack into 2 bytes per row, high bit first.
  std::vector<std::uint8_t> bits(10 * 2, 0);
  bits[0] = 1;                      // row 0, col 0 -> byte 0 bit 0x80
  bits[9] = 1;                      // row 0, col 9 -> byte 1 bit 0x40
  std::string pbm = pbm_bytes(10, 2, bits);
  CHECK(pbm.substr(0, 8) == "P4\n10 2\n");
  REQUIRE(pbm.size() == 8 + 4);
  CHECK(static_cast<std::uint8_t>(pbm[8]) == 0x80);
  CHECK(static_cast<std::uint8_t>(pbm[9]) == 0x40);
  CHECK(static_cast<std::uint8_t>(pbm[10]) == 0);
  CHECK(static_cast<std::uint8_t>(pbm[11]) == 0);
}

TEST_CASE("region palette and raster orientation") {
  CHECK(region_color(RegionLabel::E0) == std::array<std::uint8_t, 3>{255, 255, 255});
  CHECK(region_color(RegionLabel::E) == std::array<std::uint8_t, 3>{200, 200, 200});
  CHECK(region_color(RegionLabel::E1) == std::array<std::uint8_t, 3>{70, 70, 70});
  CHECK(region_color(RegionLabel::Em1) == std::array<std::uint8_t, 3>{40, 40, 120});
  CHECK(region_color(RegionLabel::OnBoundary) == std::array<std::uint8_t, 3>{0, 0, 0});

  // A map that is E0 only in the top-right grid corner must color the first
  // raster pixel (top row written first) at the row end.
  SymbolTriple t = parse_triple("U=[0];V=[0];W=[1]");
  ComplexGrid g(-0.5, 2.0, -0.5, 2.0, 3, 3);
  RegionMap m = region_map(t, g);
  std::string ppm = region_map_ppm(m);
  REQUIRE(ppm.size() == 11 + 27);
  // Grid point (x=2, y=2) is far outside the unit circle: E0, white; it sits
  // at the end of the first raster row.
  CHECK(static_cast<std::uint8_t>(ppm[11 + 6]) == 255);
  // Grid point (x=-0.5, y=-0.5) is inside... |(-.5,-.5)| < 1: E1, dark gray,
  // bottom-left -> last raster row, first pixel.
  CHECK(static_cast<std::uint8_t>(ppm[11 + 18]) == 70);
}

TEST_CASE("field_pgm renders infinities as the brightest pixel") {
  SymbolTriple t = parse_triple("U=[0];V=[2];W=[0]");
  ComplexGrid g(0, 4, -1, 1, 5, 3);
  ResolventField f = resolvent_field(DiagonalStream(t, 1), 3, g, NormKind::P2);
  std::string pgm = field_pgm(f);
  REQUIRE(pgm.size() == 11 + 15);
  std::uint8_t max = 0;
  for (std::size_t i = 11; i < pgm.size(); ++i)
    max = std::max(max, static_cast<std::uint8_t>(pgm[i]));
  // lambda = 2 is on the grid (middle row, middle column) and is singular.
  CHECK(static_cast<std::uint8_t>(pgm[11 + 5 + 2]) == max);
}

TEST_CASE("write_file round trip") {
  std::string path = "/tmp/jpe_io_test_file.bin";
  std::string payload = std::string("abc\0def", 7);
  write_file(path, payload);
  FILE* fp = std::fopen(path.c_str(), "rb");
  REQUIRE(fp != nullptr);
  char buf[16];
  std::size_t got = std::fread(buf, 1, sizeof buf, fp);
  std::fclose(fp);
  CHECK(std::string(buf, got) == payload);
  std::remove(path.c_str());
}
