#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <sstream>
#include <string>
#include <vector>

#include "cwb/cwb.h"
#include "doctest.h"

namespace {

std::string take(char* s) {
  std::string out(s ? s : "");
  cwb_string_free(s);
  return out;
}

cwb_chart* builtin(const char* name) {
  cwb_chart* c = nullptr;
  REQUIRE(cwb_chart_builtin(name, &c) == CWB_OK);
  return c;
}

std::string component(const cwb_chart* c, const char* which, const char* point, std::vector<size_t> idx) {
  char* out = nullptr;
  REQUIRE(cwb_tensor_component(c, which, point, idx.data(), idx.size(), &out) == CWB_OK);
  return take(out);
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("charts: built-ins, parsing and errors") {
  char* names = nullptr;
  REQUIRE(cwb_builtin_names(&names) == CWB_OK);
  CHECK(take(names).find("s4\n") != std::string::npos);

  cwb_chart* s4 = builtin("s4");
  size_t dim = 0;
  CHECK(cwb_chart_dim(s4, &dim) == CWB_OK);
  CHECK(dim == 4);
  char* text = nullptr;
  REQUIRE(cwb_chart_print(s4, &text) == CWB_OK);
  cwb_chart* again = nullptr;
  CHECK(cwb_chart_parse(take(text).c_str(), &again) == CWB_OK);
  cwb_chart_free(again);
  cwb_chart_free(s4);

  cwb_chart* bad = nullptr;
  CHECK(cwb_chart_builtin("no_such_chart", &bad) == CWB_E_ARGUMENT);
  CHECK(std::strlen(cwb_last_error()) > 0);
  CHECK(cwb_chart_parse("chart x\ndim 2\nsignature (0,2)\ncoords a b\nmetric\ng[1,1] = 1 +\n", &bad) == CWB_E_PARSE);
  CHECK(cwb_chart_dim(nullptr, &dim) == CWB_E_ARGUMENT);
  CHECK(cwb_chart_parse(nullptr, &bad) == CWB_E_ARGUMENT);
}

TEST_CASE("tensor components are exact") {
  cwb_chart* s4 = builtin("s4");
  const char* origin = "x1=0 x2=0 x3=0 x4=0";
  // g = 4 delta at the origin; P = g/2, Ric = 3g, scal = 12
  CHECK(component(s4, "schouten", origin, {0, 0}) == "2");
  CHECK(component(s4, "schouten", origin, {0, 1}) == "0");
  CHECK(component(s4, "ricci", origin, {2, 2}) == "12");
  CHECK(component(s4, "scalar", origin, {}) == "12");
  CHECK(component(s4, "bach", "x1=1 x2=1/2 x3=-1 x4=2", {0, 3}) == "0");

  char* out = nullptr;
  const size_t idx[2] = {0, 0};
  CHECK(cwb_tensor_component(s4, "schouten", "x1=0 x2=0", idx, 2, &out) == CWB_E_PARSE);
  CHECK(cwb_tensor_component(s4, "schouten", origin, idx, 1, &out) == CWB_E_ARGUMENT);
  CHECK(cwb_tensor_component(s4, "nonsense", origin, idx, 2, &out) == CWB_E_ARGUMENT);
  cwb_chart_free(s4);
}

TEST_CASE("rescaling flat space to the round sphere") {
  cwb_chart* flat = builtin("flat_0_4");
  cwb_chart* sphere = nullptr;
  REQUIRE(cwb_chart_rescale(flat, "2/(1 + x1^2 + x2^2 + x3^2 + x4^2)", &sphere) == CWB_OK);
  CHECK(component(sphere, "ricci", "x1=0 x2=0 x3=0 x4=0", {1, 1}) == "12");
  CHECK(component(sphere, "weyl", "x1=1 x2=2 x3=0 x4=1", {0, 1, 0, 1}) == "0");
  cwb_chart* bad = nullptr;
  CHECK(cwb_chart_rescale(flat, "0", &bad) == CWB_E_MATH);
  CHECK(cwb_chart_rescale(flat, "1 + q", &bad) == CWB_E_PARSE);
  cwb_chart_free(sphere);
  cwb_chart_free(flat);
}

TEST_CASE("sessions: reports, options and determinism") {
  cwb_chart* pp = builtin("ppwave_quartic");
  cwb_session* s = nullptr;
  REQUIRE(cwb_session_create(pp, &s) == CWB_OK);
  CHECK(cwb_session_add_point(s, "u=1 v=0 x=1/2 y=-1") == CWB_OK);
  CHECK(cwb_session_add_point(s, "u=1 v=0") == CWB_E_PARSE);
  CHECK(cwb_session_add_field(s, "0,1,0") == CWB_E_PARSE);
  CHECK(cwb_session_add_field(s, "0,1,0,0") == CWB_OK);
  CHECK(cwb_session_set_option(s, CWB_OPT_FORMAT, 7) == CWB_E_ARGUMENT);
  CHECK(cwb_session_set_option(s, CWB_OPT_MAX_ORDER, -1) == CWB_E_ARGUMENT);
  REQUIRE(cwb_session_set_option(s, CWB_OPT_MAX_ORDER, 2) == CWB_OK);

  char* out = nullptr;
  REQUIRE(cwb_run_tensor(s, "bach", &out) == CWB_OK);
  auto bach = lines(take(out));
  REQUIRE(bach.size() == 2);
  CHECK(bach[1] == "component which=bach index=u,u value=-6");

  REQUIRE(cwb_run_holonomy(s, &out) == CWB_OK);
  const std::string hol1 = take(out);
  CHECK(hol1.find("e_rank=1") != std::string::npos);
  REQUIRE(cwb_run_holonomy(s, &out) == CWB_OK);
  CHECK(take(out) == hol1);

  REQUIRE(cwb_session_set_option(s, CWB_OPT_FORMAT, CWB_FORMAT_JSONL) == CWB_OK);
  REQUIRE(cwb_run_classify_e(s, &out) == CWB_OK);
  auto region = lines(take(out));
  REQUIRE(region.size() == 2);
  CHECK(region.back().find("\"class\":\"integrable\"") != std::string::npos);

  REQUIRE(cwb_run_ambient(s, &out) == CWB_OK);
  CHECK(take(out).find("{\"record\":\"obstruction\",\"point\":\"u=1 v=0 x=1/2 y=-1\",\"value\":[[\"-6\"") !=
        std::string::npos);
  cwb_session_free(s);
  cwb_chart_free(pp);
}

TEST_CASE("verify: pass, negative control and dimension errors") {
  cwb_chart* pp = builtin("ppwave_quartic");
  cwb_session* s = nullptr;
  REQUIRE(cwb_session_create(pp, &s) == CWB_OK);
  REQUIRE(cwb_session_add_point(s, "u=1 v=0 x=1/2 y=-1") == CWB_OK);
  char* out = nullptr;
  int passed = -1;
  REQUIRE(cwb_run_verify(s, "obstruction", 0, &out, &passed) == CWB_OK);
  take(out);
  CHECK(passed == 1);
  REQUIRE(cwb_run_verify(s, "obstruction", CWB_VERIFY_CORRUPT_BACH, &out, &passed) == CWB_OK);
  CHECK(take(out).find("name=obstruction_membership point=\"u=1 v=0 x=1/2 y=-1\" result=fail") != std::string::npos);
  CHECK(passed == 0);
  CHECK(cwb_run_verify(s, "bogus", 0, &out, &passed) == CWB_E_ARGUMENT);
  cwb_session_free(s);
  cwb_chart_free(pp);

  cwb_chart* odd = builtin("ppwave5");
  REQUIRE(cwb_session_create(odd, &s) == CWB_OK);
  CHECK(cwb_run_verify(s, "obstruction", 0, &out, &passed) == CWB_E_MATH);
  CHECK(std::string(cwb_last_error()).find("even dimension") != std::string::npos);
  cwb_session_free(s);
  cwb_chart_free(odd);
}
