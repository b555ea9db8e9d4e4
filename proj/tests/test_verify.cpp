#include "doctest.h"
#include "semihol/verify.hpp"

using namespace semihol;

TEST_CASE("injected winding bug is caught and named by the pathwise suite") {
  VerifyOptions o;
  o.scale = 0.05;
  o.inject_winding_bug = true;
  auto r = verify_pathwise(o);
  CHECK(!r.pass);
  CHECK(r.details["worst_identity"].get<std::string>().find("turn identity") !=
        std::string::npos);
  o.inject_winding_bug = false;
  CHECK(verify_pathwise(o).pass);
}

TEST_CASE("figure suite is deterministic") {
  VerifyOptions o;
  auto r = verify_figures(o);
  CHECK(r.pass);
  CHECK(r.details["periodic_k"].get<int>() == 5);
  CHECK(r.details["loops_traced"].get<int>() == 5);
}
