#include <catch2/catch_amalgamated.hpp>
#include "dstab/catalog.hpp"
TEST_CASE("smoke") {
  auto p = dstab::get_problem("flat4");
  REQUIRE(p.dim == 2);
}
