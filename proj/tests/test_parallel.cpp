#include <catch_amalgamated.hpp>

#include <stdexcept>

#include "pllnet/parallel.hpp"

using namespace pllnet;

TEST_CASE("results keep index order for any thread count") {
  for (unsigned t : {0u, 1u, 3u, 8u}) {
    const auto v = parallel_map(100, t, [](std::size_t i) { return static_cast<int>(i * i); });
    REQUIRE(v.size() == 100);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i] == static_cast<int>(i * i));
  }
}

TEST_CASE("the lowest failing index is rethrown") {
  try {
    parallel_map(50, 4, [](std::size_t i) -> int {
      if (i == 7 || i == 31) throw std::runtime_error(std::to_string(i));
      return 0;
    });
    FAIL("expected an exception");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()) == "7");
  }
}

TEST_CASE("zero threads resolves to hardware concurrency") {
  CHECK(resolve_threads(0) >= 1);
  CHECK(resolve_threads(3) == 3);
}
