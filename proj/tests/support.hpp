#pragma once

#include <doctest.h>

#include "cablesea/error.hpp"
#include "fixtures.hpp"

namespace testing {

template <typename Fn>
void check_code(cablesea::ErrorCode code, Fn&& fn) {
  try {
    fn();
    FAIL("expected " << cablesea::to_string(code));
  } catch (const cablesea::Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace testing
