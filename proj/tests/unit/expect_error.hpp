#pragma once

#include <gtest/gtest.h>

#include "qattack/error.hpp"

#define EXPECT_QA_ERROR(stmt, expected_code)                          \
  do {                                                                \
    try {                                                             \
      stmt;                                                           \
      ADD_FAILURE() << "no exception from " #stmt;                    \
    } catch (const qattack::Error& e) {                               \
      EXPECT_EQ(e.code(), expected_code) << e.what();                 \
    }                                                                 \
  } while (0)
