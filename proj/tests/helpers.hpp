#pragma once
// Shared assertions for the unit suite.

#include "cdg/scalar.hpp"
#include "doctest.h"

#include <string>

// The expression must throw cdg::Error with exactly this code.
#define CHECK_ERROR_CODE(expr, expected)                                                   \
    do {                                                                                   \
        bool thrown_ = false;                                                              \
        try {                                                                              \
            (void)(expr);                                                                  \
        } catch (const cdg::Error& e_) {                                                   \
            thrown_ = true;                                                                \
            CHECK(e_.code == (expected));                                                  \
        }                                                                                  \
        CHECK_MESSAGE(thrown_, std::string("expected Error with code ") + (expected));     \
    } while (0)
