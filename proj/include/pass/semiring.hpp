#pragma once

#include <cstdint>

#include "pass/solution_set.hpp"

namespace pass {

// Semirings used for tensor contraction. Tensors store entries sparsely with
// "absent = additive unit", so zero() never needs to be materialized for the
// boolean kind; is_zero() filters the others on insertion.

// Boolean semiring (PA method): a stored entry IS true, so the value type
// carries no data.
struct BoolSemiring {
    struct Value {
        friend bool operator==(const Value&, const Value&) { return true; }
    };
    static Value one() { return {}; }
    static Value add(const Value&, const Value&) { return {}; }
    static Value mul(const Value&, const Value&) { return {}; }
    static bool is_zero(const Value&) { return false; }
};

// Natural-number counting semiring; included solely as a test oracle for
// cardinalities (it counts variable assignments, hidden values distinct).
struct CountSemiring {
    using Value = std::uint64_t;
    static Value one() { return 1; }
    static Value add(Value a, Value b) { return a + b; }
    static Value mul(Value a, Value b) { return a * b; }
    static bool is_zero(Value v) { return v == 0; }
};

// solutionSet semiring (PASS method).
struct SolutionSetSemiring {
    using Value = SolutionSet;
    static Value one() { return ss_unit(); }
    static Value add(const Value& a, const Value& b) { return ss_add(a, b); }
    static Value mul(const Value& a, const Value& b) { return ss_mul(a, b); }
    static bool is_zero(const Value& v) { return v.count == 0; }
};

} // namespace pass
