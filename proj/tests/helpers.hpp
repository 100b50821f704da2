#pragma once

#include "gridalg.hpp"

namespace gt {

using namespace gg;

inline FieldPtr sqrt2_field() {
  static FieldPtr f = Field::make({Q(-2), Q(0), Q(1)}, Q(1), Q(2));
  return f;
}

// a + b sqrt2
inline Num nq(const std::string& a, const std::string& b = "0") {
  return Num(sqrt2_field(), QVec{parse_rational(a), parse_rational(b)});
}

inline NVec nv(std::initializer_list<Num> xs) { return NVec(xs); }

inline NMat ident2() { return nmat_identity(sqrt2_field(), 2); }

// [[1, sqrt2], [1, sqrt2 + 1]], det 1.
inline NMat M2() { return {{nq("1"), nq("0", "1")}, {nq("1"), nq("1", "1")}}; }

inline Grid grid(const Num& c, NVec w, NMat M = ident2()) { return {c, std::move(w), std::move(M)}; }

inline Grid z2() { return grid(nq("1"), {nq("0"), nq("0")}); }

}  // namespace gt
