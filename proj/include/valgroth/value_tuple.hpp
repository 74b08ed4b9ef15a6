#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "valgroth/errors.hpp"

namespace valgroth {

/// Element of the value group Z^k with lexicographic order, or infinity.
/// Coordinate 0 belongs to the outermost Laurent variable.
class ValTuple {
 public:
  ValTuple() = default;
  explicit ValTuple(std::vector<std::int64_t> coords) : coords_(std::move(coords)) {}
  ValTuple(std::initializer_list<std::int64_t> coords) : coords_(coords) {}

  static ValTuple infinity(std::size_t arity) {
    ValTuple v(std::vector<std::int64_t>(arity, 0));
    v.infinite_ = true;
    return v;
  }
  static ValTuple zero(std::size_t arity) { return ValTuple(std::vector<std::int64_t>(arity, 0)); }
  /// (0,...,0,1); undefined for arity 0.
  static ValTuple min_positive(std::size_t arity) {
    ValTuple v = zero(arity);
    if (arity == 0) throw DomainError("trivial value group has no positive element");
    v.coords_.back() = 1;
    return v;
  }

  bool is_infinite() const { return infinite_; }
  bool is_zero() const;
  bool is_positive() const;
  bool is_negative() const;
  std::size_t arity() const { return coords_.size(); }
  const std::vector<std::int64_t>& coords() const { return coords_; }
  std::int64_t operator[](std::size_t i) const { return coords_.at(i); }

  /// True when every coordinate is divisible by n (infinity counts as divisible).
  bool divisible_by(std::int64_t n) const;
  ValTuple divided_by(std::int64_t n) const;

  friend ValTuple operator+(const ValTuple& a, const ValTuple& b);
  friend ValTuple operator-(const ValTuple& a, const ValTuple& b);
  ValTuple operator-() const;
  friend ValTuple operator*(std::int64_t n, const ValTuple& a);

  friend std::strong_ordering lex_compare(const ValTuple& a, const ValTuple& b);
  friend std::strong_ordering operator<=>(const ValTuple& a, const ValTuple& b) { return lex_compare(a, b); }
  friend bool operator==(const ValTuple& a, const ValTuple& b) { return lex_compare(a, b) == 0; }

  std::string to_string() const;

 private:
  std::vector<std::int64_t> coords_;
  bool infinite_ = false;
};

}  // namespace valgroth
