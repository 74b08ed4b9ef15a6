#include "valgroth/value_tuple.hpp"

#include <algorithm>

namespace valgroth {

namespace {

void require_same_arity(const ValTuple& a, const ValTuple& b) {
  if (a.arity() != b.arity())
    throw DomainError("value tuples of different arity: " + a.to_string() + " vs " + b.to_string());
}

std::int64_t floor_div(std::int64_t a, std::int64_t n) {
  std::int64_t q = a / n;
  if ((a % n != 0) && ((a < 0) != (n < 0))) --q;
  return q;
}

}  // namespace

bool ValTuple::is_zero() const {
  return !infinite_ && std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c == 0; });
}

bool ValTuple::is_positive() const {
  if (infinite_) return true;
  for (auto c : coords_)
    if (c != 0) return c > 0;
  return false;
}

bool ValTuple::is_negative() const {
  if (infinite_) return false;
  for (auto c : coords_)
    if (c != 0) return c < 0;
  return false;
}

bool ValTuple::divisible_by(std::int64_t n) const {
  if (infinite_) return true;
  return std::all_of(coords_.begin(), coords_.end(), [n](auto c) { return c % n == 0; });
}

ValTuple ValTuple::divided_by(std::int64_t n) const {
  if (infinite_) return *this;
  ValTuple r = *this;
  for (auto& c : r.coords_) c = floor_div(c, n);
  return r;
}

ValTuple operator+(const ValTuple& a, const ValTuple& b) {
  require_same_arity(a, b);
  if (a.infinite_ || b.infinite_) return ValTuple::infinity(a.arity());
  ValTuple r = a;
  for (std::size_t i = 0; i < r.coords_.size(); ++i) r.coords_[i] += b.coords_[i];
  return r;
}

ValTuple ValTuple::operator-() const {
  if (infinite_) throw DomainError("negation of infinite valuation");
  ValTuple r = *this;
  for (auto& c : r.coords_) c = -c;
  return r;
}

ValTuple operator-(const ValTuple& a, const ValTuple& b) { return a + (-b); }

ValTuple operator*(std::int64_t n, const ValTuple& a) {
  if (a.infinite_) return a;
  ValTuple r = a;
  for (auto& c : r.coords_) c *= n;
  return r;
}

std::strong_ordering lex_compare(const ValTuple& a, const ValTuple& b) {
  if (a.infinite_ || b.infinite_) {
    // arity is not checked against infinity: v(0) compares with anything
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    return a.infinite_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  require_same_arity(a, b);
  for (std::size_t i = 0; i < a.coords_.size(); ++i) {
    if (auto c = a.coords_[i] <=> b.coords_[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string ValTuple::to_string() const {
  if (infinite_) return "inf";
  std::string s = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(coords_[i]);
  }
  return s + ")";
}

}  // namespace valgroth
