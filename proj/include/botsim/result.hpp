#pragma once

#include <cassert>
#include <utility>
#include <variant>

namespace botsim {

// Minimal expected-style carrier for operations whose failure is a normal
// outcome (frame decoding, CSV parsing). T and E must be distinct types.
template <class T, class E>
class Result {
 public:
  Result(T value) : v_(std::move(value)) {}
  Result(E error) : v_(std::move(error)) {}

  bool ok() const { return std::holds_alternative<T>(v_); }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    assert(ok());
    return std::get<T>(v_);
  }
  T& value() {
    assert(ok());
    return std::get<T>(v_);
  }
  const E& error() const {
    assert(!ok());
    return std::get<E>(v_);
  }

 private:
  std::variant<T, E> v_;
};

}  // namespace botsim
