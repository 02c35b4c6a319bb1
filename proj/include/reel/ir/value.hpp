#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace reel {

struct IntPair {
  std::int64_t x = 0;
  std::int64_t y = 0;
  bool operator==(const IntPair&) const = default;
};

/// Three channel bytes, applied in the channel order of the target frame.
struct Color {
  std::array<std::uint8_t, 3> c{};
  bool operator==(const Color&) const = default;
};

struct Value;

struct ValueList {
  std::vector<Value> items;
  bool operator==(const ValueList& other) const;
};

inline constexpr int kMaxValueListDepth = 8;

/// Immutable constant argument. Float equality is bitwise so interning is a
/// true structural comparison (NaN payloads included).
struct Value {
  using Storage = std::variant<std::int64_t, double, bool, std::string, IntPair, Color, ValueList>;
  Storage v;

  Value() : v(std::int64_t{0}) {}
  Value(std::int64_t i) : v(i) {}
  Value(int i) : v(std::int64_t{i}) {}
  Value(double d) : v(d) {}
  Value(bool b) : v(b) {}
  Value(std::string s) : v(std::move(s)) {}
  Value(const char* s) : v(std::string(s)) {}
  Value(IntPair p) : v(p) {}
  Value(Color c) : v(c) {}
  Value(ValueList l) : v(std::move(l)) {}

  bool operator==(const Value& other) const;

  template <class T>
  bool is() const { return std::holds_alternative<T>(v); }
  template <class T>
  const T& as() const { return std::get<T>(v); }

  const char* kind_name() const;
  /// Nesting depth of lists (scalars are 0).
  int depth() const;
};

std::size_t hash_value(const Value& v);

nlohmann::json value_to_json(const Value& v);
/// Throws std::invalid_argument on malformed input or lists nested deeper
/// than kMaxValueListDepth.
Value value_from_json(const nlohmann::json& j);

/// Size in bytes of the value's canonical JSON text, used for policy limits.
std::size_t serialized_size(const Value& v);

}  // namespace reel
