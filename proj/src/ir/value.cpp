#include "reel/ir/value.hpp"

#include <bit>
#include <functional>
#include <stdexcept>

namespace reel {

namespace {

inline std::size_t mix(std::size_t seed, std::size_t h) {
  return seed ^ (h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

struct Overloaded {
  std::size_t operator()(std::int64_t i) const { return mix(1, std::hash<std::int64_t>{}(i)); }
  std::size_t operator()(double d) const {
    return mix(2, std::hash<std::uint64_t>{}(std::bit_cast<std::uint64_t>(d)));
  }
  std::size_t operator()(bool b) const { return mix(3, b ? 1 : 0); }
  std::size_t operator()(const std::string& s) const { return mix(4, std::hash<std::string>{}(s)); }
  std::size_t operator()(const IntPair& p) const {
    return mix(mix(5, std::hash<std::int64_t>{}(p.x)), std::hash<std::int64_t>{}(p.y));
  }
  std::size_t operator()(const Color& c) const {
    return mix(6, (std::size_t{c.c[0]} << 16) | (std::size_t{c.c[1]} << 8) | c.c[2]);
  }
  std::size_t operator()(const ValueList& l) const {
    std::size_t h = mix(7, l.items.size());
    for (const auto& item : l.items) h = mix(h, hash_value(item));
    return h;
  }
};

}  // namespace

bool ValueList::operator==(const ValueList& other) const { return items == other.items; }

bool Value::operator==(const Value& other) const {
  if (v.index() != other.v.index()) return false;
  if (is<double>())
    return std::bit_cast<std::uint64_t>(as<double>()) ==
           std::bit_cast<std::uint64_t>(other.as<double>());
  return v == other.v;
}

const char* Value::kind_name() const {
  switch (v.index()) {
    case 0: return "int";
    case 1: return "float";
    case 2: return "bool";
    case 3: return "str";
    case 4: return "pair";
    case 5: return "color";
    case 6: return "list";
  }
  return "?";
}

int Value::depth() const {
  if (!is<ValueList>()) return 0;
  int d = 0;
  for (const auto& item : as<ValueList>().items) d = std::max(d, item.depth());
  return d + 1;
}

std::size_t hash_value(const Value& v) { return std::visit(Overloaded{}, v.v); }

nlohmann::json value_to_json(const Value& v) {
  using nlohmann::json;
  switch (v.v.index()) {
    case 0: return json{{"int", v.as<std::int64_t>()}};
    case 1: return json{{"float", v.as<double>()}};
    case 2: return json{{"bool", v.as<bool>()}};
    case 3: return json{{"str", v.as<std::string>()}};
    case 4: return json{{"pair", {v.as<IntPair>().x, v.as<IntPair>().y}}};
    case 5: {
      const auto& c = v.as<Color>().c;
      return json{{"color", {c[0], c[1], c[2]}}};
    }
    default: {
      json items = json::array();
      for (const auto& item : v.as<ValueList>().items) items.push_back(value_to_json(item));
      return json{{"list", std::move(items)}};
    }
  }
}

namespace {

Value from_json_at(const nlohmann::json& j, int depth) {
  if (!j.is_object() || j.size() != 1)
    throw std::invalid_argument("value must be an object with exactly one tag");
  const auto it = j.begin();
  const std::string& tag = it.key();
  const nlohmann::json& body = it.value();
  if (tag == "int") {
    if (!body.is_number_integer()) throw std::invalid_argument("int value must be an integer");
    return Value(body.get<std::int64_t>());
  }
  if (tag == "float") {
    if (!body.is_number()) throw std::invalid_argument("float value must be a number");
    return Value(body.get<double>());
  }
  if (tag == "bool") {
    if (!body.is_boolean()) throw std::invalid_argument("bool value must be true/false");
    return Value(body.get<bool>());
  }
  if (tag == "str") {
    if (!body.is_string()) throw std::invalid_argument("str value must be a string");
    return Value(body.get<std::string>());
  }
  if (tag == "pair") {
    if (!body.is_array() || body.size() != 2 || !body[0].is_number_integer() ||
        !body[1].is_number_integer())
      throw std::invalid_argument("pair value must be [int, int]");
    return Value(IntPair{body[0].get<std::int64_t>(), body[1].get<std::int64_t>()});
  }
  if (tag == "color") {
    if (!body.is_array() || body.size() != 3)
      throw std::invalid_argument("color value must be [c0, c1, c2]");
    Color c;
    for (int i = 0; i < 3; ++i) {
      if (!body[i].is_number_integer()) throw std::invalid_argument("color channel must be int");
      const auto ch = body[i].get<std::int64_t>();
      if (ch < 0 || ch > 255) throw std::invalid_argument("color channel out of range");
      c.c[i] = static_cast<std::uint8_t>(ch);
    }
    return Value(c);
  }
  if (tag == "list") {
    if (!body.is_array()) throw std::invalid_argument("list value must be an array");
    if (depth >= kMaxValueListDepth) throw std::invalid_argument("list nesting too deep");
    ValueList l;
    for (const auto& item : body) l.items.push_back(from_json_at(item, depth + 1));
    return Value(std::move(l));
  }
  throw std::invalid_argument("unknown value tag '" + tag + "'");
}

}  // namespace

Value value_from_json(const nlohmann::json& j) { return from_json_at(j, 0); }

std::size_t serialized_size(const Value& v) { return value_to_json(v).dump().size(); }

}  // namespace reel
