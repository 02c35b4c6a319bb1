#include "reel/ir/spec_json.hpp"

namespace reel {

using nlohmann::json;

namespace {

constexpr const char* kFormatTag = "reel-spec/1";

[[noreturn]] void structural(const std::string& what) {
  throw SpecFormatError(what, std::string::npos);
}

const json& field(const json& obj, const char* name) {
  auto it = obj.find(name);
  if (it == obj.end()) structural(std::string("missing field '") + name + "'");
  return *it;
}

std::uint32_t as_u32(const json& j, const char* what) {
  const auto n = json_count(j);
  if (!n || *n > 0xffffffffULL) structural(std::string(what) + " must be a non-negative 32-bit integer");
  return static_cast<std::uint32_t>(*n);
}

}  // namespace

std::optional<std::uint64_t> json_count(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  return std::nullopt;
}

json node_to_json(const ExprNode& node) {
  if (const auto* src = std::get_if<SourceRef>(&node))
    return json{{"source", src->source_id}, {"frame", src->frame_index}};
  if (const auto* k = std::get_if<Const>(&node)) return json{{"const", value_to_json(k->value)}};
  const auto& call = std::get<FilterCall>(node);
  json args = json::array();
  for (const auto& a : call.args) {
    if (const auto* id = std::get_if<NodeId>(&a))
      args.push_back(json{{"node", id->v}});
    else
      args.push_back(value_to_json(std::get<Value>(a)));
  }
  return json{{"filter", call.filter_name}, {"args", std::move(args)}};
}

json frame_type_to_json(const FrameType& t) {
  return json{{"width", t.width}, {"height", t.height}, {"pixfmt", pixfmt_name(t.pixfmt)}};
}

FrameType frame_type_from_json(const json& j) {
  if (!j.is_object()) structural("frame type must be an object");
  FrameType t;
  t.width = as_u32(field(j, "width"), "width");
  t.height = as_u32(field(j, "height"), "height");
  const auto& fmt = field(j, "pixfmt");
  if (!fmt.is_string()) structural("pixfmt must be a string");
  auto parsed = parse_pixfmt(fmt.get<std::string>());
  if (!parsed) structural("unknown pixfmt '" + fmt.get<std::string>() + "'");
  t.pixfmt = *parsed;
  if (!t.valid()) structural("invalid frame type " + t.to_string());
  return t;
}

json nodes_to_json(const NodeTable& table) {
  json out = json::array();
  for (const auto& n : table.nodes()) out.push_back(node_to_json(n));
  return out;
}

std::vector<NodeId> intern_json_nodes(const json& nodes_json, NodeTable& table) {
  if (!nodes_json.is_array()) structural("'nodes' must be an array");
  std::vector<NodeId> local;
  local.reserve(nodes_json.size());
  for (std::size_t i = 0; i < nodes_json.size(); ++i) {
    const json& n = nodes_json[i];
    const std::string where = "node " + std::to_string(i);
    if (!n.is_object()) structural(where + " must be an object");
    try {
      if (n.contains("source")) {
        const auto& s = n.at("source");
        if (!s.is_string()) structural(where + ": source must be a string");
        local.push_back(table.intern(SourceRef{s.get<std::string>(), as_u32(field(n, "frame"), "frame")}));
      } else if (n.contains("filter")) {
        const auto& name = n.at("filter");
        if (!name.is_string()) structural(where + ": filter must be a string");
        const auto& args = field(n, "args");
        if (!args.is_array()) structural(where + ": args must be an array");
        FilterCall call{name.get<std::string>(), {}};
        for (const auto& a : args) {
          if (a.is_object() && a.size() == 1 && a.contains("node")) {
            const auto ref = as_u32(a.at("node"), "node reference");
            if (ref >= local.size())
              structural(where + ": node reference " + std::to_string(ref) +
                         " does not point at an earlier node");
            call.args.emplace_back(local[ref]);
          } else {
            call.args.emplace_back(value_from_json(a));
          }
        }
        local.push_back(table.intern(std::move(call)));
      } else if (n.contains("const")) {
        local.push_back(table.intern(Const{value_from_json(n.at("const"))}));
      } else {
        structural(where + ": expected one of source/filter/const");
      }
    } catch (const std::invalid_argument& e) {
      structural(where + ": " + e.what());
    }
  }
  return local;
}

json spec_to_json(const VideoSpec& spec) {
  json frames = json::array();
  for (const auto id : spec.frames) frames.push_back(id.v);
  return json{{"format", kFormatTag},
              {"spec_id", spec.spec_id},
              {"fps", {spec.fps_num, spec.fps_den}},
              {"output_type", frame_type_to_json(spec.output_type)},
              {"terminated", spec.terminated},
              {"nodes", nodes_to_json(spec.nodes)},
              {"frames", std::move(frames)}};
}

std::string serialize_spec(const VideoSpec& spec) { return spec_to_json(spec).dump(); }

VideoSpec spec_from_json(const json& j) {
  if (!j.is_object()) structural("spec must be a JSON object");
  const auto& fmt = field(j, "format");
  if (!fmt.is_string() || fmt.get<std::string>() != kFormatTag)
    structural(std::string("unsupported format tag, expected '") + kFormatTag + "'");
  VideoSpec spec;
  if (auto it = j.find("spec_id"); it != j.end()) {
    if (!it->is_string()) structural("spec_id must be a string");
    spec.spec_id = it->get<std::string>();
  }
  const auto& fps = field(j, "fps");
  if (!fps.is_array() || fps.size() != 2) structural("fps must be [num, den]");
  spec.fps_num = as_u32(fps[0], "fps numerator");
  spec.fps_den = as_u32(fps[1], "fps denominator");
  if (spec.fps_num == 0 || spec.fps_den == 0) structural("fps terms must be positive");
  spec.output_type = frame_type_from_json(field(j, "output_type"));
  const auto local = intern_json_nodes(field(j, "nodes"), spec.nodes);
  const auto& frames = field(j, "frames");
  if (!frames.is_array()) structural("'frames' must be an array");
  spec.frames.reserve(frames.size());
  for (const auto& f : frames) {
    const auto idx = as_u32(f, "frame root");
    if (idx >= local.size()) structural("frame root " + std::to_string(idx) + " out of range");
    spec.frames.push_back(local[idx]);
  }
  const auto& term = field(j, "terminated");
  if (!term.is_boolean()) structural("terminated must be a boolean");
  spec.terminated = term.get<bool>();
  return spec;
}

VideoSpec deserialize_spec(std::string_view text) {
  json j;
  try {
    j = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw SpecFormatError(std::string("spec parse error: ") + e.what(), e.byte);
  }
  return spec_from_json(j);
}

}  // namespace reel
