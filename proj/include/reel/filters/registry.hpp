#pragma once

#include <span>
#include <string_view>
#include <variant>

#include "reel/codec/raster.hpp"
#include "reel/ir/typecheck.hpp"

namespace reel::filters {

// The static filter table. Every name has a signature (used by the type
// checker and the push endpoint) and an evaluator (used by the engine and the
// reference renderer). Parameters are positional:
//
//   pixfmt(frame, from: str, to: str)
//   draw_rectangle(frame, pt1: pair, pt2: pair, color, thickness: int)
//   draw_text(frame, text: str, org: pair, scale: int, color)
//   crop(frame, x: int, y: int, w: int, h: int)
//   scale_nearest(frame, w: int, h: int)
//   hstack(frame, frame)
//   vstack(frame, frame)
//   overlay_mask(frame, mask: frame, color, alpha: int)
//   solid(width: int, height: int, pixfmt: str, color)

const SignatureTable& signature_table();

/// Evaluated argument: frame inputs are decoded rasters, the rest constants.
using EvalArg = std::variant<RasterPtr, Value>;

/// Runs filter `name`. Arguments must already satisfy the signature; throws
/// FilterError for unknown names or invalid values.
Raster apply_filter(std::string_view name, std::span<const EvalArg> args);

}  // namespace reel::filters
