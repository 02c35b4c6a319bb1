#pragma once

#include <functional>

#include "reel/codec/raster.hpp"
#include "reel/ir/expr.hpp"

namespace reel {

using SourceLookup = std::function<RasterPtr(const SourceRef&)>;

/// Evaluates the frame expression at `root`, visiting reachable nodes in
/// ascending id order (a topological order). Each source frame is looked up
/// once per call. Throws filters::FilterError from filters.
RasterPtr evaluate(const NodeTable& table, NodeId root, const SourceLookup& lookup);

}  // namespace reel
