#pragma once

#include <string>
#include <vector>

#include "blockperm/graph.h"
#include "blockperm/optimizer.h"

namespace blockperm {

/// Fitness-versus-iteration chart: best fitness as a step line, candidate
/// fitness as dots (thinned to at most `max_points` evenly spaced records).
std::string render_fitness_svg(const std::vector<TraceRecord> &records, size_t max_points = 4000);

/// Grayscale heatmap, row 0 at the top: 0 renders white, the largest entry
/// black.
std::string render_heatmap_svg(const AdjacencyMatrix &matrix, double cell_px = 12.0);

}  // namespace blockperm
