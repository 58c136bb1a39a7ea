#pragma once

// Plain SVG charts on a fixed 800x600 canvas. Colors follow dataset (or
// target) order through a fixed palette.

#include <string>
#include <vector>

#include "tsxfer/diversity.hpp"
#include "tsxfer/relate.hpp"

namespace tsxfer::svg {

/// Scatter of the projections, one color per dataset in first-seen order.
std::string pca_scatter(const PcaResult& pca, const std::string& title);

/// Points and fitted line per target for fits sharing characteristic,
/// metric and mode.
std::string relation_plot(const std::vector<const RelationFit*>& fits, const std::string& title);

}  // namespace tsxfer::svg
