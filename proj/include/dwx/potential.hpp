#pragma once

#include "dwx/grid.hpp"

namespace dwx {

enum class WellShape { square, gaussian };

// Two wells on a zero baseline. Each well dips to -depth.
struct DoubleWellSpec {
  WellShape shape = WellShape::square;
  double center_a = -5.0;
  double center_b = 5.0;
  double depth_a = 1.0;
  double depth_b = 1.0;
  double width_a = 2.0;
  double width_b = 2.0;
};

const char* shape_name(WellShape s);

// Positive widths, non-negative depths, non-overlapping supports.
void validate_spec(const DoubleWellSpec& spec);

double potential_value(const DoubleWellSpec& spec, double x);

// Throws well-outside-box unless both wells sit at least 5*max(width)
// away from the box edges.
Vec sample_potential(const DoubleWellSpec& spec, const Grid& grid);
void check_margin(const DoubleWellSpec& spec, const Grid& grid);

// Position of the potential maximum between the two centers. For a flat
// square barrier this is the middle of the plateau.
double barrier_midpoint(const DoubleWellSpec& spec);

// Edge of a well facing the other well.
double inner_edge_a(const DoubleWellSpec& spec);
double inner_edge_b(const DoubleWellSpec& spec);

// Copy with the other well switched off (depth 0).
DoubleWellSpec only_well_a(DoubleWellSpec spec);
DoubleWellSpec only_well_b(DoubleWellSpec spec);

// Copy with the wells re-centred at -d/2 and +d/2.
DoubleWellSpec with_separation(DoubleWellSpec spec, double d);

// Copy with the edge-to-edge barrier set to w, wells symmetric about the
// current midpoint of the two inner edges.
DoubleWellSpec with_barrier_width(DoubleWellSpec spec, double w);

}  // namespace dwx
