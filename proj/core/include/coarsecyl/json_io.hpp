#pragma once

#include <string>

#include "coarsecyl/angles.hpp"
#include "coarsecyl/coarse_paths.hpp"
#include "coarsecyl/constants.hpp"
#include "coarsecyl/cylinders.hpp"
#include "coarsecyl/graph.hpp"
#include "coarsecyl/lamination.hpp"
#include "coarsecyl/presentation.hpp"
#include "coarsecyl/slices.hpp"

namespace coarsecyl {

/// All emitters produce deterministic JSON: object keys sorted, arrays in
/// id order, 2-space indentation, trailing newline.

std::string graph_to_json(const FineGraph& g);
FineGraph graph_from_json(const std::string& text);

std::string model_to_json(const GraphModel& m);

std::string constants_to_json(const ConstantSet& c);
ConstantSet constants_from_json(const std::string& text);

std::string cpg_to_json(const CoarsePiecewiseGeodesic& f);
CoarsePiecewiseGeodesic cpg_from_json(const std::string& text, const ConstantSet& c);

std::string validation_to_json(const CpgValidation& v);

std::string cylinder_to_json(const Cylinder& c, bool include_witnesses = false);

std::string decomposition_to_json(const SliceDecomposition& d);

std::string triangle_to_json(const TriangleDecomposition& t);

std::string select_l_to_json(const SelectLReport& r);

std::string fineness_to_json(const FinenessReport& r);

std::string stability_to_json(const StabilityResult& r);

std::string skeleton_to_json(const SplittingSkeleton& s, const LaminationResult& lam);

/// DOT export; `highlight` vertices are drawn filled.
std::string graph_to_dot(const FineGraph& g, const std::vector<VertexId>& highlight = {});

/// DOT export coloring each slice of a decomposition.
std::string decomposition_to_dot(const FineGraph& g, const SliceDecomposition& d);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace coarsecyl
