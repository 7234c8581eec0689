#pragma once

#include <string_view>

#include "streetlab/rdf/dataset.hpp"

namespace streetlab::behavior {

/// Roots of the built-in trees.
namespace library {
inline constexpr std::string_view kCrossing = "https://streetlab.dev/behaviors/crossing";
inline constexpr std::string_view kDrive = "https://streetlab.dev/behaviors/drive";
inline constexpr std::string_view kStroll = "https://streetlab.dev/behaviors/stroll";
inline constexpr std::string_view kGraph = "https://streetlab.dev/behaviors";
}  // namespace library

/// TriG text of the built-in trees, all in the library graph.
std::string_view builtin_behaviors_trig();
rdf::Dataset builtin_behaviors();

}  // namespace streetlab::behavior
