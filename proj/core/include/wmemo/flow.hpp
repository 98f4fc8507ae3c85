#pragma once

#include <array>
#include <cstddef>
#include <string_view>

namespace wmemo {

/// Relation between a fetch and the one before it.
enum class FlowClass : unsigned char {
  intra_seq,
  intra_nonseq,
  inter_seq,
  inter_nonseq,
  first_fetch,
};

inline constexpr std::size_t kFlowClassCount = 5;

inline constexpr std::array<std::string_view, kFlowClassCount> kFlowClassNames{
    "intra_seq", "intra_nonseq", "inter_seq", "inter_nonseq", "first_fetch"};

inline std::string_view to_string(FlowClass f) {
  return kFlowClassNames[static_cast<std::size_t>(f)];
}

inline bool is_intra_line(FlowClass f) {
  return f == FlowClass::intra_seq || f == FlowClass::intra_nonseq;
}

}  // namespace wmemo
