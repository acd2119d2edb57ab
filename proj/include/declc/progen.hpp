#pragma once

#include <cstdint>
#include <string>

namespace declc::progen {

struct Limits {
  int max_constructs = 6;
  int max_writes = 30;
  int max_array = 8;
  int max_members = 2;
};

/// A random, well-typed HybridC program. The same seed always yields the
/// same text. Cells are layered (inputs, first-tier outputs, second-tier
/// outputs, counters) so constraints never feed back into what they read;
/// monitor and precondition bodies only bump their own counter.
std::string generate(std::uint64_t seed, const Limits& limits = {});

}  // namespace declc::progen
