#pragma once

#include <string>
#include <utility>
#include <vector>

#include "declc/memory.hpp"

namespace declc {

enum class Status { Ok, Fault };

struct RunResult {
  Status status = Status::Ok;
  Value exit_value = 0;
  std::string fault;
  std::vector<std::pair<std::string, std::string>> memory;  // final snapshot
  std::size_t registrations_after_teardown = 0;
};

}  // namespace declc
