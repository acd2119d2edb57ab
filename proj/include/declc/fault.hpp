#pragma once

#include <stdexcept>
#include <string>

namespace declc {

/// An error raised while executing a program. `unresolvable` marks l-value
/// bindings that fail (null dereference, index out of bounds); installers
/// treat those as dormant instead of fatal.
class RuntimeFault : public std::runtime_error {
 public:
  RuntimeFault(const std::string& msg, int line = 0, int column = 0, bool unresolvable = false)
      : std::runtime_error(msg), line_(line), column_(column), unresolvable_(unresolvable) {}

  int line() const { return line_; }
  int column() const { return column_; }
  bool unresolvable() const { return unresolvable_; }

  std::string located() const {
    if (line_ <= 0) return what();
    return std::to_string(line_) + ":" + std::to_string(column_) + ": " + what();
  }

 private:
  int line_;
  int column_;
  bool unresolvable_;
};

}  // namespace declc
