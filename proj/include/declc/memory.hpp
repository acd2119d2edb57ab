#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "declc/ast.hpp"

namespace declc {

using CellId = std::int64_t;
constexpr CellId kNullCell = -1;

/// Scalars hold their number (bool as 0/1); pointers hold the id of the
/// cell they point to, or kNullCell.
using Value = std::int64_t;

/// One storage location. Arrays are contiguous runs of element cells;
/// objects are a header cell followed by their members.
struct CellInfo {
  std::string name;   // memory home, e.g. "x", "p[2]", "s.origin.px"
  Type type;          // element type for array cells, class type for headers
  Value value = 0;
  CellId object = kNullCell;  // header of the enclosing object
  CellId block = 0;           // first cell of the enclosing array run (self otherwise)
  int block_size = 1;
  bool header = false;
  bool local = false;  // parameter or local of some call frame
};

class Memory {
 public:
  explicit Memory(const Program& prog);

  CellId alloc(const std::string& name, const Type& type, CellId object = kNullCell);
  /// Allocates any declared type: scalars, pointers, arrays or objects.
  /// Returns the first cell (the header for objects).
  CellId alloc_decl(const std::string& name, const Type& type, CellId object = kNullCell);

  /// Member `field` of the object whose header is `header`.
  CellId member(CellId header, int field) const;
  /// Header cells of `obj` and every enclosing object, innermost first.
  std::vector<CellId> object_chain(CellId obj) const;

  /// Flags `first` and every cell allocated after it as frame storage.
  void mark_local(CellId first);

  const CellInfo& cell(CellId id) const;
  bool valid(CellId id) const { return id >= 0 && id < static_cast<CellId>(cells_.size()); }
  Value get(CellId id) const { return cell(id).value; }
  void set(CellId id, Value v);
  std::size_t size() const { return cells_.size(); }

  /// Value of a cell rendered for traces: numbers, true/false, &name or null.
  std::string format(CellId id) const;
  std::string format(Value v, const Type& type) const;

  /// (name, value) of every non-header, non-frame cell, in allocation order.
  std::vector<std::pair<std::string, std::string>> snapshot() const;

  int class_size(const std::string& cls) const;

 private:
  int layout(const std::string& cls);

  const Program& prog_;
  std::vector<CellInfo> cells_;
  std::map<std::string, std::vector<int>> offsets_;  // class -> field offsets from header
  std::map<std::string, int> sizes_;
};

}  // namespace declc
