#include "declc/memory.hpp"

#include "declc/fault.hpp"

namespace declc {

namespace {

int decl_size(const Type& t, int class_size) {
  if (t.is_array()) return *t.array_size;
  if (t.is_object()) return class_size;
  return 1;
}

Value default_value(const Type& t) { return t.is_pointer() ? kNullCell : 0; }

}  // namespace

Memory::Memory(const Program& prog) : prog_(prog) {
  for (const auto& c : prog.classes) layout(c.name);
}

int Memory::layout(const std::string& cls) {
  auto it = sizes_.find(cls);
  if (it != sizes_.end()) return it->second;
  const ClassDecl* c = prog_.find_class(cls);
  int size = 1;
  std::vector<int> offs;
  if (c) {
    for (const auto& f : c->fields) {
      offs.push_back(size);
      int inner = f.type.is_object() ? layout(f.type.class_name) : 0;
      size += decl_size(f.type, inner);
    }
  }
  offsets_[cls] = offs;
  sizes_[cls] = size;
  return size;
}

int Memory::class_size(const std::string& cls) const {
  auto it = sizes_.find(cls);
  return it == sizes_.end() ? 1 : it->second;
}

CellId Memory::alloc(const std::string& name, const Type& type, CellId object) {
  CellInfo c;
  c.name = name;
  c.type = type;
  c.value = default_value(type);
  c.object = object;
  c.block = static_cast<CellId>(cells_.size());
  cells_.push_back(std::move(c));
  return cells_.back().block;
}

CellId Memory::alloc_decl(const std::string& name, const Type& type, CellId object) {
  if (type.is_array()) {
    Type elem = type.element();
    CellId first = static_cast<CellId>(cells_.size());
    for (int k = 0; k < *type.array_size; ++k) {
      CellId id = alloc(name + "[" + std::to_string(k) + "]", elem, object);
      cells_[id].block = first;
      cells_[id].block_size = *type.array_size;
    }
    return first;
  }
  if (type.is_object()) {
    CellId h = alloc(name, type, object);
    cells_[h].header = true;
    const ClassDecl* c = prog_.find_class(type.class_name);
    if (c) {
      for (const auto& f : c->fields) {
        CellId m = alloc_decl(name + "." + f.name, f.type, h);
        (void)m;
      }
    }
    return h;
  }
  return alloc(name, type, object);
}

CellId Memory::member(CellId header, int field) const {
  const CellInfo& h = cell(header);
  auto it = offsets_.find(h.type.class_name);
  if (!h.header || it == offsets_.end() || field < 0 ||
      field >= static_cast<int>(it->second.size())) {
    throw RuntimeFault("member access on a non-object cell '" + h.name + "'");
  }
  return header + it->second[static_cast<std::size_t>(field)];
}

std::vector<CellId> Memory::object_chain(CellId obj) const {
  std::vector<CellId> out;
  for (CellId o = obj; o != kNullCell; o = cell(o).object) out.push_back(o);
  return out;
}

const CellInfo& Memory::cell(CellId id) const {
  if (!valid(id)) throw RuntimeFault("invalid cell reference " + std::to_string(id));
  return cells_[static_cast<std::size_t>(id)];
}

void Memory::set(CellId id, Value v) {
  cell(id);
  cells_[static_cast<std::size_t>(id)].value = v;
}

std::string Memory::format(Value v, const Type& type) const {
  if (type.is_pointer()) {
    if (v == kNullCell) return "null";
    return valid(v) ? "&" + cell(v).name : "&?" + std::to_string(v);
  }
  if (type.is_bool()) return v ? "true" : "false";
  return std::to_string(v);
}

std::string Memory::format(CellId id) const {
  const CellInfo& c = cell(id);
  if (c.header) return "";
  return format(c.value, c.type);
}

void Memory::mark_local(CellId first) {
  for (std::size_t i = static_cast<std::size_t>(first); i < cells_.size(); ++i) cells_[i].local = true;
}

std::vector<std::pair<std::string, std::string>> Memory::snapshot() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (!cells_[i].header && !cells_[i].local) out.emplace_back(cells_[i].name, format(static_cast<CellId>(i)));
  }
  return out;
}

}  // namespace declc
