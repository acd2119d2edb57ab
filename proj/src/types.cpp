#include "declc/types.hpp"

namespace declc {

std::string Type::str() const {
  std::string s;
  switch (base) {
    case Base::Error: s = "<error>"; break;
    case Base::Void: s = "void"; break;
    case Base::Int: s = "int"; break;
    case Base::Bool: s = "bool"; break;
    case Base::Class: s = class_name; break;
    case Base::Null: return "null";
    case Base::Function: return "<function>";
    case Base::Method: return "<method>";
  }
  s.append(static_cast<std::size_t>(depth), '*');
  if (array_size) s += "[" + std::to_string(*array_size) + "]";
  return s;
}

bool assignable_from(const Type& to, const Type& from, bool int_bool) {
  if (to.is_error() || from.is_error()) return true;  // already diagnosed
  if (to.is_array() || !to.is_assignable()) return false;
  if (from.base == Type::Base::Null) return to.is_pointer();
  if (from.is_array()) {
    return to.is_pointer() && to == from.element().pointer_to();
  }
  if (to == from) return true;
  if (int_bool) {
    return (to.is_int() && from.is_bool()) || (to.is_bool() && from.is_int());
  }
  return false;
}

}  // namespace declc
