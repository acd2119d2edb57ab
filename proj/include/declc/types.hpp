#pragma once

#include <optional>
#include <string>

namespace declc {

/// HybridC value types: int and bool scalars, class objects, pointers of
/// any depth over those, and one-dimensional fixed-size arrays.
struct Type {
  enum class Base { Error, Void, Int, Bool, Class, Null, Function, Method };

  Base base = Base::Error;
  std::string class_name;  // for Base::Class
  int depth = 0;           // pointer indirections
  std::optional<int> array_size;

  static Type of(Base b) {
    Type t;
    t.base = b;
    return t;
  }
  static Type int_type() { return of(Base::Int); }
  static Type bool_type() { return of(Base::Bool); }
  static Type void_type() { return of(Base::Void); }
  static Type null_type() { return of(Base::Null); }
  static Type error_type() { return of(Base::Error); }
  static Type function_type() { return of(Base::Function); }
  static Type method_type() { return of(Base::Method); }
  static Type class_type(std::string name) {
    Type t = of(Base::Class);
    t.class_name = std::move(name);
    return t;
  }

  bool is_error() const { return base == Base::Error; }
  bool is_array() const { return array_size.has_value(); }
  bool is_pointer() const { return depth > 0 && !is_array(); }
  bool is_int() const { return base == Base::Int && depth == 0 && !is_array(); }
  bool is_bool() const { return base == Base::Bool && depth == 0 && !is_array(); }
  bool is_object() const { return base == Base::Class && depth == 0 && !is_array(); }
  bool is_callable() const { return base == Base::Function || base == Base::Method; }
  /// Assignable storage: scalars and pointers. Writes to these may rebind
  /// l-values that read them.
  bool is_assignable() const {
    return !is_array() && (depth > 0 || base == Base::Int || base == Base::Bool);
  }

  Type pointee() const {
    Type t = *this;
    t.array_size.reset();
    t.depth = depth > 0 ? depth - 1 : 0;
    return t;
  }
  Type element() const {
    Type t = *this;
    t.array_size.reset();
    return t;
  }
  Type pointer_to() const {
    Type t = *this;
    t.array_size.reset();
    ++t.depth;
    return t;
  }

  std::string str() const;

  friend bool operator==(const Type&, const Type&) = default;
};

/// Whether a value of type `from` may be stored into storage of type `to`.
/// Identical types are compatible, null converts to any pointer, and an
/// array converts to a pointer to its element type. With `int_bool` set,
/// int and bool convert into each other.
bool assignable_from(const Type& to, const Type& from, bool int_bool = false);

}  // namespace declc
