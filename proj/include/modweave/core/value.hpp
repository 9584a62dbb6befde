#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "modweave/core/type_spec.hpp"

namespace modweave {

struct VoidValue {
  friend bool operator==(VoidValue, VoidValue) { return true; }
};

// Runtime data carried across ports. Equality is structural; reals compare
// with ==, so runs are expected to be bit-reproducible.
class Value {
 public:
  using Array = std::vector<Value>;

  Value() = default;
  static Value integer(std::int64_t v) { return Value(Repr(v)); }
  static Value real(double v) { return Value(Repr(v)); }
  static Value boolean(bool v) { return Value(Repr(v)); }
  static Value string(std::string v) { return Value(Repr(std::move(v))); }
  static Value array(Array items);
  static Value record(std::vector<std::string> names, Array values);

  bool is_void() const { return std::holds_alternative<VoidValue>(repr_); }
  bool is_int() const { return std::holds_alternative<std::int64_t>(repr_); }
  bool is_real() const { return std::holds_alternative<double>(repr_); }
  bool is_bool() const { return std::holds_alternative<bool>(repr_); }
  bool is_string() const { return std::holds_alternative<std::string>(repr_); }
  bool is_array() const { return std::holds_alternative<Array>(repr_); }
  bool is_record() const;

  std::int64_t as_int() const { return std::get<std::int64_t>(repr_); }
  double as_real() const { return std::get<double>(repr_); }
  bool as_bool() const { return std::get<bool>(repr_); }
  const std::string& as_string() const { return std::get<std::string>(repr_); }
  const Array& items() const { return std::get<Array>(repr_); }
  const std::vector<std::string>& field_names() const;
  const Array& field_values() const;

  friend bool operator==(const Value& a, const Value& b);

 private:
  struct RecordRepr {
    std::vector<std::string> names;
    Array values;
    friend bool operator==(const RecordRepr&, const RecordRepr&) = default;
  };
  using Repr = std::variant<VoidValue, std::int64_t, double, bool, std::string,
                            Array, RecordRepr>;

  explicit Value(Repr r) : repr_(std::move(r)) {}

  Repr repr_;
};

// The unique TypeSpec `v` has. Records get an empty name; an empty array
// reports array(void). Throws ShapeError for heterogeneous arrays.
TypeSpec type_shape_of(const Value& v);

// Whether `v` fits `type`. Record names are ignored (values carry none) and
// an empty array fits every array type.
bool conforms(const Value& v, const TypeSpec& type);

// Short human-readable rendering, e.g. `[1, 2]` or `{x: 1.5}`.
std::string to_display(const Value& v);

}  // namespace modweave
