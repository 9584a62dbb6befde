#include "modweave/core/value.hpp"

#include <cmath>
#include <sstream>

#include "modweave/core/error.hpp"

namespace modweave {

Value Value::array(Array items) { return Value(Repr(std::move(items))); }

Value Value::record(std::vector<std::string> names, Array values) {
  if (names.size() != values.size()) {
    throw ShapeError("record has " + std::to_string(names.size()) +
                     " names but " + std::to_string(values.size()) +
                     " values");
  }
  return Value(Repr(RecordRepr{std::move(names), std::move(values)}));
}

bool Value::is_record() const {
  return std::holds_alternative<RecordRepr>(repr_);
}

const std::vector<std::string>& Value::field_names() const {
  return std::get<RecordRepr>(repr_).names;
}

const Value::Array& Value::field_values() const {
  return std::get<RecordRepr>(repr_).values;
}

bool operator==(const Value& a, const Value& b) { return a.repr_ == b.repr_; }

TypeSpec type_shape_of(const Value& v) {
  if (v.is_void()) return TypeSpec::void_type();
  if (v.is_int()) return TypeSpec::int_type();
  if (v.is_real()) return TypeSpec::real_type();
  if (v.is_bool()) return TypeSpec::bool_type();
  if (v.is_string()) return TypeSpec::string_type();
  if (v.is_array()) {
    const auto& items = v.items();
    if (items.empty()) return TypeSpec::array_of(TypeSpec::void_type());
    TypeSpec element = type_shape_of(items.front());
    for (std::size_t i = 1; i < items.size(); ++i) {
      // Empty nested arrays are compatible with any sibling array shape.
      if (!conforms(items[i], element)) {
        TypeSpec other = type_shape_of(items[i]);
        if (!conforms(items.front(), other)) {
          throw ShapeError("heterogeneous array: element 0 is " +
                           format_type(element) + ", element " +
                           std::to_string(i) + " is " + format_type(other));
        }
        element = other;
      }
    }
    return TypeSpec::array_of(element);
  }
  std::vector<TypeSpec::Field> fields;
  const auto& names = v.field_names();
  const auto& values = v.field_values();
  for (std::size_t i = 0; i < names.size(); ++i) {
    fields.push_back({names[i], type_shape_of(values[i])});
  }
  return TypeSpec::record("", std::move(fields));
}

bool conforms(const Value& v, const TypeSpec& type) {
  switch (type.kind()) {
    case TypeSpec::Kind::Primitive:
      switch (type.primitive()) {
        case PrimitiveKind::Int:
          return v.is_int();
        case PrimitiveKind::Real:
          return v.is_real();
        case PrimitiveKind::Bool:
          return v.is_bool();
        case PrimitiveKind::String:
          return v.is_string();
        case PrimitiveKind::Void:
          return v.is_void();
      }
      return false;
    case TypeSpec::Kind::Array:
      if (!v.is_array()) return false;
      for (const auto& item : v.items()) {
        if (!conforms(item, type.element())) return false;
      }
      return true;
    case TypeSpec::Kind::Record: {
      if (!v.is_record()) return false;
      const auto& fields = type.fields();
      const auto& names = v.field_names();
      if (names.size() != fields.size()) return false;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (names[i] != fields[i].name) return false;
        if (!conforms(v.field_values()[i], fields[i].type)) return false;
      }
      return true;
    }
  }
  return false;
}

std::string to_display(const Value& v) {
  std::ostringstream out;
  if (v.is_void()) {
    out << "void";
  } else if (v.is_int()) {
    out << v.as_int();
  } else if (v.is_real()) {
    out.precision(17);
    out << v.as_real();
  } else if (v.is_bool()) {
    out << (v.as_bool() ? "true" : "false");
  } else if (v.is_string()) {
    out << '"' << v.as_string() << '"';
  } else if (v.is_array()) {
    out << '[';
    for (std::size_t i = 0; i < v.items().size(); ++i) {
      if (i) out << ", ";
      out << to_display(v.items()[i]);
    }
    out << ']';
  } else {
    out << '{';
    for (std::size_t i = 0; i < v.field_names().size(); ++i) {
      if (i) out << ", ";
      out << v.field_names()[i] << ": " << to_display(v.field_values()[i]);
    }
    out << '}';
  }
  return out.str();
}

}  // namespace modweave
