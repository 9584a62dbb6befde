#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace modweave {

enum class PrimitiveKind { Int, Real, Bool, String, Void };

// Parameter and return types. Immutable; copies share structure.
class TypeSpec {
 public:
  enum class Kind { Primitive, Array, Record };
  struct Field;

  TypeSpec() : repr_(PrimitiveKind::Void) {}
  TypeSpec(PrimitiveKind kind) : repr_(kind) {}  // NOLINT: implicit by intent

  static TypeSpec int_type() { return PrimitiveKind::Int; }
  static TypeSpec real_type() { return PrimitiveKind::Real; }
  static TypeSpec bool_type() { return PrimitiveKind::Bool; }
  static TypeSpec string_type() { return PrimitiveKind::String; }
  static TypeSpec void_type() { return PrimitiveKind::Void; }
  static TypeSpec array_of(TypeSpec element);
  static TypeSpec record(std::string name, std::vector<Field> fields);

  Kind kind() const;
  bool is(PrimitiveKind p) const;
  bool is_void() const { return is(PrimitiveKind::Void); }

  // Accessors below require the matching kind().
  PrimitiveKind primitive() const;
  const TypeSpec& element() const;
  const std::string& record_name() const;
  const std::vector<Field>& fields() const;

  friend bool operator==(const TypeSpec& a, const TypeSpec& b);

 private:
  struct RecordBody;
  std::variant<PrimitiveKind, std::shared_ptr<const TypeSpec>,
               std::shared_ptr<const RecordBody>>
      repr_;
};

struct TypeSpec::Field {
  std::string name;
  TypeSpec type;

  friend bool operator==(const Field&, const Field&) = default;
};

// Type attribute grammar:
//   int | real | bool | string | void | array(T) | record:Name[{f:T,...}]
std::string format_type(const TypeSpec& type);
TypeSpec parse_type(std::string_view text);

// Reasons `type` is ill-formed, empty when it is fine. `void` is rejected
// anywhere below the top level, and record field names must be unique.
std::vector<std::string> type_problems(const TypeSpec& type);

}  // namespace modweave
