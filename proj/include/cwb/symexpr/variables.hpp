#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cwb::sym {

/// Interned scalar variable. Ordering of ids is registration order and
/// defines the graded-lex monomial order used for canonical forms.
struct Var {
  std::uint32_t id = 0;
  friend bool operator==(Var a, Var b) { return a.id == b.id; }
  friend auto operator<=>(Var a, Var b) { return a.id <=> b.id; }
};

/// Process-wide variable registry. Thread safe.
class Variables {
 public:
  static Var intern(std::string_view name);
  static std::optional<Var> find(std::string_view name);
  static const std::string& name(Var v);

  // Declares that d(base)/d(wrt) is the variable `derivative`. Used for
  // unknown component functions whose jets appear as separate symbols.
  static void set_derivative(Var base, Var wrt, Var derivative);
  // Marks `v` as depending on coordinates with no registered derivative:
  // differentiating it raises DependencyError.
  static void set_opaque(Var v);

  enum class DerivKind { Constant, Mapped, Opaque };
  struct DerivRule {
    DerivKind kind = DerivKind::Constant;
    Var derivative{};
  };
  static DerivRule derivative_of(Var base, Var wrt);
  static bool has_dependencies(Var v);
};

}  // namespace cwb::sym
