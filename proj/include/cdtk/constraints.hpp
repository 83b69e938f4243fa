#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace cdtk::ocl {

enum class RelOp { Lt, Le, Gt, Ge, Eq, Ne };

std::string_view to_string(RelOp op);

enum class ExprKind {
    Implies,
    Or,
    And,
    Not,
    Rel,
    IsInState,
    PropRef,
    IntLit,
    RealLit,
    BoolLit,
    EnumLit,
};

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct Expr {
    ExprKind kind = ExprKind::BoolLit;
    ExprPtr left;                 // binary ops; sole operand of Not
    ExprPtr right;
    RelOp rel_op = RelOp::Eq;     // Rel
    std::string name;             // IsInState argument, PropRef, EnumLit
    long long int_value = 0;      // IntLit
    double real_value = 0.0;      // RealLit
    bool bool_value = false;      // BoolLit
};

bool equal(const Expr& a, const Expr& b);

struct Constraint {
    std::string context_class;
    std::string name;
    ExprPtr body;
};

struct ConstraintSet {
    std::vector<Constraint> constraints;

    std::set<std::string> states_mentioned() const;
};

/// Parses a constraint file. Precedence, loosest first: implies, or, and,
/// relational, not; `implies` is right-associative.
ConstraintSet parse_constraints(std::string_view bytes);

std::string pretty_print(const Expr& expr);
std::string pretty_print(const Constraint& constraint);

struct TypedValue {
    enum class Type { Int, Real, Bool, Enum };

    Type type = Type::Int;
    long long int_value = 0;
    double real_value = 0.0;
    bool bool_value = false;
    std::string enum_value;

    static TypedValue of_int(long long v);
    static TypedValue of_real(double v);
    static TypedValue of_bool(bool v);
    static TypedValue of_enum(std::string v);

    bool is_numeric() const { return type == Type::Int || type == Type::Real; }
    double as_number() const;

    bool operator==(const TypedValue&) const = default;
};

std::string to_string(const TypedValue& value);

/// The slice of an instance model the evaluator needs.
struct EvalContext {
    std::string current_state;
    std::map<std::string, TypedValue> properties;
};

/// Strict two-valued evaluation: every referenced property is resolved even
/// on a vacuous branch, so extraction gaps always surface. Throws
/// Error(MissingProperty) or Error(RuntimeTypeError).
bool evaluate(const Constraint& constraint, const EvalContext& instance);

enum class Verdict { Pass, Fail, Error };

std::string_view to_string(Verdict verdict);

struct VerdictEntry {
    std::string constraint;
    Verdict verdict = Verdict::Pass;
    std::string detail;   // populated for error verdicts
};

/// One verdict per constraint in declaration order; per-constraint errors do
/// not abort the rest.
std::vector<VerdictEntry> evaluate_set(const ConstraintSet& set, const EvalContext& instance);

/// Property names referenced by the expression, first occurrence order.
std::vector<std::string> property_refs(const Expr& expr);

} // namespace cdtk::ocl
