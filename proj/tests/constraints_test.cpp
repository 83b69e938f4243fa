#include "cdtk/constraints.hpp"

#include "test_util.hpp"

#include <doctest.h>

#include <array>
#include <memory>
#include <random>

using namespace cdtk;

namespace {

const ocl::Constraint& parse_one(ocl::ConstraintSet& set, std::string_view src) {
    set = ocl::parse_constraints(src);
    REQUIRE(set.constraints.size() == 1);
    return set.constraints[0];
}

ocl::EvalContext taxiing_at(double airspeed) {
    ocl::EvalContext ctx;
    ctx.current_state = "Taxiing";
    ctx.properties["airspeed"] = ocl::TypedValue::of_int(static_cast<long long>(airspeed));
    return ctx;
}

} // namespace

TEST_CASE("the taxi speed constraint parses into the documented shape") {
    ocl::ConstraintSet set;
    const ocl::Constraint& c = parse_one(
        set,
        "context Aircraft inv taxi_speed:\n"
        "  self.oclIsInState(Taxiing) implies self.airspeed >= 0 and self.airspeed <= 50\n");
    CHECK(c.context_class == "Aircraft");
    CHECK(c.name == "taxi_speed");
    REQUIRE(c.body->kind == ocl::ExprKind::Implies);
    CHECK(c.body->left->kind == ocl::ExprKind::IsInState);
    CHECK(c.body->left->name == "Taxiing");
    REQUIRE(c.body->right->kind == ocl::ExprKind::And);
    CHECK(c.body->right->left->kind == ocl::ExprKind::Rel);
    CHECK(c.body->right->left->rel_op == ocl::RelOp::Ge);
    CHECK(ocl::pretty_print(c) ==
          "context Aircraft inv taxi_speed: self.oclIsInState(Taxiing) implies "
          "self.airspeed >= 0 and self.airspeed <= 50");
}

TEST_CASE("operator precedence binds not, relations, and, or, implies in that order") {
    ocl::ConstraintSet set;
    const ocl::Constraint& c1 = parse_one(set, "context Aircraft inv a: self.a or self.b and self.c");
    REQUIRE(c1.body->kind == ocl::ExprKind::Or);
    CHECK(c1.body->right->kind == ocl::ExprKind::And);

    const ocl::Constraint& c2 = parse_one(set, "context Aircraft inv a: not self.x = 1");
    REQUIRE(c2.body->kind == ocl::ExprKind::Not);
    CHECK(c2.body->left->kind == ocl::ExprKind::Rel);

    const ocl::Constraint& c3 =
        parse_one(set, "context Aircraft inv a: self.a implies self.b implies self.c");
    REQUIRE(c3.body->kind == ocl::ExprKind::Implies);
    CHECK(c3.body->left->kind == ocl::ExprKind::PropRef);
    CHECK(c3.body->right->kind == ocl::ExprKind::Implies);

    const ocl::Constraint& c4 = parse_one(set, "context Aircraft inv a: (self.a or self.b) and self.c");
    REQUIRE(c4.body->kind == ocl::ExprKind::And);
    CHECK(c4.body->left->kind == ocl::ExprKind::Or);
    CHECK(ocl::pretty_print(*c4.body) == "(self.a or self.b) and self.c");
}

TEST_CASE("number literals keep their Int or Real type, signs included") {
    ocl::ConstraintSet set;
    const ocl::Constraint& c = parse_one(
        set, "context Aircraft inv a: self.roll >= -30.0 and self.roll <= 30.0 and self.n < 45");
    const ocl::Expr& ge = *c.body->left->left;
    REQUIRE(ge.kind == ocl::ExprKind::Rel);
    CHECK(ge.right->kind == ocl::ExprKind::RealLit);
    CHECK(ge.right->real_value == -30.0);
    const ocl::Expr& lt = *c.body->right;
    CHECK(lt.right->kind == ocl::ExprKind::IntLit);
    CHECK(lt.right->int_value == 45);

    const ocl::Constraint& ne = parse_one(set, "context Aircraft inv a: self.a <> 1");
    CHECK(ne.body->rel_op == ocl::RelOp::Ne);
    CHECK(ocl::pretty_print(*ne.body) == "self.a <> 1");
}

TEST_CASE("comments and blank lines are ignored; empty files parse to empty sets") {
    ocl::ConstraintSet set = ocl::parse_constraints(
        "-- header comment\n"
        "\n"
        "context Aircraft inv a: true -- trailing\n"
        "-- between\n"
        "context Aircraft inv b: false\n");
    CHECK(set.constraints.size() == 2);
    CHECK(ocl::parse_constraints("").constraints.empty());
    CHECK(ocl::parse_constraints("-- nothing but comments\n").constraints.empty());
}

TEST_CASE("states_mentioned collects oclIsInState arguments") {
    ocl::ConstraintSet set = ocl::parse_constraints(
        "context Aircraft inv a: self.oclIsInState(Taxiing) implies self.x = 1\n"
        "context Aircraft inv b: self.oclIsInState(Cruise) or self.oclIsInState(Taxiing)\n");
    CHECK(set.states_mentioned() == std::set<std::string>{"Taxiing", "Cruise"});
}

TEST_CASE("constraint files reject bad declarations") {
    check_error([] { ocl::parse_constraints("context Aircraft inv a: true\n"
                                            "context Aircraft inv a: false\n"); },
                ErrorKind::DuplicateConstraintName);
    check_error([] { ocl::parse_constraints("context Rocket inv a: true\n"); },
                ErrorKind::SchemaError);
    check_error([] { ocl::parse_constraints("context Aircraft inv a true\n"); },
                ErrorKind::SyntaxError);
    check_error([] { ocl::parse_constraints("context Aircraft inv a:\n"); }, ErrorKind::SyntaxError);
    check_error([] { ocl::parse_constraints("context Aircraft inv a: self.\n"); },
                ErrorKind::SyntaxError);
    check_error([] { ocl::parse_constraints("context Aircraft inv a: self.x >\n"); },
                ErrorKind::SyntaxError);
    check_error([] { ocl::parse_constraints("context Aircraft inv a: (true\n"); },
                ErrorKind::SyntaxError);
    check_error([] { ocl::parse_constraints("context Aircraft inv a: true ^ false\n"); },
                ErrorKind::SyntaxError);
    check_error([] { ocl::parse_constraints("inv a: true\n"); }, ErrorKind::SyntaxError);
}

TEST_CASE("relations between incompatible literals fail at parse time") {
    check_error([] { ocl::parse_constraints("context Aircraft inv a: 1 = true\n"); },
                ErrorKind::TypeError);
    check_error([] { ocl::parse_constraints("context Aircraft inv a: true < false\n"); },
                ErrorKind::TypeError);
    // Numeric pairs are fine in either type.
    CHECK(ocl::parse_constraints("context Aircraft inv a: 1 < 2.5\n").constraints.size() == 1);
}

TEST_CASE("parse errors carry line and column") {
    try {
        ocl::parse_constraints("context Aircraft inv a: true\ncontext Aircraft inv b: @\n");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SyntaxError);
        CHECK(e.line() == 2);
    }
}

TEST_CASE("taxi speed holds at 30, breaks at 60, and holds off-state") {
    ocl::ConstraintSet set = ocl::parse_constraints(
        "context Aircraft inv taxi_speed:\n"
        "  self.oclIsInState(Taxiing) implies self.airspeed >= 0 and self.airspeed <= 50\n");
    const ocl::Constraint& c = set.constraints[0];

    CHECK(ocl::evaluate(c, taxiing_at(30)));
    CHECK(!ocl::evaluate(c, taxiing_at(60)));

    ocl::EvalContext cruising;
    cruising.current_state = "Cruise";
    cruising.properties["airspeed"] = ocl::TypedValue::of_int(999);
    CHECK(ocl::evaluate(c, cruising));
}

TEST_CASE("boolean connectives follow their truth tables") {
    auto eval_with = [](std::string_view src, bool p, bool q) {
        ocl::ConstraintSet set = ocl::parse_constraints(src);
        ocl::EvalContext ctx;
        ctx.properties["p"] = ocl::TypedValue::of_bool(p);
        ctx.properties["q"] = ocl::TypedValue::of_bool(q);
        return ocl::evaluate(set.constraints[0], ctx);
    };
    const std::string implies = "context Aircraft inv a: self.p implies self.q\n";
    CHECK(eval_with(implies, false, false));
    CHECK(eval_with(implies, false, true));
    CHECK(!eval_with(implies, true, false));
    CHECK(eval_with(implies, true, true));

    const std::string lor = "context Aircraft inv a: self.p or self.q\n";
    CHECK(!eval_with(lor, false, false));
    CHECK(eval_with(lor, true, false));

    const std::string land = "context Aircraft inv a: self.p and self.q\n";
    CHECK(!eval_with(land, true, false));
    CHECK(eval_with(land, true, true));

    const std::string lnot = "context Aircraft inv a: not self.p\n";
    CHECK(eval_with(lnot, false, false));
    CHECK(!eval_with(lnot, true, false));
}

TEST_CASE("numeric comparison promotes Int to Real and keeps Real equality exact") {
    ocl::ConstraintSet set;
    ocl::EvalContext ctx;
    ctx.properties["x"] = ocl::TypedValue::of_real(22.0);
    CHECK(ocl::evaluate(parse_one(set, "context Aircraft inv a: self.x = 22"), ctx));
    CHECK(ocl::evaluate(parse_one(set, "context Aircraft inv a: self.x < 22.5"), ctx));

    ctx.properties["x"] = ocl::TypedValue::of_real(0.1 + 0.2);
    CHECK(!ocl::evaluate(parse_one(set, "context Aircraft inv a: self.x = 0.3"), ctx));

    ctx.properties["n"] = ocl::TypedValue::of_int(5);
    CHECK(ocl::evaluate(parse_one(set, "context Aircraft inv a: self.n = 5"), ctx));
    CHECK(!ocl::evaluate(parse_one(set, "context Aircraft inv a: self.n <> 5"), ctx));
}

TEST_CASE("bool and enum values compare for equality only") {
    ocl::ConstraintSet set;
    ocl::EvalContext ctx;
    ctx.properties["flag"] = ocl::TypedValue::of_bool(true);
    ctx.properties["phase"] = ocl::TypedValue::of_enum("CRUISE");
    CHECK(ocl::evaluate(parse_one(set, "context Aircraft inv a: self.flag = true"), ctx));
    CHECK(ocl::evaluate(parse_one(set, "context Aircraft inv a: self.phase = CRUISE"), ctx));
    CHECK(ocl::evaluate(parse_one(set, "context Aircraft inv a: self.phase <> DESCENT"), ctx));

    ocl::ConstraintSet ordering;
    parse_one(ordering, "context Aircraft inv a: self.flag < true");
    check_error([&] { ocl::evaluate(ordering.constraints[0], ctx); }, ErrorKind::RuntimeTypeError);

    ocl::ConstraintSet mixed;
    parse_one(mixed, "context Aircraft inv a: self.flag = CRUISE");
    check_error([&] { ocl::evaluate(mixed.constraints[0], ctx); }, ErrorKind::RuntimeTypeError);
}

TEST_CASE("evaluation is strict: vacuous branches still resolve properties") {
    ocl::ConstraintSet set;
    ocl::EvalContext ctx;
    ctx.current_state = "Cruise";
    // The guard is false, but the missing property must still surface.
    parse_one(set, "context Aircraft inv a: self.oclIsInState(Taxiing) implies self.airspeed <= 50");
    check_error([&] { ocl::evaluate(set.constraints[0], ctx); }, ErrorKind::MissingProperty);

    ctx.properties["p"] = ocl::TypedValue::of_bool(false);
    parse_one(set, "context Aircraft inv a: self.p and self.q");
    check_error([&] { ocl::evaluate(set.constraints[0], ctx); }, ErrorKind::MissingProperty);
}

TEST_CASE("numbers in boolean positions are runtime type errors") {
    ocl::ConstraintSet set;
    ocl::EvalContext ctx;
    ctx.properties["airspeed"] = ocl::TypedValue::of_int(10);
    parse_one(set, "context Aircraft inv a: self.airspeed implies true");
    check_error([&] { ocl::evaluate(set.constraints[0], ctx); }, ErrorKind::RuntimeTypeError);
    parse_one(set, "context Aircraft inv a: not self.airspeed");
    check_error([&] { ocl::evaluate(set.constraints[0], ctx); }, ErrorKind::RuntimeTypeError);
}

TEST_CASE("evaluate_set reports pass, fail, and error verdicts per constraint") {
    ocl::ConstraintSet set = ocl::parse_constraints(
        "context Aircraft inv ok: self.x = 1\n"
        "context Aircraft inv bad: self.x = 2\n"
        "context Aircraft inv broken: self.missing = 3\n");
    ocl::EvalContext ctx;
    ctx.properties["x"] = ocl::TypedValue::of_int(1);
    std::vector<ocl::VerdictEntry> verdicts = ocl::evaluate_set(set, ctx);
    REQUIRE(verdicts.size() == 3);
    CHECK(verdicts[0].constraint == "ok");
    CHECK(verdicts[0].verdict == ocl::Verdict::Pass);
    CHECK(verdicts[1].verdict == ocl::Verdict::Fail);
    CHECK(verdicts[2].verdict == ocl::Verdict::Error);
    CHECK(verdicts[2].detail.find("missing") != std::string::npos);
}

TEST_CASE("property_refs lists names in first-occurrence order") {
    ocl::ConstraintSet set;
    parse_one(set, "context Aircraft inv a: self.b > 0 and self.a > self.b and self.c = 1");
    CHECK(ocl::property_refs(*set.constraints[0].body) ==
          std::vector<std::string>{"b", "a", "c"});
}

// Randomized cross-check of the evaluator against a direct recursive
// interpreter over an independent expression representation.
namespace {

struct RandomExpr {
    enum Kind { And, Or, Implies, Not, Atom, Lit } kind = Lit;
    int atom = 0;
    bool lit = false;
    std::unique_ptr<RandomExpr> a;
    std::unique_ptr<RandomExpr> b;
};

std::unique_ptr<RandomExpr> gen_expr(std::mt19937& rng, int depth) {
    auto node = std::make_unique<RandomExpr>();
    int pick = depth >= 4 ? std::uniform_int_distribution<int>(4, 5)(rng)
                          : std::uniform_int_distribution<int>(0, 5)(rng);
    node->kind = static_cast<RandomExpr::Kind>(pick);
    switch (node->kind) {
    case RandomExpr::And:
    case RandomExpr::Or:
    case RandomExpr::Implies:
        node->a = gen_expr(rng, depth + 1);
        node->b = gen_expr(rng, depth + 1);
        break;
    case RandomExpr::Not:
        node->a = gen_expr(rng, depth + 1);
        break;
    case RandomExpr::Atom:
        node->atom = std::uniform_int_distribution<int>(0, 5)(rng);
        break;
    case RandomExpr::Lit:
        node->lit = std::uniform_int_distribution<int>(0, 1)(rng) == 1;
        break;
    }
    return node;
}

std::string to_source(const RandomExpr& e) {
    switch (e.kind) {
    case RandomExpr::And: return "(" + to_source(*e.a) + " and " + to_source(*e.b) + ")";
    case RandomExpr::Or: return "(" + to_source(*e.a) + " or " + to_source(*e.b) + ")";
    case RandomExpr::Implies: return "(" + to_source(*e.a) + " implies " + to_source(*e.b) + ")";
    case RandomExpr::Not: return "(not " + to_source(*e.a) + ")";
    case RandomExpr::Atom: return "self.b" + std::to_string(e.atom);
    case RandomExpr::Lit: return e.lit ? "true" : "false";
    }
    return "";
}

bool eval_direct(const RandomExpr& e, const std::array<bool, 6>& env) {
    switch (e.kind) {
    case RandomExpr::And: return eval_direct(*e.a, env) && eval_direct(*e.b, env);
    case RandomExpr::Or: return eval_direct(*e.a, env) || eval_direct(*e.b, env);
    case RandomExpr::Implies: return !eval_direct(*e.a, env) || eval_direct(*e.b, env);
    case RandomExpr::Not: return !eval_direct(*e.a, env);
    case RandomExpr::Atom: return env[e.atom];
    case RandomExpr::Lit: return e.lit;
    }
    return false;
}

} // namespace

TEST_CASE("random boolean expressions agree with a direct interpreter") {
    std::mt19937 rng(604);
    for (int round = 0; round < 500; ++round) {
        std::unique_ptr<RandomExpr> expr = gen_expr(rng, 0);
        ocl::ConstraintSet set =
            ocl::parse_constraints("context Aircraft inv rand: " + to_source(*expr) + "\n");
        REQUIRE(set.constraints.size() == 1);
        const ocl::Constraint& c = set.constraints[0];

        // The printer's minimal parenthesization must reparse to the same tree.
        ocl::ConstraintSet reparsed = ocl::parse_constraints(ocl::pretty_print(c) + "\n");
        REQUIRE(ocl::equal(*c.body, *reparsed.constraints[0].body));

        for (int mask = 0; mask < 64; ++mask) {
            std::array<bool, 6> env{};
            ocl::EvalContext ctx;
            for (int bit = 0; bit < 6; ++bit) {
                env[bit] = (mask >> bit) & 1;
                ctx.properties["b" + std::to_string(bit)] = ocl::TypedValue::of_bool(env[bit]);
            }
            REQUIRE(ocl::evaluate(c, ctx) == eval_direct(*expr, env));
        }
    }
}
