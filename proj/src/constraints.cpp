#include "cdtk/constraints.hpp"

#include "cdtk/errors.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>

namespace cdtk::ocl {

std::string_view to_string(RelOp op) {
    switch (op) {
    case RelOp::Lt: return "<";
    case RelOp::Le: return "<=";
    case RelOp::Gt: return ">";
    case RelOp::Ge: return ">=";
    case RelOp::Eq: return "=";
    case RelOp::Ne: return "<>";
    }
    return "";
}

bool equal(const Expr& a, const Expr& b) {
    if (a.kind != b.kind) {
        return false;
    }
    switch (a.kind) {
    case ExprKind::Implies:
    case ExprKind::Or:
    case ExprKind::And:
        return equal(*a.left, *b.left) && equal(*a.right, *b.right);
    case ExprKind::Not:
        return equal(*a.left, *b.left);
    case ExprKind::Rel:
        return a.rel_op == b.rel_op && equal(*a.left, *b.left) && equal(*a.right, *b.right);
    case ExprKind::IsInState:
    case ExprKind::PropRef:
    case ExprKind::EnumLit:
        return a.name == b.name;
    case ExprKind::IntLit:
        return a.int_value == b.int_value;
    case ExprKind::RealLit:
        return a.real_value == b.real_value;
    case ExprKind::BoolLit:
        return a.bool_value == b.bool_value;
    }
    return false;
}

std::set<std::string> ConstraintSet::states_mentioned() const {
    std::set<std::string> states;
    auto walk = [&states](const Expr& e, auto&& self) -> void {
        if (e.kind == ExprKind::IsInState) {
            states.insert(e.name);
        }
        if (e.left) self(*e.left, self);
        if (e.right) self(*e.right, self);
    };
    for (const Constraint& c : constraints) {
        walk(*c.body, walk);
    }
    return states;
}

namespace {

enum class TokenKind {
    KwContext, KwInv, KwSelf, KwIsInState, KwImplies, KwOr, KwAnd, KwNot, KwTrue, KwFalse,
    Ident, IntNumber, RealNumber,
    Lt, Le, Gt, Ge, Eq, Ne,
    Colon, Dot, LParen, RParen,
    End,
};

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    long long int_value = 0;
    double real_value = 0.0;
    int line = 0;
    int column = 0;
};

class Lexer {
public:
    explicit Lexer(std::string_view input) : input_(input) {}

    std::vector<Token> tokenize() {
        std::vector<Token> tokens;
        for (;;) {
            skip_blank();
            Token token = next_token();
            bool end = token.kind == TokenKind::End;
            tokens.push_back(std::move(token));
            if (end) {
                return tokens;
            }
        }
    }

private:
    std::string_view input_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int column_ = 1;

    [[noreturn]] void fail(const std::string& message) const {
        throw Error(ErrorKind::SyntaxError, message, line_, column_);
    }

    bool at_end() const { return pos_ >= input_.size(); }
    char peek(std::size_t ahead = 0) const {
        return pos_ + ahead < input_.size() ? input_[pos_ + ahead] : '\0';
    }

    char advance() {
        char c = input_[pos_++];
        if (c == '\n') {
            line_++;
            column_ = 1;
        } else {
            column_++;
        }
        return c;
    }

    void skip_blank() {
        for (;;) {
            while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
                advance();
            }
            if (peek() == '-' && peek(1) == '-') {
                while (!at_end() && peek() != '\n') {
                    advance();
                }
            } else {
                return;
            }
        }
    }

    Token make(TokenKind kind, std::string text, int line, int column) {
        Token token;
        token.kind = kind;
        token.text = std::move(text);
        token.line = line;
        token.column = column;
        return token;
    }

    Token next_token() {
        int line = line_;
        int column = column_;
        if (at_end()) {
            return make(TokenKind::End, "", line, column);
        }
        char c = peek();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string word;
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) {
                word.push_back(advance());
            }
            TokenKind kind = TokenKind::Ident;
            if (word == "context") kind = TokenKind::KwContext;
            else if (word == "inv") kind = TokenKind::KwInv;
            else if (word == "self") kind = TokenKind::KwSelf;
            else if (word == "oclIsInState") kind = TokenKind::KwIsInState;
            else if (word == "implies") kind = TokenKind::KwImplies;
            else if (word == "or") kind = TokenKind::KwOr;
            else if (word == "and") kind = TokenKind::KwAnd;
            else if (word == "not") kind = TokenKind::KwNot;
            else if (word == "true") kind = TokenKind::KwTrue;
            else if (word == "false") kind = TokenKind::KwFalse;
            return make(kind, std::move(word), line, column);
        }
        if (std::isdigit(static_cast<unsigned char>(c)) ||
            (c == '-' && std::isdigit(static_cast<unsigned char>(peek(1))))) {
            return lex_number(line, column);
        }
        advance();
        switch (c) {
        case ':': return make(TokenKind::Colon, ":", line, column);
        case '.': return make(TokenKind::Dot, ".", line, column);
        case '(': return make(TokenKind::LParen, "(", line, column);
        case ')': return make(TokenKind::RParen, ")", line, column);
        case '=': return make(TokenKind::Eq, "=", line, column);
        case '<':
            if (peek() == '=') { advance(); return make(TokenKind::Le, "<=", line, column); }
            if (peek() == '>') { advance(); return make(TokenKind::Ne, "<>", line, column); }
            return make(TokenKind::Lt, "<", line, column);
        case '>':
            if (peek() == '=') { advance(); return make(TokenKind::Ge, ">=", line, column); }
            return make(TokenKind::Gt, ">", line, column);
        default:
            fail(std::string("unexpected character '") + c + "'");
        }
    }

    Token lex_number(int line, int column) {
        std::string text;
        if (peek() == '-') {
            text.push_back(advance());
        }
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
            text.push_back(advance());
        }
        bool real = false;
        if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
            real = true;
            text.push_back(advance());
            while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
                text.push_back(advance());
            }
        }
        Token token = make(real ? TokenKind::RealNumber : TokenKind::IntNumber, text, line, column);
        if (real) {
            token.real_value = std::stod(text);
        } else {
            auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), token.int_value);
            if (ec != std::errc()) {
                throw Error(ErrorKind::SyntaxError, "integer literal out of range: " + text, line, column);
            }
        }
        return token;
    }
};

class Parser {
public:
    explicit Parser(std::string_view input) : tokens_(Lexer(input).tokenize()) {}

    ConstraintSet parse_file() {
        ConstraintSet set;
        while (!at(TokenKind::End)) {
            set.constraints.push_back(parse_constraint());
        }
        for (std::size_t i = 0; i < set.constraints.size(); ++i) {
            for (std::size_t j = i + 1; j < set.constraints.size(); ++j) {
                if (set.constraints[i].name == set.constraints[j].name) {
                    throw Error(ErrorKind::DuplicateConstraintName, "'" + set.constraints[i].name + "'");
                }
            }
        }
        return set;
    }

private:
    std::vector<Token> tokens_;
    std::size_t index_ = 0;

    const Token& current() const { return tokens_[index_]; }
    bool at(TokenKind kind) const { return current().kind == kind; }

    [[noreturn]] void fail(const std::string& message) const {
        throw Error(ErrorKind::SyntaxError, message, current().line, current().column);
    }

    Token expect(TokenKind kind, const std::string& what) {
        if (!at(kind)) {
            fail("expected " + what + (current().text.empty() ? "" : ", got '" + current().text + "'"));
        }
        return tokens_[index_++];
    }

    bool accept(TokenKind kind) {
        if (at(kind)) {
            index_++;
            return true;
        }
        return false;
    }

    Constraint parse_constraint() {
        expect(TokenKind::KwContext, "'context'");
        Constraint constraint;
        constraint.context_class = expect(TokenKind::Ident, "a context class name").text;
        if (constraint.context_class != "Aircraft") {
            throw Error(ErrorKind::SchemaError,
                        "unsupported context class '" + constraint.context_class + "'");
        }
        expect(TokenKind::KwInv, "'inv'");
        constraint.name = expect(TokenKind::Ident, "a constraint name").text;
        expect(TokenKind::Colon, "':'");
        constraint.body = parse_expr();
        check_literal_relations(*constraint.body);
        return constraint;
    }

    ExprPtr parse_expr() {
        ExprPtr left = parse_or();
        if (accept(TokenKind::KwImplies)) {
            auto node = std::make_unique<Expr>();
            node->kind = ExprKind::Implies;
            node->left = std::move(left);
            node->right = parse_expr();
            return node;
        }
        return left;
    }

    ExprPtr parse_or() {
        ExprPtr left = parse_and();
        while (accept(TokenKind::KwOr)) {
            auto node = std::make_unique<Expr>();
            node->kind = ExprKind::Or;
            node->left = std::move(left);
            node->right = parse_and();
            left = std::move(node);
        }
        return left;
    }

    ExprPtr parse_and() {
        ExprPtr left = parse_unary();
        while (accept(TokenKind::KwAnd)) {
            auto node = std::make_unique<Expr>();
            node->kind = ExprKind::And;
            node->left = std::move(left);
            node->right = parse_unary();
            left = std::move(node);
        }
        return left;
    }

    ExprPtr parse_unary() {
        if (accept(TokenKind::KwNot)) {
            auto node = std::make_unique<Expr>();
            node->kind = ExprKind::Not;
            node->left = parse_unary();
            return node;
        }
        return parse_rel();
    }

    ExprPtr parse_rel() {
        ExprPtr left = parse_prim();
        RelOp op;
        if (accept_rel_op(op)) {
            auto node = std::make_unique<Expr>();
            node->kind = ExprKind::Rel;
            node->rel_op = op;
            node->left = std::move(left);
            node->right = parse_prim();
            return node;
        }
        return left;
    }

    bool accept_rel_op(RelOp& op) {
        switch (current().kind) {
        case TokenKind::Lt: op = RelOp::Lt; break;
        case TokenKind::Le: op = RelOp::Le; break;
        case TokenKind::Gt: op = RelOp::Gt; break;
        case TokenKind::Ge: op = RelOp::Ge; break;
        case TokenKind::Eq: op = RelOp::Eq; break;
        case TokenKind::Ne: op = RelOp::Ne; break;
        default: return false;
        }
        index_++;
        return true;
    }

    ExprPtr parse_prim() {
        auto node = std::make_unique<Expr>();
        if (accept(TokenKind::KwSelf)) {
            expect(TokenKind::Dot, "'.' after 'self'");
            if (accept(TokenKind::KwIsInState)) {
                expect(TokenKind::LParen, "'('");
                node->kind = ExprKind::IsInState;
                node->name = expect(TokenKind::Ident, "a state name").text;
                expect(TokenKind::RParen, "')'");
            } else {
                node->kind = ExprKind::PropRef;
                node->name = expect(TokenKind::Ident, "a property name").text;
            }
            return node;
        }
        if (at(TokenKind::IntNumber)) {
            node->kind = ExprKind::IntLit;
            node->int_value = current().int_value;
            index_++;
            return node;
        }
        if (at(TokenKind::RealNumber)) {
            node->kind = ExprKind::RealLit;
            node->real_value = current().real_value;
            index_++;
            return node;
        }
        if (accept(TokenKind::KwTrue)) {
            node->kind = ExprKind::BoolLit;
            node->bool_value = true;
            return node;
        }
        if (accept(TokenKind::KwFalse)) {
            node->kind = ExprKind::BoolLit;
            node->bool_value = false;
            return node;
        }
        if (at(TokenKind::Ident)) {
            node->kind = ExprKind::EnumLit;
            node->name = current().text;
            index_++;
            return node;
        }
        if (accept(TokenKind::LParen)) {
            node = parse_expr();
            expect(TokenKind::RParen, "')'");
            return node;
        }
        fail("expected an expression");
    }

    enum class LitClass { NotLiteral, Numeric, Boolean, Enumeration };

    static LitClass literal_class(const Expr& e) {
        switch (e.kind) {
        case ExprKind::IntLit:
        case ExprKind::RealLit: return LitClass::Numeric;
        case ExprKind::BoolLit: return LitClass::Boolean;
        case ExprKind::EnumLit: return LitClass::Enumeration;
        default: return LitClass::NotLiteral;
        }
    }

    // Comparisons between two literals are checkable without an instance.
    void check_literal_relations(const Expr& e) const {
        if (e.left) check_literal_relations(*e.left);
        if (e.right) check_literal_relations(*e.right);
        if (e.kind != ExprKind::Rel) {
            return;
        }
        LitClass lhs = literal_class(*e.left);
        LitClass rhs = literal_class(*e.right);
        if (lhs == LitClass::NotLiteral || rhs == LitClass::NotLiteral) {
            return;
        }
        if (lhs != rhs) {
            throw Error(ErrorKind::TypeError,
                        "cannot compare " + pretty_print(*e.left) + " with " + pretty_print(*e.right));
        }
        bool ordering = e.rel_op != RelOp::Eq && e.rel_op != RelOp::Ne;
        if (ordering && lhs != LitClass::Numeric) {
            throw Error(ErrorKind::TypeError,
                        "operator " + std::string(to_string(e.rel_op)) + " needs numeric operands");
        }
    }
};

} // namespace

ConstraintSet parse_constraints(std::string_view bytes) {
    return Parser(bytes).parse_file();
}

namespace {

int precedence(const Expr& e) {
    switch (e.kind) {
    case ExprKind::Implies: return 1;
    case ExprKind::Or: return 2;
    case ExprKind::And: return 3;
    case ExprKind::Not: return 4;
    case ExprKind::Rel: return 5;
    default: return 6;
    }
}

void print_expr(const Expr& e, int need, std::string& out) {
    int prec = precedence(e);
    bool parens = prec < need;
    if (parens) {
        out.push_back('(');
    }
    switch (e.kind) {
    case ExprKind::Implies:
        print_expr(*e.left, 2, out);
        out += " implies ";
        print_expr(*e.right, 1, out);
        break;
    case ExprKind::Or:
        print_expr(*e.left, 2, out);
        out += " or ";
        print_expr(*e.right, 3, out);
        break;
    case ExprKind::And:
        print_expr(*e.left, 3, out);
        out += " and ";
        print_expr(*e.right, 4, out);
        break;
    case ExprKind::Not:
        out += "not ";
        print_expr(*e.left, 4, out);
        break;
    case ExprKind::Rel:
        print_expr(*e.left, 6, out);
        out.push_back(' ');
        out += to_string(e.rel_op);
        out.push_back(' ');
        print_expr(*e.right, 6, out);
        break;
    case ExprKind::IsInState:
        out += "self.oclIsInState(" + e.name + ")";
        break;
    case ExprKind::PropRef:
        out += "self." + e.name;
        break;
    case ExprKind::IntLit:
        out += std::to_string(e.int_value);
        break;
    case ExprKind::RealLit:
        out += nlohmann::json(e.real_value).dump();
        break;
    case ExprKind::BoolLit:
        out += e.bool_value ? "true" : "false";
        break;
    case ExprKind::EnumLit:
        out += e.name;
        break;
    }
    if (parens) {
        out.push_back(')');
    }
}

} // namespace

std::string pretty_print(const Expr& expr) {
    std::string out;
    print_expr(expr, 1, out);
    return out;
}

std::string pretty_print(const Constraint& constraint) {
    return "context " + constraint.context_class + " inv " + constraint.name + ": " +
           pretty_print(*constraint.body);
}

TypedValue TypedValue::of_int(long long v) {
    TypedValue value;
    value.type = Type::Int;
    value.int_value = v;
    return value;
}

TypedValue TypedValue::of_real(double v) {
    TypedValue value;
    value.type = Type::Real;
    value.real_value = v;
    return value;
}

TypedValue TypedValue::of_bool(bool v) {
    TypedValue value;
    value.type = Type::Bool;
    value.bool_value = v;
    return value;
}

TypedValue TypedValue::of_enum(std::string v) {
    TypedValue value;
    value.type = Type::Enum;
    value.enum_value = std::move(v);
    return value;
}

double TypedValue::as_number() const {
    return type == Type::Int ? static_cast<double>(int_value) : real_value;
}

std::string to_string(const TypedValue& value) {
    switch (value.type) {
    case TypedValue::Type::Int: return std::to_string(value.int_value);
    case TypedValue::Type::Real: return nlohmann::json(value.real_value).dump();
    case TypedValue::Type::Bool: return value.bool_value ? "true" : "false";
    case TypedValue::Type::Enum: return value.enum_value;
    }
    return "";
}

namespace {

bool as_bool(const TypedValue& value) {
    if (value.type != TypedValue::Type::Bool) {
        throw Error(ErrorKind::RuntimeTypeError,
                    "expected a boolean, got " + to_string(value));
    }
    return value.bool_value;
}

bool compare(const TypedValue& lhs, RelOp op, const TypedValue& rhs) {
    if (lhs.is_numeric() && rhs.is_numeric()) {
        if (lhs.type == TypedValue::Type::Int && rhs.type == TypedValue::Type::Int) {
            long long a = lhs.int_value;
            long long b = rhs.int_value;
            switch (op) {
            case RelOp::Lt: return a < b;
            case RelOp::Le: return a <= b;
            case RelOp::Gt: return a > b;
            case RelOp::Ge: return a >= b;
            case RelOp::Eq: return a == b;
            case RelOp::Ne: return a != b;
            }
        }
        double a = lhs.as_number();
        double b = rhs.as_number();
        switch (op) {
        case RelOp::Lt: return a < b;
        case RelOp::Le: return a <= b;
        case RelOp::Gt: return a > b;
        case RelOp::Ge: return a >= b;
        case RelOp::Eq: return a == b;
        case RelOp::Ne: return a != b;
        }
    }
    bool equality_only = op == RelOp::Eq || op == RelOp::Ne;
    if (lhs.type == rhs.type && equality_only) {
        bool eq = false;
        switch (lhs.type) {
        case TypedValue::Type::Bool: eq = lhs.bool_value == rhs.bool_value; break;
        case TypedValue::Type::Enum: eq = lhs.enum_value == rhs.enum_value; break;
        default: break;
        }
        return op == RelOp::Eq ? eq : !eq;
    }
    throw Error(ErrorKind::RuntimeTypeError,
                "cannot apply " + std::string(to_string(op)) + " to " + to_string(lhs) + " and " +
                    to_string(rhs));
}

TypedValue eval_expr(const Expr& e, const EvalContext& instance) {
    switch (e.kind) {
    case ExprKind::Implies: {
        bool lhs = as_bool(eval_expr(*e.left, instance));
        bool rhs = as_bool(eval_expr(*e.right, instance));
        return TypedValue::of_bool(!lhs || rhs);
    }
    case ExprKind::Or: {
        bool lhs = as_bool(eval_expr(*e.left, instance));
        bool rhs = as_bool(eval_expr(*e.right, instance));
        return TypedValue::of_bool(lhs || rhs);
    }
    case ExprKind::And: {
        bool lhs = as_bool(eval_expr(*e.left, instance));
        bool rhs = as_bool(eval_expr(*e.right, instance));
        return TypedValue::of_bool(lhs && rhs);
    }
    case ExprKind::Not:
        return TypedValue::of_bool(!as_bool(eval_expr(*e.left, instance)));
    case ExprKind::Rel:
        return TypedValue::of_bool(
            compare(eval_expr(*e.left, instance), e.rel_op, eval_expr(*e.right, instance)));
    case ExprKind::IsInState:
        return TypedValue::of_bool(instance.current_state == e.name);
    case ExprKind::PropRef: {
        auto it = instance.properties.find(e.name);
        if (it == instance.properties.end()) {
            throw Error(ErrorKind::MissingProperty, "'" + e.name + "' is absent from the instance");
        }
        return it->second;
    }
    case ExprKind::IntLit:
        return TypedValue::of_int(e.int_value);
    case ExprKind::RealLit:
        return TypedValue::of_real(e.real_value);
    case ExprKind::BoolLit:
        return TypedValue::of_bool(e.bool_value);
    case ExprKind::EnumLit:
        return TypedValue::of_enum(e.name);
    }
    throw Error(ErrorKind::RuntimeTypeError, "unreachable expression kind");
}

} // namespace

bool evaluate(const Constraint& constraint, const EvalContext& instance) {
    return as_bool(eval_expr(*constraint.body, instance));
}

std::string_view to_string(Verdict verdict) {
    switch (verdict) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Error: return "error";
    }
    return "";
}

std::vector<VerdictEntry> evaluate_set(const ConstraintSet& set, const EvalContext& instance) {
    std::vector<VerdictEntry> verdicts;
    verdicts.reserve(set.constraints.size());
    for (const Constraint& constraint : set.constraints) {
        VerdictEntry entry;
        entry.constraint = constraint.name;
        try {
            entry.verdict = evaluate(constraint, instance) ? Verdict::Pass : Verdict::Fail;
        } catch (const Error& e) {
            entry.verdict = Verdict::Error;
            entry.detail = e.what();
        }
        verdicts.push_back(std::move(entry));
    }
    return verdicts;
}

std::vector<std::string> property_refs(const Expr& expr) {
    std::vector<std::string> refs;
    auto walk = [&refs](const Expr& e, auto&& self) -> void {
        if (e.kind == ExprKind::PropRef &&
            std::find(refs.begin(), refs.end(), e.name) == refs.end()) {
            refs.push_back(e.name);
        }
        if (e.left) self(*e.left, self);
        if (e.right) self(*e.right, self);
    };
    walk(expr, walk);
    return refs;
}

} // namespace cdtk::ocl
