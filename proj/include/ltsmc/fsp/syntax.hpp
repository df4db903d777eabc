#pragma once

#include <cctype>
#include <memory>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace ltsmc::fsp {

enum class ErrKind { Syntax, Unbound, OutOfRange, Duplicate, Arity, Eval, Unsupported };

inline const char* err_kind_name(ErrKind k) {
    switch (k) {
        case ErrKind::Syntax: return "syntax";
        case ErrKind::Unbound: return "unbound";
        case ErrKind::OutOfRange: return "out-of-range";
        case ErrKind::Duplicate: return "duplicate";
        case ErrKind::Arity: return "arity";
        case ErrKind::Eval: return "eval";
        case ErrKind::Unsupported: return "unsupported";
    }
    return "?";
}

struct FspError : std::runtime_error {
    ErrKind kind;
    int line, col;
    FspError(ErrKind k, int l, int c, const std::string& msg)
        : std::runtime_error(std::string(err_kind_name(k)) + " error at " + std::to_string(l) + ":" +
                             std::to_string(c) + ": " + msg),
          kind(k),
          line(l),
          col(c) {}
};

struct Pos {
    int line = 1, col = 1;
};

// ---------------------------------------------------------------- expressions

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Expr {
    enum class Op {
        Lit, Var,
        Add, Sub, Mul, Div, Mod, Neg,
        Eq, Ne, Lt, Le, Gt, Ge,
        And, Or, Not,
        Cond, // a ? b : c
    };
    Op op = Op::Lit;
    long value = 0;    // Lit
    std::string name;  // Var
    ExprPtr a, b, c;
    Pos pos;
};

// ------------------------------------------------------------------ processes

struct IndexTerm { // one [...] slot of an action label
    bool is_binder = false;
    ExprPtr expr;            // when !is_binder
    std::string binder_name; // when is_binder
    // binder range: named or inline lo..hi
    std::string range_name;
    ExprPtr range_lo, range_hi;
    Pos pos;
};

struct ActionLabelSyntax {
    std::string base;
    std::vector<IndexTerm> indices;
    Pos pos;
};

struct TargetRef {
    enum class Kind { Process, Error, Stop };
    Kind kind = Kind::Process;
    std::string name;
    std::vector<ExprPtr> args;
    Pos pos;
};

struct Term {
    ExprPtr guard; // may be null
    std::vector<ActionLabelSyntax> labels;
    TargetRef target;
    Pos pos;
};

struct Param { // head binder of a local definition: X[i:R]
    std::string name;
    std::string range_name;
    ExprPtr range_lo, range_hi;
    Pos pos;
};

struct LocalDef {
    std::string name;
    std::vector<Param> params;
    std::vector<Term> terms;
    Pos pos;
};

struct ProcessDef {
    std::string name;
    std::vector<std::pair<std::string, long>> const_params; // NAME(P=3,...)
    std::vector<LocalDef> locals;                           // locals[0] is the head equation
    Pos pos;
};

struct CompositeDef {
    std::string name;
    std::vector<std::string> parts;
    Pos pos;
};

struct ConstDecl {
    std::string name;
    ExprPtr value;
    Pos pos;
};
struct RangeDecl {
    std::string name;
    ExprPtr lo, hi;
    Pos pos;
};

struct Module {
    std::vector<ConstDecl> consts;
    std::vector<RangeDecl> ranges;
    std::vector<ProcessDef> processes;
    std::vector<CompositeDef> composites;
};

// ---------------------------------------------------------------------- lexer

struct Token {
    enum class Kind {
        End, Int, LcIdent, UcIdent,
        Eq, Arrow, Bar, Comma, Dot, DotDot, LParen, RParen, LBracket, RBracket, Colon,
        Plus, Minus, Star, Slash, Percent,
        EqEq, Ne, Lt, Le, Gt, Ge, AndAnd, OrOr, Bang, Question, ParPar,
        KwConst, KwRange, KwWhen,
    };
    Kind kind = Kind::End;
    std::string text;
    long value = 0;
    Pos pos;
};

class Lexer {
public:
    explicit Lexer(std::string src) : src_(std::move(src)) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_ws();
            Token t;
            t.pos = pos_;
            if (i_ >= src_.size()) {
                t.kind = Token::Kind::End;
                out.push_back(t);
                return out;
            }
            char c = src_[i_];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t j = i_;
                while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
                t.kind = Token::Kind::Int;
                t.text = src_.substr(i_, j - i_);
                t.value = std::stol(t.text);
                advance(j - i_);
            } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t j = i_;
                while (j < src_.size() &&
                       (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
                    ++j;
                t.text = src_.substr(i_, j - i_);
                if (t.text == "const") t.kind = Token::Kind::KwConst;
                else if (t.text == "range") t.kind = Token::Kind::KwRange;
                else if (t.text == "when") t.kind = Token::Kind::KwWhen;
                else if (std::isupper(static_cast<unsigned char>(t.text[0]))) t.kind = Token::Kind::UcIdent;
                else t.kind = Token::Kind::LcIdent;
                advance(j - i_);
            } else {
                switch (c) {
                    case '-':
                        if (peek(1) == '>') { t.kind = Token::Kind::Arrow; advance(2); break; }
                        t.kind = Token::Kind::Minus; advance(1); break;
                    case '=':
                        if (peek(1) == '=') { t.kind = Token::Kind::EqEq; advance(2); break; }
                        t.kind = Token::Kind::Eq; advance(1); break;
                    case '!':
                        if (peek(1) == '=') { t.kind = Token::Kind::Ne; advance(2); break; }
                        t.kind = Token::Kind::Bang; advance(1); break;
                    case '<':
                        if (peek(1) == '=') { t.kind = Token::Kind::Le; advance(2); break; }
                        t.kind = Token::Kind::Lt; advance(1); break;
                    case '>':
                        if (peek(1) == '=') { t.kind = Token::Kind::Ge; advance(2); break; }
                        t.kind = Token::Kind::Gt; advance(1); break;
                    case '&':
                        if (peek(1) == '&') { t.kind = Token::Kind::AndAnd; advance(2); break; }
                        throw FspError(ErrKind::Syntax, t.pos.line, t.pos.col, "stray '&'");
                    case '|':
                        if (peek(1) == '|') { t.kind = Token::Kind::ParPar; advance(2); break; }
                        t.kind = Token::Kind::Bar; advance(1); break;
                    case '.':
                        if (peek(1) == '.') { t.kind = Token::Kind::DotDot; advance(2); break; }
                        t.kind = Token::Kind::Dot; advance(1); break;
                    case ',': t.kind = Token::Kind::Comma; advance(1); break;
                    case '(': t.kind = Token::Kind::LParen; advance(1); break;
                    case ')': t.kind = Token::Kind::RParen; advance(1); break;
                    case '[': t.kind = Token::Kind::LBracket; advance(1); break;
                    case ']': t.kind = Token::Kind::RBracket; advance(1); break;
                    case ':': t.kind = Token::Kind::Colon; advance(1); break;
                    case '+': t.kind = Token::Kind::Plus; advance(1); break;
                    case '*': t.kind = Token::Kind::Star; advance(1); break;
                    case '/': t.kind = Token::Kind::Slash; advance(1); break;
                    case '%': t.kind = Token::Kind::Percent; advance(1); break;
                    case '?': t.kind = Token::Kind::Question; advance(1); break;
                    default:
                        throw FspError(ErrKind::Syntax, t.pos.line, t.pos.col,
                                       std::string("unexpected character '") + c + "'");
                }
            }
            out.push_back(std::move(t));
        }
    }

private:
    char peek(size_t k) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }
    void advance(size_t n) {
        for (size_t k = 0; k < n && i_ < src_.size(); ++k, ++i_) {
            if (src_[i_] == '\n') { pos_.line++; pos_.col = 1; }
            else pos_.col++;
        }
    }
    void skip_ws() {
        for (;;) {
            while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) advance(1);
            if (i_ + 1 < src_.size() && src_[i_] == '/' && src_[i_ + 1] == '/') {
                while (i_ < src_.size() && src_[i_] != '\n') advance(1);
                continue;
            }
            if (i_ + 1 < src_.size() && src_[i_] == '/' && src_[i_ + 1] == '*') {
                Pos start = pos_;
                advance(2);
                while (i_ + 1 < src_.size() && !(src_[i_] == '*' && src_[i_ + 1] == '/')) advance(1);
                if (i_ + 1 >= src_.size())
                    throw FspError(ErrKind::Syntax, start.line, start.col, "unterminated comment");
                advance(2);
                continue;
            }
            break;
        }
    }

    std::string src_;
    size_t i_ = 0;
    Pos pos_;
};

// --------------------------------------------------------------------- parser

class Parser {
public:
    explicit Parser(std::string src) : toks_(Lexer(std::move(src)).run()) {}

    Module parse() {
        Module mod;
        while (!at(Token::Kind::End)) {
            if (at(Token::Kind::KwConst)) {
                next();
                ConstDecl d;
                d.pos = cur().pos;
                d.name = expect_ident("constant name");
                expect(Token::Kind::Eq, "'='");
                d.value = expr();
                mod.consts.push_back(std::move(d));
            } else if (at(Token::Kind::KwRange)) {
                next();
                RangeDecl d;
                d.pos = cur().pos;
                d.name = expect_ident("range name");
                expect(Token::Kind::Eq, "'='");
                d.lo = expr();
                expect(Token::Kind::DotDot, "'..'");
                d.hi = expr();
                mod.ranges.push_back(std::move(d));
            } else if (at(Token::Kind::ParPar)) {
                next();
                CompositeDef d;
                d.pos = cur().pos;
                d.name = expect_uc("composite name");
                expect(Token::Kind::Eq, "'='");
                expect(Token::Kind::LParen, "'('");
                d.parts.push_back(expect_uc("process name"));
                while (at(Token::Kind::ParPar)) {
                    next();
                    d.parts.push_back(expect_uc("process name"));
                }
                expect(Token::Kind::RParen, "')'");
                expect(Token::Kind::Dot, "'.'");
                mod.composites.push_back(std::move(d));
            } else if (at(Token::Kind::UcIdent)) {
                mod.processes.push_back(process_def());
            } else {
                throw FspError(ErrKind::Syntax, cur().pos.line, cur().pos.col,
                               "expected declaration, got '" + cur().text + "'");
            }
        }
        return mod;
    }

private:
    ProcessDef process_def() {
        ProcessDef p;
        p.pos = cur().pos;
        p.name = expect_uc("process name");
        if (at(Token::Kind::LParen)) { // const parameters with defaults
            next();
            for (;;) {
                std::string n = expect_uc("parameter name");
                expect(Token::Kind::Eq, "'='");
                bool negate = false;
                if (at(Token::Kind::Minus)) { negate = true; next(); }
                Token t = expect_tok(Token::Kind::Int, "integer");
                p.const_params.emplace_back(n, negate ? -t.value : t.value);
                if (!at(Token::Kind::Comma)) break;
                next();
            }
            expect(Token::Kind::RParen, "')'");
        }
        LocalDef head;
        head.pos = p.pos;
        head.name = p.name;
        expect(Token::Kind::Eq, "'='");
        head.terms = body();
        p.locals.push_back(std::move(head));
        while (at(Token::Kind::Comma)) {
            next();
            LocalDef d;
            d.pos = cur().pos;
            d.name = expect_uc("local process name");
            while (at(Token::Kind::LBracket)) {
                next();
                Param prm;
                prm.pos = cur().pos;
                prm.name = expect_lc("index parameter");
                expect(Token::Kind::Colon, "':'");
                range_ref(prm.range_name, prm.range_lo, prm.range_hi);
                expect(Token::Kind::RBracket, "']'");
                d.params.push_back(std::move(prm));
            }
            expect(Token::Kind::Eq, "'='");
            d.terms = body();
            p.locals.push_back(std::move(d));
        }
        expect(Token::Kind::Dot, "'.'");
        return p;
    }

    std::vector<Term> body() {
        expect(Token::Kind::LParen, "'('");
        std::vector<Term> terms;
        terms.push_back(term());
        while (at(Token::Kind::Bar)) {
            next();
            terms.push_back(term());
        }
        expect(Token::Kind::RParen, "')'");
        return terms;
    }

    Term term() {
        Term t;
        t.pos = cur().pos;
        if (at(Token::Kind::KwWhen)) {
            next();
            expect(Token::Kind::LParen, "'('");
            t.guard = expr();
            expect(Token::Kind::RParen, "')'");
        }
        t.labels.push_back(action_label());
        expect(Token::Kind::Arrow, "'->'");
        for (;;) {
            if (at(Token::Kind::LcIdent)) {
                t.labels.push_back(action_label());
                expect(Token::Kind::Arrow, "'->'");
                continue;
            }
            break;
        }
        t.target = target_ref();
        return t;
    }

    ActionLabelSyntax action_label() {
        ActionLabelSyntax a;
        a.pos = cur().pos;
        a.base = expect_lc("action label");
        while (at(Token::Kind::LBracket)) {
            next();
            IndexTerm it;
            it.pos = cur().pos;
            // binder iff "lcIdent :"
            if (at(Token::Kind::LcIdent) && at(Token::Kind::Colon, 1)) {
                it.is_binder = true;
                it.binder_name = cur().text;
                next();
                next(); // ':'
                range_ref(it.range_name, it.range_lo, it.range_hi);
            } else {
                it.expr = expr();
            }
            expect(Token::Kind::RBracket, "']'");
            a.indices.push_back(std::move(it));
        }
        return a;
    }

    TargetRef target_ref() {
        TargetRef t;
        t.pos = cur().pos;
        std::string n = expect_uc("process reference");
        if (n == "ERROR") {
            t.kind = TargetRef::Kind::Error;
            return t;
        }
        if (n == "STOP") {
            t.kind = TargetRef::Kind::Stop;
            return t;
        }
        t.kind = TargetRef::Kind::Process;
        t.name = n;
        while (at(Token::Kind::LBracket)) {
            next();
            t.args.push_back(expr());
            expect(Token::Kind::RBracket, "']'");
        }
        return t;
    }

    void range_ref(std::string& name, ExprPtr& lo, ExprPtr& hi) {
        if (at(Token::Kind::UcIdent) && !at(Token::Kind::DotDot, 1)) {
            name = cur().text;
            next();
            return;
        }
        lo = expr();
        expect(Token::Kind::DotDot, "'..'");
        hi = expr();
    }

    // expression precedence: ?: < || < && < cmp < add < mul < unary
    ExprPtr expr() { return cond(); }
    ExprPtr cond() {
        ExprPtr c = lor();
        if (at(Token::Kind::Question)) {
            auto e = std::make_shared<Expr>();
            e->pos = cur().pos;
            next();
            e->op = Expr::Op::Cond;
            e->a = c;
            e->b = expr();
            expect(Token::Kind::Colon, "':'");
            e->c = expr();
            return e;
        }
        return c;
    }
    ExprPtr lor() {
        ExprPtr x = land();
        while (at(Token::Kind::ParPar)) {
            auto e = std::make_shared<Expr>();
            e->pos = cur().pos;
            next();
            e->op = Expr::Op::Or;
            e->a = x;
            e->b = land();
            x = e;
        }
        return x;
    }
    ExprPtr land() {
        ExprPtr x = cmp();
        while (at(Token::Kind::AndAnd)) {
            auto e = std::make_shared<Expr>();
            e->pos = cur().pos;
            next();
            e->op = Expr::Op::And;
            e->a = x;
            e->b = cmp();
            x = e;
        }
        return x;
    }
    ExprPtr cmp() {
        ExprPtr x = add();
        for (;;) {
            Expr::Op op;
            if (at(Token::Kind::EqEq)) op = Expr::Op::Eq;
            else if (at(Token::Kind::Ne)) op = Expr::Op::Ne;
            else if (at(Token::Kind::Lt)) op = Expr::Op::Lt;
            else if (at(Token::Kind::Le)) op = Expr::Op::Le;
            else if (at(Token::Kind::Gt)) op = Expr::Op::Gt;
            else if (at(Token::Kind::Ge)) op = Expr::Op::Ge;
            else return x;
            auto e = std::make_shared<Expr>();
            e->pos = cur().pos;
            next();
            e->op = op;
            e->a = x;
            e->b = add();
            x = e;
        }
    }
    ExprPtr add() {
        ExprPtr x = mul();
        for (;;) {
            Expr::Op op;
            if (at(Token::Kind::Plus)) op = Expr::Op::Add;
            else if (at(Token::Kind::Minus)) op = Expr::Op::Sub;
            else return x;
            auto e = std::make_shared<Expr>();
            e->pos = cur().pos;
            next();
            e->op = op;
            e->a = x;
            e->b = mul();
            x = e;
        }
    }
    ExprPtr mul() {
        ExprPtr x = unary();
        for (;;) {
            Expr::Op op;
            if (at(Token::Kind::Star)) op = Expr::Op::Mul;
            else if (at(Token::Kind::Slash)) op = Expr::Op::Div;
            else if (at(Token::Kind::Percent)) op = Expr::Op::Mod;
            else return x;
            auto e = std::make_shared<Expr>();
            e->pos = cur().pos;
            next();
            e->op = op;
            e->a = x;
            e->b = unary();
            x = e;
        }
    }
    ExprPtr unary() {
        if (at(Token::Kind::Minus)) {
            auto e = std::make_shared<Expr>();
            e->pos = cur().pos;
            next();
            e->op = Expr::Op::Neg;
            e->a = unary();
            return e;
        }
        if (at(Token::Kind::Bang)) {
            auto e = std::make_shared<Expr>();
            e->pos = cur().pos;
            next();
            e->op = Expr::Op::Not;
            e->a = unary();
            return e;
        }
        return primary();
    }
    ExprPtr primary() {
        auto e = std::make_shared<Expr>();
        e->pos = cur().pos;
        if (at(Token::Kind::Int)) {
            e->op = Expr::Op::Lit;
            e->value = cur().value;
            next();
            return e;
        }
        if (at(Token::Kind::LcIdent) || at(Token::Kind::UcIdent)) {
            e->op = Expr::Op::Var;
            e->name = cur().text;
            next();
            return e;
        }
        if (at(Token::Kind::LParen)) {
            next();
            ExprPtr inner = expr();
            expect(Token::Kind::RParen, "')'");
            return inner;
        }
        throw FspError(ErrKind::Syntax, cur().pos.line, cur().pos.col,
                       "expected expression, got '" + cur().text + "'");
    }

    // token plumbing
    const Token& cur() const { return toks_[i_]; }
    bool at(Token::Kind k, size_t ahead = 0) const {
        return i_ + ahead < toks_.size() && toks_[i_ + ahead].kind == k;
    }
    void next() { if (i_ + 1 < toks_.size()) ++i_; }
    Token expect_tok(Token::Kind k, const char* what) {
        if (!at(k))
            throw FspError(ErrKind::Syntax, cur().pos.line, cur().pos.col,
                           std::string("expected ") + what + ", got '" + cur().text + "'");
        Token t = cur();
        next();
        return t;
    }
    void expect(Token::Kind k, const char* what) { expect_tok(k, what); }
    std::string expect_uc(const char* what) { return expect_tok(Token::Kind::UcIdent, what).text; }
    std::string expect_lc(const char* what) { return expect_tok(Token::Kind::LcIdent, what).text; }
    std::string expect_ident(const char* what) {
        if (at(Token::Kind::UcIdent) || at(Token::Kind::LcIdent)) {
            std::string s = cur().text;
            next();
            return s;
        }
        throw FspError(ErrKind::Syntax, cur().pos.line, cur().pos.col,
                       std::string("expected ") + what + ", got '" + cur().text + "'");
    }

    std::vector<Token> toks_;
    size_t i_ = 0;
};

inline Module parse_module(const std::string& text) { return Parser(text).parse(); }

} // namespace ltsmc::fsp
