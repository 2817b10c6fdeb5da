#include "fohl/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace fohl {

ParseError::ParseError(const std::string& msg, int line, int column)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg), line(line),
      column(column) {}

namespace {
std::string joinLines(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : "; ") + x;
    return s;
}
}  // namespace

ModelError::ModelError(std::vector<std::string> v) : std::runtime_error(joinLines(v)), violations(std::move(v)) {}

namespace {

const std::set<std::string> kKeywords = {"bot", "top", "exists", "forall", "lam", "iota", "Iota", "down"};

bool isTenseOpName(const std::string& s) { return s == "F" || s == "P" || s == "G" || s == "H"; }

bool isFreeVarName(const std::string& s) {
    return s.size() > 2 && s[0] == '_' && s[1] == 'a' &&
           std::all_of(s.begin() + 2, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

enum class Tok { Ident, Nominal, TVar, LParen, RParen, LBrace, RBrace, Comma, Dot, Tilde, Amp, Bar, Arrow,
                 DArrow, Eq, Neq, At, End };

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
    bool spaceBefore;
};

bool identStart(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool identChar(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    bool space = true;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (src[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < src.size()) {
        char c = src[i];
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance(1);
            space = true;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            space = true;
            continue;
        }
        Token t{Tok::End, "", line, col, space};
        space = false;
        auto word = [&](std::size_t from) {
            std::size_t j = from;
            while (j < src.size() && identChar(src[j])) ++j;
            return j;
        };
        if (identStart(c)) {
            std::size_t j = word(i);
            t.kind = Tok::Ident;
            t.text = src.substr(i, j - i);
            advance(j - i);
        } else if (c == '\'' || c == '$') {
            if (i + 1 >= src.size() || !identStart(src[i + 1]))
                throw ParseError(std::string("expected a name after '") + c + "'", line, col);
            std::size_t j = word(i + 1);
            t.kind = c == '\'' ? Tok::Nominal : Tok::TVar;
            t.text = src.substr(i + 1, j - i - 1);
            advance(j - i);
        } else if (src.compare(i, 3, "<->") == 0) {
            t.kind = Tok::DArrow;
            advance(3);
        } else if (src.compare(i, 2, "->") == 0) {
            t.kind = Tok::Arrow;
            advance(2);
        } else if (src.compare(i, 2, "!=") == 0) {
            t.kind = Tok::Neq;
            advance(2);
        } else {
            switch (c) {
            case '(': t.kind = Tok::LParen; break;
            case ')': t.kind = Tok::RParen; break;
            case '{': t.kind = Tok::LBrace; break;
            case '}': t.kind = Tok::RBrace; break;
            case ',': t.kind = Tok::Comma; break;
            case '.': t.kind = Tok::Dot; break;
            case '~': t.kind = Tok::Tilde; break;
            case '&': t.kind = Tok::Amp; break;
            case '|': t.kind = Tok::Bar; break;
            case '=': t.kind = Tok::Eq; break;
            case '@': t.kind = Tok::At; break;
            default: throw ParseError(std::string("unexpected character '") + c + "'", line, col);
            }
            advance(1);
        }
        out.push_back(std::move(t));
    }
    out.push_back(Token{Tok::End, "", line, col, true});
    return out;
}

class Parser {
public:
    explicit Parser(const std::string& src) : toks_(lex(src)) {}

    Formula parseAll() {
        Formula f = iff();
        if (peek().kind != Tok::End) fail("unexpected input after formula");
        return f;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<std::string> objScope_;

    const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
    Token next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw ParseError(msg, t.line, t.col);
    }
    Token expect(Tok k, const char* what) {
        if (peek().kind != k) fail(std::string("expected ") + what);
        return next();
    }
    bool isKeyword(const Token& t, const char* kw) const { return t.kind == Tok::Ident && t.text == kw; }
    std::string identifier(const char* what) {
        Token t = expect(Tok::Ident, what);
        if (kKeywords.count(t.text)) throw ParseError("keyword '" + t.text + "' used as a name", t.line, t.col);
        return t.text;
    }

    Formula iff() {
        Formula l = imp();
        while (peek().kind == Tok::DArrow) {
            next();
            l = mk::iff(l, imp());
        }
        return l;
    }
    Formula imp() {
        Formula l = disj();
        if (peek().kind == Tok::Arrow) {
            next();
            return mk::imp(l, imp());
        }
        return l;
    }
    Formula disj() {
        Formula l = conj();
        while (peek().kind == Tok::Bar) {
            next();
            l = mk::disj(l, conj());
        }
        return l;
    }
    Formula conj() {
        Formula l = unary();
        while (peek().kind == Tok::Amp) {
            next();
            l = mk::conj(l, unary());
        }
        return l;
    }

    bool tenseOperatorAhead() const {
        const Token& t = peek();
        if (t.kind != Tok::Ident || !isTenseOpName(t.text)) return false;
        const Token& n = peek(1);
        if (n.kind == Tok::LParen && !n.spaceBefore) return false;  // predicate application
        if (n.kind == Tok::Eq || n.kind == Tok::Neq) return false;  // equality on a term
        return true;
    }

    Formula unary() {
        const Token& t = peek();
        if (t.kind == Tok::Tilde) {
            next();
            return mk::neg(unary());
        }
        if (tenseOperatorAhead()) {
            std::string op = next().text;
            Formula body = unary();
            if (op == "F") return mk::fut(body);
            if (op == "P") return mk::past(body);
            if (op == "G") return mk::always(body);
            return mk::hist(body);
        }
        if (t.kind == Tok::At) {
            next();
            Formula d = designator();
            return mk::at(d, unary());
        }
        if (isKeyword(t, "exists") || isKeyword(t, "forall")) {
            bool ex = next().text == "exists";
            std::string x = identifier("a bound variable");
            expect(Tok::Dot, "'.' after binder");
            objScope_.push_back(x);
            Formula body = iff();
            objScope_.pop_back();
            return ex ? mk::exists(x, body) : mk::forall(x, body);
        }
        if (isKeyword(t, "down")) {
            next();
            std::string x = expect(Tok::TVar, "a tense variable after 'down'").text;
            expect(Tok::Dot, "'.' after binder");
            return mk::down(x, iff());
        }
        return primary();
    }

    Formula designator() {
        const Token& t = peek();
        if (t.kind == Tok::Nominal) return mk::nom(next().text);
        if (t.kind == Tok::TVar) return mk::tvar(next().text);
        if (t.kind == Tok::LBrace) return braceIota();
        fail("expected a nominal, tense variable or {Iota ...} after '@'");
    }

    Formula braceIota() {
        expect(Tok::LBrace, "'{'");
        if (!isKeyword(peek(), "Iota")) fail("expected 'Iota' after '{'");
        next();
        std::string x = expect(Tok::TVar, "a tense variable after 'Iota'").text;
        expect(Tok::Dot, "'.' after binder");
        Formula body = iff();
        expect(Tok::RBrace, "'}'");
        return mk::tiota(x, body);
    }

    Term simpleTerm(const std::string& name) {
        if (std::find(objScope_.begin(), objScope_.end(), name) != objScope_.end()) return Term::bound(name);
        if (isFreeVarName(name)) return Term::free(name);
        return Term::constant(name);
    }

    Term term() {
        if (isKeyword(peek(), "iota")) {
            next();
            std::string y = identifier("a bound variable");
            expect(Tok::Dot, "'.' after binder");
            objScope_.push_back(y);
            Formula body = iff();
            objScope_.pop_back();
            return Term::description(y, body);
        }
        return simpleTerm(identifier("a term"));
    }

    Formula primary() {
        const Token& t = peek();
        if (isKeyword(t, "bot")) {
            next();
            return mk::bot();
        }
        if (isKeyword(t, "top")) {
            next();
            return mk::top();
        }
        if (t.kind == Tok::Nominal) return mk::nom(next().text);
        if (t.kind == Tok::TVar) return mk::tvar(next().text);
        if (t.kind == Tok::LBrace) return braceIota();
        if (t.kind == Tok::LParen) {
            next();
            if (isKeyword(peek(), "lam")) {
                next();
                std::string x = identifier("a bound variable");
                expect(Tok::Dot, "'.' after binder");
                objScope_.push_back(x);
                Formula body = iff();
                objScope_.pop_back();
                expect(Tok::RParen, "')' closing the abstract");
                expect(Tok::LParen, "'(' before the abstract's argument");
                Term arg = term();
                expect(Tok::RParen, "')' after the abstract's argument");
                return mk::lambda(x, body, arg);
            }
            Formula f = iff();
            expect(Tok::RParen, "')'");
            return f;
        }
        if (t.kind == Tok::Ident) {
            if (kKeywords.count(t.text)) fail("unexpected keyword '" + t.text + "'");
            std::string name = next().text;
            if (peek().kind == Tok::LParen) {
                next();
                std::vector<Term> args;
                if (peek().kind != Tok::RParen) {
                    args.push_back(term());
                    while (peek().kind == Tok::Comma) {
                        next();
                        args.push_back(term());
                    }
                }
                expect(Tok::RParen, "')' closing the argument list");
                return mk::pred(name, std::move(args));
            }
            if (peek().kind == Tok::Eq || peek().kind == Tok::Neq) {
                bool isEq = next().kind == Tok::Eq;
                Term lhs = simpleTerm(name);
                Term rhs = term();
                return isEq ? mk::eq(lhs, rhs) : mk::neq(lhs, rhs);
            }
            if (std::find(objScope_.begin(), objScope_.end(), name) != objScope_.end())
                throw ParseError("bound variable " + name + " used as a formula", t.line, t.col);
            return mk::pred(name);
        }
        fail("expected a formula");
    }
};

// Renaming of binders so that every binder in a formula set is distinct and no
// bound variable shares a name with a constant or free variable.
class Renamer {
public:
    explicit Renamer(const std::vector<Formula>& all) {
        for (const auto& f : all)
            for (const auto& t : objectsInOrder(f)) avoid_.insert(t.name);
    }

    Formula run(const Formula& f) { return formula(f); }

private:
    std::set<std::string> avoid_;
    std::set<std::string> usedObj_;
    std::set<std::string> usedTense_;
    std::vector<std::pair<std::string, std::string>> obj_;
    std::vector<std::pair<std::string, std::string>> tense_;

    static std::string lookup(const std::vector<std::pair<std::string, std::string>>& env, const std::string& n) {
        for (auto it = env.rbegin(); it != env.rend(); ++it)
            if (it->first == n) return it->second;
        return n;
    }
    std::string freshName(const std::string& base, std::set<std::string>& used, bool object) {
        auto ok = [&](const std::string& c) {
            return !used.count(c) && !(object && (avoid_.count(c) || isFreeVarName(c))) && !kKeywords.count(c);
        };
        std::string name = base;
        for (int k = 1; !ok(name); ++k) name = base + std::to_string(k);
        used.insert(name);
        return name;
    }
    Term term(const Term& t) {
        if (t.kind == TermKind::Bound) return Term::bound(lookup(obj_, t.name));
        if (t.kind != TermKind::Description) return t;
        std::string y = freshName(t.name, usedObj_, true);
        obj_.emplace_back(t.name, y);
        Formula body = formula(t.body);
        obj_.pop_back();
        return Term::description(y, body);
    }
    Formula formula(const Formula& f) {
        switch (f.op()) {
        case Op::TenseVar:
            return mk::tvar(lookup(tense_, f.name()));
        case Op::Exists:
        case Op::Forall:
        case Op::Lambda: {
            std::string x = freshName(f.name(), usedObj_, true);
            obj_.emplace_back(f.name(), x);
            Formula body = formula(f.kid(0));
            obj_.pop_back();
            std::vector<Term> args;
            for (const auto& a : f.args()) args.push_back(term(a));
            return mk::make(f.op(), x, std::move(args), {body});
        }
        case Op::Down:
        case Op::TIota: {
            std::string x = freshName(f.name(), usedTense_, false);
            tense_.emplace_back(f.name(), x);
            Formula body = formula(f.kid(0));
            tense_.pop_back();
            return mk::make(f.op(), x, {}, {body});
        }
        default: {
            std::vector<Formula> kids;
            for (const auto& k : f->kids) kids.push_back(formula(k));
            std::vector<Term> args;
            for (const auto& a : f.args()) args.push_back(term(a));
            return mk::make(f.op(), f.name(), std::move(args), std::move(kids));
        }
        }
    }
};

Formula finish(const Formula& surface, bool sentence) {
    Formula core = expandAbbrev(renameApart({surface}).front());
    auto v = wellFormed(core, sentence);
    if (!v.empty()) throw ParseError("ill-formed: " + joinLines(v), 1, 1);
    return core;
}

// ---------------------------------------------------------------- printing

enum Level { kIff = 1, kImp = 2, kOr = 3, kAnd = 4, kUnary = 5 };

struct View {
    Op op;
    Formula a;
    Formula b;
};

// Recognises the abbreviation patterns produced by expandAbbrev.
View sugar(const Formula& f) {
    auto isNot = [](const Formula& g) { return g.op() == Op::Not; };
    switch (f.op()) {
    case Op::Not: {
        const Formula& g = f.kid(0);
        if (g.op() == Op::Bot) return {Op::Top, {}, {}};
        if (g.op() == Op::Eq) return {Op::Neq, g, {}};
        if (g.op() == Op::And && isNot(g.kid(0)) && isNot(g.kid(1))) {
            const Formula& l = g.kid(0).kid(0);
            if (isNot(l)) return {Op::Imp, l.kid(0), g.kid(1).kid(0)};
            return {Op::Or, l, g.kid(1).kid(0)};
        }
        if (g.op() == Op::Exists && isNot(g.kid(0))) return {Op::Forall, g, g.kid(0).kid(0)};
        if (g.op() == Op::Future && isNot(g.kid(0))) return {Op::G, g.kid(0).kid(0), {}};
        if (g.op() == Op::Past && isNot(g.kid(0))) return {Op::H, g.kid(0).kid(0), {}};
        return {Op::Not, g, {}};
    }
    case Op::And: {
        View l = sugar(f.kid(0));
        View r = sugar(f.kid(1));
        if (l.op == Op::Imp && r.op == Op::Imp && l.a == r.b && l.b == r.a) return {Op::Iff, l.a, l.b};
        return {Op::And, f.kid(0), f.kid(1)};
    }
    default:
        break;
    }
    if (f->kids.size() == 2 && f.op() != Op::At) return {f.op(), f.kid(0), f.kid(1)};
    if (f->kids.size() == 1 && f.op() != Op::TIota) return {f.op(), f.kid(0), {}};
    return {f.op(), {}, {}};
}

class Printer {
public:
    explicit Printer(const Formula& root) {
        for (const auto& t : objectsInOrder(root)) objects_.insert(t.name);
    }

    std::string print(const Formula& f) {
        std::ostringstream out;
        emit(out, f, 0);
        return out.str();
    }

private:
    std::set<std::string> objects_;
    std::vector<std::pair<std::string, std::string>> obj_;
    std::vector<std::pair<std::string, std::string>> tense_;

    static std::string lookup(const std::vector<std::pair<std::string, std::string>>& env, const std::string& n) {
        for (auto it = env.rbegin(); it != env.rend(); ++it)
            if (it->first == n) return it->second;
        return n;
    }
    std::string bind(std::vector<std::pair<std::string, std::string>>& env, const std::string& name, bool object) {
        auto taken = [&](const std::string& c) {
            if (kKeywords.count(c)) return true;
            if (object && (objects_.count(c) || isFreeVarName(c) || isTenseOpName(c))) return true;
            for (const auto& [from, to] : env)
                if (to == c) return true;
            return false;
        };
        std::string out = name;
        for (int k = 1; taken(out); ++k) out = name + std::to_string(k);
        env.emplace_back(name, out);
        return out;
    }

    static int level(Op op) {
        switch (op) {
        case Op::Iff: return kIff;
        case Op::Imp: return kImp;
        case Op::Or: return kOr;
        case Op::And: return kAnd;
        default: return kUnary;
        }
    }
    static bool binder(Op op) { return op == Op::Exists || op == Op::Forall || op == Op::Down; }

    // True when the printed form ends in a binder whose scope runs to the right.
    bool openEnded(const Formula& f) const {
        View v = sugar(f);
        if (binder(v.op)) return true;
        switch (v.op) {
        case Op::Not:
        case Op::Future:
        case Op::Past:
        case Op::G:
        case Op::H:
            return level(sugar(v.a).op) == kUnary && openEnded(v.a);
        case Op::At:
            return level(sugar(f.kid(1)).op) == kUnary && openEnded(f.kid(1));
        default:
            return false;
        }
    }

    void operand(std::ostream& out, const Formula& f, int minLevel) {
        View v = sugar(f);
        bool paren = level(v.op) < minLevel || (level(v.op) == kUnary && openEnded(f));
        if (paren) out << '(';
        emit(out, f, paren ? 0 : minLevel);
        if (paren) out << ')';
    }

    void prefixOperand(std::ostream& out, const Formula& f) {
        View v = sugar(f);
        if (level(v.op) < kUnary) {
            out << '(';
            emit(out, f, 0);
            out << ')';
        } else {
            emit(out, f, kUnary);
        }
    }

    void termOut(std::ostream& out, const Term& t) {
        switch (t.kind) {
        case TermKind::Bound: out << lookup(obj_, t.name); break;
        case TermKind::Free:
        case TermKind::Constant: out << t.name; break;
        case TermKind::Description: {
            std::string y = bind(obj_, t.name, true);
            out << "iota " << y << ". ";
            emit(out, t.body, 0);
            obj_.pop_back();
            break;
        }
        }
    }

    void emit(std::ostream& out, const Formula& f, int) {
        View v = sugar(f);
        switch (v.op) {
        case Op::Bot: out << "bot"; return;
        case Op::Top: out << "top"; return;
        case Op::Pred:
            out << f.name();
            if (!f.args().empty()) {
                out << '(';
                for (std::size_t i = 0; i < f.args().size(); ++i) {
                    if (i) out << ',';
                    termOut(out, f.args()[i]);
                }
                out << ')';
            }
            return;
        case Op::Eq:
            termOut(out, f.args()[0]);
            out << " = ";
            termOut(out, f.args()[1]);
            return;
        case Op::Neq: {
            const Formula& e = f.op() == Op::Neq ? f : v.a;
            termOut(out, e.args()[0]);
            out << " != ";
            termOut(out, e.args()[1]);
            return;
        }
        case Op::Nominal: out << '\'' << f.name(); return;
        case Op::TenseVar: out << '$' << lookup(tense_, f.name()); return;
        case Op::TIota: {
            std::string x = bind(tense_, f.name(), false);
            out << "{Iota $" << x << ". ";
            emit(out, f.kid(0), 0);
            out << '}';
            tense_.pop_back();
            return;
        }
        case Op::Not: out << '~'; prefixOperand(out, v.a); return;
        case Op::Future: out << "F "; prefixOperand(out, v.a); return;
        case Op::Past: out << "P "; prefixOperand(out, v.a); return;
        case Op::G: out << "G "; prefixOperand(out, v.a); return;
        case Op::H: out << "H "; prefixOperand(out, v.a); return;
        case Op::At:
            out << '@';
            emit(out, f.kid(0), kUnary);
            out << ' ';
            prefixOperand(out, f.kid(1));
            return;
        case Op::Exists:
        case Op::Forall: {
            // For sugared forall, v.a is the Exists node and v.b its negated body's core.
            const std::string& var = f.op() == Op::Forall || f.op() == Op::Exists ? f.name() : v.a.name();
            const Formula& body = f.op() == Op::Forall || f.op() == Op::Exists ? f.kid(0) : v.b;
            std::string x = bind(obj_, var, true);
            out << (v.op == Op::Exists ? "exists " : "forall ") << x << ". ";
            emit(out, body, 0);
            obj_.pop_back();
            return;
        }
        case Op::Down: {
            std::string x = bind(tense_, f.name(), false);
            out << "down $" << x << ". ";
            emit(out, f.kid(0), 0);
            tense_.pop_back();
            return;
        }
        case Op::Lambda: {
            std::string x = bind(obj_, f.name(), true);
            out << "(lam " << x << ". ";
            emit(out, f.kid(0), 0);
            obj_.pop_back();
            out << ")(";
            termOut(out, f.args()[0]);
            out << ')';
            return;
        }
        case Op::And: operand(out, v.a, kAnd); out << " & "; operand(out, v.b, kUnary); return;
        case Op::Or: operand(out, v.a, kOr); out << " | "; operand(out, v.b, kAnd); return;
        case Op::Imp: operand(out, v.a, kOr); out << " -> "; operand(out, v.b, kImp); return;
        case Op::Iff: operand(out, v.a, kIff); out << " <-> "; operand(out, v.b, kImp); return;
        }
    }
};

std::vector<std::string> splitLines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

std::string stripComment(const std::string& line) {
    auto pos = line.find('#');
    std::string s = pos == std::string::npos ? line : line.substr(0, pos);
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<Formula> renameApart(const std::vector<Formula>& formulas) {
    Renamer r(formulas);
    std::vector<Formula> out;
    for (const auto& f : formulas) out.push_back(r.run(f));
    return out;
}

Formula parseSurface(const std::string& text) { return Parser(text).parseAll(); }

Formula parseFormula(const std::string& text) { return finish(parseSurface(text), true); }

Formula parseOpenFormula(const std::string& text) { return finish(parseSurface(text), false); }

std::string printFormula(const Formula& phi) { return Printer(phi).print(phi); }

SourceProblem parseProblem(const std::string& text) {
    auto lines = splitLines(text);
    bool entailment = std::any_of(lines.begin(), lines.end(),
                                  [](const std::string& l) { return stripComment(l).rfind("|-", 0) == 0; });
    SourceProblem p;
    auto parseLine = [](const std::string& src, int lineNo) {
        try {
            return parseSurface(src);
        } catch (const ParseError& e) {
            throw ParseError(e.what(), lineNo, e.column);
        }
    };
    std::vector<Formula> surface;
    if (!entailment) {
        std::string body;
        for (const auto& l : lines) body += stripComment(l) + "\n";
        if (body.find_first_not_of(" \n") == std::string::npos) throw ParseError("empty input", 1, 1);
        surface.push_back(parseSurface(body));
        p.goalText = stripComment(body);
    } else {
        int goalLine = 0;
        for (std::size_t i = 0; i < lines.size(); ++i) {
            std::string l = stripComment(lines[i]);
            if (l.empty()) continue;
            int lineNo = static_cast<int>(i) + 1;
            if (l.rfind("|-", 0) == 0) {
                if (goalLine) throw ParseError("more than one goal line", lineNo, 1);
                goalLine = lineNo;
                p.goalText = stripComment(l.substr(2));
                continue;
            }
            if (goalLine) throw ParseError("premise after the goal line", lineNo, 1);
            p.premiseText.push_back(l);
            surface.push_back(parseLine(l, lineNo));
        }
        surface.push_back(parseLine(p.goalText, goalLine));
    }
    auto renamed = renameApart(surface);
    for (std::size_t i = 0; i < renamed.size(); ++i) {
        Formula core = expandAbbrev(renamed[i]);
        auto v = wellFormed(core, true);
        if (!v.empty()) throw ParseError("ill-formed: " + joinLines(v), 1, 1);
        if (i + 1 == renamed.size())
            p.goal = core;
        else
            p.premises.push_back(core);
    }
    return p;
}

// ---------------------------------------------------------------- models

using nlohmann::json;

std::vector<std::string> validateModelFile(const ModelFile& m) {
    std::vector<std::string> v;
    std::set<std::string> times(m.times.begin(), m.times.end());
    std::set<std::string> objects(m.domain.begin(), m.domain.end());
    if (m.times.empty()) v.push_back("times must be non-empty");
    if (m.domain.empty()) v.push_back("domain must be non-empty");
    if (times.size() != m.times.size()) v.push_back("duplicate time name");
    if (objects.size() != m.domain.size()) v.push_back("duplicate object name");
    for (const auto& [a, b] : m.prec) {
        if (!times.count(a)) v.push_back("unknown time '" + a + "' in prec");
        if (!times.count(b)) v.push_back("unknown time '" + b + "' in prec");
    }
    for (const auto& [n, t] : m.nominals)
        if (!times.count(t)) v.push_back("nominal '" + n + "' mapped to unknown time '" + t + "'");
    for (const auto& [c, o] : m.constants)
        if (!objects.count(o)) v.push_back("constant '" + c + "' mapped to unknown object '" + o + "'");
    for (const auto& [p, ext] : m.predicates) {
        if (ext.arity < 0) v.push_back("predicate '" + p + "' has negative arity");
        for (const auto& [t, tuples] : ext.at) {
            if (!times.count(t)) v.push_back("predicate '" + p + "' extended at unknown time '" + t + "'");
            for (const auto& tuple : tuples) {
                if (static_cast<int>(tuple.size()) != ext.arity)
                    v.push_back("tuple width mismatch for predicate '" + p + "'");
                for (const auto& o : tuple)
                    if (!objects.count(o)) v.push_back("unknown object '" + o + "' in predicate '" + p + "'");
            }
        }
    }
    for (const auto& [x, o] : m.objectAssignment)
        if (!objects.count(o)) v.push_back("variable '" + x + "' assigned unknown object '" + o + "'");
    for (const auto& [x, t] : m.timeAssignment)
        if (!times.count(t)) v.push_back("tense variable '" + x + "' assigned unknown time '" + t + "'");
    if (m.designated && !times.count(*m.designated)) v.push_back("designated time is not declared");
    return v;
}

ModelFile parseModel(const std::string& jsonText) {
    json j;
    try {
        j = json::parse(jsonText);
    } catch (const json::exception& e) {
        throw ModelError({std::string("invalid JSON: ") + e.what()});
    }
    ModelFile m;
    std::vector<std::string> v;
    try {
        if (!j.is_object()) throw ModelError({"model must be a JSON object"});
        for (const char* key : {"times", "domain"})
            if (!j.contains(key)) v.push_back(std::string("missing field '") + key + "'");
        if (!v.empty()) throw ModelError(v);
        m.times = j.at("times").get<std::vector<std::string>>();
        m.domain = j.at("domain").get<std::vector<std::string>>();
        if (j.contains("prec"))
            for (const auto& pair : j.at("prec")) {
                if (!pair.is_array() || pair.size() != 2) {
                    v.push_back("prec entries must be [time, time] pairs");
                    continue;
                }
                m.prec.emplace_back(pair[0].get<std::string>(), pair[1].get<std::string>());
            }
        if (j.contains("nominals")) m.nominals = j.at("nominals").get<std::map<std::string, std::string>>();
        if (j.contains("constants")) m.constants = j.at("constants").get<std::map<std::string, std::string>>();
        if (j.contains("predicates"))
            for (const auto& [p, spec] : j.at("predicates").items()) {
                ModelFile::Extension ext;
                ext.arity = spec.at("arity").get<int>();
                if (spec.contains("extension"))
                    for (const auto& [t, tuples] : spec.at("extension").items())
                        for (const auto& tuple : tuples) ext.at[t].insert(tuple.get<std::vector<std::string>>());
                m.predicates[p] = ext;
            }
        if (j.contains("assignment")) {
            const auto& a = j.at("assignment");
            if (a.contains("objects")) m.objectAssignment = a.at("objects").get<std::map<std::string, std::string>>();
            if (a.contains("times")) m.timeAssignment = a.at("times").get<std::map<std::string, std::string>>();
        }
        if (j.contains("designated")) m.designated = j.at("designated").get<std::string>();
    } catch (const json::exception& e) {
        v.push_back(std::string("schema error: ") + e.what());
    }
    auto more = validateModelFile(m);
    v.insert(v.end(), more.begin(), more.end());
    if (!v.empty()) throw ModelError(v);
    return m;
}

std::string writeModel(const ModelFile& m) {
    json j;
    j["times"] = m.times;
    j["prec"] = json::array();
    for (const auto& [a, b] : m.prec) j["prec"].push_back({a, b});
    j["domain"] = m.domain;
    j["nominals"] = m.nominals;
    j["constants"] = m.constants;
    j["predicates"] = json::object();
    for (const auto& [p, ext] : m.predicates) {
        json e;
        e["arity"] = ext.arity;
        e["extension"] = json::object();
        for (const auto& [t, tuples] : ext.at) {
            json arr = json::array();
            for (const auto& tuple : tuples) arr.push_back(tuple);
            e["extension"][t] = arr;
        }
        j["predicates"][p] = e;
    }
    if (!m.objectAssignment.empty() || !m.timeAssignment.empty())
        j["assignment"] = {{"objects", m.objectAssignment}, {"times", m.timeAssignment}};
    if (m.designated) j["designated"] = *m.designated;
    return j.dump(2);
}

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace fohl
