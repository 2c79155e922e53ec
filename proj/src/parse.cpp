#include <cctype>
#include <sstream>
#include <string>

#include "hodegeo/expr.hpp"

namespace hodegeo {

namespace {

// Recursive descent over:
//   expr := term (("+"|"-") term)*
//   term := unary (("*"|"/") unary)*
//   unary := "-" unary | pow
//   pow := atom ("^" atom)?
//   atom := number | ident | ident "(" expr ")" | "(" expr ")"
//   variable := "x" digits | "y" digits "_" digits
struct Parser {
    const std::string& s;
    std::size_t pos = 0;
    int n;
    int kmax;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool peek(char c) {
        skip_ws();
        return pos < s.size() && s[pos] == c;
    }

    bool accept(char c) {
        if (peek(c)) {
            ++pos;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(std::size_t at, const std::string& msg) { throw ParseError(at, msg); }

    Expr parse_expr() {
        Expr e = parse_term();
        for (;;) {
            if (accept('+')) {
                e = e + parse_term();
            } else if (accept('-')) {
                e = e - parse_term();
            } else {
                return e;
            }
        }
    }

    Expr parse_term() {
        Expr e = parse_unary();
        for (;;) {
            if (accept('*')) {
                e = e * parse_unary();
            } else if (accept('/')) {
                e = e / parse_unary();
            } else {
                return e;
            }
        }
    }

    Expr parse_unary() {
        if (accept('-')) return Expr::negate(parse_unary());
        return parse_pow();
    }

    Expr parse_pow() {
        Expr base = parse_atom();
        if (accept('^')) {
            std::size_t at = pos;
            Expr ex = simplify(parse_atom());
            if (!ex.is_number()) fail(at, "exponent must be a rational constant");
            return Expr::power(std::move(base), ex.value());
        }
        return base;
    }

    Expr parse_atom() {
        skip_ws();
        if (pos >= s.size()) fail(pos, "unexpected end of input");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            Expr e = parse_expr();
            if (!accept(')')) fail(pos, "expected ')'");
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(pos, std::string("unexpected character '") + c + "'");
    }

    Expr parse_number() {
        std::size_t start = pos;
        __int128 mantissa = 0;
        int digits = 0;
        int frac_digits = 0;
        bool saw_dot = false;
        while (pos < s.size()) {
            char c = s[pos];
            if (std::isdigit(static_cast<unsigned char>(c))) {
                if (digits >= 18) fail(start, "number literal too long");
                mantissa = mantissa * 10 + (c - '0');
                ++digits;
                if (saw_dot) ++frac_digits;
                ++pos;
            } else if (c == '.' && !saw_dot) {
                saw_dot = true;
                ++pos;
            } else {
                break;
            }
        }
        long long exp10 = 0;
        if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
            std::size_t save = pos;
            ++pos;
            bool neg = false;
            if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
                neg = (s[pos] == '-');
                ++pos;
            }
            if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) {
                pos = save;  // 'e' belongs to a following identifier, not this literal
            } else {
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
                    exp10 = exp10 * 10 + (s[pos] - '0');
                    if (exp10 > 30) fail(start, "exponent out of range");
                    ++pos;
                }
                if (neg) exp10 = -exp10;
            }
        }
        long long shift = exp10 - frac_digits;
        __int128 num = mantissa, den = 1;
        for (long long i = 0; i < shift; ++i) num *= 10;
        for (long long i = 0; i < -shift; ++i) den *= 10;
        try {
            return Expr::number(Rational::make(num, den));
        } catch (const std::overflow_error&) {
            fail(start, "number literal out of range");
        }
    }

    Expr parse_ident() {
        std::size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
            ++pos;
        std::string name = s.substr(start, pos - start);

        if (VarId v; classify_variable(name, start, v)) return Expr::variable(v);

        if (peek('(')) {
            Func fn;
            if (name == "sin") fn = Func::Sin;
            else if (name == "cos") fn = Func::Cos;
            else if (name == "tan") fn = Func::Tan;
            else if (name == "exp") fn = Func::Exp;
            else if (name == "log") fn = Func::Log;
            else if (name == "sqrt") fn = Func::Sqrt;
            else fail(start, "unknown function '" + name + "'");
            ++pos;  // '('
            Expr arg = parse_expr();
            if (!accept(')')) fail(pos, "expected ')' after function argument");
            return Expr::call(fn, std::move(arg));
        }
        return Expr::parameter(std::move(name));
    }

    // xI or yA_I with bounds 1 <= I <= n and 1 <= A <= kmax.
    bool classify_variable(const std::string& name, std::size_t at, VarId& out) {
        auto all_digits = [](const std::string& t) {
            if (t.empty()) return false;
            for (char c : t)
                if (!std::isdigit(static_cast<unsigned char>(c))) return false;
            return true;
        };
        if (name.size() >= 2 && name[0] == 'x' && all_digits(name.substr(1))) {
            int idx = std::stoi(name.substr(1));
            if (idx < 1 || idx > n)
                fail(at, "variable index " + std::to_string(idx) + " out of range 1.." +
                             std::to_string(n));
            out = base_var(idx);
            return true;
        }
        if (name.size() >= 4 && name[0] == 'y') {
            std::size_t us = name.find('_');
            if (us != std::string::npos && us >= 2 && all_digits(name.substr(1, us - 1)) &&
                all_digits(name.substr(us + 1))) {
                int lv = std::stoi(name.substr(1, us - 1));
                int idx = std::stoi(name.substr(us + 1));
                if (lv < 1 || lv > kmax)
                    fail(at, "jet level " + std::to_string(lv) + " exceeds order " +
                                 std::to_string(kmax));
                if (idx < 1 || idx > n)
                    fail(at, "variable index " + std::to_string(idx) + " out of range 1.." +
                                 std::to_string(n));
                out = jet_var(lv, idx);
                return true;
            }
        }
        return false;
    }
};

// ---------------------------------------------------------------------------
// Printer. Output re-parses to the same expression up to simplify.

bool atom_like(const Expr& e) {
    switch (e.kind()) {
        case Kind::Var:
        case Kind::Param:
        case Kind::Call:
            return true;
        case Kind::Number:
            return e.value().num >= 0;
        default:
            return false;
    }
}

void print(std::ostream& os, const Expr& e);

void print_wrapped(std::ostream& os, const Expr& e, bool need_parens) {
    if (need_parens) os << '(';
    print(os, e);
    if (need_parens) os << ')';
}

// Splits off a leading minus sign so sums can print "a - b".
bool term_is_negative(const Expr& e) {
    if (e.kind() == Kind::Number) return e.value().num < 0;
    if (e.kind() == Kind::Neg) return true;
    if (e.kind() == Kind::Product && !e.kids().empty() && e.kid(0).kind() == Kind::Number)
        return e.kid(0).value().num < 0;
    return false;
}

Expr term_magnitude(const Expr& e) {
    if (e.kind() == Kind::Number) return Expr::number(-e.value());
    if (e.kind() == Kind::Neg) return e.kid(0);
    if (e.kind() == Kind::Product && !e.kids().empty() && e.kid(0).kind() == Kind::Number) {
        Rational c = -e.kid(0).value();
        std::vector<Expr> rest(e.kids().begin() + 1, e.kids().end());
        if (c.is_one() && rest.size() == 1) return rest[0];
        if (!c.is_one()) rest.insert(rest.begin(), Expr::number(c));
        return Expr::product(std::move(rest));
    }
    return e;
}

void print(std::ostream& os, const Expr& e) {
    switch (e.kind()) {
        case Kind::Number: {
            const Rational& r = e.value();
            if (r.num < 0) {
                os << '-' << Rational(-r.num, r.den).str();
            } else {
                os << r.str();
            }
            return;
        }
        case Kind::Var:
            if (e.var().is_base()) {
                os << 'x' << e.var().index;
            } else {
                os << 'y' << e.var().level << '_' << e.var().index;
            }
            return;
        case Kind::Param:
            os << e.name();
            return;
        case Kind::Call:
            os << func_name(e.fn()) << '(';
            print(os, e.kid(0));
            os << ')';
            return;
        case Kind::Neg:
            os << '-';
            print_wrapped(os, e.kid(0), !atom_like(e.kid(0)));
            return;
        case Kind::Power: {
            print_wrapped(os, e.kid(0), !atom_like(e.kid(0)));
            os << '^';
            const Rational& r = e.value();
            if (r.is_integer() && r.num >= 0) {
                os << r.num;
            } else {
                os << '(';
                if (r.num < 0) os << '-';
                os << Rational(r.num < 0 ? -r.num : r.num, r.den).str();
                os << ')';
            }
            return;
        }
        case Kind::Product: {
            bool first = true;
            for (const Expr& f : e.kids()) {
                if (!first) os << '*';
                bool parens = f.kind() == Kind::Sum || f.kind() == Kind::Neg ||
                              f.kind() == Kind::Product ||
                              (f.kind() == Kind::Number && (f.value().num < 0 && !first));
                print_wrapped(os, f, parens);
                first = false;
            }
            return;
        }
        case Kind::Sum: {
            bool first = true;
            for (const Expr& t : e.kids()) {
                if (term_is_negative(t)) {
                    os << (first ? "-" : " - ");
                    print(os, term_magnitude(t));
                } else {
                    if (!first) os << " + ";
                    print(os, t);
                }
                first = false;
            }
            return;
        }
    }
}

}  // namespace

Expr parse_expression(const std::string& text, int n, int k_max) {
    if (n < 1) throw Error("dimension must be >= 1");
    if (k_max < 1) throw Error("order must be >= 1");
    Parser p{text, 0, n, k_max};
    Expr e = p.parse_expr();
    p.skip_ws();
    if (p.pos != text.size()) p.fail(p.pos, "unexpected trailing input");
    return e;
}

std::string to_string(const Expr& e) {
    std::ostringstream os;
    print(os, e);
    return os.str();
}

}  // namespace hodegeo
