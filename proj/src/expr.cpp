#include "hodegeo/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>
#include <unordered_map>

namespace hodegeo {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

std::uint64_t hash_rational(const Rational& r) {
    return mix(static_cast<std::uint64_t>(r.num) * 0x100000001b3ULL,
               static_cast<std::uint64_t>(r.den));
}

std::uint64_t hash_node(const Node& n) {
    std::uint64_t h = static_cast<std::uint64_t>(n.kind) * 0xff51afd7ed558ccdULL;
    switch (n.kind) {
        case Kind::Number:
            h = mix(h, hash_rational(n.value));
            break;
        case Kind::Var:
            h = mix(h, static_cast<std::uint64_t>(n.var.level) << 32 |
                           static_cast<std::uint64_t>(static_cast<std::uint32_t>(n.var.index)));
            break;
        case Kind::Param:
            h = mix(h, std::hash<std::string>{}(n.name));
            break;
        case Kind::Call:
            h = mix(h, static_cast<std::uint64_t>(n.fn));
            break;
        case Kind::Power:
            h = mix(h, hash_rational(n.value));
            break;
        default:
            break;
    }
    for (const Expr& k : n.kids) h = mix(h, k.hash());
    return h;
}

std::shared_ptr<const Node> make_node(Node&& n) {
    auto p = std::make_shared<Node>();
    p->kind = n.kind;
    p->value = n.value;
    p->var = n.var;
    p->name = std::move(n.name);
    p->fn = n.fn;
    p->kids = std::move(n.kids);
    p->hash = hash_node(*p);
    return p;
}

int kind_rank(Kind k) {
    switch (k) {
        case Kind::Number: return 0;
        case Kind::Var: return 1;
        case Kind::Param: return 2;
        case Kind::Call: return 3;
        case Kind::Power: return 4;
        case Kind::Neg: return 5;
        case Kind::Product: return 6;
        case Kind::Sum: return 7;
    }
    return 8;
}

}  // namespace

const char* func_name(Func f) {
    switch (f) {
        case Func::Sin: return "sin";
        case Func::Cos: return "cos";
        case Func::Tan: return "tan";
        case Func::Exp: return "exp";
        case Func::Log: return "log";
        case Func::Sqrt: return "sqrt";
    }
    return "?";
}

Expr::Expr() : node_(zero().node_) {}

Expr Expr::number(const Rational& r) {
    Node n;
    n.kind = Kind::Number;
    n.value = r;
    return Expr(make_node(std::move(n)));
}

Expr Expr::variable(VarId v) {
    Node n;
    n.kind = Kind::Var;
    n.var = v;
    return Expr(make_node(std::move(n)));
}

Expr Expr::parameter(std::string name) {
    Node n;
    n.kind = Kind::Param;
    n.name = std::move(name);
    return Expr(make_node(std::move(n)));
}

Expr Expr::call(Func fn, Expr arg) {
    Node n;
    n.kind = Kind::Call;
    n.fn = fn;
    n.kids.push_back(std::move(arg));
    return Expr(make_node(std::move(n)));
}

Expr Expr::power(Expr base, const Rational& exponent) {
    Node n;
    n.kind = Kind::Power;
    n.value = exponent;
    n.kids.push_back(std::move(base));
    return Expr(make_node(std::move(n)));
}

Expr Expr::negate(Expr e) {
    Node n;
    n.kind = Kind::Neg;
    n.kids.push_back(std::move(e));
    return Expr(make_node(std::move(n)));
}

Expr Expr::product(std::vector<Expr> factors) {
    if (factors.empty()) return one();
    if (factors.size() == 1) return factors[0];
    Node n;
    n.kind = Kind::Product;
    n.kids = std::move(factors);
    return Expr(make_node(std::move(n)));
}

Expr Expr::sum(std::vector<Expr> terms) {
    if (terms.empty()) return zero();
    if (terms.size() == 1) return terms[0];
    Node n;
    n.kind = Kind::Sum;
    n.kids = std::move(terms);
    return Expr(make_node(std::move(n)));
}

const Expr& Expr::zero() {
    static const Expr z = [] {
        Node n;
        n.kind = Kind::Number;
        n.value = Rational(0);
        auto p = make_node(std::move(n));
        p->canonical.store(true);
        return Expr(p);
    }();
    return z;
}

const Expr& Expr::one() {
    static const Expr o = [] {
        Node n;
        n.kind = Kind::Number;
        n.value = Rational(1);
        auto p = make_node(std::move(n));
        p->canonical.store(true);
        return Expr(p);
    }();
    return o;
}

Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const VarId& Expr::var() const { return node_->var; }
const std::string& Expr::name() const { return node_->name; }
Func Expr::fn() const { return node_->fn; }
const std::vector<Expr>& Expr::kids() const { return node_->kids; }
const Expr& Expr::kid(std::size_t i) const { return node_->kids[i]; }
std::uint64_t Expr::hash() const { return node_->hash; }

bool Expr::is_zero() const { return kind() == Kind::Number && value().is_zero(); }
bool Expr::is_one() const { return kind() == Kind::Number && value().is_one(); }

Expr operator+(const Expr& a, const Expr& b) { return Expr::sum({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return Expr::sum({a, Expr::negate(b)}); }
Expr operator*(const Expr& a, const Expr& b) { return Expr::product({a, b}); }
Expr operator/(const Expr& a, const Expr& b) {
    return Expr::product({a, Expr::power(b, Rational(-1))});
}
Expr Expr::operator-() const { return Expr::negate(*this); }

int compare(const Expr& a, const Expr& b) {
    if (a.raw() == b.raw()) return 0;
    int ra = kind_rank(a.kind()), rb = kind_rank(b.kind());
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (a.kind()) {
        case Kind::Number:
            return cmp(a.value(), b.value());
        case Kind::Var: {
            if (a.var().level != b.var().level) return a.var().level < b.var().level ? -1 : 1;
            if (a.var().index != b.var().index) return a.var().index < b.var().index ? -1 : 1;
            return 0;
        }
        case Kind::Param:
            return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
        case Kind::Call: {
            if (a.fn() != b.fn()) return static_cast<int>(a.fn()) < static_cast<int>(b.fn()) ? -1 : 1;
            return compare(a.kid(0), b.kid(0));
        }
        case Kind::Power: {
            int c = compare(a.kid(0), b.kid(0));
            if (c != 0) return c;
            return cmp(a.value(), b.value());
        }
        default: {
            const auto& ka = a.kids();
            const auto& kb = b.kids();
            std::size_t m = std::min(ka.size(), kb.size());
            for (std::size_t i = 0; i < m; ++i) {
                int c = compare(ka[i], kb[i]);
                if (c != 0) return c;
            }
            if (ka.size() != kb.size()) return ka.size() < kb.size() ? -1 : 1;
            return 0;
        }
    }
}

// ---------------------------------------------------------------------------
// JetPoint

JetPoint JetPoint::make(int n, int k) {
    JetPoint p;
    p.n = n;
    p.k = k;
    p.x.assign(static_cast<std::size_t>(n), 0.0);
    p.y.assign(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    return p;
}

double JetPoint::coord(const VarId& v) const {
    if (v.index < 1 || v.index > n || v.level < 0 || v.level > k)
        throw EvalError("unbound variable " + std::string(v.level == 0 ? "x" : "y") +
                        std::to_string(v.level == 0 ? v.index : v.level) +
                        (v.level == 0 ? "" : "_" + std::to_string(v.index)));
    if (v.level == 0) return x[static_cast<std::size_t>(v.index - 1)];
    return y[static_cast<std::size_t>(v.level - 1)][static_cast<std::size_t>(v.index - 1)];
}

double& JetPoint::coord(const VarId& v) {
    if (v.index < 1 || v.index > n || v.level < 0 || v.level > k)
        throw EvalError("unbound variable");
    if (v.level == 0) return x[static_cast<std::size_t>(v.index - 1)];
    return y[static_cast<std::size_t>(v.level - 1)][static_cast<std::size_t>(v.index - 1)];
}

bool JetPoint::regular() const {
    if (k < 1) return true;
    for (double v : y[0])
        if (std::abs(v) > 1e-12) return true;
    return false;
}

// ---------------------------------------------------------------------------
// Simplifier

namespace {

// Canonical form invariants:
//  - Sum children are non-Sum, sorted by the core order, like terms collected,
//    at most one plain Number term.
//  - Product children carry at most one Number (first), no nested Product/Sum
//    at the top level, powers of equal bases merged, factors sorted by base.
//  - Power has exponent not in {0,1}; sqrt is rewritten to exponent 1/2;
//    positive integer powers of sums are expanded, negative ones normalized
//    to exponent -1 over an expanded base.
class Simplifier {
public:
    Expr run(const Expr& e) {
        if (e.raw()->canonical.load(std::memory_order_relaxed)) return e;
        auto it = memo_.find(e.raw());
        if (it != memo_.end()) return it->second;
        Expr out;
        switch (e.kind()) {
            case Kind::Number:
            case Kind::Var:
            case Kind::Param:
                e.raw()->canonical.store(true, std::memory_order_relaxed);
                out = e;
                break;
            case Kind::Neg:
                out = product_of({Expr::integer(-1), run(e.kid(0))});
                break;
            case Kind::Call:
                out = make_call(e.fn(), run(e.kid(0)));
                break;
            case Kind::Power:
                out = make_power(run(e.kid(0)), e.value());
                break;
            case Kind::Product: {
                std::vector<Expr> kids;
                kids.reserve(e.kids().size());
                for (const Expr& k : e.kids()) kids.push_back(run(k));
                out = product_of(std::move(kids));
                break;
            }
            case Kind::Sum: {
                std::vector<Expr> kids;
                kids.reserve(e.kids().size());
                for (const Expr& k : e.kids()) kids.push_back(run(k));
                out = sum_of(std::move(kids));
                break;
            }
        }
        memo_.emplace(e.raw(), out);
        return out;
    }

private:
    std::unordered_map<const Node*, Expr> memo_;

    static Expr mark(Expr e) {
        e.raw()->canonical.store(true, std::memory_order_relaxed);
        return e;
    }

    static Expr canonical_number(const Rational& r) {
        if (r.is_zero()) return Expr::zero();
        if (r.is_one()) return Expr::one();
        return mark(Expr::number(r));
    }

    Expr make_call(Func fn, Expr arg) {
        if (fn == Func::Sqrt) return make_power(std::move(arg), Rational(1, 2));
        if (arg.is_number()) {
            const Rational& r = arg.value();
            if (r.is_zero()) {
                if (fn == Func::Sin || fn == Func::Tan) return Expr::zero();
                if (fn == Func::Cos || fn == Func::Exp) return Expr::one();
            }
            if (r.is_one() && fn == Func::Log) return Expr::zero();
        }
        return mark(Expr::call(fn, std::move(arg)));
    }

    // base is canonical.
    Expr make_power(Expr base, Rational r) {
        if (r.is_zero()) return Expr::one();
        if (r.is_one()) return base;
        if (base.is_number()) {
            const Rational& b = base.value();
            if (r.is_integer()) {
                if (!(b.is_zero() && r.num < 0)) return canonical_number(b.pow_int(r.num));
            } else if (Rational root; exact_root(b, r.den, root)) {
                return canonical_number(root.pow_int(r.num));
            }
            return mark(Expr::power(std::move(base), r));
        }
        if (base.kind() == Kind::Power) {
            if (r.is_integer()) return make_power(base.kid(0), base.value() * r);
            return mark(Expr::power(std::move(base), r));
        }
        if (base.kind() == Kind::Product && r.is_integer()) {
            std::vector<Expr> parts;
            parts.reserve(base.kids().size());
            for (const Expr& f : base.kids()) parts.push_back(make_power(f, r));
            return product_of(std::move(parts));
        }
        if (base.kind() == Kind::Sum && r.is_integer()) {
            constexpr long long expand_limit = 8;
            long long m = r.num < 0 ? -r.num : r.num;
            if (m >= 2 && m <= expand_limit) {
                Expr expanded = base;
                for (long long i = 1; i < m; ++i) expanded = product_of({expanded, base});
                if (r.num > 0) return expanded;
                if (expanded.kind() == Kind::Sum) return mark(Expr::power(expanded, Rational(-1)));
                return make_power(expanded, Rational(-1));
            }
        }
        return mark(Expr::power(std::move(base), r));
    }

    static bool exact_root(const Rational& b, long long q, Rational& out) {
        if (b.num < 0) return false;
        long long rn, rd;
        if (!int_root(b.num, q, rn) || !int_root(b.den, q, rd)) return false;
        out = Rational(rn, rd);
        return true;
    }

    static bool int_root(long long v, long long q, long long& out) {
        if (v < 0) return false;
        long long r = static_cast<long long>(std::llround(std::pow(static_cast<double>(v),
                                                                   1.0 / static_cast<double>(q))));
        for (long long c = std::max(0LL, r - 1); c <= r + 1; ++c) {
            __int128 p = 1;
            for (long long i = 0; i < q; ++i) p *= c;
            if (p == v) {
                out = c;
                return true;
            }
        }
        return false;
    }

    // items are canonical; returns the canonical product.
    Expr product_of(std::vector<Expr> items) {
        Rational coeff(1);
        std::vector<Expr> factors;
        std::vector<Expr> stack(items.rbegin(), items.rend());
        while (!stack.empty()) {
            Expr f = stack.back();
            stack.pop_back();
            if (f.is_number()) {
                coeff = coeff * f.value();
                if (coeff.is_zero()) return Expr::zero();
            } else if (f.kind() == Kind::Product) {
                for (auto it = f.kids().rbegin(); it != f.kids().rend(); ++it) stack.push_back(*it);
            } else {
                factors.push_back(std::move(f));
            }
        }
        // Distribute over the first sum factor, if any.
        for (std::size_t i = 0; i < factors.size(); ++i) {
            if (factors[i].kind() != Kind::Sum) continue;
            std::vector<Expr> terms;
            terms.reserve(factors[i].kids().size());
            for (const Expr& t : factors[i].kids()) {
                std::vector<Expr> rest;
                rest.reserve(factors.size() + 1);
                rest.push_back(canonical_number(coeff));
                for (std::size_t j = 0; j < factors.size(); ++j)
                    if (j != i) rest.push_back(factors[j]);
                rest.push_back(t);
                terms.push_back(product_of(std::move(rest)));
            }
            return sum_of(std::move(terms));
        }
        // Merge powers of equal bases.
        std::vector<std::pair<Expr, Rational>> merged;
        for (const Expr& f : factors) {
            Expr base = f.kind() == Kind::Power ? f.kid(0) : f;
            Rational ex = f.kind() == Kind::Power ? f.value() : Rational(1);
            bool found = false;
            for (auto& [b, e] : merged) {
                if (compare(b, base) == 0) {
                    e = e + ex;
                    found = true;
                    break;
                }
            }
            if (!found) merged.emplace_back(std::move(base), ex);
        }
        std::vector<Expr> rebuilt;
        bool reprocess = false;
        for (auto& [b, e] : merged) {
            if (e.is_zero()) continue;
            Expr p = make_power(b, e);
            if (p.is_number()) {
                coeff = coeff * p.value();
                if (coeff.is_zero()) return Expr::zero();
                continue;
            }
            if (p.kind() == Kind::Sum || p.kind() == Kind::Product) reprocess = true;
            rebuilt.push_back(std::move(p));
        }
        if (reprocess) {
            rebuilt.push_back(canonical_number(coeff));
            return product_of(std::move(rebuilt));
        }
        std::sort(rebuilt.begin(), rebuilt.end(), [](const Expr& a, const Expr& b) {
            const Expr& ba = a.kind() == Kind::Power ? a.kid(0) : a;
            const Expr& bb = b.kind() == Kind::Power ? b.kid(0) : b;
            int c = compare(ba, bb);
            if (c != 0) return c < 0;
            Rational ea = a.kind() == Kind::Power ? a.value() : Rational(1);
            Rational eb = b.kind() == Kind::Power ? b.value() : Rational(1);
            return cmp(ea, eb) < 0;
        });
        if (rebuilt.empty()) return canonical_number(coeff);
        if (coeff.is_one()) {
            if (rebuilt.size() == 1) return rebuilt[0];
            return mark(Expr::product(std::move(rebuilt)));
        }
        std::vector<Expr> all;
        all.reserve(rebuilt.size() + 1);
        all.push_back(canonical_number(coeff));
        for (auto& f : rebuilt) all.push_back(std::move(f));
        return mark(Expr::product(std::move(all)));
    }

    // Splits a canonical non-Sum term into rational coefficient and core.
    static void decompose(const Expr& t, Rational& coeff, Expr& core) {
        if (t.is_number()) {
            coeff = t.value();
            core = Expr::one();
            return;
        }
        if (t.kind() == Kind::Product && t.kid(0).is_number()) {
            coeff = t.kid(0).value();
            if (t.kids().size() == 2) {
                core = t.kid(1);
            } else {
                std::vector<Expr> rest(t.kids().begin() + 1, t.kids().end());
                core = mark(Expr::product(std::move(rest)));
            }
            return;
        }
        coeff = Rational(1);
        core = t;
    }

    Expr sum_of(std::vector<Expr> items) {
        std::vector<Expr> flat;
        std::vector<Expr> stack(items.rbegin(), items.rend());
        while (!stack.empty()) {
            Expr t = stack.back();
            stack.pop_back();
            if (t.kind() == Kind::Sum) {
                for (auto it = t.kids().rbegin(); it != t.kids().rend(); ++it) stack.push_back(*it);
            } else {
                flat.push_back(std::move(t));
            }
        }
        struct Bucket {
            Expr core;
            Rational coeff;
        };
        std::vector<Bucket> buckets;
        std::unordered_map<std::uint64_t, std::vector<std::size_t>> index;
        for (const Expr& t : flat) {
            if (t.is_zero()) continue;
            Rational c;
            Expr core;
            decompose(t, c, core);
            bool found = false;
            for (std::size_t pos : index[core.hash()]) {
                if (compare(buckets[pos].core, core) == 0) {
                    buckets[pos].coeff = buckets[pos].coeff + c;
                    found = true;
                    break;
                }
            }
            if (!found) {
                index[core.hash()].push_back(buckets.size());
                buckets.push_back(Bucket{core, c});
            }
        }
        std::vector<std::pair<Expr, Expr>> terms;  // (core, term)
        for (const Bucket& b : buckets) {
            if (b.coeff.is_zero()) continue;
            Expr term;
            if (b.core.is_one()) {
                term = canonical_number(b.coeff);
            } else if (b.coeff.is_one()) {
                term = b.core;
            } else {
                std::vector<Expr> fs;
                fs.push_back(canonical_number(b.coeff));
                if (b.core.kind() == Kind::Product) {
                    for (const Expr& f : b.core.kids()) fs.push_back(f);
                } else {
                    fs.push_back(b.core);
                }
                term = mark(Expr::product(std::move(fs)));
            }
            terms.emplace_back(b.core, std::move(term));
        }
        std::sort(terms.begin(), terms.end(),
                  [](const auto& a, const auto& b) { return compare(a.first, b.first) < 0; });
        if (terms.empty()) return Expr::zero();
        if (terms.size() == 1) return terms[0].second;
        std::vector<Expr> out;
        out.reserve(terms.size());
        for (auto& t : terms) out.push_back(std::move(t.second));
        return mark(Expr::sum(std::move(out)));
    }
};

}  // namespace

Expr simplify(const Expr& e) { return Simplifier{}.run(e); }

// ---------------------------------------------------------------------------
// Differentiation

namespace {

class Differ {
public:
    explicit Differ(const VarId& v) : v_(v) {}

    Expr d(const Expr& e) {
        auto it = memo_.find(e.raw());
        if (it != memo_.end()) return it->second;
        Expr out;
        switch (e.kind()) {
            case Kind::Number:
            case Kind::Param:
                out = Expr::zero();
                break;
            case Kind::Var:
                out = (e.var() == v_) ? Expr::one() : Expr::zero();
                break;
            case Kind::Neg:
                out = Expr::negate(d(e.kid(0)));
                break;
            case Kind::Call:
                out = chain(e);
                break;
            case Kind::Power: {
                // d(b^r) = r * b^(r-1) * db
                Expr db = d(e.kid(0));
                if (db.is_zero()) {
                    out = Expr::zero();
                } else {
                    out = Expr::product({Expr::number(e.value()),
                                         Expr::power(e.kid(0), e.value() - Rational(1)), db});
                }
                break;
            }
            case Kind::Product: {
                std::vector<Expr> terms;
                const auto& ks = e.kids();
                for (std::size_t i = 0; i < ks.size(); ++i) {
                    Expr di = d(ks[i]);
                    if (di.is_zero()) continue;
                    std::vector<Expr> fs;
                    fs.reserve(ks.size());
                    for (std::size_t j = 0; j < ks.size(); ++j) fs.push_back(j == i ? di : ks[j]);
                    terms.push_back(Expr::product(std::move(fs)));
                }
                out = Expr::sum(std::move(terms));
                break;
            }
            case Kind::Sum: {
                std::vector<Expr> terms;
                for (const Expr& k : e.kids()) {
                    Expr dk = d(k);
                    if (!dk.is_zero()) terms.push_back(std::move(dk));
                }
                out = Expr::sum(std::move(terms));
                break;
            }
        }
        memo_.emplace(e.raw(), out);
        return out;
    }

private:
    Expr chain(const Expr& e) {
        Expr da = d(e.kid(0));
        if (da.is_zero()) return Expr::zero();
        const Expr& a = e.kid(0);
        Expr outer;
        switch (e.fn()) {
            case Func::Sin: outer = Expr::call(Func::Cos, a); break;
            case Func::Cos: outer = Expr::negate(Expr::call(Func::Sin, a)); break;
            case Func::Tan: outer = Expr::power(Expr::call(Func::Cos, a), Rational(-2)); break;
            case Func::Exp: outer = Expr::call(Func::Exp, a); break;
            case Func::Log: outer = Expr::power(a, Rational(-1)); break;
            case Func::Sqrt:
                outer = Expr::product({Expr::rational(1, 2), Expr::power(a, Rational(-1, 2))});
                break;
        }
        return Expr::product({outer, da});
    }

    VarId v_;
    std::unordered_map<const Node*, Expr> memo_;
};

}  // namespace

Expr differentiate(const Expr& e, const VarId& v) { return simplify(Differ(v).d(e)); }

// ---------------------------------------------------------------------------
// Evaluation

double evaluate(const Expr& e, const JetPoint& p) {
    switch (e.kind()) {
        case Kind::Number:
            return e.value().to_double();
        case Kind::Var:
            return p.coord(e.var());
        case Kind::Param: {
            auto it = p.params.find(e.name());
            if (it == p.params.end()) throw EvalError("unbound parameter " + e.name());
            return it->second;
        }
        case Kind::Neg:
            return -evaluate(e.kid(0), p);
        case Kind::Call: {
            double a = evaluate(e.kid(0), p);
            switch (e.fn()) {
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Tan: {
                    double v = std::tan(a);
                    if (!std::isfinite(v)) throw DomainError("tan pole");
                    return v;
                }
                case Func::Exp: {
                    double v = std::exp(a);
                    if (!std::isfinite(v)) throw DomainError("exp overflow");
                    return v;
                }
                case Func::Log:
                    if (a <= 0.0) throw DomainError("log of non-positive value");
                    return std::log(a);
                case Func::Sqrt:
                    if (a < 0.0) throw DomainError("sqrt of negative value");
                    return std::sqrt(a);
            }
            throw EvalError("unknown function");
        }
        case Kind::Power: {
            double b = evaluate(e.kid(0), p);
            const Rational& r = e.value();
            if (r.is_integer()) {
                if (b == 0.0 && r.num < 0) throw DomainError("zero to a negative power");
                double v = std::pow(b, static_cast<double>(r.num));
                if (!std::isfinite(v)) throw DomainError("power overflow");
                return v;
            }
            if (b < 0.0) throw DomainError("negative base with fractional exponent");
            if (b == 0.0 && r.num < 0) throw DomainError("zero to a negative power");
            double v = std::pow(b, r.to_double());
            if (!std::isfinite(v)) throw DomainError("power overflow");
            return v;
        }
        case Kind::Product: {
            double acc = 1.0;
            for (const Expr& k : e.kids()) acc *= evaluate(k, p);
            if (!std::isfinite(acc)) throw DomainError("non-finite product");
            return acc;
        }
        case Kind::Sum: {
            double acc = 0.0;
            for (const Expr& k : e.kids()) acc += evaluate(k, p);
            if (!std::isfinite(acc)) throw DomainError("non-finite sum");
            return acc;
        }
    }
    throw EvalError("malformed expression");
}

// ---------------------------------------------------------------------------
// Scans

namespace {

template <typename F>
void walk(const Expr& e, F&& f) {
    f(e);
    for (const Expr& k : e.kids()) walk(k, f);
}

}  // namespace

std::vector<std::string> parameters_of(const Expr& e) {
    std::vector<std::string> out;
    walk(e, [&](const Expr& x) {
        if (x.kind() == Kind::Param) out.push_back(x.name());
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<VarId> variables_of(const Expr& e) {
    std::vector<VarId> out;
    walk(e, [&](const Expr& x) {
        if (x.kind() == Kind::Var) out.push_back(x.var());
    });
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](const VarId& a, const VarId& b) { return a == b; }),
              out.end());
    return out;
}

int max_var_level(const Expr& e) {
    int lv = 0;
    walk(e, [&](const Expr& x) {
        if (x.kind() == Kind::Var) lv = std::max(lv, x.var().level);
    });
    return lv;
}

// ---------------------------------------------------------------------------
// Randomized equality

namespace {

// Portable uniform double in [lo, hi); does not rely on distribution internals.
double uniform(std::mt19937_64& rng, double lo, double hi) {
    double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

JetPoint random_regular_point(int n, int k, const std::vector<std::string>& params,
                              std::mt19937_64& rng, double lo, double hi) {
    JetPoint p = JetPoint::make(n, k);
    for (int i = 0; i < n; ++i) p.x[static_cast<std::size_t>(i)] = uniform(rng, lo, hi);
    for (int a = 0; a < k; ++a)
        for (int i = 0; i < n; ++i)
            p.y[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = uniform(rng, lo, hi);
    if (k >= 1) {
        while (!p.regular())
            for (int i = 0; i < n; ++i) p.y[0][static_cast<std::size_t>(i)] = uniform(rng, lo, hi);
    }
    for (const auto& name : params) p.params[name] = uniform(rng, lo, hi);
    return p;
}

}  // namespace

SampleReport equal_randomized(const Expr& a, const Expr& b, int n, int k,
                              const SampleOptions& opts) {
    if (opts.trials < 1) throw Error("equal_randomized requires trials >= 1");
    std::vector<std::string> params = parameters_of(a);
    for (const auto& q : parameters_of(b)) params.push_back(q);
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end()), params.end());

    std::mt19937_64 rng(opts.seed);
    SampleReport rep;
    for (int t = 0; t < opts.trials; ++t) {
        bool sampled = false;
        std::string last_error;
        for (int r = 0; r < opts.max_retries; ++r) {
            JetPoint p = random_regular_point(n, k, params, rng, opts.lo, opts.hi);
            double va, vb;
            try {
                va = evaluate(a, p);
                vb = evaluate(b, p);
            } catch (const DomainError& err) {
                last_error = err.what();
                continue;
            }
            double scale = 1.0 + std::max(std::abs(va), std::abs(vb));
            double rel = std::abs(va - vb) / scale;
            rep.max_err = std::max(rep.max_err, rel);
            if (rel > opts.tol) rep.equal = false;
            ++rep.samples;
            sampled = true;
            break;
        }
        if (!sampled)
            throw EvalError("equal_randomized: persistent domain errors while sampling (" +
                            last_error + ")");
    }
    return rep;
}

}  // namespace hodegeo
