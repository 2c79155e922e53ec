#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "hodegeo/errors.hpp"
#include "hodegeo/rational.hpp"

namespace hodegeo {

/// Coordinate on the order-k jet space: level 0 is a base coordinate x^i,
/// level alpha >= 1 is the jet coordinate y^(alpha)i. Indices are 1-based.
struct VarId {
    int level = 0;
    int index = 1;

    bool is_base() const { return level == 0; }
    friend bool operator==(const VarId& a, const VarId& b) {
        return a.level == b.level && a.index == b.index;
    }
    friend bool operator<(const VarId& a, const VarId& b) {
        if (a.level != b.level) return a.level < b.level;
        return a.index < b.index;
    }
};

inline VarId base_var(int i) { return VarId{0, i}; }
inline VarId jet_var(int level, int i) { return VarId{level, i}; }

enum class Kind { Number, Var, Param, Call, Power, Neg, Product, Sum };
enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt };

const char* func_name(Func f);

struct Node;

/// Immutable symbolic expression over jet coordinates, parameters and exact
/// rational numbers. Copying is cheap (shared structure); all operations on
/// expressions are pure, so values can be shared across threads freely.
class Expr {
public:
    Expr();  // zero

    static Expr number(const Rational& r);
    static Expr integer(long long v) { return number(Rational(v)); }
    static Expr rational(long long n, long long d) { return number(Rational(n, d)); }
    static Expr variable(VarId v);
    static Expr parameter(std::string name);
    static Expr call(Func fn, Expr arg);
    static Expr power(Expr base, const Rational& exponent);
    static Expr negate(Expr e);
    static Expr product(std::vector<Expr> factors);
    static Expr sum(std::vector<Expr> terms);

    static const Expr& zero();
    static const Expr& one();

    Kind kind() const;
    const Rational& value() const;     // Number value, or Power exponent
    const VarId& var() const;          // Var
    const std::string& name() const;   // Param
    Func fn() const;                   // Call
    const std::vector<Expr>& kids() const;
    const Expr& kid(std::size_t i) const;
    std::uint64_t hash() const;

    bool is_number() const { return kind() == Kind::Number; }
    bool is_zero() const;
    bool is_one() const;

    const Node* raw() const { return node_.get(); }

    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);
    Expr operator-() const;

private:
    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
    friend Expr simplify(const Expr&);
    friend class Simplifier;
};

struct Node {
    Kind kind;
    Rational value;    // Number value or Power exponent
    VarId var{};       // Var
    std::string name;  // Param
    Func fn = Func::Sin;
    std::vector<Expr> kids;
    std::uint64_t hash = 0;
    mutable std::atomic<bool> canonical{false};
};

/// Deterministic structural three-way comparison; defines the canonical term order.
int compare(const Expr& a, const Expr& b);
inline bool operator==(const Expr& a, const Expr& b) { return compare(a, b) == 0; }
inline bool operator!=(const Expr& a, const Expr& b) { return compare(a, b) != 0; }

/// Numeric point of the order-k jet space together with parameter bindings.
struct JetPoint {
    int n = 0;
    int k = 0;
    std::vector<double> x;                 // n base coordinates
    std::vector<std::vector<double>> y;    // k levels, n entries each
    std::map<std::string, double> params;

    static JetPoint make(int n, int k);
    double coord(const VarId& v) const;
    double& coord(const VarId& v);
    /// Point lies on the slit bundle: the level-1 vector is nonzero.
    bool regular() const;
};

Expr parse_expression(const std::string& text, int n, int k_max);
std::string to_string(const Expr& e);

Expr simplify(const Expr& e);
Expr differentiate(const Expr& e, const VarId& v);
double evaluate(const Expr& e, const JetPoint& p);

std::vector<std::string> parameters_of(const Expr& e);
std::vector<VarId> variables_of(const Expr& e);
int max_var_level(const Expr& e);

struct SampleOptions {
    int trials = 20;
    double tol = 1e-9;
    std::uint64_t seed = 1;
    int max_retries = 200;  // domain-error resamples per trial
    double lo = -2.0;
    double hi = 2.0;
};

struct SampleReport {
    bool equal = true;
    double max_err = 0.0;  // max of |a-b| / (1 + max(|a|,|b|)) over samples
    int samples = 0;
};

/// Seeded randomized equality of two expressions on the slit jet space:
/// coordinates drawn uniformly from [lo,hi], the level-1 vector redrawn until
/// nonzero, parameters drawn from the same box. Equal iff at every sample
/// |a-b| <= tol * (1 + max(|a|,|b|)). Deterministic for a fixed seed.
SampleReport equal_randomized(const Expr& a, const Expr& b, int n, int k,
                              const SampleOptions& opts = {});

}  // namespace hodegeo
