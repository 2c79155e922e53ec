#include "hodegeo/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace hodegeo {

namespace {

long long factorial(int m) {
    long long f = 1;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
}

long long grid_steps(const IntegratorConfig& cfg) {
    if (!(cfg.step > 0.0)) throw NumericError("step must be positive");
    if (!(cfg.t1 > cfg.t0)) throw NumericError("t1 must exceed t0");
    double raw = (cfg.t1 - cfg.t0) / cfg.step;
    long long steps = std::llround(raw);
    if (steps < 1 || steps > 50'000'000) throw NumericError("step count out of range");
    if (std::abs(raw - static_cast<double>(steps)) > 1e-6)
        throw NumericError("(t1 - t0) must be an integer multiple of step");
    return steps;
}

bool state_regular(int n, const std::vector<double>& state) {
    for (int i = 0; i < n; ++i)
        if (std::abs(state[static_cast<std::size_t>(n + i)]) > 1e-12) return true;
    return false;
}

void check_finite(const std::vector<double>& v, double t) {
    for (double x : v)
        if (!std::isfinite(x))
            throw NumericError("non-finite state at t = " + std::to_string(t));
}

// Generic fixed-step RK4 with a callback per accepted sample (including t0).
template <typename Rhs, typename OnSample>
void rk4(std::vector<double> state, const IntegratorConfig& cfg, Rhs&& rhs, OnSample&& on_sample) {
    long long steps = grid_steps(cfg);
    double h = cfg.step;
    std::size_t dim = state.size();
    std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    on_sample(cfg.t0, state);
    for (long long m = 0; m < steps; ++m) {
        double t = cfg.t0 + static_cast<double>(m) * h;
        try {
            rhs(t, state, k1);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
            rhs(t + 0.5 * h, tmp, k2);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
            rhs(t + 0.5 * h, tmp, k3);
            for (std::size_t i = 0; i < dim; ++i) tmp[i] = state[i] + h * k3[i];
            rhs(t + h, tmp, k4);
        } catch (const DomainError& e) {
            throw NumericError("evaluation failed at t = " + std::to_string(t) + ": " +
                               e.what());
        }
        for (std::size_t i = 0; i < dim; ++i)
            state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        check_finite(state, t + h);
        on_sample(cfg.t0 + static_cast<double>(m + 1) * h, state);
    }
}

struct FlowRhs {
    const GeodesicSystem sys;
    const std::map<std::string, double>& params;
    mutable JetPoint scratch;
    mutable std::vector<double> buf;

    FlowRhs(const Semispray& s, const std::map<std::string, double>& par)
        : sys(geodesic_system(s)), params(par), scratch(JetPoint::make(s.n, s.k)) {
        scratch.params = params;
    }

    void fill_point(const std::vector<double>& state) const {
        std::size_t pos = 0;
        for (int i = 0; i < sys.n; ++i) scratch.x[static_cast<std::size_t>(i)] = state[pos++];
        for (int a = 0; a < sys.k; ++a)
            for (int i = 0; i < sys.n; ++i)
                scratch.y[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] = state[pos++];
    }

    void operator()(double, const std::vector<double>& state, std::vector<double>& out) const {
        fill_point(state);
        sys.rhs(scratch, buf);
        std::copy(buf.begin(), buf.end(), out.begin());
    }
};

void check_init(const Semispray& s, const JetPoint& init) {
    if (init.n != s.n || init.k != s.k)
        throw ShapeError("initial point does not match semispray dimension/order");
}

}  // namespace

JetPoint Trajectory::point_at(std::size_t i) const {
    JetPoint p = state_to_point(n, k, states[i], params);
    return p;
}

Trajectory integrate_semispray_flow(const Semispray& s, const JetPoint& init,
                                    const IntegratorConfig& cfg) {
    check_init(s, init);
    Trajectory traj;
    traj.n = s.n;
    traj.k = s.k;
    traj.params = init.params;
    FlowRhs rhs(s, traj.params);
    rk4(point_to_state(init), cfg, rhs, [&](double t, const std::vector<double>& state) {
        traj.times.push_back(t);
        traj.states.push_back(state);
        traj.regular.push_back(state_regular(s.n, state));
    });
    return traj;
}

VariationSeries integrate_jacobi(const Semispray& s, const Trajectory& traj,
                                 const std::vector<std::vector<double>>& init,
                                 const IntegratorConfig& cfg) {
    if (traj.n != s.n || traj.k != s.k) throw ShapeError("trajectory does not match semispray");
    if (traj.times.empty()) throw NumericError("empty trajectory");
    if (static_cast<int>(init.size()) != s.k + 1)
        throw ShapeError("variation init must provide xi, nabla xi, ..., nabla^k xi");
    for (const auto& row : init)
        if (static_cast<int>(row.size()) != s.n)
            throw ShapeError("variation init rows must have length n");
    if (std::abs(traj.times.front() - cfg.t0) > 1e-12)
        throw NumericError("grid mismatch: trajectory does not start at t0");
    double traj_h = traj.times.size() > 1 ? traj.times[1] - traj.times[0] : cfg.step;
    if (std::abs(traj_h - cfg.step) > 1e-12)
        throw NumericError("grid mismatch: trajectory step differs from config step");
    if (cfg.t1 - traj.times.back() > 1e-12)
        throw NumericError("grid mismatch: trajectory ends before t1");

    ConnectionCoeffs nc = canonical_connection(s);
    CurvatureComponents cc = curvature_canonical(s);
    const ExprMatrix& n1 = nc.level(1);

    const int n = s.n, k = s.k;
    const std::size_t base_dim = static_cast<std::size_t>(n) * (k + 1);
    std::size_t dim = base_dim * 2;
    std::vector<double> state(dim);
    {
        std::vector<double> base = traj.states.front();
        std::copy(base.begin(), base.end(), state.begin());
        for (int a = 0; a <= k; ++a)
            for (int i = 0; i < n; ++i)
                state[base_dim + static_cast<std::size_t>(a) * n + i] =
                    init[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
    }

    FlowRhs flow(s, traj.params);
    ExprMatrix n1m = n1;
    std::vector<ExprMatrix> rm = cc.levels;
    std::vector<double> n1v(static_cast<std::size_t>(n) * n);
    std::vector<double> rv(static_cast<std::size_t>(k) * n * n);

    auto rhs = [&](double, const std::vector<double>& st, std::vector<double>& out) {
        std::vector<double> base(st.begin(), st.begin() + static_cast<std::ptrdiff_t>(base_dim));
        flow.fill_point(base);
        flow.sys.rhs(flow.scratch, flow.buf);
        std::copy(flow.buf.begin(), flow.buf.end(), out.begin());
        const JetPoint& p = flow.scratch;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                n1v[static_cast<std::size_t>(i) * n + j] = evaluate(n1m.at(i, j), p);
        for (int a = 0; a < k; ++a)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    rv[(static_cast<std::size_t>(a) * n + i) * n + j] =
                        evaluate(rm[static_cast<std::size_t>(a)].at(i, j), p);
        // Top derivative from the Jacobi equation:
        // nabla^{k+1} xi = -k! sum_a (1/a!) R_(a) nabla^a xi.
        std::vector<double> top(static_cast<std::size_t>(n), 0.0);
        for (int a = 0; a < k; ++a) {
            double w = -static_cast<double>(factorial(k)) / static_cast<double>(factorial(a));
            for (int i = 0; i < n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < n; ++j)
                    acc += rv[(static_cast<std::size_t>(a) * n + i) * n + j] *
                           st[base_dim + static_cast<std::size_t>(a) * n + j];
                top[static_cast<std::size_t>(i)] += w * acc;
            }
        }
        // d(nabla^a xi)/dt = nabla^{a+1} xi - N_(1) nabla^a xi.
        for (int a = 0; a <= k; ++a) {
            for (int i = 0; i < n; ++i) {
                double nxt = (a < k) ? st[base_dim + static_cast<std::size_t>(a + 1) * n + i]
                                     : top[static_cast<std::size_t>(i)];
                double corr = 0.0;
                for (int j = 0; j < n; ++j)
                    corr += n1v[static_cast<std::size_t>(i) * n + j] *
                            st[base_dim + static_cast<std::size_t>(a) * n + j];
                out[base_dim + static_cast<std::size_t>(a) * n + i] = nxt - corr;
            }
        }
    };

    VariationSeries series;
    series.n = n;
    series.depth = k;
    rk4(state, cfg, rhs, [&](double t, const std::vector<double>& st) {
        series.times.push_back(t);
        series.values.emplace_back(st.begin() + static_cast<std::ptrdiff_t>(base_dim), st.end());
    });
    return series;
}

VariationSeries variation_oracle(const Semispray& s, const JetPoint& init,
                                 const std::vector<std::vector<double>>& direction, double offset,
                                 const IntegratorConfig& cfg) {
    check_init(s, init);
    if (!(offset > 0.0)) throw NumericError("oracle offset must be positive");
    if (static_cast<int>(direction.size()) != s.k + 1)
        throw ShapeError("direction must provide xi^(0), ..., xi^(k) at t0");
    for (const auto& row : direction)
        if (static_cast<int>(row.size()) != s.n)
            throw ShapeError("direction rows must have length n");

    auto perturbed = [&](double sign) {
        JetPoint p = init;
        for (int i = 0; i < s.n; ++i)
            p.x[static_cast<std::size_t>(i)] += sign * offset * direction[0][static_cast<std::size_t>(i)];
        for (int a = 1; a <= s.k; ++a) {
            double scale = 1.0 / static_cast<double>(factorial(a));
            for (int i = 0; i < s.n; ++i)
                p.y[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(i)] +=
                    sign * offset * scale * direction[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)];
        }
        return integrate_semispray_flow(s, p, cfg);
    };

    Trajectory plus = perturbed(1.0);
    Trajectory minus = perturbed(-1.0);

    VariationSeries series;
    series.n = s.n;
    series.depth = 0;
    series.times = plus.times;
    series.values.reserve(plus.states.size());
    for (std::size_t m = 0; m < plus.states.size(); ++m) {
        std::vector<double> xi(static_cast<std::size_t>(s.n));
        for (int i = 0; i < s.n; ++i)
            xi[static_cast<std::size_t>(i)] =
                (plus.states[m][static_cast<std::size_t>(i)] -
                 minus.states[m][static_cast<std::size_t>(i)]) /
                (2.0 * offset);
        series.values.push_back(std::move(xi));
    }
    return series;
}

double series_max_error(const VariationSeries& a, const VariationSeries& b) {
    if (a.n != b.n) throw ShapeError("series dimension mismatch");
    if (a.times.size() != b.times.size()) throw NumericError("series grids differ in length");
    for (std::size_t i = 0; i < a.times.size(); ++i)
        if (std::abs(a.times[i] - b.times[i]) > 1e-12)
            throw NumericError("series grids are misaligned");
    int depth = std::min(a.depth, b.depth);
    std::size_t m = static_cast<std::size_t>(a.n) * (depth + 1);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.times.size(); ++i)
        for (std::size_t c = 0; c < m; ++c)
            worst = std::max(worst, std::abs(a.values[i][c] - b.values[i][c]));
    return worst;
}

std::vector<std::vector<double>> covariant_from_jet(const Semispray& s, const JetPoint& at,
                                                    const std::vector<std::vector<double>>& jets) {
    check_init(s, at);
    if (static_cast<int>(jets.size()) != s.k + 1)
        throw ShapeError("expected k+1 levels of t-derivatives");
    DualCoeffs dc = dual_recursive(s);
    std::vector<std::vector<double>> cov = jets;
    for (int a = 1; a <= s.k; ++a) {
        for (int b = 1; b <= a; ++b) {
            double w = static_cast<double>(factorial(a)) / static_cast<double>(factorial(a - b));
            for (int i = 0; i < s.n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s.n; ++j)
                    acc += evaluate(dc.level(b).at(i, j), at) *
                           jets[static_cast<std::size_t>(a - b)][static_cast<std::size_t>(j)];
                cov[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] += w * acc;
            }
        }
    }
    return cov;
}

std::vector<std::vector<double>> jet_from_covariant(const Semispray& s, const JetPoint& at,
                                                    const std::vector<std::vector<double>>& cov) {
    check_init(s, at);
    if (static_cast<int>(cov.size()) != s.k + 1)
        throw ShapeError("expected k+1 covariant levels");
    DualCoeffs dc = dual_recursive(s);
    std::vector<std::vector<double>> jets = cov;
    for (int a = 1; a <= s.k; ++a) {
        for (int b = 1; b <= a; ++b) {
            double w = static_cast<double>(factorial(a)) / static_cast<double>(factorial(a - b));
            for (int i = 0; i < s.n; ++i) {
                double acc = 0.0;
                for (int j = 0; j < s.n; ++j)
                    acc += evaluate(dc.level(b).at(i, j), at) *
                           jets[static_cast<std::size_t>(a - b)][static_cast<std::size_t>(j)];
                jets[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)] -= w * acc;
            }
        }
    }
    return jets;
}

namespace {

void put_double(std::ostream& os, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

}  // namespace

void write_csv(std::ostream& os, const Trajectory& traj) {
    os << 't';
    for (int i = 1; i <= traj.n; ++i) os << ",x" << i;
    for (int a = 1; a <= traj.k; ++a)
        for (int i = 1; i <= traj.n; ++i) os << ",y" << a << '_' << i;
    os << '\n';
    for (std::size_t m = 0; m < traj.times.size(); ++m) {
        put_double(os, traj.times[m]);
        for (double v : traj.states[m]) {
            os << ',';
            put_double(os, v);
        }
        os << '\n';
    }
}

void write_csv(std::ostream& os, const VariationSeries& series) {
    os << 't';
    for (int i = 1; i <= series.n; ++i) os << ",xi" << i;
    for (int a = 1; a <= series.depth; ++a)
        for (int i = 1; i <= series.n; ++i) os << ",nabla" << a << '_' << i;
    os << '\n';
    for (std::size_t m = 0; m < series.times.size(); ++m) {
        put_double(os, series.times[m]);
        for (double v : series.values[m]) {
            os << ',';
            put_double(os, v);
        }
        os << '\n';
    }
}

}  // namespace hodegeo
