// Acceptance run: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <string>

#include "eac/eac.hpp"

using namespace eac;
using nlohmann::json;

namespace
{

// Pinned tolerances and limits.
constexpr double hull_seconds = 1.0;
constexpr double certify_seconds = 1.0;
constexpr double certificate_float_tol = 1e-12;
constexpr double solve_residual = 1e-10;
constexpr double solve_seconds = 60.0;
constexpr std::size_t density_count = 25;
constexpr std::size_t density_cells = 5;
constexpr double density_seconds = 600.0;
constexpr double distinct_distance = 1e-6;
constexpr std::size_t catalog_minimum = 10;
constexpr double recombination_float_tol = 1e-12;
constexpr int recombinations = 200;
constexpr int kronecker_samples = 10000;
constexpr double covering_radius_limit = 0.05;

int failures = 0;

void report(int n, bool pass, const std::string &name, const std::string &detail)
{
    std::printf("%s criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", n, name.c_str(), detail.c_str());
    std::fflush(stdout);
    failures += !pass;
}

void guarded(int n, const std::string &name, const std::function<void()> &body)
{
    try {
        body();
    } catch (const std::exception &e) {
        report(n, false, name, std::string("exception: ") + e.what());
    }
}

std::string fixed(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string secs(double v)
{
    return fixed(v, 3) + " s";
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Leibniz determinant over MultiQuad, independent of the exterior algebra.
MultiQuad leibniz(const std::vector<std::vector<MultiQuad>> &rows)
{
    const std::size_t n = rows.size();
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    MultiQuad total;
    do {
        int inv = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) inv += p[i] > p[j];
        MultiQuad term(1);
        for (std::size_t i = 0; i < n; ++i) term = term * rows[i][p[i]];
        total += inv % 2 ? -term : term;
    } while (std::next_permutation(p.begin(), p.end()));
    return total;
}

ProductVariety worked_variety()
{
    return ProductVariety({EllipticFactor(0, MultiQuad::sqrt(2), false), EllipticFactor(0, MultiQuad::sqrt(5), false)}, true);
}

void criterion_hull()
{
    const auto inst = parse_instance(diagonal_instance());
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = run_hull(inst);
    const double dt = seconds_since(t0);
    const bool exact = out.report["T"]["dim_T"] == 3 && out.report["T"]["equations"] == json::parse(R"([["1","0","-1","0"]])") &&
                       out.report["chain"]["k"] == 1 && out.report["chain"]["stalled"] == false;
    report(1, exact && dt < hull_seconds, "hull of the diagonal",
           "T = " + out.report["T"]["equations"].dump() + ", dim " + out.report["T"]["dim_T"].dump() + ", k = " +
               out.report["chain"]["k"].dump() + ", " + secs(dt));
}

void criterion_certificate()
{
    const auto inst = parse_instance(diagonal_instance());
    const auto t0 = std::chrono::steady_clock::now();
    const auto out = run_certify(inst);
    const double dt = seconds_since(t0);

    // Oracle: integral of (2 da1^db1 + 2 da2^db2) ^ t ^ t' as a sum of 4x4 determinants, where
    // t = da1 - da2 cuts T and t' is the realified imaginary-part equation of L = C(1, 1):
    // Im z1 - Im z2 = sqrt2 b1 - sqrt5 b2.
    auto e = [](std::size_t i) {
        std::vector<MultiQuad> v(4);
        v[i] = 1;
        return v;
    };
    const std::vector<MultiQuad> t{MultiQuad(1), MultiQuad(), MultiQuad(-1), MultiQuad()};
    const std::vector<MultiQuad> tp{MultiQuad(), MultiQuad::sqrt(2), MultiQuad(), -MultiQuad::sqrt(5)};
    const MultiQuad oracle = MultiQuad(2) * leibniz({e(0), e(1), t, tp}) + MultiQuad(2) * leibniz({e(2), e(3), t, tp});
    const double closed = 2 * std::sqrt(5.0) + 2 * std::sqrt(2.0);

    const std::string exact = out.report["certificate"]["value"]["exact"];
    const double value = out.report["certificate"]["value"]["float"];
    const bool pass = out.code == exit_code::ok && exact == "2*sqrt(5)+2*sqrt(2)" && oracle.str() == exact &&
                      std::abs(value - closed) < certificate_float_tol && dt < certify_seconds;
    report(2, pass, "certificate of the diagonal",
           exact + " (oracle " + oracle.str() + "), float " + format_double(value) + ", " + secs(dt));
}

struct DensityRun {
    std::optional<HarvestResult> harvest;
    double seconds = 0;
    int code = 0;
};

void criterion_solve()
{
    const auto inst = parse_instance(diagonal_instance());
    const auto t0 = std::chrono::steady_clock::now();
    auto run = run_solve(inst, "solve");
    const double dt = seconds_since(t0);
    bool pass = run.outcome.code == exit_code::ok && run.harvest && !run.harvest->solutions.empty();
    double worst = 0;
    if (run.harvest) {
        const auto A = inst.variety();
        ProductExp<double> exp(A);
        ProductExp<long double> exp_ld(A);
        SolveProblem P(A, inst.L, *inst.W.F, inst.solver);
        for (const auto &s : run.harvest->solutions) {
            worst = std::max(worst, s.residual);
            pass = pass && s.residual < solve_residual && verify_solution(s, P, exp_ld, exp);
        }
    }
    pass = pass && dt < solve_seconds;
    report(3, pass, "solution on the diagonal instance",
           std::to_string(run.harvest ? run.harvest->solutions.size() : 0) + " verified, max residual " + format_double(worst) + ", " +
               secs(dt));
}

DensityRun density_run()
{
    auto doc = diagonal_instance();
    doc["solver"]["target_count"] = density_count;
    doc["solver"]["budget_seconds"] = density_seconds;
    const auto inst = parse_instance(doc);
    const auto t0 = std::chrono::steady_clock::now();
    auto run = run_solve(inst, "density");
    DensityRun out;
    out.seconds = seconds_since(t0);
    out.code = run.outcome.code;
    out.harvest = std::move(run.harvest);
    return out;
}

void criterion_density(const DensityRun &d)
{
    const auto A = worked_variety();
    std::size_t n = 0, cells = 0;
    double closest = 1e300;
    if (d.harvest) {
        const auto &s = d.harvest->solutions;
        n = s.size();
        cells = d.harvest->distinct_cells();
        for (std::size_t i = 0; i < s.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) closest = std::min(closest, A.torus_distance<double>(s[i].z, s[j].z));
    }
    const bool pass = n >= density_count && cells >= density_cells && closest > distinct_distance && d.seconds < density_seconds;
    report(4, pass, "density harvest",
           std::to_string(n) + " solutions in " + std::to_string(cells) + " cells, closest pair " + format_double(closest) + ", " +
               secs(d.seconds));
}

void criterion_openness(const DensityRun &d)
{
    std::size_t full = 0, total = 0;
    if (d.harvest)
        for (const auto &s : d.harvest->solutions) {
            ++total;
            full += s.jacobian_rank == 2;
        }
    report(5, full >= 1, "full-rank delta Jacobian", std::to_string(full) + " of " + std::to_string(total) + " solutions have rank 2");
}

void criterion_concordance()
{
    std::size_t n = 0, bad = 0;
    std::set<std::pair<int, int>> bidegrees;
    std::string first;
    for (const auto &e : catalog()) {
        auto inst = parse_instance(e.doc);
        ++n;
        bidegrees.insert({inst.W.bidegree->m, inst.W.bidegree->n});
        const auto verdict = run_check(inst);
        const auto cert = run_certify(inst);
        const auto solve = run_solve(inst, "solve");
        const bool v = verdict.code == exit_code::ok;
        const bool c = cert.code == exit_code::ok && cert.report["certificate"]["nonzero"] == true;
        const bool s = solve.outcome.code == exit_code::ok && solve.harvest && !solve.harvest->solutions.empty();
        const bool expected = e.expected == Tri::yes;
        if (v != c || c != s || v != expected) {
            ++bad;
            if (first.empty()) first = inst.id;
        }
    }
    report(6, n >= catalog_minimum && bad == 0 && bidegrees.size() >= 5, "checker, certificate and solver agree",
           std::to_string(n) + " instances, " + std::to_string(bidegrees.size()) + " bidegrees, " + std::to_string(bad) +
               " disagreements" + (first.empty() ? "" : " (first: " + first + ")"));
}

void criterion_analytic()
{
    const auto rows = run_selftest();
    const std::vector<std::string> wanted = {"wp-ode", "wp-parity-periodicity", "wp-backend-agreement", "fibre-counts"};
    bool pass = true;
    std::string detail;
    for (const auto &w : wanted) {
        const auto it = std::find_if(rows.begin(), rows.end(), [&](const SelftestRow &r) { return r.name == w; });
        const bool ok = it != rows.end() && it->pass;
        pass = pass && ok;
        detail += (detail.empty() ? "" : "; ") + w + ": " + (it == rows.end() ? "missing" : it->detail);
    }
    report(7, pass, "analytic property suite", detail);
}

// Random invertible recombination R * E of the rows of E, R with small integer entries.
template <typename T>
Matrix<T> recombine(const Matrix<T> &E, std::mt19937_64 &rng)
{
    std::uniform_int_distribution<int> c(-3, 3);
    for (;;) {
        Matrix<Rational> R(E.rows(), E.rows());
        for (std::size_t i = 0; i < R.rows(); ++i)
            for (std::size_t j = 0; j < R.cols(); ++j) R(i, j) = c(rng);
        if (rank(R) != R.rows()) continue;
        Matrix<T> out(E.rows(), E.cols());
        for (std::size_t i = 0; i < E.rows(); ++i)
            for (std::size_t j = 0; j < E.cols(); ++j)
                for (std::size_t k = 0; k < E.rows(); ++k) out(i, j) = out(i, j) + T(R(i, k)) * E(k, j);
        return out;
    }
}

template <>
Matrix<double> recombine(const Matrix<double> &E, std::mt19937_64 &rng)
{
    std::uniform_real_distribution<double> u(-2, 2);
    for (;;) {
        Eigen::MatrixXd R(E.rows(), E.rows());
        for (Eigen::Index i = 0; i < R.rows(); ++i)
            for (Eigen::Index j = 0; j < R.cols(); ++j) R(i, j) = u(rng);
        if (std::abs(R.determinant()) < 0.1) continue;
        Matrix<double> out(E.rows(), E.cols());
        for (std::size_t i = 0; i < E.rows(); ++i)
            for (std::size_t j = 0; j < E.cols(); ++j)
                for (std::size_t k = 0; k < E.rows(); ++k) out(i, j) += R(i, k) * E(k, j);
        return out;
    }
}

// max |b - c a| / max |b| with c fitted by least squares over the coefficients.
double proportionality_residual(const ExteriorForm<double> &a, const ExteriorForm<double> &b)
{
    std::set<std::uint32_t> keys;
    for (const auto &[k, v] : a.terms()) keys.insert(k);
    for (const auto &[k, v] : b.terms()) keys.insert(k);
    double num = 0, den = 0, scale = 0;
    for (auto k : keys) {
        num += a.coeff(k) * b.coeff(k);
        den += a.coeff(k) * a.coeff(k);
        scale = std::max(scale, std::abs(b.coeff(k)));
    }
    const double c = num / den;
    double worst = 0;
    for (auto k : keys) worst = std::max(worst, std::abs(b.coeff(k) - c * a.coeff(k)));
    return worst / scale;
}

void criterion_well_defined()
{
    const auto A = worked_variety();
    std::mt19937_64 rng(2024);
    // Defining equations: hull of the diagonal, realified equations of several lines, and their union.
    std::vector<Matrix<MultiQuad>> systems;
    for (const auto &b : {"1", "sqrt(2)", "i", "2+i*sqrt(10)"}) {
        Matrix<ComplexMultiQuad> m(2, 1);
        m(0, 0) = 1;
        m(1, 0) = parse_complex_literal(b);
        const auto L = ComplexSubspace::span(m);
        const auto [re, im] = L.realified_equations(A);
        systems.push_back(re.vcat(im));
        systems.push_back(detail::lift(rational_hull(L, A).equations));
        systems.push_back(re);
    }
    int exact_ok = 0, float_ok = 0;
    double worst = 0;
    for (int trial = 0; trial < recombinations; ++trial) {
        const auto &E = systems[trial % systems.size()];
        const auto canonical = form_of_subspace(RealSubspace::cut_out(E, 4));
        const auto mixed = wedge_rows(recombine(E, rng), 4);
        exact_ok += canonical.ratio_to(mixed).has_value();

        Matrix<double> Ed(E.rows(), E.cols());
        for (std::size_t i = 0; i < E.rows(); ++i)
            for (std::size_t j = 0; j < E.cols(); ++j) Ed(i, j) = E(i, j).to_double();
        ExteriorForm<double> cd(4, canonical.degree());
        for (const auto &[k, v] : canonical.terms()) cd.set(k, v.to_double());
        const double r = proportionality_residual(cd, wedge_rows(recombine(Ed, rng), 4));
        worst = std::max(worst, r);
        float_ok += r < recombination_float_tol;
    }
    report(8, exact_ok == recombinations && float_ok == recombinations, "forms are well defined up to scalars",
           std::to_string(exact_ok) + "/" + std::to_string(recombinations) + " exact proportional, " + std::to_string(float_ok) +
               "/" + std::to_string(recombinations) + " float, worst residual " + format_double(worst));
}

void criterion_kronecker()
{
    // L = C(1, 1) realifies to span{(1, 0, 1, 0), (0, 1/sqrt2, 0, 1/sqrt5)} in lattice coordinates;
    // take s on a grid along the rational direction and t = 1, 2, ... along the irrational one.
    const auto A = worked_variety();
    const auto T = rational_hull(ComplexSubspace::span([] {
                                     Matrix<ComplexMultiQuad> m(2, 1);
                                     m(0, 0) = 1;
                                     m(1, 0) = 1;
                                     return m;
                                 }()),
                                 A);
    const int s_steps = 25, t_steps = kronecker_samples / s_steps;
    std::vector<std::array<double, 4>> pts;
    pts.reserve(kronecker_samples);
    auto frac = [](double x) { return x - std::floor(x); };
    bool on_T = true;
    for (int i = 0; i < s_steps; ++i)
        for (int k = 1; k <= t_steps; ++k) {
            const double s = (i + 0.5) / s_steps;
            // z1 = z2 = s + i t; lattice coordinates (Re z_j, Im z_j / Im tau_j).
            const std::vector<std::complex<double>> z{{s, double(k)}, {s, double(k)}};
            const auto x = A.to_lattice_coords<double>(z);
            std::array<double, 4> p{frac(x[0]), frac(x[1]), frac(x[2]), frac(x[3])};
            for (std::size_t r = 0; r < T.equations.rows(); ++r) {
                double v = 0;
                for (std::size_t c = 0; c < 4; ++c) v += to_long_double(T.equations(r, c)) * x[c];
                on_T = on_T && std::abs(v - std::round(v)) < 1e-9;
            }
            pts.push_back(p);
        }
    // Covering radius in the sup norm of lattice coordinates on the torus; the Euclidean
    // value is reported alongside.
    auto torus_gap = [](double x, double y) {
        const double d = std::abs(x - y);
        return std::min(d, 1 - d);
    };
    auto dist_sup = [&](const std::array<double, 4> &a, const std::array<double, 4> &b) {
        double m = 0;
        for (int c = 0; c < 4; ++c) m = std::max(m, torus_gap(a[c], b[c]));
        return m;
    };
    auto dist_euclid = [&](const std::array<double, 4> &a, const std::array<double, 4> &b) {
        double s = 0;
        for (int c = 0; c < 4; ++c) s += torus_gap(a[c], b[c]) * torus_gap(a[c], b[c]);
        return std::sqrt(s);
    };
    // Probe T cap [0,1)^4 = {(a, b1, a, b2)} on a grid plus random points.
    double radius = 0;
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<std::array<double, 4>> probes;
    const int g = 24;
    for (int i = 0; i < g; ++i)
        for (int j = 0; j < g; ++j)
            for (int k = 0; k < g; ++k) probes.push_back({(i + 0.5) / g, (j + 0.5) / g, (i + 0.5) / g, (k + 0.5) / g});
    for (int r = 0; r < 40000; ++r) {
        const double a = u(rng);
        probes.push_back({a, u(rng), a, u(rng)});
    }
    double euclid = 0;
    for (const auto &q : probes) {
        double best = 1e300, best_e = 1e300;
        for (const auto &p : pts) {
            best = std::min(best, dist_sup(p, q));
            best_e = std::min(best_e, dist_euclid(p, q));
        }
        radius = std::max(radius, best);
        euclid = std::max(euclid, best_e);
    }
    report(9, on_T && radius < covering_radius_limit && static_cast<int>(pts.size()) == kronecker_samples, "Kronecker density",
           std::to_string(pts.size()) + " samples on T: " + (on_T ? "yes" : "no") + ", covering radius " + fixed(radius, 4) +
               " (sup norm), " + fixed(euclid, 4) + " (euclidean) over " + std::to_string(probes.size()) + " probes");
}

} // namespace

int main()
{
    guarded(1, "hull of the diagonal", criterion_hull);
    guarded(2, "certificate of the diagonal", criterion_certificate);
    guarded(3, "solution on the diagonal instance", criterion_solve);
    DensityRun d;
    try {
        d = density_run();
    } catch (const std::exception &e) {
        std::printf("density run failed: %s\n", e.what());
    }
    guarded(4, "density harvest", [&] { criterion_density(d); });
    guarded(5, "full-rank delta Jacobian", [&] { criterion_openness(d); });
    guarded(6, "checker, certificate and solver agree", criterion_concordance);
    guarded(7, "analytic property suite", criterion_analytic);
    guarded(8, "forms are well defined up to scalars", criterion_well_defined);
    guarded(9, "Kronecker density", criterion_kronecker);
    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
