#pragma once

// Numerical search for points of exp_A(L) cap W when dim L = 1 and W is a Segre curve.
//
// L is parametrised by l -> z = l v with v_p = 1 at the pivot coordinate p, so the
// search space is the l-plane, tiled by the translates (a + b tau_p) + P of the
// fundamental parallelogram P of the factor E_p. Cells are visited in square rings
// around the origin; every cell is scanned on a grid, local minima of the
// normalised residual seed Newton's method, and refined points are verified and
// deduplicated in A.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <map>
#include <mutex>
#include <thread>

#include "delta.hpp"
#include "fiber.hpp"

namespace eac
{

struct SolverOptions {
    /// Absolute residual |F(exp(z))| below which a refined point counts as a solution.
    double tolerance = 1e-10;
    /// Scan grid points per cell side.
    int grid = 200;
    /// Wall-clock budget in seconds, checked between rings.
    double budget_seconds = 60;
    /// Deterministic budget: cells visited at most.
    int max_cells = 441;
    std::uint64_t seed = 1;
    int target_count = 1;
    /// Normalised residual below which a grid minimum becomes a Newton seed.
    double scan_threshold = 0.1;
    /// Worker threads; 0 reads EAC_THREADS and falls back to the hardware count.
    int threads = 0;
};

struct Cell {
    int a = 0, b = 0;
    int index = 0;
    friend bool operator==(const Cell &, const Cell &) = default;
};

/// Cells in ring order: ring r holds the (2r+1)^2 - (2r-1)^2 cells with max(|a|,|b|) = r,
/// listed counterclockwise from (r, -r + 1).
inline std::vector<Cell> spiral_cells(int count)
{
    std::vector<Cell> out;
    if (count <= 0) return out;
    out.push_back({0, 0, 0});
    for (int r = 1; static_cast<int>(out.size()) < count; ++r) {
        std::vector<std::pair<int, int>> ring;
        for (int b = -r + 1; b <= r; ++b) ring.emplace_back(r, b);
        for (int a = r - 1; a >= -r; --a) ring.emplace_back(a, r);
        for (int b = r - 1; b >= -r; --b) ring.emplace_back(-r, b);
        for (int a = -r + 1; a <= r; ++a) ring.emplace_back(a, -r);
        for (auto [a, b] : ring) {
            if (static_cast<int>(out.size()) >= count) break;
            out.push_back({a, b, static_cast<int>(out.size())});
        }
    }
    return out;
}

inline int ring_of(const Cell &c)
{
    return std::max(std::abs(c.a), std::abs(c.b));
}

struct SolveProblem {
    const ProductVariety *A = nullptr;
    LParametrization L;
    SegrePolynomial F;
    SolverOptions opts;

    SolveProblem(const ProductVariety &A_, const ComplexSubspace &L_, SegrePolynomial F_, SolverOptions o = {})
        : A(&A_), L(L_), F(std::move(F_)), opts(o)
    {
        if (A_.g() != 2) throw std::invalid_argument("the solver handles curves in a product of two elliptic curves");
        if (L.dim() != 1) throw std::invalid_argument("the solver needs dim L = 1 (square system); reduce L first");
    }

    std::size_t pivot() const
    {
        return L.pivots().front();
    }
    std::complex<double> tau_pivot() const
    {
        return A->factor(pivot()).tau();
    }
    std::complex<double> cell_origin(const Cell &c) const
    {
        return static_cast<double>(c.a) + static_cast<double>(c.b) * tau_pivot();
    }
};

struct SeedPoint {
    std::complex<double> l;
    double value = 0;
};

struct SolutionPoint {
    CVec l;
    CVec z;
    double residual = 0;
    int jacobian_rank = 0;
    Cell cell;
    int iterations = 0;
};

enum class RefineFailure { none, at_infinity, singular, diverged };

inline const char *to_string(RefineFailure f)
{
    switch (f) {
    case RefineFailure::none:
        return "none";
    case RefineFailure::at_infinity:
        return "at-infinity";
    case RefineFailure::singular:
        return "singular";
    case RefineFailure::diverged:
        return "diverged";
    }
    return "?";
}

struct RefineResult {
    std::optional<SolutionPoint> solution;
    RefineFailure failure = RefineFailure::none;
    int iterations = 0;
};

namespace detail
{

inline std::optional<std::complex<double>> line_value(const SolveProblem &P, const ProductExp<double> &exp, std::complex<double> l)
{
    return segre_value(P.F, exp, P.L.point({l}));
}

inline double line_normalized(const SolveProblem &P, const ProductExp<double> &exp, std::complex<double> l)
{
    return normalized_residual(P.F, exp, P.L.point({l}));
}

// A steep zero can keep every grid value above the threshold; the Newton step
// |f / f'| still locates it to within a few grid spacings.
inline bool newton_step_within(const SolveProblem &P, const ProductExp<double> &exp, std::complex<double> l, double radius)
{
    const double h = 1e-7;
    const auto f = line_value(P, exp, l), fa = line_value(P, exp, l + h), fb = line_value(P, exp, l - h);
    if (!f || !fa || !fb) return false;
    const auto d = (*fa - *fb) / (2 * h);
    return std::abs(d) > 0 && std::abs(*f / d) < radius;
}

} // namespace detail

/// Local minima of the normalised residual on a grid x grid cell-centred lattice in one cell,
/// kept when below the scan threshold or when the Newton step stays within two grid
/// spacings; sorted ascending.
inline std::vector<SeedPoint> coarse_scan_cell(const SolveProblem &P, const ProductExp<double> &exp, const Cell &c, int grid)
{
    const auto origin = P.cell_origin(c);
    const auto tau = P.tau_pivot();
    std::vector<double> r(static_cast<std::size_t>(grid) * grid);
    auto at = [&](int i, int k) -> double & { return r[static_cast<std::size_t>(i) * grid + k]; };
    auto point = [&](int i, int k) { return origin + (i + 0.5) / grid + (k + 0.5) / grid * tau; };
    const double spacing = std::max(1.0, std::abs(tau)) / grid;
    for (int i = 0; i < grid; ++i)
        for (int k = 0; k < grid; ++k) at(i, k) = detail::line_normalized(P, exp, point(i, k));
    std::vector<SeedPoint> seeds;
    for (int i = 0; i < grid; ++i)
        for (int k = 0; k < grid; ++k) {
            const double v = at(i, k);
            if (!std::isfinite(v)) continue;
            bool minimum = true;
            for (int di = -1; di <= 1 && minimum; ++di)
                for (int dk = -1; dk <= 1 && minimum; ++dk) {
                    const int ii = i + di, kk = k + dk;
                    if ((di || dk) && ii >= 0 && kk >= 0 && ii < grid && kk < grid && at(ii, kk) < v) minimum = false;
                }
            if (!minimum) continue;
            if (v < P.opts.scan_threshold || detail::newton_step_within(P, exp, point(i, k), 2.0 * spacing))
                seeds.push_back({point(i, k), v});
        }
    std::sort(seeds.begin(), seeds.end(), [](const SeedPoint &x, const SeedPoint &y) { return x.value < y.value; });
    return seeds;
}

/// Seeds from the first `cells` cells in ring order.
inline std::vector<SeedPoint> coarse_scan(const SolveProblem &P, int grid, int cells)
{
    ProductExp<double> exp(*P.A);
    std::vector<SeedPoint> all;
    for (const auto &c : spiral_cells(cells)) {
        auto s = coarse_scan_cell(P, exp, c, grid);
        all.insert(all.end(), s.begin(), s.end());
    }
    std::sort(all.begin(), all.end(), [](const SeedPoint &x, const SeedPoint &y) { return x.value < y.value; });
    return all;
}

/// Damped Newton iteration on l -> F(exp(l v)) with a central-difference derivative (step 1e-7).
inline RefineResult newton_refine(const SolveProblem &P, const ProductExp<double> &exp, std::complex<double> seed,
                                  int max_iter = 50)
{
    RefineResult out;
    const double h = 1e-7;
    std::complex<double> l = seed;
    auto f = detail::line_value(P, exp, l);
    if (!f) {
        out.failure = RefineFailure::at_infinity;
        return out;
    }
    for (int it = 0;; ++it) {
        if (std::abs(*f) < P.opts.tolerance) {
            SolutionPoint s;
            s.l = {l};
            s.z = P.L.point(s.l);
            s.residual = std::abs(*f);
            s.iterations = it;
            out.solution = s;
            out.iterations = it;
            return out;
        }
        if (it >= max_iter) {
            out.failure = RefineFailure::diverged;
            out.iterations = it;
            return out;
        }
        auto fa = detail::line_value(P, exp, l + h), fb = detail::line_value(P, exp, l - h);
        if (!fa || !fb) {
            out.failure = RefineFailure::at_infinity;
            out.iterations = it;
            return out;
        }
        const auto d = (*fa - *fb) / (2 * h);
        if (!(std::abs(d) > 1e-14 * std::max(1.0, std::abs(*f)))) {
            out.failure = RefineFailure::singular;
            out.iterations = it;
            return out;
        }
        std::complex<double> step = *f / d;
        std::optional<std::complex<double>> fn;
        double damp = 1;
        for (int k = 0; k < 12; ++k, damp *= 0.5) {
            fn = detail::line_value(P, exp, l - damp * step);
            if (fn && std::abs(*fn) < std::abs(*f)) break;
        }
        if (!fn) {
            out.failure = RefineFailure::at_infinity;
            out.iterations = it + 1;
            return out;
        }
        l -= damp * step;
        f = fn;
        if (std::abs(l - seed) > 2 * std::max(1.0, std::abs(P.tau_pivot()))) {
            out.failure = RefineFailure::diverged;
            out.iterations = it + 1;
            return out;
        }
    }
}

struct VerifyOptions {
    double tolerance = 1e-10;
    /// Radius of the circle around l used for the local winding number.
    double winding_radius = 1e-4;
    double structural_tol = 1e-12;
};

/// Residual in extended precision, local winding number >= 1, and z = l v.
inline bool verify_solution(const SolutionPoint &s, const SolveProblem &P, const ProductExp<long double> &exp_ld,
                            const ProductExp<double> &exp, const VerifyOptions &o = {})
{
    if (s.l.size() != 1 || s.z.size() != 2) return false;
    const auto z = P.L.point(s.l);
    for (std::size_t j = 0; j < 2; ++j)
        if (std::abs(z[j] - s.z[j]) > o.structural_tol * std::max(1.0, std::abs(z[j]))) return false;

    using LC = std::complex<long double>;
    const auto p = exp_ld.segre(LC(z[0].real(), z[0].imag()), LC(z[1].real(), z[1].imag()));
    if (!p.finite()) return false;
    if (!(std::abs(P.F.evaluate(p)) < o.tolerance)) return false;

    try {
        const auto l0 = s.l[0];
        ComplexFn f = [&](std::complex<double> l) { return detail::line_value(P, exp, l); };
        const double w = winding_number(f, [&](double t) { return l0 + std::polar(o.winding_radius, 2 * std::numbers::pi * t); });
        return integral_winding(w) >= 1;
    } catch (const ContourError &) {
        return false;
    }
}

struct CellOutcome {
    Cell cell;
    std::size_t seeds = 0;
    std::vector<SolutionPoint> solutions;
    std::map<std::string, int> failures;
};

inline CellOutcome process_cell(const SolveProblem &P, const ProductExp<double> &exp, const ProductExp<long double> &exp_ld,
                                const Cell &c)
{
    CellOutcome out;
    out.cell = c;
    const auto seeds = coarse_scan_cell(P, exp, c, P.opts.grid);
    out.seeds = seeds.size();
    VerifyOptions vo;
    vo.tolerance = P.opts.tolerance;
    for (const auto &s : seeds) {
        auto r = newton_refine(P, exp, s.l);
        if (!r.solution) {
            ++out.failures[to_string(r.failure)];
            continue;
        }
        auto sol = *r.solution;
        sol.cell = c;
        if (!verify_solution(sol, P, exp_ld, exp, vo)) {
            ++out.failures["unverified"];
            continue;
        }
        bool dup = false;
        for (const auto &o : out.solutions)
            if (P.A->torus_distance<double>(o.z, sol.z) <= 1e-6) dup = true;
        if (dup) continue;
        try {
            sol.jacobian_rank = jacobian_probe(P.L, sol.l, sol.z, exp, &P.F).rank;
        } catch (const std::exception &) {
            sol.jacobian_rank = -1;
        }
        out.solutions.push_back(sol);
    }
    return out;
}

inline int resolve_threads(int requested)
{
    if (requested > 0) return requested;
    if (const char *env = std::getenv("EAC_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

struct HarvestResult {
    std::vector<SolutionPoint> solutions;
    std::size_t cells_visited = 0;
    std::size_t seeds = 0;
    std::map<std::string, int> failures;
    std::size_t duplicates = 0;
    bool budget_exhausted = false;
    double seconds = 0;
    int threads = 1;

    std::size_t distinct_cells() const
    {
        std::vector<int> idx;
        for (const auto &s : solutions) idx.push_back(s.cell.index);
        std::sort(idx.begin(), idx.end());
        return static_cast<std::size_t>(std::unique(idx.begin(), idx.end()) - idx.begin());
    }
};

/// Scans rings of cells until `target_count` distinct solutions are found in A or the budget
/// runs out. Cells of a ring run in parallel; merging is in cell order, so the result does not
/// depend on the thread count.
inline HarvestResult harvest(const SolveProblem &P)
{
    const auto start = std::chrono::steady_clock::now();
    ProductExp<double> exp(*P.A);
    ProductExp<long double> exp_ld(*P.A);
    HarvestResult out;
    out.threads = resolve_threads(P.opts.threads);
    const auto cells = spiral_cells(P.opts.max_cells);
    std::size_t pos = 0;
    while (pos < cells.size()) {
        const int r = ring_of(cells[pos]);
        std::size_t end = pos;
        while (end < cells.size() && ring_of(cells[end]) == r) ++end;

        std::vector<CellOutcome> outcomes(end - pos);
        std::atomic<std::size_t> next{pos};
        auto worker = [&] {
            for (std::size_t k; (k = next.fetch_add(1)) < end;) outcomes[k - pos] = process_cell(P, exp, exp_ld, cells[k]);
        };
        const int nt = std::min<int>(out.threads, static_cast<int>(end - pos));
        if (nt <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (int t = 0; t < nt; ++t) pool.emplace_back(worker);
            for (auto &t : pool) t.join();
        }

        for (auto &oc : outcomes) {
            ++out.cells_visited;
            out.seeds += oc.seeds;
            for (const auto &[k, v] : oc.failures) out.failures[k] += v;
            for (auto &s : oc.solutions) {
                if (static_cast<int>(out.solutions.size()) >= P.opts.target_count) break;
                bool dup = false;
                for (const auto &o : out.solutions)
                    if (P.A->torus_distance<double>(o.z, s.z) <= 1e-6) {
                        dup = true;
                        break;
                    }
                if (dup)
                    ++out.duplicates;
                else
                    out.solutions.push_back(s);
            }
            if (static_cast<int>(out.solutions.size()) >= P.opts.target_count) break;
        }
        pos = end;
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (static_cast<int>(out.solutions.size()) >= P.opts.target_count) break;
        if (elapsed > P.opts.budget_seconds) {
            out.budget_exhausted = true;
            break;
        }
    }
    if (static_cast<int>(out.solutions.size()) < P.opts.target_count && pos >= cells.size()) out.budget_exhausted = true;
    out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

} // namespace eac
