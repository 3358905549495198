#pragma once

// The gated pipeline behind the command line: check, hull, certify, solve.
// Each stage returns a JSON report; certification requires a free and rotund
// verdict, and solving requires a nonzero certificate.

#include <cmath>
#include <fstream>
#include <iomanip>

#include <nlohmann/json.hpp>

#include "forms.hpp"
#include "hull.hpp"
#include "instance.hpp"

namespace eac
{

using nlohmann::json;

namespace exit_code
{
constexpr int ok = 0;
constexpr int usage = 1;
constexpr int negative = 2;
constexpr int indeterminate = 3;
constexpr int uncertified = 4;
/// A certified instance produced fewer solutions than requested within the budget.
constexpr int short_harvest = 5;
} // namespace exit_code

struct Outcome {
    json report;
    int code = exit_code::ok;
};

inline std::string format_double(double v)
{
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline json subset_json(FactorSubset S, std::size_t g)
{
    json out = json::array();
    for (std::size_t j = 0; j < g; ++j)
        if (S >> j & 1u) out.push_back(j + 1);
    return out;
}

inline json matrix_columns_json(const Matrix<ComplexMultiQuad> &m)
{
    json out = json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) {
        json col = json::array();
        for (std::size_t r = 0; r < m.rows(); ++r) col.push_back(m(r, c).str());
        out.push_back(col);
    }
    return out;
}

template <typename T>
json matrix_rows_json(const Matrix<T> &m)
{
    json out = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if constexpr (std::is_same_v<T, Rational>)
                row.push_back(to_string(m(r, c)));
            else
                row.push_back(m(r, c).str());
        }
        out.push_back(row);
    }
    return out;
}

inline json exact_json(const MultiQuad &x)
{
    return {{"exact", x.str()}, {"float", x.to_double()}};
}

inline json header_json(const Instance &inst, const char *command)
{
    return {{"command", command}, {"instance", {{"id", inst.id}, {"hash", hex64(inst.hash)}}}};
}

/// Settles the class data of W: measures fibre counts when asked, and cross-checks stated ones.
inline json settle_bidegree(Instance &inst, const ProductVariety &A)
{
    json out = json::object();
    if (inst.W.kind != WKind::segre_hypersurface || !inst.W.F) return out;
    if (inst.W.bidegree) out["stated"] = {inst.W.bidegree->m, inst.W.bidegree->n};
    if (!inst.measure_bidegree && !inst.W.bidegree) return out;
    ProductExp<double> exp(A);
    try {
        const auto measured = fiber_bidegree(*inst.W.F, exp, inst.solver.seed);
        out["measured"] = {measured.m, measured.n};
        if (inst.W.bidegree && (inst.W.bidegree->m != measured.m || inst.W.bidegree->n != measured.n))
            throw InstanceError("$.W.bidegree: stated [" + std::to_string(inst.W.bidegree->m) + ", " +
                                std::to_string(inst.W.bidegree->n) + "] but fibre counts give [" + std::to_string(measured.m) +
                                ", " + std::to_string(measured.n) + "]");
        inst.W.bidegree = measured;
    } catch (const ContourError &e) {
        if (inst.measure_bidegree) throw InstanceError(std::string("$.W.bidegree: could not measure fibre counts: ") + e.what());
        out["measured"] = nullptr;
        out["measure_error"] = e.what();
    }
    return out;
}

inline json verdict_json(const Verdict &v)
{
    json out = {{"free", to_string(v.free)},
                {"rotund", to_string(v.rotund)},
                {"free_and_rotund", to_string(v.overall())},
                {"dim_L", v.dim_L},
                {"dim_W", v.dim_W},
                {"g", v.g}};
    if (v.free_witness)
        out["free_witness"] = {{"B_factors", subset_json(v.free_witness->subset, v.g)},
                               {"B", subset_name(v.free_witness->subset, v.g)},
                               {"side", v.free_witness->side}};
    if (v.rotund_witness)
        out["rotund_witness"] = {{"B_factors", subset_json(v.rotund_witness->subset, v.g)},
                                 {"B", subset_name(v.rotund_witness->subset, v.g)},
                                 {"required", v.rotund_witness->required},
                                 {"achieved", v.rotund_witness->achieved}};
    if (!v.free_reason.empty()) out["free_reason"] = v.free_reason;
    if (!v.rotund_reason.empty()) out["rotund_reason"] = v.rotund_reason;
    return out;
}

inline int verdict_code(const Verdict &v)
{
    switch (v.overall()) {
    case Tri::yes:
        return exit_code::ok;
    case Tri::no:
        return exit_code::negative;
    case Tri::indeterminate:
        return exit_code::indeterminate;
    }
    return exit_code::indeterminate;
}

inline json flags_json(const Instance &inst)
{
    return {{"pairwise_nonisogenous", inst.pairwise_nonisogenous}, {"no_cm", inst.no_cm}};
}

inline Outcome run_check(Instance inst)
{
    const auto A = inst.variety();
    Outcome o;
    o.report = header_json(inst, "check");
    o.report["assumptions"] = flags_json(inst);
    o.report["bidegree"] = settle_bidegree(inst, A);
    const auto v = check(inst.L, inst.W, A);
    o.report["verdict"] = verdict_json(v);
    o.code = verdict_code(v);
    return o;
}

inline json hull_json(const HullResult &h)
{
    return {{"dim_T", h.dim_T()}, {"equations", matrix_rows_json(h.equations)}, {"basis", matrix_rows_json(h.T.basis().transpose())}};
}

inline Outcome run_hull(const Instance &inst)
{
    const auto A = inst.variety();
    Outcome o;
    o.report = header_json(inst, "hull");
    const auto chain = hull_chain(inst.L, A);
    json members = json::array();
    for (const auto &m : chain.complex_members) members.push_back({{"dim", m.dim()}, {"basis", matrix_columns_json(m.basis())}});
    json hulls = json::array();
    for (const auto &h : chain.hulls) hulls.push_back(hull_json(h));
    const auto T0 = rational_hull(inst.L, A);
    o.report["T"] = hull_json(T0);
    o.report["T_rational_equals_L"] = T0.T == inst.L.realify(A);
    o.report["chain"] = {{"L", members}, {"T", hulls}, {"k", chain.k}, {"stalled", chain.stalled}};
    // A stalled chain ends in the Lie algebra of a proper abelian subvariety containing L.
    o.report["non_free"] = chain.stalled;
    return o;
}

/// Poincare dual of the class of W.
inline ExactForm class_form(const WDescriptor &W, const ProductVariety &A)
{
    const std::size_t n = A.real_dim();
    switch (W.kind) {
    case WKind::whole:
        return ExactForm::constant(n, MultiQuad(1));
    case WKind::point:
        return ExactForm::top(n);
    case WKind::segre_hypersurface:
        break;
    }
    if (A.g() != 2 || !W.bidegree) throw PreconditionError("class of W needs the fibre counts of a curve in E1 x E2");
    return class_of_hypersurface(W.bidegree->m, W.bidegree->n).poincare_dual();
}

struct CertifyState {
    Verdict verdict;
    std::optional<ComplexSubspace> L_used;
    std::optional<Certificate> certificate;
    bool certified = false;
};

inline Outcome run_certify_state(Instance &inst, CertifyState &st)
{
    const auto A = inst.variety();
    Outcome o;
    o.report = header_json(inst, "certify");
    o.report["assumptions"] = flags_json(inst);
    o.report["bidegree"] = settle_bidegree(inst, A);
    st.verdict = check(inst.L, inst.W, A);
    o.report["verdict"] = verdict_json(st.verdict);
    if (st.verdict.overall() != Tri::yes) {
        o.report["certificate"] = nullptr;
        o.report["refused"] = st.verdict.overall() == Tri::no ? "L x W is not free and rotund" : "verdict indeterminate";
        o.code = verdict_code(st.verdict);
        return o;
    }
    ComplexSubspace L = inst.L;
    if (L.dim() + inst.W.dim > A.g()) {
        L = reduce_L(L, inst.W, A, inst.solver.seed);
        o.report["reduced_L"] = {{"seed", inst.solver.seed}, {"dim", L.dim()}, {"basis", matrix_columns_json(L.basis())}};
    }
    st.L_used = L;
    const auto hull = rational_hull(L, A);
    const auto eta = class_form(inst.W, A);
    const auto cert = eac_certificate(eta, hull, L, A);
    st.certificate = cert;
    st.certified = cert.nonzero();
    o.report["certificate"] = {{"value", exact_json(cert.value)},
                               {"holomorphic_route", exact_json(cert.holomorphic_value)},
                               {"eta_W", eta.str()},
                               {"omega_T", cert.omega_T.str()},
                               {"omega_T_prime", cert.omega_T_prime.str()},
                               {"T_prime_equations", matrix_rows_json(cert.T_prime_equations)},
                               {"nonzero", cert.nonzero()},
                               {"assumption", "abelian subvarieties are coordinate subproducts (pairwise non-isogenous factors)"}};
    o.code = cert.nonzero() ? exit_code::ok : exit_code::negative;
    return o;
}

inline Outcome run_certify(Instance inst)
{
    CertifyState st;
    return run_certify_state(inst, st);
}

inline json solution_json(const SolutionPoint &s)
{
    json z = json::array();
    for (const auto &c : s.z) z.push_back({format_double(c.real()), format_double(c.imag())});
    return {{"l", {format_double(s.l[0].real()), format_double(s.l[0].imag())}},
            {"z", z},
            {"residual", format_double(s.residual)},
            {"jacobian_rank", s.jacobian_rank},
            {"cell", {{"index", s.cell.index}, {"a", s.cell.a}, {"b", s.cell.b}}},
            {"iterations", s.iterations}};
}

struct SolveRun {
    Outcome outcome;
    std::optional<HarvestResult> harvest;
};

/// solve (target from options, default 1) and density share this path.
inline SolveRun run_solve(Instance inst, const char *command)
{
    SolveRun run;
    CertifyState st;
    auto cert = run_certify_state(inst, st);
    auto &o = run.outcome;
    o.report = header_json(inst, command);
    o.report["verdict"] = cert.report["verdict"];
    o.report["certificate"] = cert.report["certificate"];
    if (cert.report.contains("reduced_L")) o.report["reduced_L"] = cert.report["reduced_L"];
    if (!st.certified) {
        o.report["refused"] = "instance is not certified";
        o.code = exit_code::uncertified;
        return run;
    }
    if (inst.W.kind != WKind::segre_hypersurface || !inst.W.F) {
        o.report["refused"] = "the solver handles curves given by a Segre polynomial";
        o.code = exit_code::usage;
        return run;
    }
    const auto A = inst.variety();
    SolveProblem P(A, *st.L_used, *inst.W.F, inst.solver);
    auto h = harvest(P);
    json sols = json::array();
    std::size_t full_rank = 0;
    for (const auto &s : h.solutions) {
        sols.push_back(solution_json(s));
        if (s.jacobian_rank == static_cast<int>(A.g())) ++full_rank;
    }
    o.report["solver"] = {{"seed", inst.solver.seed},
                          {"grid", inst.solver.grid},
                          {"tolerance", inst.solver.tolerance},
                          {"max_cells", inst.solver.max_cells},
                          {"target_count", inst.solver.target_count},
                          {"scan_threshold", inst.solver.scan_threshold}};
    o.report["solutions"] = sols;
    o.report["distinct_count"] = h.solutions.size();
    o.report["distinct_cells"] = h.distinct_cells();
    o.report["full_rank_count"] = full_rank;
    o.report["cells_visited"] = h.cells_visited;
    o.report["seeds"] = h.seeds;
    o.report["duplicates"] = h.duplicates;
    o.report["refine_failures"] = h.failures;
    o.report["budget_exhausted"] = h.budget_exhausted;
    o.report["defect"] = h.solutions.empty();
    o.report["timing"] = {{"seconds", h.seconds}, {"threads", h.threads}};
    o.code = static_cast<int>(h.solutions.size()) >= inst.solver.target_count ? exit_code::ok : exit_code::short_harvest;
    run.harvest = std::move(h);
    return run;
}

inline void write_csv(const HarvestResult &h, const std::string &path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path + ": cannot write");
    out << "re_l,im_l,residual,cell,cell_a,cell_b,jacobian_rank\n";
    out << std::setprecision(17);
    for (const auto &s : h.solutions)
        out << s.l[0].real() << ',' << s.l[0].imag() << ',' << s.residual << ',' << s.cell.index << ',' << s.cell.a << ','
            << s.cell.b << ',' << s.jacobian_rank << '\n';
}

} // namespace eac
