#pragma once

// Built-in instances on E_1 x E_2 with tau_1 = i sqrt(2), tau_2 = i sqrt(5).

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "checker.hpp"

namespace eac
{

struct CatalogEntry {
    nlohmann::json doc;
    /// Expected overall verdict of check.
    Tri expected;
};

namespace detail
{

inline nlohmann::json linear_coeffs(std::initializer_list<std::pair<int, double>> entries)
{
    auto out = nlohmann::json::array();
    for (auto [k, c] : entries) {
        std::vector<int> mono(9, 0);
        mono[k] = 1;
        out.push_back({{"monomial", mono}, {"re", c}, {"im", 0.0}});
    }
    return out;
}

using Basis = std::vector<std::vector<std::string>>;

inline nlohmann::json catalog_doc(const std::string &id, const std::string &description, const Basis &L, nlohmann::json coeffs,
                                  std::vector<int> bidegree)
{
    nlohmann::json W = {{"kind", "segre-hypersurface"}, {"dim", 1}, {"coeffs", std::move(coeffs)}, {"bidegree", bidegree}};
    return {{"id", id},
            {"description", description},
            {"factors", nlohmann::json::array({nlohmann::json{{"tau_re", "0"}, {"tau_im", {{"d", 2}, {"q", "1"}}}},
                                                nlohmann::json{{"tau_re", "0"}, {"tau_im", {{"d", 5}, {"q", "1"}}}}})},
            {"flags", {{"pairwise_nonisogenous", true}, {"no_cm", false}}},
            {"L", nlohmann::json(L)},
            {"W", std::move(W)},
            {"solver", {{"seed", 1}, {"grid", 120}, {"max_cells", 25}, {"budget_seconds", 60}, {"target_count", 1}}}};
}

} // namespace detail

/// The worked diagonal instance: L = C (1, 1), W = closure of {p1(z1) p2(z2) = 1}.
inline nlohmann::json diagonal_instance()
{
    auto doc = detail::catalog_doc("diagonal", "diagonal line against the curve p1(z1) p2(z2) = 1", {{"1", "1"}},
                                   detail::linear_coeffs({{4, 1.0}, {0, -1.0}}), {2, 2});
    doc["solver"] = {{"seed", 1}, {"grid", 200}, {"max_cells", 441}, {"budget_seconds", 60}, {"target_count", 1}};
    return doc;
}

inline std::vector<CatalogEntry> catalog()
{
    using detail::catalog_doc;
    using detail::linear_coeffs;
    const auto Z4 = linear_coeffs({{4, 1.0}, {0, -1.0}});
    std::vector<CatalogEntry> out;
    out.push_back({diagonal_instance(), Tri::yes});
    out.push_back({catalog_doc("slope-sqrt2", "irrational slope", detail::Basis{{"1", "sqrt(2)"}}, Z4, {2, 2}), Tri::yes});
    out.push_back({catalog_doc("slope-i", "slope i", detail::Basis{{"1", "i"}}, Z4, {2, 2}), Tri::yes});
    out.push_back({catalog_doc("slope-2-Z7", "slope 2 against p1' p2 = 1", detail::Basis{{"1", "2"}}, linear_coeffs({{7, 1.0}, {0, -1.0}}), {3, 2}),
                   Tri::yes});
    out.push_back({catalog_doc("diag-Z5", "diagonal against p1 p2' = 1", detail::Basis{{"1", "1"}}, linear_coeffs({{5, 1.0}, {0, -1.0}}), {2, 3}),
                   Tri::yes});
    out.push_back({catalog_doc("diag-Z8", "diagonal against p1' p2' = 1", detail::Basis{{"1", "1"}}, linear_coeffs({{8, 1.0}, {0, -1.0}}), {3, 3}),
                   Tri::yes});
    out.push_back({catalog_doc("sqrt2-mixed", "slope sqrt(2) against p1 p2 + p1 + p2 = 3", {{"1", "sqrt(2)"}},
                               linear_coeffs({{4, 1.0}, {3, 1.0}, {1, 1.0}, {0, -3.0}}), {2, 2}),
                   Tri::yes});
    out.push_back({catalog_doc("whole-plane", "L = C^2, cut down to a line", detail::Basis{{"1", "0"}, {"0", "1"}}, Z4, {2, 2}), Tri::yes});
    out.push_back({catalog_doc("axis-1", "L inside Lie(E1)", detail::Basis{{"1", "0"}}, Z4, {2, 2}), Tri::no});
    out.push_back({catalog_doc("axis-2", "L inside Lie(E2)", detail::Basis{{"0", "1"}}, Z4, {2, 2}), Tri::no});
    out.push_back({catalog_doc("fibre-p1", "W = {p1 = 2}, a vertical fibre", detail::Basis{{"1", "1"}}, linear_coeffs({{3, 1.0}, {0, -2.0}}), {2, 0}),
                   Tri::no});
    out.push_back({catalog_doc("fibre-p2", "W = {p2 = 2}, a horizontal fibre", detail::Basis{{"1", "1"}}, linear_coeffs({{1, 1.0}, {0, -2.0}}), {0, 2}),
                   Tri::no});
    out.push_back({catalog_doc("fibre-p1prime", "W = {p1' = 1}", detail::Basis{{"1", "sqrt(2)"}}, linear_coeffs({{6, 1.0}, {0, -1.0}}), {3, 0}),
                   Tri::no});
    out.push_back({catalog_doc("fibre-p2prime", "W = {p2' = 1}", detail::Basis{{"1", "sqrt(2)"}}, linear_coeffs({{2, 1.0}, {0, -1.0}}), {0, 3}),
                   Tri::no});
    out.push_back({catalog_doc("zero-L", "L = 0, too small to be rotund", detail::Basis{}, Z4, {2, 2}), Tri::no});
    return out;
}

} // namespace eac
