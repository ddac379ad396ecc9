#pragma once

// JSON serialization of traces and reports, and the plain-text table with
// one row per solve: # FR, face sizes, max rank, residual per FR, DR
// iterations per FR, final residual.

#include <cstdio>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "realrad/facial_reduction.hpp"
#include "realrad/real_radical.hpp"

namespace realrad {

using json = nlohmann::json;

// Polynomial: {"nvars": n, "text": "...", "terms": [[[exponents], coef], ...]}.
// "text" is informational and ignored when reading.
inline void to_json(json& j, const Polynomial& p) {
  json terms = json::array();
  for (const auto& [m, c] : p.terms()) terms.push_back(json::array({m.exponents(), c}));
  j = json{{"nvars", p.nvars()}, {"text", p.to_string()}, {"terms", std::move(terms)}};
}

inline void from_json(const json& j, Polynomial& p) {
  p = Polynomial(j.at("nvars").get<std::size_t>());
  for (const auto& t : j.at("terms")) p.add_term(Monomial(t.at(0).get<std::vector<unsigned>>()), t.at(1).get<double>());
}

inline void to_json(json& j, const KernelBasis& k) {
  j = json{{"nvars", k.nvars}, {"degree", k.degree}, {"dim", k.dim()}, {"polys", k.polys}};
}

inline void from_json(const json& j, KernelBasis& k) {
  k.nvars = j.at("nvars").get<std::size_t>();
  k.degree = j.at("degree").get<unsigned>();
  k.polys = j.at("polys").get<std::vector<Polynomial>>();
}

inline void to_json(json& j, const FRTrace& t) {
  j = json{{"face_sizes", t.face_sizes},
           {"aux_residuals", t.aux_residuals},
           {"aux_iterations", t.aux_iterations},
           {"aux_ranks", t.aux_ranks},
           {"primal_residual", t.primal_residual},
           {"primal_iterations", t.primal_iterations},
           {"polish_iterations", t.polish_iterations},
           {"final_rank", t.final_rank},
           {"search_iterations", t.search_iterations},
           {"reductions", t.reductions()},
           {"singularity_degree_bound", t.singularity_degree_bound()},
           {"dr_iterations", t.productive_iterations()}};
}

inline void from_json(const json& j, FRTrace& t) {
  t = FRTrace{};
  j.at("face_sizes").get_to(t.face_sizes);
  j.at("aux_residuals").get_to(t.aux_residuals);
  j.at("aux_iterations").get_to(t.aux_iterations);
  j.at("aux_ranks").get_to(t.aux_ranks);
  j.at("primal_residual").get_to(t.primal_residual);
  j.at("primal_iterations").get_to(t.primal_iterations);
  j.at("polish_iterations").get_to(t.polish_iterations);
  j.at("final_rank").get_to(t.final_rank);
  j.at("search_iterations").get_to(t.search_iterations);
}

inline void to_json(json& j, const Completeness& c) {
  j = json{{"s", c.s}, {"threshold", c.threshold}, {"complete", c.complete ? json(*c.complete) : json(nullptr)}};
}

inline void from_json(const json& j, Completeness& c) {
  j.at("s").get_to(c.s);
  j.at("threshold").get_to(c.threshold);
  const auto& v = j.at("complete");
  c.complete = v.is_null() ? std::nullopt : std::optional<bool>(v.get<bool>());
}

inline void to_json(json& j, const RadicalReport& r) {
  j = json{{"generators", r.generators},
           {"span", r.span},
           {"fr_trace", r.fr_trace},
           {"outer_iterations", r.outer_iterations},
           {"ideal_like", r.ideal_like},
           {"completeness", r.completeness ? json(*r.completeness) : json(nullptr)}};
  if (!r.fr_trace.empty()) {
    j["final_rank"] = r.fr_trace.back().final_rank;
    j["final_residual"] = r.fr_trace.back().primal_residual;
  }
}

inline void from_json(const json& j, RadicalReport& r) {
  r = RadicalReport{};
  j.at("generators").get_to(r.generators);
  j.at("span").get_to(r.span);
  j.at("fr_trace").get_to(r.fr_trace);
  j.at("outer_iterations").get_to(r.outer_iterations);
  j.at("ideal_like").get_to(r.ideal_like);
  const auto& c = j.at("completeness");
  if (!c.is_null()) r.completeness = c.get<Completeness>();
}

/// One table row: a label and the trace of one maximum-rank solve.
struct TableRow {
  std::string label;
  FRTrace trace;
};

namespace detail {

inline std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1e", v);
  return buf;
}

template <class T, class F>
std::string joined(const std::vector<T>& xs, F fmt) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? ", " : "") + fmt(xs[i]);
  return s;
}

}  // namespace detail

/// Residual and DR iteration count of each reduction; the first reduction
/// (Z = B B^T) is closed-form and shows as "-".
inline void write_table(std::ostream& os, const std::vector<TableRow>& rows) {
  const std::vector<std::string> head = {"",  "# FR", "face sizes", "max rank", "residual per FR", "DR iterations per FR",
                                         "final residual"};
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : rows) {
    const FRTrace& t = row.trace;
    std::vector<std::string> res = {"-"}, its = {"-"};
    for (double r : t.aux_residuals) res.push_back(detail::sci(r));
    for (int i : t.aux_iterations) its.push_back(std::to_string(i));
    std::string primal = std::to_string(t.primal_iterations + t.polish_iterations);
    cells.push_back({row.label, std::to_string(t.reductions()),
                     detail::joined(t.face_sizes, [](auto v) { return std::to_string(v); }),
                     std::to_string(t.final_rank), detail::joined(res, [](const auto& s) { return s; }),
                     detail::joined(its, [](const auto& s) { return s; }) + " + " + primal,
                     detail::sci(t.primal_residual)});
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto& r : cells) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      os << std::left << std::setw(static_cast<int>(width[c])) << r[c];
      os << (c + 1 < r.size() ? " | " : "\n");
    }
  };
  line(head);
  std::vector<std::string> rule;
  for (auto w : width) rule.push_back(std::string(w, '-'));
  line(rule);
  for (const auto& r : cells) line(r);
}

/// Table of a radical report (one row per outer iteration) followed by the
/// generators.
inline void write_table(std::ostream& os, const RadicalReport& r) {
  std::vector<TableRow> rows;
  for (std::size_t i = 0; i < r.fr_trace.size(); ++i) rows.push_back({"outer " + std::to_string(i + 1), r.fr_trace[i]});
  write_table(os, rows);
  os << "\ngenerators (" << r.generators.size() << ", span dim " << r.span.dim() << " at degree " << r.span.degree
     << "):\n";
  for (const auto& g : r.generators) os << "  " << g << '\n';
  if (r.completeness) {
    os << "completeness: s = " << r.completeness->s << ", threshold = " << r.completeness->threshold << ", "
       << (r.completeness->complete ? "generators are complete" : "no conclusion") << '\n';
  }
}

}  // namespace realrad
