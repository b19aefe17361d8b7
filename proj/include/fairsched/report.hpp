#pragma once

#include <cstddef>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fairsched/engine.hpp"
#include "fairsched/online_sim.hpp"
#include "fairsched/trials.hpp"

namespace fairsched {

// Text tables in the layout of the allocation and unused-capacity tables: one row per
// scheduler, one column per (framework, server) or (server, resource) pair.
class TableWriter {
public:
  explicit TableWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

  void print(std::ostream& os) const {
    std::vector<std::size_t> width(header_.size(), 0);
    auto widen = [&](const std::vector<std::string>& r) {
      for (std::size_t c = 0; c < r.size() && c < width.size(); ++c)
        width[c] = std::max(width[c], r[c].size());
    };
    widen(header_);
    for (const auto& r : rows_) widen(r);
    auto line = [&](const std::vector<std::string>& r) {
      for (std::size_t c = 0; c < r.size(); ++c) {
        os << (c ? " | " : "") << std::setw(static_cast<int>(width[c]))
           << (c ? std::right : std::left) << r[c];
      }
      os << '\n';
    };
    line(header_);
    std::size_t total = 0;
    for (auto w : width) total += w + 3;
    os << std::string(total > 3 ? total - 3 : 0, '-') << '\n';
    for (const auto& r : rows_) line(r);
  }

private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

inline std::string pair_label(std::size_t a, std::size_t b) {
  return "(" + std::to_string(a + 1) + "," + std::to_string(b + 1) + ")";
}

inline std::string display(const Rational& q) { return format_fixed(q.to_double()); }

inline void render_fill(std::ostream& os, const std::string& label, const FillResult& r) {
  const auto N = r.alloc.frameworks(), I = r.alloc.servers();
  const auto R = r.unused.empty() ? 0 : r.unused.front().size();

  std::vector<std::string> head{"sched."};
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t i = 0; i < I; ++i) head.push_back(pair_label(n, i));
  head.push_back("total");
  TableWriter alloc(head);
  std::vector<std::string> row{label};
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t i = 0; i < I; ++i) row.push_back(std::to_string(r.alloc(n, i)));
  row.push_back(std::to_string(r.total_tasks()));
  alloc.add_row(row);
  os << "Allocations x(n,i)\n";
  alloc.print(os);

  std::vector<std::string> uhead{"sched."};
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t k = 0; k < R; ++k) uhead.push_back(pair_label(i, k));
  TableWriter unused(uhead);
  std::vector<std::string> urow{label};
  for (std::size_t i = 0; i < I; ++i)
    for (std::size_t k = 0; k < R; ++k) urow.push_back(display(r.unused[i][k]));
  unused.add_row(urow);
  os << "\nUnused capacities (i,r)\n";
  unused.print(os);
}

inline void render_summary(std::ostream& os, const std::string& label, const TrialSummary& s) {
  const auto N = s.mean_alloc.rows(), I = s.mean_alloc.cols();
  const auto R = s.mean_unused.cols();

  auto grid_table = [&](const std::string& title, std::size_t rows, std::size_t cols,
                        auto cell, bool with_total, const std::string& total_cell) {
    std::vector<std::string> head{"sched."};
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t b = 0; b < cols; ++b) head.push_back(pair_label(a, b));
    if (with_total) head.push_back("total");
    TableWriter t(head);
    std::vector<std::string> row{label};
    for (std::size_t a = 0; a < rows; ++a)
      for (std::size_t b = 0; b < cols; ++b) row.push_back(cell(a, b));
    if (with_total) row.push_back(total_cell);
    t.add_row(row);
    os << title << '\n';
    t.print(os);
    os << '\n';
  };

  os << "Trials: " << s.trials << "\n\n";
  grid_table("Mean allocations x(n,i)", N, I,
             [&](std::size_t a, std::size_t b) { return display(s.mean_alloc(a, b)); }, true,
             display(s.mean_total_tasks));
  if (s.sd_alloc) {
    grid_table("Sample standard deviation of x(n,i)", N, I,
               [&](std::size_t a, std::size_t b) { return format_fixed((*s.sd_alloc)(a, b)); },
               false, "");
    grid_table("Confidence intervals (mean +/- 2 sd/sqrt(T)) of x(n,i)", N, I,
               [&](std::size_t a, std::size_t b) {
                 auto [lo, hi] = confidence_interval(s.mean_alloc(a, b).to_double(),
                                                     (*s.sd_alloc)(a, b), s.trials);
                 return "(" + format_fixed(lo) + "," + format_fixed(hi) + ")";
               },
               false, "");
  }
  grid_table("Mean unused capacities (i,r)", I, R,
             [&](std::size_t a, std::size_t b) { return display(s.mean_unused(a, b)); }, false,
             "");
  if (s.sd_unused)
    grid_table("Sample standard deviation of unused capacities (i,r)", I, R,
               [&](std::size_t a, std::size_t b) { return format_fixed((*s.sd_unused)(a, b)); },
               false, "");
}

inline void render_trace_summary(std::ostream& os, const EventTrace& t) {
  os << "makespan: " << format_fixed(t.makespan) << (t.truncated ? " (truncated)" : "") << '\n';
  os << "jobs completed: " << t.job_completions.size() << '\n';
  os << "executors launched: " << t.executors_launched << '\n';
  for (std::size_t r = 0; r < t.resources.size(); ++r) {
    auto s = utilization_series(t, r);
    os << "mean allocated " << t.resources[r] << ": " << format_fixed(100.0 * series_mean(s))
       << "%\n";
  }
}

}  // namespace fairsched
