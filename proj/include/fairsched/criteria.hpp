#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "fairsched/core_model.hpp"

namespace fairsched {

enum class CriterionKind { drf, tsf, psdsf, rpsdsf };

inline std::string_view to_string(CriterionKind k) {
  switch (k) {
    case CriterionKind::drf: return "drf";
    case CriterionKind::tsf: return "tsf";
    case CriterionKind::psdsf: return "psdsf";
    case CriterionKind::rpsdsf: return "rpsdsf";
  }
  return "?";
}

inline std::optional<CriterionKind> parse_criterion(std::string_view s) {
  if (s == "drf") return CriterionKind::drf;
  if (s == "tsf") return CriterionKind::tsf;
  if (s == "psdsf") return CriterionKind::psdsf;
  if (s == "rpsdsf") return CriterionKind::rpsdsf;
  return std::nullopt;
}

// PS-DSF and rPS-DSF score a framework against a particular server.
constexpr bool is_per_server(CriterionKind k) {
  return k == CriterionKind::psdsf || k == CriterionKind::rpsdsf;
}

// Non-negative rational or +infinity. Infinity sorts above every finite score and means
// the framework cannot be served on that server.
class Score {
public:
  constexpr Score() = default;
  Score(Rational v) : value_(v) {}  // NOLINT: implicit from value

  static Score infinity() {
    Score s;
    s.infinite_ = true;
    return s;
  }

  bool is_infinite() const { return infinite_; }
  const Rational& value() const {
    if (infinite_) throw std::logic_error("infinite score has no finite value");
    return value_;
  }

  double to_double() const {
    return infinite_ ? std::numeric_limits<double>::infinity() : value_.to_double();
  }
  std::string to_string() const { return infinite_ ? "inf" : value_.to_string(); }

  friend bool operator==(const Score& a, const Score& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const Score& a, const Score& b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ <=> b.infinite_;
    return a.value_ <=> b.value_;
  }
  friend std::ostream& operator<<(std::ostream& os, const Score& s) { return os << s.to_string(); }

private:
  Rational value_{0};
  bool infinite_ = false;
};

// Global dominant share against aggregate cluster capacity, divided by the weight.
inline Score drf_score(const ClusterState& state, std::size_t n) {
  const auto& f = state.framework(n);
  const auto& total = state.aggregate_capacity();
  const std::int64_t x = state.total_tasks(n);
  Rational share{0};
  for (std::size_t r = 0; r < f.demand.size(); ++r) {
    if (f.demand[r] == 0) continue;
    if (total[r] == 0) return Score::infinity();
    share = std::max(share, Rational(x) * f.demand[r] / total[r]);
  }
  return share / f.weight;
}

// Tasks held relative to the tasks the framework could run alone on the cluster.
inline Score tsf_score(const ClusterState& state, std::size_t n) {
  const auto& f = state.framework(n);
  const std::int64_t alone = max_standalone_tasks(f, state.servers());
  if (alone == 0) return Score::infinity();
  return Rational(state.total_tasks(n)) / (f.weight * Rational(alone));
}

namespace detail {

inline Score per_server_share(std::int64_t tasks, const FrameworkSpec& f,
                              const ResourceVector& denominator) {
  Rational worst{0};
  for (std::size_t r = 0; r < f.demand.size(); ++r) {
    if (f.demand[r] == 0) continue;
    if (denominator[r] == 0) return Score::infinity();
    worst = std::max(worst, f.demand[r] / (f.weight * denominator[r]));
  }
  return Rational(tasks) * worst;
}

}  // namespace detail

// Virtual dominant share of framework n on server j.
inline Score psdsf_score(const ClusterState& state, std::size_t n, std::size_t j) {
  return detail::per_server_share(state.total_tasks(n), state.framework(n),
                                  state.server(j).capacity);
}

// As psdsf_score, measured against server j's current residual capacity.
inline Score rpsdsf_score(const ClusterState& state, std::size_t n, std::size_t j) {
  return detail::per_server_share(state.total_tasks(n), state.framework(n),
                                  residual_capacity(state, j));
}

// j is ignored by the cluster-wide criteria.
inline Score score(CriterionKind kind, const ClusterState& state, std::size_t n, std::size_t j) {
  switch (kind) {
    case CriterionKind::drf: return drf_score(state, n);
    case CriterionKind::tsf: return tsf_score(state, n);
    case CriterionKind::psdsf: return psdsf_score(state, n, j);
    case CriterionKind::rpsdsf: return rpsdsf_score(state, n, j);
  }
  throw config_error("unknown criterion");
}

}  // namespace fairsched
