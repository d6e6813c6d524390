#pragma once
#include <cmath>
#include <string>
#include <vector>

#include "thergm/network.hpp"

namespace thergm {

enum class StatTerm { Edges, Triangles, Stability };

StatTerm parse_term(const std::string& name);
std::string term_name(StatTerm t);

// Ordered list of transition statistics; order fixes coefficient indexing.
struct StatisticSpec {
  std::vector<StatTerm> terms;

  int p() const { return static_cast<int>(terms.size()); }

  static StatisticSpec parse(const std::string& csv);  // "edges,triangles,stability"
  std::string to_string() const;
  void validate() const;
};

using StatVector = std::vector<double>;

// S(y_t, y_prev): edge and triangle counts of y_t, plus the number of
// dyads whose state is unchanged from y_prev.
StatVector temporal_stats(const StatisticSpec& spec, const Adjacency& y_t,
                          const Adjacency& y_prev);

// c_ij = S(y^(ij1), y_prev) - S(y^(ij0), y_prev), evaluated on y_t with
// the (i,j) tie toggled.
StatVector change_stats(const StatisticSpec& spec, const Adjacency& y_t,
                        const Adjacency& y_prev, int i, int j);

// logit P(Y_ij = 1 | rest) = theta' c_ij
double conditional_logit(const StatisticSpec& spec, const std::vector<double>& theta,
                         const Adjacency& y_t, const Adjacency& y_prev, int i, int j);

inline double sigmoid(double x) {
  return x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
}

}  // namespace thergm
