#include "thergm/stats.hpp"

#include <algorithm>
#include <sstream>

namespace thergm {

StatTerm parse_term(const std::string& name) {
  if (name == "edges") return StatTerm::Edges;
  if (name == "triangles") return StatTerm::Triangles;
  if (name == "stability") return StatTerm::Stability;
  throw std::invalid_argument("unknown statistic term: " + name);
}

std::string term_name(StatTerm t) {
  switch (t) {
    case StatTerm::Edges: return "edges";
    case StatTerm::Triangles: return "triangles";
    case StatTerm::Stability: return "stability";
  }
  return "?";
}

StatisticSpec StatisticSpec::parse(const std::string& csv) {
  StatisticSpec spec;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (!item.empty()) spec.terms.push_back(parse_term(item));
  }
  spec.validate();
  return spec;
}

std::string StatisticSpec::to_string() const {
  std::string out;
  for (size_t i = 0; i < terms.size(); ++i) {
    if (i) out += ',';
    out += term_name(terms[i]);
  }
  return out;
}

void StatisticSpec::validate() const {
  if (terms.empty()) throw std::invalid_argument("StatisticSpec: empty term list");
  for (size_t i = 0; i < terms.size(); ++i)
    for (size_t j = i + 1; j < terms.size(); ++j)
      if (terms[i] == terms[j]) throw std::invalid_argument("StatisticSpec: duplicate term");
}

static long stable_dyads(const Adjacency& y_t, const Adjacency& y_prev) {
  long count = 0;
  for (int i = 0; i < y_t.n(); ++i)
    for (int j = i + 1; j < y_t.n(); ++j)
      if (y_t.has(i, j) == y_prev.has(i, j)) ++count;
  return count;
}

StatVector temporal_stats(const StatisticSpec& spec, const Adjacency& y_t,
                          const Adjacency& y_prev) {
  if (y_t.n() != y_prev.n()) throw std::invalid_argument("temporal_stats: dimension mismatch");
  StatVector s(spec.p());
  for (int a = 0; a < spec.p(); ++a) {
    switch (spec.terms[a]) {
      case StatTerm::Edges: s[a] = y_t.edge_count(); break;
      case StatTerm::Triangles: s[a] = static_cast<double>(triangle_count(y_t)); break;
      case StatTerm::Stability: s[a] = static_cast<double>(stable_dyads(y_t, y_prev)); break;
    }
  }
  return s;
}

StatVector change_stats(const StatisticSpec& spec, const Adjacency& y_t,
                        const Adjacency& y_prev, int i, int j) {
  if (i == j) throw std::invalid_argument("change_stats: i == j");
  StatVector c(spec.p());
  for (int a = 0; a < spec.p(); ++a) {
    switch (spec.terms[a]) {
      case StatTerm::Edges:
        c[a] = 1.0;
        break;
      case StatTerm::Triangles:
        // toggling (i,j) creates/destroys one triangle per common neighbor
        c[a] = static_cast<double>(y_t.common_neighbors(i, j));
        break;
      case StatTerm::Stability:
        c[a] = y_prev.has(i, j) ? 1.0 : -1.0;
        break;
    }
  }
  return c;
}

double conditional_logit(const StatisticSpec& spec, const std::vector<double>& theta,
                         const Adjacency& y_t, const Adjacency& y_prev, int i, int j) {
  if (static_cast<int>(theta.size()) != spec.p())
    throw std::invalid_argument("conditional_logit: theta length mismatch");
  StatVector c = change_stats(spec, y_t, y_prev, i, j);
  double lp = 0.0;
  for (int a = 0; a < spec.p(); ++a) lp += theta[a] * c[a];
  return lp;
}

}  // namespace thergm
