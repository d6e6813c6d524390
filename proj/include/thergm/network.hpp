#pragma once
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

namespace thergm {

// Undirected binary adjacency matrix with zero diagonal.
// Rows are stored as 64-bit words so neighbourhood intersections
// (triangle change statistics) are popcounts.
class Adjacency {
 public:
  Adjacency() : n_(0), words_(0) {}
  explicit Adjacency(int n)
      : n_(n), words_((n + 63) / 64), rows_(static_cast<size_t>(n) * words_, 0) {
    if (n < 0) throw std::invalid_argument("Adjacency: negative node count");
  }

  int n() const { return n_; }

  bool has(int i, int j) const {
    return (rows_[static_cast<size_t>(i) * words_ + j / 64] >> (j % 64)) & 1ULL;
  }

  void set(int i, int j, bool v) {
    if (i == j) throw std::invalid_argument("Adjacency::set: diagonal entry");
    set_bit(i, j, v);
    set_bit(j, i, v);
  }

  int degree(int i) const {
    int d = 0;
    const std::uint64_t* r = row(i);
    for (int w = 0; w < words_; ++w) d += __builtin_popcountll(r[w]);
    return d;
  }

  int edge_count() const {
    int total = 0;
    for (int i = 0; i < n_; ++i) total += degree(i);
    return total / 2;
  }

  // |N(i) ∩ N(j)|, i and j excluded by the zero diagonal.
  int common_neighbors(int i, int j) const {
    const std::uint64_t* ri = row(i);
    const std::uint64_t* rj = row(j);
    int c = 0;
    for (int w = 0; w < words_; ++w) c += __builtin_popcountll(ri[w] & rj[w]);
    return c;
  }

  const std::uint64_t* row(int i) const {
    return rows_.data() + static_cast<size_t>(i) * words_;
  }

  std::vector<int> neighbors(int i) const {
    std::vector<int> out;
    for (int j = 0; j < n_; ++j)
      if (j != i && has(i, j)) out.push_back(j);
    return out;
  }

  bool operator==(const Adjacency& other) const {
    return n_ == other.n_ && rows_ == other.rows_;
  }

 private:
  void set_bit(int i, int j, bool v) {
    std::uint64_t& w = rows_[static_cast<size_t>(i) * words_ + j / 64];
    std::uint64_t mask = 1ULL << (j % 64);
    if (v)
      w |= mask;
    else
      w &= ~mask;
  }

  int n_;
  int words_;
  std::vector<std::uint64_t> rows_;
};

// Ordered series of adjacency slices over a fixed node set,
// indexed t = 0..T.
struct DynamicNetwork {
  std::vector<Adjacency> slices;
  std::vector<int> node_ids;  // stable external identifiers, defaults to 0..n-1

  int n() const { return slices.empty() ? 0 : slices.front().n(); }
  int T() const { return static_cast<int>(slices.size()) - 1; }

  void validate() const {
    for (const auto& s : slices)
      if (s.n() != n()) throw std::invalid_argument("DynamicNetwork: slice size mismatch");
  }
};

// Per-node, per-time cluster labels in 1..K.
struct MembershipSeries {
  int K = 0;
  std::vector<std::vector<int>> labels;  // labels[t][i]

  int n() const { return labels.empty() ? 0 : static_cast<int>(labels.front().size()); }
  int T() const { return static_cast<int>(labels.size()) - 1; }
  int at(int t, int i) const { return labels[t][i]; }

  void validate() const {
    for (const auto& row : labels) {
      if (static_cast<int>(row.size()) != n())
        throw std::invalid_argument("MembershipSeries: ragged labels");
      for (int m : row)
        if (m < 1 || m > K) throw std::invalid_argument("MembershipSeries: label out of 1..K");
    }
  }
};

// Cluster k at the transition t-1 -> t: the remain-set with its two
// subgraph slices, plus the nodes that just joined.
struct ClusterView {
  int cluster = 0;
  std::vector<int> remain;   // nodes in k at both t-1 and t (parent indices)
  std::vector<int> joiners;  // nodes in k at t but not at t-1
  Adjacency prev_adj;        // slice t-1 restricted to remain
  Adjacency curr_adj;        // slice t restricted to remain
};

std::vector<int> degrees(const Adjacency& y);
long triangle_count(const Adjacency& y);

// Geodesic distance histogram over unordered pairs; key -1 is the
// unreachable bin. Bins sum to C(n,2).
std::map<int, long> geodesic_histogram(const Adjacency& y);

Adjacency subgraph(const Adjacency& y, const std::vector<int>& nodes);

std::vector<ClusterView> cluster_views(const DynamicNetwork& net,
                                       const MembershipSeries& m, int t);

}  // namespace thergm
