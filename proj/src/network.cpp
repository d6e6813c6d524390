#include "thergm/network.hpp"

#include <queue>

namespace thergm {

std::vector<int> degrees(const Adjacency& y) {
  std::vector<int> d(y.n());
  for (int i = 0; i < y.n(); ++i) d[i] = y.degree(i);
  return d;
}

long triangle_count(const Adjacency& y) {
  long total = 0;
  for (int i = 0; i < y.n(); ++i)
    for (int j = i + 1; j < y.n(); ++j)
      if (y.has(i, j)) total += y.common_neighbors(i, j);
  return total / 3;  // each triangle is seen once per edge
}

std::map<int, long> geodesic_histogram(const Adjacency& y) {
  const int n = y.n();
  std::map<int, long> hist;
  std::vector<int> dist(n);
  for (int s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), -1);
    dist[s] = 0;
    std::queue<int> q;
    q.push(s);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v = 0; v < n; ++v)
        if (v != u && y.has(u, v) && dist[v] < 0) {
          dist[v] = dist[u] + 1;
          q.push(v);
        }
    }
    for (int t = s + 1; t < n; ++t) ++hist[dist[t]];  // -1 bins unreachable
  }
  return hist;
}

Adjacency subgraph(const Adjacency& y, const std::vector<int>& nodes) {
  if (nodes.empty()) throw std::invalid_argument("subgraph: empty node set");
  const int m = static_cast<int>(nodes.size());
  Adjacency sub(m);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (y.has(nodes[a], nodes[b])) sub.set(a, b, true);
  return sub;
}

std::vector<ClusterView> cluster_views(const DynamicNetwork& net,
                                       const MembershipSeries& m, int t) {
  if (t < 1 || t > net.T()) throw std::invalid_argument("cluster_views: t out of range");
  const int n = net.n();
  std::vector<ClusterView> views;
  views.reserve(m.K);
  for (int k = 1; k <= m.K; ++k) {
    ClusterView v;
    v.cluster = k;
    for (int i = 0; i < n; ++i) {
      if (m.at(t, i) != k) continue;
      if (m.at(t - 1, i) == k)
        v.remain.push_back(i);
      else
        v.joiners.push_back(i);
    }
    if (!v.remain.empty()) {
      v.prev_adj = subgraph(net.slices[t - 1], v.remain);
      v.curr_adj = subgraph(net.slices[t], v.remain);
    }
    views.push_back(std::move(v));
  }
  return views;
}

}  // namespace thergm
