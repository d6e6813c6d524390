#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "thergm/network.hpp"
#include "thergm/rng.hpp"

using namespace thergm;

namespace {

Adjacency path3() {
  Adjacency y(3);
  y.set(0, 1, true);
  y.set(1, 2, true);
  return y;
}

Adjacency complete(int n) {
  Adjacency y(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) y.set(i, j, true);
  return y;
}

Adjacency random_graph(int n, double p, std::uint64_t seed) {
  Rng rng = make_rng(seed, "test-graph");
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Adjacency y(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (unif(rng) < p) y.set(i, j, true);
  return y;
}

long brute_triangles(const Adjacency& y) {
  long c = 0;
  for (int i = 0; i < y.n(); ++i)
    for (int j = i + 1; j < y.n(); ++j)
      for (int k = j + 1; k < y.n(); ++k)
        if (y.has(i, j) && y.has(j, k) && y.has(i, k)) ++c;
  return c;
}

}  // namespace

TEST_CASE("degrees") {
  CHECK(degrees(Adjacency(4)) == std::vector<int>{0, 0, 0, 0});
  CHECK(degrees(complete(4)) == std::vector<int>{3, 3, 3, 3});
  CHECK(degrees(path3()) == std::vector<int>{1, 2, 1});
}

TEST_CASE("degrees sum to twice the edge count") {
  for (int rep = 0; rep < 20; ++rep) {
    Adjacency y = random_graph(17, 0.3, rep);
    int total = 0;
    for (int d : degrees(y)) total += d;
    CHECK(total == 2 * y.edge_count());
  }
}

TEST_CASE("triangle_count") {
  CHECK(triangle_count(complete(3)) == 1);
  CHECK(triangle_count(path3()) == 0);
  CHECK(triangle_count(complete(5)) == 10);
}

TEST_CASE("triangle_count matches triple enumeration") {
  for (int rep = 0; rep < 30; ++rep) {
    Adjacency y = random_graph(5 + rep % 16, 0.35, 100 + rep);
    CHECK(triangle_count(y) == brute_triangles(y));
  }
}

TEST_CASE("geodesic_histogram") {
  auto h = geodesic_histogram(path3());
  CHECK(h[1] == 2);
  CHECK(h[2] == 1);

  auto empty = geodesic_histogram(Adjacency(3));
  CHECK(empty[-1] == 3);

  auto comp = geodesic_histogram(complete(4));
  CHECK(comp[1] == 6);
}

TEST_CASE("geodesic bins sum to C(n,2)") {
  for (int rep = 0; rep < 20; ++rep) {
    int n = 4 + rep;
    Adjacency y = random_graph(n, 0.2, 200 + rep);
    long total = 0;
    for (const auto& [d, c] : geodesic_histogram(y)) total += c;
    CHECK(total == static_cast<long>(n) * (n - 1) / 2);
  }
}

TEST_CASE("subgraph") {
  Adjacency k4 = complete(4);
  Adjacency sub = subgraph(k4, {0, 1});
  CHECK(sub.n() == 2);
  CHECK(sub.has(0, 1));

  std::vector<int> all = {0, 1, 2, 3};
  CHECK(subgraph(k4, all) == k4);

  Adjacency p = path3();
  Adjacency ends = subgraph(p, {0, 2});
  CHECK(ends.edge_count() == 0);

  CHECK_THROWS_AS(subgraph(k4, {}), std::invalid_argument);
}

TEST_CASE("nested subgraph composition") {
  Adjacency y = random_graph(12, 0.4, 7);
  std::vector<int> a = {0, 2, 3, 5, 7, 8, 10};
  std::vector<int> b_in_a = {1, 2, 4, 6};  // positions within a
  std::vector<int> b;
  for (int idx : b_in_a) b.push_back(a[idx]);
  CHECK(subgraph(subgraph(y, a), b_in_a) == subgraph(y, b));
}

TEST_CASE("cluster_views") {
  DynamicNetwork net;
  net.slices = {random_graph(6, 0.5, 1), random_graph(6, 0.5, 2)};

  MembershipSeries constant;
  constant.K = 2;
  constant.labels = {{1, 1, 1, 2, 2, 2}, {1, 1, 1, 2, 2, 2}};
  auto views = cluster_views(net, constant, 1);
  REQUIRE(views.size() == 2);
  for (const auto& v : views) CHECK(v.joiners.empty());
  CHECK(views[0].remain == std::vector<int>{0, 1, 2});

  // node 4 moves cluster 1 -> 2
  MembershipSeries mover;
  mover.K = 2;
  mover.labels = {{1, 1, 1, 2, 1, 2}, {1, 1, 1, 2, 2, 2}};
  views = cluster_views(net, mover, 1);
  CHECK(views[1].joiners == std::vector<int>{4});
  CHECK(views[0].remain == std::vector<int>{0, 1, 2});

  MembershipSeries single;
  single.K = 1;
  single.labels = {{1, 1, 1, 1, 1, 1}, {1, 1, 1, 1, 1, 1}};
  views = cluster_views(net, single, 1);
  REQUIRE(views.size() == 1);
  CHECK(views[0].remain.size() == 6);

  CHECK_THROWS_AS(cluster_views(net, single, 2), std::invalid_argument);
}

TEST_CASE("cluster_views partition all nodes") {
  Rng rng = make_rng(33, "labels");
  std::uniform_int_distribution<int> lab(1, 3);
  DynamicNetwork net;
  net.slices = {random_graph(20, 0.3, 5), random_graph(20, 0.3, 6)};
  MembershipSeries m;
  m.K = 3;
  m.labels.assign(2, std::vector<int>(20));
  for (auto& row : m.labels)
    for (int& x : row) x = lab(rng);

  auto views = cluster_views(net, m, 1);
  std::set<int> seen;
  for (const auto& v : views) {
    for (int i : v.remain) CHECK(seen.insert(i).second);
    for (int i : v.joiners) CHECK(seen.insert(i).second);
  }
  CHECK(seen.size() == 20);
}

TEST_CASE("subgraph adjacency restriction of cluster views") {
  DynamicNetwork net;
  net.slices = {complete(5), complete(5)};
  MembershipSeries m;
  m.K = 2;
  m.labels = {{1, 1, 2, 2, 2}, {1, 1, 2, 2, 2}};
  auto views = cluster_views(net, m, 1);
  CHECK(views[0].prev_adj.edge_count() == 1);
  CHECK(views[1].curr_adj.edge_count() == 3);
}
