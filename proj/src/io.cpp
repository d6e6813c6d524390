#include "thergm/io.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <tuple>

namespace thergm {

namespace {

std::runtime_error data_error(const std::string& path, int line, const std::string& what) {
  return std::runtime_error(path + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(item);
  return out;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

void write_edges_csv(const std::string& path, const DynamicNetwork& net) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "time,source,target\n";
  for (int t = 0; t <= net.T(); ++t) {
    const Adjacency& y = net.slices[t];
    for (int i = 0; i < y.n(); ++i)
      for (int j = i + 1; j < y.n(); ++j)
        if (y.has(i, j)) out << t << ',' << i << ',' << j << '\n';
  }
}

DynamicNetwork read_edges_csv(const std::string& path, int n_nodes, int n_times) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  int lineno = 0;
  std::getline(in, line);
  ++lineno;
  if (trim(line) != "time,source,target")
    throw data_error(path, lineno, "expected header 'time,source,target'");

  std::vector<std::tuple<int, int, int>> rows;
  int max_node = -1, max_time = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 3) throw data_error(path, lineno, "expected 3 fields");
    int t, s, g;
    try {
      t = std::stoi(trim(f[0]));
      s = std::stoi(trim(f[1]));
      g = std::stoi(trim(f[2]));
    } catch (const std::exception&) {
      throw data_error(path, lineno, "non-integer field");
    }
    if (t < 0 || s < 0 || g < 0) throw data_error(path, lineno, "negative value");
    if (s == g) throw data_error(path, lineno, "self-loop");
    rows.emplace_back(t, s, g);
    max_node = std::max({max_node, s, g});
    max_time = std::max(max_time, t);
  }
  int n = n_nodes > 0 ? n_nodes : max_node + 1;
  int T = n_times > 0 ? n_times - 1 : max_time;
  if (n <= 0) throw std::runtime_error(path + ": no edges and no node count given");

  DynamicNetwork net;
  net.slices.assign(T + 1, Adjacency(n));
  net.node_ids.resize(n);
  std::iota(net.node_ids.begin(), net.node_ids.end(), 0);
  for (const auto& [t, s, g] : rows) {
    if (s >= n || g >= n) throw std::runtime_error(path + ": node id exceeds node count");
    if (t > T) throw std::runtime_error(path + ": time exceeds time count");
    net.slices[t].set(s, g, true);  // duplicates collapse
  }
  return net;
}

void write_members_csv(const std::string& path, const MembershipSeries& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "time,node,cluster\n";
  for (int t = 0; t <= m.T(); ++t)
    for (int i = 0; i < m.n(); ++i) out << t << ',' << i << ',' << m.at(t, i) << '\n';
}

MembershipSeries read_members_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  int lineno = 0;
  std::getline(in, line);
  ++lineno;
  if (trim(line) != "time,node,cluster")
    throw data_error(path, lineno, "expected header 'time,node,cluster'");

  std::map<std::pair<int, int>, int> cells;
  int max_node = -1, max_time = -1, max_k = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    auto f = split_csv(line);
    if (f.size() != 3) throw data_error(path, lineno, "expected 3 fields");
    int t, i, k;
    try {
      t = std::stoi(trim(f[0]));
      i = std::stoi(trim(f[1]));
      k = std::stoi(trim(f[2]));
    } catch (const std::exception&) {
      throw data_error(path, lineno, "non-integer field");
    }
    if (k < 1) throw data_error(path, lineno, "cluster label below 1");
    cells[{t, i}] = k;
    max_node = std::max(max_node, i);
    max_time = std::max(max_time, t);
    max_k = std::max(max_k, k);
  }
  MembershipSeries m;
  m.K = max_k;
  m.labels.assign(max_time + 1, std::vector<int>(max_node + 1, 0));
  for (const auto& [key, k] : cells) m.labels[key.first][key.second] = k;
  for (int t = 0; t <= max_time; ++t)
    for (int i = 0; i <= max_node; ++i)
      if (m.labels[t][i] == 0)
        throw std::runtime_error(path + ": missing label for time " + std::to_string(t) +
                                 " node " + std::to_string(i));
  return m;
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    size_t eq = s.find('=');
    if (eq == std::string::npos) throw data_error(path, lineno, "expected 'key = value'");
    std::string key = trim(s.substr(0, eq));
    std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw data_error(path, lineno, "empty key");
    kv[key] = val;
  }
  return kv;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw std::runtime_error("not a number: '" + item + "'");
    }
  }
  return out;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw std::runtime_error("not an integer: '" + item + "'");
    }
  }
  return out;
}

ThergmConfig config_from_kv(const std::map<std::string, std::string>& kv) {
  ThergmConfig cfg;
  auto get = [&](const std::string& key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto* v = get("k")) cfg.K = std::stoi(*v);
  if (auto* v = get("t")) cfg.T = std::stoi(*v);
  if (auto* v = get("n_per_cluster"))
    cfg.n_per_cluster = parse_int_list(*v);
  else
    cfg.n_per_cluster.assign(cfg.K, 30);
  if (static_cast<int>(cfg.n_per_cluster.size()) == 1 && cfg.K > 1)
    cfg.n_per_cluster.assign(cfg.K, cfg.n_per_cluster[0]);
  if (auto* v = get("spec")) cfg.spec = StatisticSpec::parse(*v);
  if (auto* v = get("p_within")) cfg.p_within_init = std::stod(*v);
  if (auto* v = get("p_between")) cfg.p_between = std::stod(*v);
  if (auto* v = get("m_attach")) cfg.m_attach = std::stoi(*v);
  if (auto* v = get("gibbs_sweeps")) cfg.gibbs_sweeps = std::stoi(*v);
  if (auto* v = get("seed")) cfg.seed = std::stoull(*v);
  if (auto* v = get("b_diag")) {
    cfg.B = TransitionMatrix::diagonal(cfg.K, std::stod(*v));
  } else if (auto* vb = get("b")) {
    std::vector<double> flat = parse_double_list(*vb);
    if (static_cast<int>(flat.size()) != cfg.K * cfg.K)
      throw std::runtime_error("config key 'b': expected K*K entries");
    cfg.B.B.assign(cfg.K, std::vector<double>(cfg.K));
    for (int h = 0; h < cfg.K; ++h)
      for (int k = 0; k < cfg.K; ++k) cfg.B.B[h][k] = flat[h * cfg.K + k];
  } else {
    cfg.B = TransitionMatrix::diagonal(cfg.K, 0.9);
  }

  // theta_k keys; otherwise derive edges/stability from density and
  // dissolving rate, with an optional shared triangle effect
  bool have_theta = false;
  cfg.theta.clear();
  for (int k = 1; k <= cfg.K; ++k) {
    if (auto* v = get("theta_" + std::to_string(k))) {
      cfg.theta.push_back(parse_double_list(*v));
      have_theta = true;
    }
  }
  if (!have_theta) {
    double dissolve = 0.1;
    double density = cfg.p_within_init;
    if (auto* v = get("dissolve")) dissolve = std::stod(*v);
    auto [th_e, th_s] = stationary_edge_stability(density, dissolve);
    double th_t = 0.0;
    if (auto* v = get("theta_triangles")) th_t = std::stod(*v);
    std::vector<double> th;
    for (StatTerm term : cfg.spec.terms) {
      switch (term) {
        case StatTerm::Edges: th.push_back(th_e); break;
        case StatTerm::Triangles: th.push_back(th_t); break;
        case StatTerm::Stability: th.push_back(th_s); break;
      }
    }
    cfg.theta.assign(cfg.K, th);
  } else if (static_cast<int>(cfg.theta.size()) != cfg.K) {
    throw std::runtime_error("config: theta_k given for some but not all clusters");
  }
  return cfg;
}

}  // namespace thergm
