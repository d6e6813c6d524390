#pragma once
#include <map>
#include <string>
#include <vector>

#include "thergm/eval.hpp"
#include "thergm/generator.hpp"
#include "thergm/network.hpp"

namespace thergm {

// Edge-list CSV: header "time,source,target", 0-based times, undirected
// dyads de-duplicated on read. Node count inferred unless given.
void write_edges_csv(const std::string& path, const DynamicNetwork& net);
DynamicNetwork read_edges_csv(const std::string& path, int n_nodes = -1, int n_times = -1);

// Membership CSV: header "time,node,cluster", clusters in 1..K.
void write_members_csv(const std::string& path, const MembershipSeries& m);
MembershipSeries read_members_csv(const std::string& path);

// Flat key-value config: one "key = value" per line, '#' comments.
std::map<std::string, std::string> read_config(const std::string& path);

ThergmConfig config_from_kv(const std::map<std::string, std::string>& kv);

// JSON round trips for fit bundles and manifests live in the CLI; these
// helpers build the pieces shared with the library tests.
std::vector<double> parse_double_list(const std::string& csv);
std::vector<int> parse_int_list(const std::string& csv);

}  // namespace thergm
