#pragma once

#include <iosfwd>
#include <string>

#include "graphcf/graph.hpp"

namespace graphcf {

// Line-delimited JSON, one record per graph per snapshot:
//   {"snapshot": t, "graph_id": "...", "num_nodes": n,
//    "edges": [[u, v, w], ...], "label": 0|1}
// Undirected edges are written once with u < v. Round-trips are lossless,
// bit-exact on weights.
TemporalDataset load_dataset(const std::string& path);
TemporalDataset load_dataset(std::istream& in, const std::string& source_name);

void save_dataset(const TemporalDataset& dataset, const std::string& path);
void save_dataset(const TemporalDataset& dataset, std::ostream& out);

} // namespace graphcf
