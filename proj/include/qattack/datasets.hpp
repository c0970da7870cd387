#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qattack/graph.hpp"
#include "qattack/partition.hpp"

namespace qattack::io {

struct LabeledNetwork {
  std::string name;
  Graph graph;
  std::optional<Partition> ground_truth;
  std::vector<std::string> labels;  // id -> original node label
};

LabeledGraph parse_edgelist(const std::string& text);
LabeledNetwork parse_gml(const std::string& text);

LabeledGraph load_edgelist(const std::filesystem::path& path);
LabeledNetwork load_gml(const std::filesystem::path& path);
// Dispatches on extension (.gml, anything else is an edge list).
LabeledNetwork load_network_file(const std::filesystem::path& path);

std::string write_edgelist(const Graph& g, const std::vector<std::string>& labels = {});
std::string write_gml(const LabeledNetwork& net);

// "node community" per line.
Partition parse_labels(const std::string& text, const std::vector<std::string>& node_labels);

struct DatasetCard {
  const char* name;
  std::size_t nodes;
  std::size_t edges;
  std::size_t communities;
  const char* sha256;  // nullptr when not bundled
};

const std::vector<DatasetCard>& dataset_cards();
const DatasetCard* find_card(const std::string& name);

// Bundled networks are checksummed; others are looked up under data_dir then
// $QATTACK_DATA_DIR as <name>.gml and checked against the card.
LabeledNetwork load_bundled(const std::string& name, const std::filesystem::path& data_dir = {});

// Name of a card or a file path.
LabeledNetwork load_network(const std::string& name_or_path, const std::filesystem::path& data_dir = {});

std::string sha256_hex(const std::string& bytes);

}  // namespace qattack::io
