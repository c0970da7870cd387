#include "qattack/datasets.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "qattack/error.hpp"

namespace qattack::io {

namespace detail {
extern const std::pair<std::string_view, std::string_view> kEmbeddedNetworks[];
extern const std::size_t kEmbeddedNetworkCount;
}  // namespace detail

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": " + what);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- GML -----------------------------------------------------------------

struct Token {
  enum Kind { Word, String, Open, Close } kind;
  std::string text;
  std::size_t line;
};

std::vector<Token> tokenize(const std::string& text) {
  std::vector<Token> out;
  std::size_t line = 1;
  for (std::size_t i = 0; i < text.size();) {
    char c = text[i];
    if (c == '\n') {
      ++line;
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else if (c == '[' || c == ']') {
      out.push_back({c == '[' ? Token::Open : Token::Close, std::string(1, c), line});
      ++i;
    } else if (c == '"') {
      const std::size_t start_line = line;
      std::size_t j = i + 1;
      while (j < text.size() && text[j] != '"') {
        if (text[j] == '\n') ++line;
        ++j;
      }
      if (j >= text.size()) parse_fail(start_line, "unterminated string");
      out.push_back({Token::String, text.substr(i + 1, j - i - 1), start_line});
      i = j + 1;
    } else {
      std::size_t j = i;
      while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j])) && text[j] != '[' &&
             text[j] != ']' && text[j] != '"')
        ++j;
      out.push_back({Token::Word, text.substr(i, j - i), line});
      i = j;
    }
  }
  return out;
}

struct GmlNode {
  std::map<std::string, std::pair<std::string, std::size_t>> scalars;  // key -> (value, line)
  std::vector<std::pair<std::string, GmlNode>> lists;
};

GmlNode parse_list(const std::vector<Token>& toks, std::size_t& pos, bool nested) {
  GmlNode node;
  while (pos < toks.size()) {
    const Token& key = toks[pos];
    if (key.kind == Token::Close) {
      if (!nested) parse_fail(key.line, "unexpected ']'");
      ++pos;
      return node;
    }
    if (key.kind != Token::Word) parse_fail(key.line, "expected a key, found '" + key.text + "'");
    if (++pos >= toks.size()) parse_fail(key.line, "missing value for '" + key.text + "'");
    const Token& val = toks[pos];
    if (val.kind == Token::Open) {
      ++pos;
      node.lists.emplace_back(key.text, parse_list(toks, pos, true));
    } else if (val.kind == Token::Close) {
      parse_fail(val.line, "missing value for '" + key.text + "'");
    } else {
      node.scalars.emplace(key.text, std::make_pair(val.text, val.line));
      ++pos;
    }
  }
  if (nested) parse_fail(toks.empty() ? 1 : toks.back().line, "missing ']'");
  return node;
}

const std::pair<std::string, std::size_t>* scalar(const GmlNode& n, const std::string& key) {
  auto it = n.scalars.find(key);
  return it == n.scalars.end() ? nullptr : &it->second;
}

// --- checksums -----------------------------------------------------------

const std::vector<DatasetCard> kCards = {
    {"karate", 34, 78, 2, "dae83c356a50f92f28702987413e0502597d8edc77f1b9b0b92a40af13f4c8a3"},
    {"dolphins", 62, 159, 2, "ac678cbd74c71a95ea8b5b39370b028888739d7bc18af003385c40807459fbc2"},
    {"football", 115, 613, 12, "48bc58e19bf674cc9064e60fe7128f0b95a908e684fed575178f1388ac34e949"},
    {"polbooks", 105, 441, 3, nullptr},
};

void check_card(const LabeledNetwork& net, const DatasetCard& card) {
  const auto& g = net.graph;
  std::size_t h = net.ground_truth ? net.ground_truth->community_count() : 0;
  if (g.node_count() != card.nodes || g.edge_count() != card.edges || h != card.communities)
    throw Error(ErrorCode::Checksum,
                std::string(card.name) + ": expected n=" + std::to_string(card.nodes) +
                    ", m=" + std::to_string(card.edges) + ", h=" + std::to_string(card.communities) +
                    " but found n=" + std::to_string(g.node_count()) + ", m=" +
                    std::to_string(g.edge_count()) + ", h=" + std::to_string(h));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

LabeledGraph parse_edgelist(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a) || a[0] == '#') continue;
    if (!(ls >> b)) parse_fail(lineno, "expected two node labels");
    if (a == b) parse_fail(lineno, "self-loop (" + a + ", " + b + ")");
    pairs.emplace_back(std::move(a), std::move(b));  // extra columns (weights) ignored
  }
  return build_graph(pairs);
}

LabeledNetwork parse_gml(const std::string& text) {
  auto toks = tokenize(text);
  std::size_t pos = 0;
  GmlNode root = parse_list(toks, pos, false);
  const GmlNode* graph = nullptr;
  for (const auto& [k, v] : root.lists)
    if (k == "graph") {
      graph = &v;
      break;
    }
  if (!graph) parse_fail(1, "no 'graph [' block");

  LabeledNetwork net;
  std::unordered_map<std::string, NodeId> index;
  std::vector<std::string> values;
  std::size_t with_value = 0;
  std::vector<Edge> edges;
  for (const auto& [k, item] : graph->lists) {
    if (k != "node") continue;
    auto id = scalar(item, "id");
    if (!id) parse_fail(1, "node without id");
    if (!index.emplace(id->first, static_cast<NodeId>(net.labels.size())).second)
      parse_fail(id->second, "duplicate node id " + id->first);
    auto label = scalar(item, "label");
    net.labels.push_back(label ? label->first : id->first);
    auto value = scalar(item, "value");
    values.push_back(value ? value->first : std::string());
    if (value) ++with_value;
  }
  for (const auto& [k, item] : graph->lists) {
    if (k != "edge") continue;
    auto s = scalar(item, "source");
    auto t = scalar(item, "target");
    if (!s || !t) parse_fail(s ? s->second : (t ? t->second : 1), "edge needs source and target");
    auto si = index.find(s->first);
    auto ti = index.find(t->first);
    if (si == index.end()) parse_fail(s->second, "edge references unknown node " + s->first);
    if (ti == index.end()) parse_fail(t->second, "edge references unknown node " + t->first);
    if (si->second == ti->second) parse_fail(s->second, "self-loop (" + s->first + ", " + t->first + ")");
    edges.push_back(make_edge(si->second, ti->second));
  }
  net.graph = Graph(net.labels.size(), edges);
  if (with_value > 0) {
    if (with_value != values.size()) parse_fail(1, "only some nodes carry a 'value' community label");
    std::unordered_map<std::string, CommunityId> ids;
    std::vector<CommunityId> raw;
    for (const auto& v : values) raw.push_back(ids.emplace(v, static_cast<CommunityId>(ids.size())).first->second);
    net.ground_truth = Partition(std::move(raw));
  }
  return net;
}

LabeledGraph load_edgelist(const std::filesystem::path& path) { return parse_edgelist(read_file(path)); }

LabeledNetwork load_gml(const std::filesystem::path& path) {
  auto net = parse_gml(read_file(path));
  net.name = path.stem().string();
  return net;
}

LabeledNetwork load_network_file(const std::filesystem::path& path) {
  if (lower(path.extension().string()) == ".gml") return load_gml(path);
  auto lg = load_edgelist(path);
  LabeledNetwork net;
  net.name = path.stem().string();
  net.graph = std::move(lg.graph);
  net.labels = std::move(lg.labels);
  return net;
}

std::string write_edgelist(const Graph& g, const std::vector<std::string>& labels) {
  std::ostringstream out;
  auto name = [&](NodeId v) { return labels.empty() ? std::to_string(v) : labels.at(v); };
  for (auto [u, v] : g.edges()) out << name(u) << ' ' << name(v) << '\n';
  return out.str();
}

std::string write_gml(const LabeledNetwork& net) {
  std::ostringstream out;
  out << "graph [\n";
  const auto& g = net.graph;
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << "  node [\n    id " << v << '\n';
    if (!net.labels.empty()) out << "    label \"" << net.labels.at(v) << "\"\n";
    if (net.ground_truth) out << "    value " << (*net.ground_truth)[v] << '\n';
    out << "  ]\n";
  }
  for (auto [u, v] : g.edges()) out << "  edge [\n    source " << u << "\n    target " << v << "\n  ]\n";
  out << "]\n";
  return out.str();
}

Partition parse_labels(const std::string& text, const std::vector<std::string>& node_labels) {
  std::unordered_map<std::string, NodeId> index;
  for (std::size_t i = 0; i < node_labels.size(); ++i) index.emplace(node_labels[i], static_cast<NodeId>(i));
  std::unordered_map<std::string, CommunityId> comms;
  std::vector<long long> raw(node_labels.size(), -1);
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string node, comm;
    if (!(ls >> node) || node[0] == '#') continue;
    if (!(ls >> comm)) parse_fail(lineno, "expected 'node community'");
    auto it = index.find(node);
    if (it == index.end()) parse_fail(lineno, "unknown node " + node);
    if (raw[it->second] >= 0) parse_fail(lineno, "node " + node + " labelled twice");
    raw[it->second] = comms.emplace(comm, static_cast<CommunityId>(comms.size())).first->second;
  }
  std::vector<CommunityId> labels;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 0) throw Error(ErrorCode::Parse, "node " + node_labels[i] + " has no community label");
    labels.push_back(static_cast<CommunityId>(raw[i]));
  }
  return Partition(std::move(labels));
}

const std::vector<DatasetCard>& dataset_cards() { return kCards; }

const DatasetCard* find_card(const std::string& name) {
  auto n = lower(name);
  for (const auto& c : kCards)
    if (n == c.name) return &c;
  return nullptr;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::Internal, "sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

LabeledNetwork load_bundled(const std::string& name, const std::filesystem::path& data_dir) {
  const DatasetCard* card = find_card(name);
  if (!card) throw Error(ErrorCode::Config, "unknown dataset '" + name + "'");
  LabeledNetwork net;
  if (card->sha256) {
    std::string_view text;
    for (std::size_t i = 0; i < detail::kEmbeddedNetworkCount; ++i)
      if (detail::kEmbeddedNetworks[i].first == card->name) text = detail::kEmbeddedNetworks[i].second;
    const std::string bytes(text);
    if (sha256_hex(bytes) != card->sha256)
      throw Error(ErrorCode::Checksum, std::string(card->name) + ": embedded data checksum mismatch");
    net = parse_gml(bytes);
  } else {
    std::vector<std::filesystem::path> dirs;
    if (!data_dir.empty()) dirs.push_back(data_dir);
    if (const char* env = std::getenv("QATTACK_DATA_DIR"); env && *env) dirs.emplace_back(env);
    std::filesystem::path found;
    for (const auto& d : dirs)
      if (std::filesystem::exists(d / (std::string(card->name) + ".gml"))) {
        found = d / (std::string(card->name) + ".gml");
        break;
      }
    if (found.empty())
      throw Error(ErrorCode::Io, std::string(card->name) +
                                     " is not bundled; place " + card->name +
                                     ".gml in --data-dir or $QATTACK_DATA_DIR");
    net = parse_gml(read_file(found));
  }
  net.name = card->name;
  check_card(net, *card);
  return net;
}

LabeledNetwork load_network(const std::string& name_or_path, const std::filesystem::path& data_dir) {
  if (find_card(name_or_path)) return load_bundled(name_or_path, data_dir);
  if (!std::filesystem::exists(name_or_path))
    throw Error(ErrorCode::Config, "'" + name_or_path + "' is neither a bundled dataset nor a readable file");
  return load_network_file(name_or_path);
}

}  // namespace qattack::io
