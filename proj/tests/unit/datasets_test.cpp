#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "expect_error.hpp"
#include "qattack/datasets.hpp"

namespace qattack::io {
namespace {

TEST(Datasets, BundledNetworksMatchTheirCards) {
  for (const char* name : {"karate", "dolphins", "football"}) {
    auto net = load_bundled(name);
    const DatasetCard* card = find_card(name);
    ASSERT_NE(card, nullptr);
    EXPECT_EQ(net.graph.node_count(), card->nodes) << name;
    EXPECT_EQ(net.graph.edge_count(), card->edges) << name;
    ASSERT_TRUE(net.ground_truth.has_value()) << name;
    EXPECT_EQ(net.ground_truth->community_count(), card->communities) << name;
    EXPECT_EQ(net.labels.size(), card->nodes);
  }
  EXPECT_EQ(load_network("KARATE").name, "karate");
}

TEST(Datasets, UnbundledNetworkNeedsADataDirectoryAndIsChecked) {
  EXPECT_QA_ERROR(load_bundled("polbooks", "/nonexistent"), ErrorCode::Io);
  EXPECT_QA_ERROR(load_bundled("nope"), ErrorCode::Config);
  const auto dir = std::filesystem::temp_directory_path() / "qattack_ds_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "polbooks.gml") << "graph [ node [ id 0 value 0 ] node [ id 1 value 1 ] edge [ source 0 target 1 ] ]";
  EXPECT_QA_ERROR(load_bundled("polbooks", dir), ErrorCode::Checksum);
  std::filesystem::remove_all(dir);
}

TEST(Datasets, Sha256KnownVector) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(EdgeList, CommentsExtraColumnsAndLineNumbers) {
  auto lg = parse_edgelist("# header\nalice bob 1.0\nbob carol\n\ncarol alice # trailing\n");
  EXPECT_EQ(lg.graph.edge_count(), 3u);
  EXPECT_EQ(lg.labels, (std::vector<std::string>{"alice", "bob", "carol"}));
  try {
    parse_edgelist("a b\nlonely\n");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::Parse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  EXPECT_QA_ERROR(parse_edgelist("a a\n"), ErrorCode::Parse);
  EXPECT_QA_ERROR(load_edgelist("/nonexistent/file.txt"), ErrorCode::Io);
}

TEST(Gml, ParsesLabelsValuesAndSkipsUnknownKeys) {
  const std::string text = R"(graph [
    directed 0
    comment "two [groups]"
    node [ id 10 label "x" value 1 graphics [ w 3 ] ]
    node [ id 20 label "y" value 1 ]
    node [ id 30 label "z" value 0 ]
    edge [ source 10 target 20 weight 2 ]
    edge [ source 20 target 30 ]
  ])";
  auto net = parse_gml(text);
  EXPECT_EQ(net.graph.node_count(), 3u);
  EXPECT_EQ(net.graph.edge_count(), 2u);
  EXPECT_EQ(net.labels, (std::vector<std::string>{"x", "y", "z"}));
  ASSERT_TRUE(net.ground_truth);
  EXPECT_EQ(*net.ground_truth, Partition({0, 0, 1}));
}

TEST(Gml, MalformedInputFailsWithParseErrors) {
  EXPECT_QA_ERROR(parse_gml("graph [ node [ id 1 ]"), ErrorCode::Parse);
  EXPECT_QA_ERROR(parse_gml("graph [ node [ id 1 ] edge [ source 1 target 2 ] ]"), ErrorCode::Parse);
  EXPECT_QA_ERROR(parse_gml("graph [ node [ label \"a\" ] ]"), ErrorCode::Parse);
  EXPECT_QA_ERROR(parse_gml("graph [ node [ id 1 value 0 ] node [ id 2 ] edge [ source 1 target 2 ] ]"),
                  ErrorCode::Parse);
}

TEST(Gml, WriteThenParseRoundTrips) {
  auto net = load_bundled("dolphins");
  auto back = parse_gml(write_gml(net));
  EXPECT_EQ(back.graph, net.graph);
  EXPECT_EQ(back.labels, net.labels);
  EXPECT_EQ(back.ground_truth, net.ground_truth);
  auto el = parse_edgelist(write_edgelist(net.graph, net.labels));
  EXPECT_EQ(el.graph.edge_count(), net.graph.edge_count());
}

TEST(Labels, ParseCommunityFile) {
  const std::vector<std::string> nodes{"a", "b", "c"};
  EXPECT_EQ(parse_labels("a red\n# c\nb blue\nc red\n", nodes), Partition({0, 1, 0}));
  EXPECT_QA_ERROR(parse_labels("a 1\nb 1\n", nodes), ErrorCode::Parse);
  EXPECT_QA_ERROR(parse_labels("a 1\nb 1\nc 1\nd 2\n", nodes), ErrorCode::Parse);
}

}  // namespace
}  // namespace qattack::io
