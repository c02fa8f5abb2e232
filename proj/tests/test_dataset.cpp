#include <catch2/catch_amalgamated.hpp>

#include "spgat/dataset.hpp"
#include "test_util.hpp"

using namespace spgat;
using testutil::TempDir;
using testutil::read_file;
using testutil::write_file;

namespace {

void write_minimal(const std::filesystem::path& dir) {
  write_file(dir / "edges.csv", "0,1\n1,2\n");
  write_file(dir / "features.csv", "1.0,0.5\n0.25,1\n0,2\n");
  write_file(dir / "labels.csv", "0\n1\n1\n");
  write_file(dir / "split.json", R"({"train":[0],"val":[1],"test":[2]})");
}

}  // namespace

TEST_CASE("minimal fixture loads") {
  TempDir tmp;
  write_minimal(tmp.path());
  Dataset ds = load_dataset(tmp.path());
  REQUIRE(ds.graph.n == 3);
  REQUIRE(ds.graph.num_edges() == 2);
  REQUIRE(ds.features.rows() == 3);
  REQUIRE(ds.features.cols() == 2);
  REQUIRE(ds.split.num_classes == 2);
  REQUIRE(ds.split.train == std::vector<std::uint32_t>{0});
}

TEST_CASE("duplicate edges collapse to one canonical edge") {
  TempDir tmp;
  write_minimal(tmp.path());
  write_file(tmp.path() / "edges.csv", "1,2\n2,1\n");
  Dataset ds = load_dataset(tmp.path());
  REQUIRE(ds.graph.num_edges() == 1);
  REQUIRE(ds.graph.edges[0] == Edge{1, 2});
}

TEST_CASE("loader errors carry file and line") {
  TempDir tmp;
  write_minimal(tmp.path());

  SECTION("missing file") {
    std::filesystem::remove(tmp.path() / "edges.csv");
    REQUIRE_THROWS_WITH(load_dataset(tmp.path()),
                        Catch::Matchers::ContainsSubstring("edges.csv"));
  }
  SECTION("edge index out of range") {
    write_file(tmp.path() / "edges.csv", "0,1\n0,9\n");
    REQUIRE_THROWS_MATCHES(load_dataset(tmp.path()), DatasetError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("edges.csv:2")));
  }
  SECTION("ragged feature rows") {
    write_file(tmp.path() / "features.csv", "1.0,0.5\n0.25\n0,2\n");
    REQUIRE_THROWS_MATCHES(load_dataset(tmp.path()), DatasetError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("features.csv:2")));
  }
  SECTION("non-finite feature") {
    write_file(tmp.path() / "features.csv", "1.0,0.5\n0.25,inf\n0,2\n");
    REQUIRE_THROWS_AS(load_dataset(tmp.path()), DatasetError);
  }
  SECTION("non-disjoint split") {
    write_file(tmp.path() / "split.json", R"({"train":[0,1],"val":[1],"test":[2]})");
    REQUIRE_THROWS_MATCHES(load_dataset(tmp.path()), DatasetError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("disjoint")));
  }
  SECTION("bad label") {
    write_file(tmp.path() / "labels.csv", "0\n-1\n1\n");
    REQUIRE_THROWS_MATCHES(load_dataset(tmp.path()), DatasetError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("labels.csv:2")));
  }
  SECTION("label count mismatch") {
    write_file(tmp.path() / "labels.csv", "0\n1\n");
    REQUIRE_THROWS_AS(load_dataset(tmp.path()), DatasetError);
  }
  SECTION("self loop in edges") {
    write_file(tmp.path() / "edges.csv", "0,0\n");
    REQUIRE_THROWS_AS(load_dataset(tmp.path()), DatasetError);
  }
  SECTION("bad split json") {
    write_file(tmp.path() / "split.json", "{oops");
    REQUIRE_THROWS_AS(load_dataset(tmp.path()), DatasetError);
  }
  SECTION("split index out of range") {
    write_file(tmp.path() / "split.json", R"({"train":[0],"val":[1],"test":[5]})");
    REQUIRE_THROWS_AS(load_dataset(tmp.path()), DatasetError);
  }
}

TEST_CASE("save then load is byte-idempotent") {
  TempDir tmp;
  auto [g, split] = sbm_graph({10, 10}, 0.5, 0.05, 11);
  Dataset ds;
  ds.features = sbm_features(split, 4, 0.7, 1.0, 11);
  ds.graph = std::move(g);
  ds.split = std::move(split);

  const auto d1 = tmp.path() / "a";
  const auto d2 = tmp.path() / "b";
  save_dataset(ds, d1);
  Dataset loaded = load_dataset(d1);
  save_dataset(loaded, d2);
  for (const char* f : {"edges.csv", "features.csv", "labels.csv", "split.json"})
    REQUIRE(read_file(d1 / f) == read_file(d2 / f));

  REQUIRE(loaded.graph.edges == ds.graph.edges);
  REQUIRE(loaded.split.labels == ds.split.labels);
  REQUIRE(loaded.split.test == ds.split.test);
  REQUIRE(max_abs_diff(loaded.features, ds.features) == 0.0);
}
