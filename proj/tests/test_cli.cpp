#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sys/wait.h>

#include <json.hpp>

#include "spgat/dataset.hpp"
#include "test_util.hpp"

using testutil::TempDir;
using testutil::read_file;
using nlohmann::json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args, const std::filesystem::path& scratch) {
  static int counter = 0;
  const auto out_file = scratch / ("out" + std::to_string(counter) + ".txt");
  const auto err_file = scratch / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd = std::string(SPGAT_CLI_PATH) + " " + args + " >" + out_file.string() +
                          " 2>" + err_file.string();
  const int status = std::system(cmd.c_str());
  CliResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  res.out = read_file(out_file);
  res.err = read_file(err_file);
  return res;
}

std::string gen_dataset(const TempDir& tmp, const std::string& name) {
  const auto dir = (tmp.path() / name).string();
  auto res = run_cli("gen-sbm --sizes 20,20 --p-in 0.4 --p-out 0.02 --seed 5 --out " + dir +
                         " --feat-dim 6 --feat-noise 0.5",
                     tmp.path());
  REQUIRE(res.exit_code == 0);
  return dir;
}

json strip_timings(json j) {
  j.erase("timings");
  return j;
}

}  // namespace

TEST_CASE("gen-sbm produces a loadable dataset") {
  TempDir tmp;
  const auto dir = gen_dataset(tmp, "data");
  spgat::Dataset ds = spgat::load_dataset(dir);
  REQUIRE(ds.graph.n == 40);
  REQUIRE(ds.features.cols() == 6);

  // regeneration with the same seed is byte-identical
  auto res = run_cli("gen-sbm --sizes 20,20 --p-in 0.4 --p-out 0.02 --seed 5 --out " +
                         (tmp.path() / "data2").string() + " --feat-dim 6 --feat-noise 0.5",
                     tmp.path());
  REQUIRE(res.exit_code == 0);
  for (const char* f : {"edges.csv", "features.csv", "labels.csv", "split.json"})
    REQUIRE(read_file(tmp.path() / "data" / f) == read_file(tmp.path() / "data2" / f));
}

TEST_CASE("train writes reports and prints the accuracy line") {
  TempDir tmp;
  const auto dir = gen_dataset(tmp, "data");
  const auto out = (tmp.path() / "runs").string();
  auto res = run_cli("train --dataset " + dir + " --out " + out +
                         " --max-epochs 60 --seed 0 --d-frac 0.1",
                     tmp.path());
  REQUIRE(res.exit_code == 0);
  REQUIRE_THAT(res.out, Catch::Matchers::StartsWith("test_acc="));
  REQUIRE(std::filesystem::exists(tmp.path() / "runs" / "data_exact_0.json"));
  REQUIRE(std::filesystem::exists(tmp.path() / "runs" / "data_exact_0_epochs.csv"));

  const json report = json::parse(read_file(tmp.path() / "runs" / "data_exact_0.json"));
  REQUIRE(report["config"]["variant"] == "exact");
  REQUIRE(report["config"]["scale"] == 1.0);
  REQUIRE(report.contains("timings"));
}

TEST_CASE("cheby variant defaults to order one and scale two") {
  TempDir tmp;
  const auto dir = gen_dataset(tmp, "data");
  const auto out = (tmp.path() / "runs").string();
  auto res = run_cli("train --dataset " + dir + " --out " + out +
                         " --variant cheby --max-epochs 30 --seed 1",
                     tmp.path());
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(read_file(tmp.path() / "runs" / "data_cheby_1.json"));
  REQUIRE(report["config"]["cheby_order"] == 1);
  REQUIRE(report["config"]["scale"] == 2.0);

  // explicit --s wins over the variant default
  auto res2 = run_cli("train --dataset " + dir + " --out " + out +
                          " --variant cheby --s 0.5 --max-epochs 30 --seed 2",
                      tmp.path());
  REQUIRE(res2.exit_code == 0);
  const json report2 = json::parse(read_file(tmp.path() / "runs" / "data_cheby_2.json"));
  REQUIRE(report2["config"]["scale"] == 0.5);
}

TEST_CASE("missing dataset and invalid config exit with code one") {
  TempDir tmp;
  auto res = run_cli("train --dataset " + (tmp.path() / "nope").string(), tmp.path());
  REQUIRE(res.exit_code == 1);
  REQUIRE(res.out.empty());

  const auto dir = gen_dataset(tmp, "data");
  auto res2 = run_cli("train --dataset " + dir + " --d-frac 1.5", tmp.path());
  REQUIRE(res2.exit_code == 1);

  auto res3 = run_cli("train --dataset " + dir + " --agg sum", tmp.path());
  REQUIRE(res3.exit_code == 1);
}

TEST_CASE("unknown flags are rejected and help lists the documented ones") {
  TempDir tmp;
  auto res = run_cli("train --does-not-exist 1", tmp.path());
  REQUIRE(res.exit_code == 1);

  auto help = run_cli("train --help", tmp.path());
  REQUIRE(help.exit_code == 0);
  for (const char* flag :
       {"--dataset", "--out", "--variant", "--hidden", "--s", "--t", "--cheby-order",
        "--d-frac", "--agg", "--dropout", "--weight-decay", "--lr", "--seed", "--seeds",
        "--jobs", "--max-epochs", "--patience", "--row-normalize", "--lambda-max", "--config",
        "--save-model", "--emit-embeddings", "--l2-all-layers"})
    REQUIRE_THAT(help.out, Catch::Matchers::ContainsSubstring(flag));

  auto top = run_cli("--help", tmp.path());
  REQUIRE(top.exit_code == 0);
  for (const char* sub : {"train", "gen-sbm", "sweep-d", "bench", "attention", "knockout",
                          "demo-barbell", "wavelets"})
    REQUIRE_THAT(top.out, Catch::Matchers::ContainsSubstring(sub));
}

TEST_CASE("fixed seeds give byte-identical non-timing artifacts") {
  TempDir tmp;
  const auto dir = gen_dataset(tmp, "data");
  for (const char* out : {"runs_a", "runs_b"}) {
    auto res = run_cli("train --dataset " + dir + " --out " + (tmp.path() / out).string() +
                           " --max-epochs 50 --seed 3",
                       tmp.path());
    REQUIRE(res.exit_code == 0);
  }
  const json a = json::parse(read_file(tmp.path() / "runs_a" / "data_exact_3.json"));
  const json b = json::parse(read_file(tmp.path() / "runs_b" / "data_exact_3.json"));
  REQUIRE(strip_timings(a).dump() == strip_timings(b).dump());
  REQUIRE(read_file(tmp.path() / "runs_a" / "data_exact_3_epochs.csv") ==
          read_file(tmp.path() / "runs_b" / "data_exact_3_epochs.csv"));
}

TEST_CASE("config file supplies defaults and flags win") {
  TempDir tmp;
  const auto dir = gen_dataset(tmp, "data");
  testutil::write_file(tmp.path() / "cfg.json",
                       R"({"max-epochs": 25, "seed": 9, "d-frac": 0.2})");
  const auto out = (tmp.path() / "runs").string();
  auto res = run_cli("train --dataset " + dir + " --out " + out + " --config " +
                         (tmp.path() / "cfg.json").string() + " --seed 4",
                     tmp.path());
  REQUIRE(res.exit_code == 0);
  const json report = json::parse(read_file(tmp.path() / "runs" / "data_exact_4.json"));
  REQUIRE(report["config"]["max_epochs"] == 25);   // from config file
  REQUIRE(report["config"]["d_fraction"] == 0.2);  // from config file
  REQUIRE(report["config"]["seed"] == 4);          // flag wins
}

TEST_CASE("demo-barbell emits the per-edge band table") {
  TempDir tmp;
  auto res = run_cli("demo-barbell --k 5 --d 3 --out " + (tmp.path() / "demo").string(),
                     tmp.path());
  REQUIRE(res.exit_code == 0);
  REQUIRE_THAT(res.out, Catch::Matchers::ContainsSubstring("low_intra="));
  const std::string csv = read_file(tmp.path() / "demo" / "barbell_bands.csv");
  REQUIRE_THAT(csv, Catch::Matchers::StartsWith("i,j,low_weight,high_weight,is_bridge\n"));
  // 21 edges + header
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 22);
}

TEST_CASE("bench prints the timing line") {
  TempDir tmp;
  const auto dir = gen_dataset(tmp, "data");
  auto res = run_cli("bench --dataset " + dir + " --runs 1 --out " +
                         (tmp.path() / "runs").string(),
                     tmp.path());
  REQUIRE(res.exit_code == 0);
  REQUIRE_THAT(res.out, Catch::Matchers::ContainsSubstring("eigen_s="));
  REQUIRE_THAT(res.out, Catch::Matchers::ContainsSubstring("cheby_s="));
  REQUIRE_THAT(res.out, Catch::Matchers::ContainsSubstring("speedup="));
}

TEST_CASE("attention and knockout commands emit their summaries") {
  TempDir tmp;
  const auto dir = gen_dataset(tmp, "data");
  const auto out = (tmp.path() / "runs").string();
  auto att = run_cli("attention --dataset " + dir + " --out " + out +
                         " --max-epochs 40 --seed 0 --d-frac 0.1",
                     tmp.path());
  REQUIRE(att.exit_code == 0);
  REQUIRE_THAT(att.out, Catch::Matchers::ContainsSubstring("alpha1_low="));
  REQUIRE(std::filesystem::exists(tmp.path() / "runs" / "data_attention.csv"));

  auto ko = run_cli("knockout --dataset " + dir + " --out " + out +
                        " --max-epochs 40 --seeds 0,1 --d-frac 0.1",
                    tmp.path());
  REQUIRE(ko.exit_code == 0);
  REQUIRE_THAT(ko.out, Catch::Matchers::ContainsSubstring("acc_full="));
  REQUIRE_THAT(ko.out, Catch::Matchers::ContainsSubstring("acc_low_only="));
}

TEST_CASE("wavelets command caches the operator pair") {
  TempDir tmp;
  const auto dir = gen_dataset(tmp, "data");
  const auto cache = (tmp.path() / "cache").string();
  auto res = run_cli("wavelets --dataset " + dir + " --cache-dir " + cache, tmp.path());
  REQUIRE(res.exit_code == 0);
  REQUIRE_THAT(res.out, Catch::Matchers::ContainsSubstring("cache_key="));
  std::size_t containers = 0;
  for (const auto& entry : std::filesystem::directory_iterator(cache))
    if (entry.path().extension() == ".spwv") ++containers;
  REQUIRE(containers == 2);

  auto again = run_cli("wavelets --dataset " + dir + " --cache-dir " + cache, tmp.path());
  REQUIRE(again.out == res.out);
}

TEST_CASE("sweep-d writes the csv and reports the best fraction") {
  TempDir tmp;
  const auto dir = gen_dataset(tmp, "data");
  auto res = run_cli("sweep-d --dataset " + dir + " --fractions 0.1,0.5 --seeds 0,1 --jobs 2" +
                         " --max-epochs 30 --out " + (tmp.path() / "runs").string(),
                     tmp.path());
  REQUIRE(res.exit_code == 0);
  REQUIRE_THAT(res.out, Catch::Matchers::ContainsSubstring("best_fraction="));
  const std::string csv = read_file(tmp.path() / "runs" / "data_sweep_d.csv");
  REQUIRE_THAT(csv, Catch::Matchers::StartsWith("fraction,d,mean_acc,std_acc,num_seeds\n"));
  REQUIRE(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("train can emit embeddings and a checkpoint") {
  TempDir tmp;
  const auto dir = gen_dataset(tmp, "data");
  const auto ckpt = (tmp.path() / "ckpt").string();
  const auto emb = (tmp.path() / "emb.csv").string();
  auto res = run_cli("train --dataset " + dir + " --out " + (tmp.path() / "runs").string() +
                         " --max-epochs 30 --seed 0 --save-model " + ckpt +
                         " --emit-embeddings " + emb,
                     tmp.path());
  REQUIRE(res.exit_code == 0);
  REQUIRE(std::filesystem::exists(ckpt + "/checkpoint.json"));
  REQUIRE(std::filesystem::exists(ckpt + "/w1.spwv"));
  const std::string embeddings = read_file(emb);
  REQUIRE(std::count(embeddings.begin(), embeddings.end(), '\n') == 40);  // n rows
}
