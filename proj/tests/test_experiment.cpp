#include <catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <cgrowth/experiment.hpp>

using namespace cgrowth;

namespace {

Errc code_of(auto&& f) {
  try {
    f();
  } catch (Error const& e) {
    return e.code();
  }
  FAIL("no error raised");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("experiment with A = G gives a single row with N = 1", "[experiment]") {
  ExperimentConfig cfg;
  cfg.family = Family::PSL;
  cfg.n = 2;
  cfg.q = 5;
  cfg.sizes = {60};
  cfg.trials = 1;
  auto rows = experiment_run(cfg);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].ok);
  CHECK(rows[0].N == 1);
  CHECK(rows[0].stage_path == "0");
  CHECK(rows[0].order == 60);
}

TEST_CASE("experiment batch over PSL(2,11)", "[experiment]") {
  ExperimentConfig cfg;
  cfg.family = Family::PSL;
  cfg.n = 2;
  cfg.q = 11;
  cfg.sizes = {2, 4, 8, 16};
  cfg.trials = 10;
  cfg.seed = 1;
  auto dir = std::filesystem::temp_directory_path() / "cgrowth_exp_certs";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  cfg.cert_dir = dir.string();
  std::size_t streamed = 0;
  auto rows = experiment_run(cfg, [&](ExperimentRow const&) { ++streamed; });
  REQUIRE(rows.size() == 40);
  CHECK(streamed == 40);
  auto G = Group::make(Family::PSL, 2, 11);
  G->enumerate();
  double const lg = std::log(660.0);
  for (auto const& r : rows) {
    CHECK(r.ok);
    CHECK(r.N >= 1);
    CHECK(r.runtime_ms == 0);
    // ratios recompute from the CSV columns
    double const la = std::log(static_cast<double>(r.set_size));
    double const eps = cfg.params.epsilon;
    CHECK(std::abs(r.ratios.conjecture - r.N * la / lg) < 1e-9);
    CHECK(std::abs(r.ratios.theorem - r.N * std::pow(la / lg, 1.0 + eps)) < 1e-9);
    CHECK(std::abs(r.ratios.pyber - r.N * la / lg) < 1e-9);  // rank 1
  }
  // every stored certificate verifies independently
  for (std::size_t s : cfg.sizes)
    for (int t = 0; t < cfg.trials; ++t) {
      std::ifstream f(dir / ("cert_" + std::to_string(s) + "_" + std::to_string(t) + ".json"));
      REQUIRE(f);
      std::stringstream ss;
      ss << f.rdbuf();
      CHECK(certificate_check(Certificate::parse(ss.str()), *G).pass);
    }
  // seeds follow the row layout
  CHECK(rows[0].seed == row_seed(1, 2, 0));
  CHECK(rows[39].seed == row_seed(1, 16, 9));
  CHECK(rows[39].seed == 1'016'009);
  std::filesystem::remove_all(dir);
}

TEST_CASE("experiment reruns are byte-identical", "[experiment]") {
  ExperimentConfig cfg;
  cfg.family = Family::PSL;
  cfg.n = 3;
  cfg.q = 2;
  cfg.sizes = {3, 6};
  cfg.trials = 4;
  cfg.seed = 7;
  auto const a = csv_text(experiment_run(cfg));
  auto const b = csv_text(experiment_run(cfg));
  CHECK(a == b);
  CHECK(a.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
  cfg.seed = 8;
  CHECK(csv_text(experiment_run(cfg)) != a);
}

TEST_CASE("csv formatting", "[experiment]") {
  ExperimentRow r;
  r.family = Family::SL;
  r.n = 2;
  r.q = 5;
  r.order = 120;
  r.r = 1;
  r.set_size = 4;
  r.seed = 42;
  r.N = 3;
  r.ratios = {1.0 / 3.0, 0.25, 2.0};
  r.stage_path = "1-2";
  CHECK(csv_line(r) == "SL,2,5,120,1,4,42,3,0.333333333,0.25,2,1-2,0");
  CHECK(fmt9(1234567891.0) == "1.23456789e+09");
}

TEST_CASE("experiment config validation and parsing", "[experiment]") {
  ExperimentConfig cfg;
  cfg.sizes = {};
  CHECK(code_of([&] { cfg.validate(); }) == Errc::InvalidArgument);
  cfg.sizes = {1};
  CHECK(code_of([&] { cfg.validate(); }) == Errc::InvalidArgument);
  cfg.sizes = {2};
  cfg.trials = 0;
  CHECK(code_of([&] { cfg.validate(); }) == Errc::InvalidArgument);

  CHECK(parse_size_list("2,4,8") == std::vector<std::size_t>{2, 4, 8});
  CHECK(code_of([] { parse_size_list("2,x"); }) == Errc::InvalidArgument);
  CHECK(code_of([] { parse_size_list("2,,4"); }) == Errc::InvalidArgument);

  auto path = std::filesystem::temp_directory_path() / "cgrowth_cfg_test.conf";
  {
    std::ofstream f(path);
    f << "# batch\nfamily = psl\n  n=2\nq = 11 # field\n\nsizes = 2,4\n";
  }
  auto kv = read_config(path.string());
  CHECK(kv.size() == 4);
  CHECK(kv["family"] == "psl");
  CHECK(kv["n"] == "2");
  CHECK(kv["q"] == "11");
  CHECK(kv["sizes"] == "2,4");
  {
    std::ofstream f(path);
    f << "n 2\n";
  }
  CHECK(code_of([&] { read_config(path.string()); }) == Errc::InvalidArgument);
  std::filesystem::remove(path);
  CHECK(code_of([] { read_config("/nonexistent/cgrowth.conf"); }) == Errc::InvalidArgument);
}

TEST_CASE("stage path strings", "[experiment]") {
  PipelineReport rep;
  rep.base_size = 10;
  rep.order = 10;
  CHECK(stage_path(rep) == "0");
  rep.order = 60;
  rep.closed_at_stage = 2;
  CHECK(stage_path(rep) == "1-2");
  rep.closed_at_stage = 0;
  rep.stage6_branch = "ptc";
  rep.close_factors = 2;
  CHECK(stage_path(rep) == "1-2-3-4-5-6:ptc+close");
}
