// cgrowth: command-line front end.
//
// Exit codes: 0 success, 1 a check or verification failed, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <cgrowth/classes.hpp>
#include <cgrowth/covercut.hpp>
#include <cgrowth/experiment.hpp>
#include <cgrowth/group.hpp>
#include <cgrowth/growth.hpp>
#include <cgrowth/jordan.hpp>
#include <cgrowth/pipeline.hpp>

using namespace cgrowth;
using json = nlohmann::json;

namespace {

struct Global {
  std::string family = "psl";
  int n = 2;
  std::uint64_t q = 7;
  std::uint64_t seed = 1;
  std::uint64_t cap = kDefaultGroupCap;
  std::string out;
};

void emit(Global const& g, std::string const& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out);
  if (!f) fail(Errc::InvalidArgument, "cannot write " + g.out);
  f << text;
}

GroupPtr build(Global const& g, bool enumerate = true) {
  auto G = Group::make(parse_family(g.family), g.n, g.q, g.cap);
  if (enumerate) G->enumerate();
  return G;
}

ElemSet draw(Group const& G, std::size_t m, std::uint64_t seed) { return random_subset(G, m, seed); }

ClassRef pick_class(ClassTable const& T, std::optional<std::size_t> index, std::optional<std::size_t> size) {
  if (index) {
    if (*index >= T.count()) fail(Errc::InvalidArgument, "class index out of range");
    return *index;
  }
  if (size) {
    for (ClassRef c = 0; c < T.count(); ++c)
      if (T[c].size() == *size) return c;
    fail(Errc::InvalidArgument, "no class of size " + std::to_string(*size));
  }
  return T.count() - 1;  // the largest class
}

bool usage_error(Errc c) {
  switch (c) {
    case Errc::InvalidArgument:
    case Errc::NonPrime:
    case Errc::UnsupportedFamily:
    case Errc::SizeOutOfRange:
    case Errc::CapExceeded:
      return true;
    default:
      return false;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Products of conjugates in finite groups of Lie type"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--family", g.family, "sl or psl")->check(CLI::IsMember({"sl", "psl", "SL", "PSL"}));
  app.add_option("--n", g.n, "matrix dimension");
  app.add_option("--q", g.q, "field order");
  app.add_option("--seed", g.seed, "random seed");
  app.add_option("--cap", g.cap, "largest group order allowed");
  app.add_option("--out", g.out, "output file (stdout when omitted)");

  int rc = 0;

  // group
  auto* group_cmd = app.add_subcommand("group", "order, rank and generators");
  bool list = false;
  group_cmd->add_flag("--list", list, "list every element");
  group_cmd->callback([&] {
    auto G = build(g);
    json j = {{"group", G->name()}, {"order", G->order()}, {"rank", G->rank()}, {"q", G->q()}};
    json gens = json::array();
    for (auto const& m : G->generators()) gens.push_back(G->encode(m));
    j["generators"] = gens;
    if (list) {
      json el = json::array();
      for (Group::Elem x = 0; x < G->order(); ++x) el.push_back(G->encode(G->matrix(x)));
      j["elements"] = el;
    }
    emit(g, j.dump(2) + "\n");
  });

  // classes
  auto* classes_cmd = app.add_subcommand("classes", "conjugacy classes and the rank bounds");
  classes_cmd->callback([&] {
    auto G = build(g);
    auto T = classes_enumerate(*G);
    auto rep = verify_lie_bounds(*G, T);
    json cls = json::array();
    for (ClassRef c = 0; c < T.count(); ++c)
      cls.push_back({{"index", c}, {"size", T[c].size()}, {"rep", G->encode(G->matrix(T[c].rep))},
                     {"order", G->element_order(T[c].rep)}});
    json checks = json::array();
    for (auto const& ch : rep.checks)
      checks.push_back({{"name", ch.name}, {"measured", ch.measured}, {"bound", ch.bound}, {"pass", ch.pass}});
    json j = {{"group", G->name()}, {"order", G->order()}, {"class_count", T.count()},
              {"classes", cls},     {"bounds", checks},      {"pass", rep.pass()}};
    emit(g, j.dump(2) + "\n");
    if (!rep.pass()) rc = 1;
  });

  // cover
  auto* cover_cmd = app.add_subcommand("cover", "cover a class by conjugates of a random subset");
  std::optional<std::size_t> class_index, class_size_opt;
  std::size_t subset_size = 4;
  std::string method = "greedy";
  cover_cmd->add_option("--class-index", class_index, "class by table index");
  cover_cmd->add_option("--class-size", class_size_opt, "first class of this size");
  cover_cmd->add_option("--subset-size", subset_size, "|S|")->required();
  cover_cmd->add_option("--method", method, "greedy or random")->check(CLI::IsMember({"greedy", "random"}));
  cover_cmd->callback([&] {
    auto G = build(g);
    auto T = classes_enumerate(*G);
    ClassRef const C = pick_class(T, class_index, class_size_opt);
    auto S = random_subset_of(T[C].members, subset_size, g.seed);
    auto r = method == "greedy" ? greedy_cover(S, T, C) : randomized_cover(S, T, C, g.seed);
    json H = json::array();
    for (auto h : r.conjugators) H.push_back(G->encode(G->matrix(h)));
    json j = {{"group", G->name()},
              {"class_size", r.class_size},
              {"subset_size", r.subset_size},
              {"method", method},
              {"H_size", r.size()},
              {"bound_proof_internal", r.bound_proof_internal},
              {"bound_published", r.bound_published},
              {"within_proof_bound", r.within_proof_bound()},
              {"within_published_bound", r.within_published_bound()},
              {"covers", r.covers},
              {"conjugators", H}};
    if (method == "random") {
      j["planned_draws"] = r.planned_draws;
      j["extra_draws"] = r.extra_draws;
    }
    emit(g, j.dump(2) + "\n");
    if (!r.covers || (method == "greedy" && !r.within_proof_bound())) rc = 1;
  });

  // cutsmall
  auto* cut_cmd = app.add_subcommand("cutsmall", "subset U of S with U^-1 U avoiding the small classes");
  std::size_t cut_size = 16;
  double threshold = 30;
  cut_cmd->add_option("--subset-size", cut_size, "|S|");
  cut_cmd->add_option("--threshold", threshold, "classes below this size form T");
  cut_cmd->callback([&] {
    auto G = build(g);
    auto T = classes_enumerate(*G);
    auto S = draw(*G, cut_size, g.seed);
    auto small = small_class_union(T, threshold);
    auto U = cut_small(S, small, CutPolicy::least_canonical(), true);
    bool const size_ok = U.size() * (small.size() + 1) >= S.size();
    bool const avoids = inverse_square_avoids(U, small);
    json j = {{"group", G->name()}, {"S", S.size()},          {"T", small.size()},
              {"U", U.size()},      {"size_bound", size_ok}, {"avoids_T", avoids}};
    emit(g, j.dump(2) + "\n");
    if (!size_ok || !avoids) rc = 1;
  });

  // pipeline
  auto* pipe_cmd = app.add_subcommand("pipeline", "write G as a product of conjugates of a random set");
  std::size_t set_size = 4;
  GrowthParams params;
  std::string report_path;
  pipe_cmd->add_option("--set-size", set_size, "|A|");
  pipe_cmd->add_option("--epsilon", params.epsilon, "epsilon in (0, 1/2]");
  pipe_cmd->add_option("--delta", params.delta, "class fraction exponent");
  pipe_cmd->add_option("--tau", params.tau, "growth exponent target");
  pipe_cmd->add_option("--b", params.b, "conjugate budget for the fallback");
  pipe_cmd->add_option("--report", report_path, "write the stage report as JSON");
  pipe_cmd->callback([&] {
    auto G = build(g);
    auto A = draw(*G, set_size, g.seed);
    auto res = pipeline_run(A, params, g.seed);
    auto v = certificate_check(res.certificate, *G);
    emit(g, res.certificate.dump());
    if (!report_path.empty()) {
      std::ofstream f(report_path);
      f << res.report.to_json().dump(2) << "\n";
    }
    std::fprintf(stderr, "%s |A|=%zu N=%zu path=%s verify=%s\n", G->name().c_str(), A.size(), res.report.N,
                 stage_path(res.report).c_str(), v.pass ? "PASS" : "FAIL");
    if (!v.pass) rc = 1;
  });

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check a certificate by exact expansion");
  std::string cert_path;
  verify_cmd->add_option("--cert", cert_path, "certificate JSON")->required();
  verify_cmd->callback([&] {
    std::ifstream f(cert_path);
    if (!f) fail(Errc::InvalidArgument, "cannot read " + cert_path);
    std::stringstream ss;
    ss << f.rdbuf();
    VerifyReport r;
    try {
      r = certificate_check(Certificate::parse(ss.str()), g.cap);
    } catch (Error const& e) {
      if (e.code() != Errc::BadEncoding && e.code() != Errc::UnsupportedFamily) throw;
      r.error = Errc::BadEncoding;
      r.message = e.what();
    }
    emit(g, r.to_json().dump(2) + "\n");
    std::fprintf(stderr, "%s\n", r.pass ? "PASS" : ("FAIL " + r.message).c_str());
    if (!r.pass) rc = 1;
  });

  // jordan
  auto* jordan_cmd = app.add_subcommand("jordan", "Jordan type, centralizer formulas and degree check");
  std::string matrix_text, row = "sl";
  std::vector<std::uint64_t> degree_qs;
  jordan_cmd->add_option("--matrix", matrix_text, "matrix, rows separated by ';'")->required();
  jordan_cmd->add_option("--row", row, "sl, sp or so")->check(CLI::IsMember({"sl", "su", "sp", "so"}));
  jordan_cmd->add_option("--degree-check", degree_qs, "two field orders q1 q2")->expected(2);
  jordan_cmd->callback([&] {
    auto G = Group::make(Family::SL, g.n, g.q, g.cap);
    Matrix const x = G->ops().decode(matrix_text);
    auto jt = jordan_type(*G, x);
    json blocks = json::array();
    for (auto const& [key, c] : jt.entries)
      blocks.push_back({{"lambda", jt.field->encode(key.first)}, {"size", key.second}, {"count", c}});
    json j = {{"n", jt.n}, {"field", jt.field->q()}, {"blocks", blocks}, {"type", jt.to_string()}};
    j["special"] = jt.special ? json(jt.field->encode(*jt.special)) : json(nullptr);
    try {
      auto p = centralizer_params(jt, parse_row(row));
      j["row"] = row_name(p.row);
      j["R"] = p.R;
      j["S"] = p.S;
      j["m"] = p.m;
      j["dimG"] = p.dimG;
    } catch (Error const& e) {
      if (e.code() != Errc::ParityViolation) throw;
      j["row_error"] = e.what();
      rc = 1;
    }
    if (!degree_qs.empty()) {
      if (jt.field->q() != g.q || !G->field()->is_prime_field())
        fail(Errc::TypeUnavailable, "degree check needs eigenvalues in a prime field");
      std::vector<PrimeBlock> pb;
      for (auto const& [key, c] : jt.entries)
        for (int i = 0; i < c; ++i) pb.push_back({static_cast<long>(key.first), key.second});
      auto d = centralizer_degree_check(pb, degree_qs[0], degree_qs[1], 1.0, g.cap);
      j["degree_check"] = {{"q1", d.q1},
                           {"q2", d.q2},
                           {"centralizer1", d.centralizer1},
                           {"centralizer2", d.centralizer2},
                           {"degree", d.degree},
                           {"m", d.m},
                           {"tolerance", d.tolerance},
                           {"pass", d.pass}};
      if (!d.pass) rc = 1;
    }
    emit(g, j.dump(2) + "\n");
  });

  // experiment
  auto* exp_cmd = app.add_subcommand("experiment", "batch of pipeline runs written as CSV");
  ExperimentConfig cfg;
  std::string sizes_text, config_path;
  auto* o_sizes = exp_cmd->add_option("--sizes", sizes_text, "comma-separated set sizes");
  auto* o_trials = exp_cmd->add_option("--trials", cfg.trials, "trials per size");
  auto* o_eps = exp_cmd->add_option("--epsilon", cfg.params.epsilon, "epsilon");
  auto* o_cert = exp_cmd->add_option("--cert-dir", cfg.cert_dir, "directory for per-row certificates");
  auto* o_timing = exp_cmd->add_flag("--timing", cfg.timing, "record wall-clock runtime_ms");
  exp_cmd->add_option("--config", config_path, "flat key = value file; flags override it");
  exp_cmd->callback([&] {
    if (!config_path.empty()) {
      auto kv = read_config(config_path);
      auto given = [&](std::string const& flag) { return app.get_option(flag)->count() > 0; };
      for (auto const& [k, v] : kv) {
        try {
          if (k == "family" && !given("--family")) g.family = v;
          else if (k == "n" && !given("--n")) g.n = std::stoi(v);
          else if (k == "q" && !given("--q")) g.q = std::stoull(v);
          else if (k == "seed" && !given("--seed")) g.seed = std::stoull(v);
          else if (k == "cap" && !given("--cap")) g.cap = std::stoull(v);
          else if (k == "out" && !given("--out")) g.out = v;
          else if (k == "sizes" && o_sizes->count() == 0) sizes_text = v;
          else if (k == "trials" && o_trials->count() == 0) cfg.trials = std::stoi(v);
          else if (k == "epsilon" && o_eps->count() == 0) cfg.params.epsilon = std::stod(v);
          else if (k == "cert-dir" && o_cert->count() == 0) cfg.cert_dir = v;
          else if (k == "timing" && o_timing->count() == 0) cfg.timing = v == "true" || v == "1";
          else if (k == "delta") cfg.params.delta = std::stod(v);
          else if (k == "tau") cfg.params.tau = std::stod(v);
          else if (k == "b") cfg.params.b = std::stoi(v);
          else if (k != "family" && k != "n" && k != "q" && k != "seed" && k != "cap" && k != "out" && k != "sizes" &&
                   k != "trials" && k != "epsilon" && k != "cert-dir" && k != "timing")
            fail(Errc::InvalidArgument, "unknown config key '" + k + "'");
        } catch (std::logic_error const&) {
          fail(Errc::InvalidArgument, "bad value for config key '" + k + "'");
        }
      }
    }
    cfg.family = parse_family(g.family);
    cfg.n = g.n;
    cfg.q = g.q;
    cfg.seed = g.seed;
    cfg.cap = g.cap;
    if (!sizes_text.empty()) cfg.sizes = parse_size_list(sizes_text);
    auto rows = experiment_run(cfg);
    emit(g, csv_text(rows));
    auto s = summarize(rows);
    std::fprintf(stderr, "rows=%zu failures=%zu max_N=%zu mean_conjecture_ratio=%s\n", s.rows, s.failures, s.max_N,
                 fmt9(s.mean_conjecture).c_str());
    if (s.failures) rc = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return 2;
  } catch (Error const& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return usage_error(e.code()) ? 2 : 1;
  }
  return rc;
}
