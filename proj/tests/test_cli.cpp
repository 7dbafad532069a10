#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "galdef/cli.hpp"
#include "galdef/errors.hpp"
#include "galdef/report_io.hpp"
#include "support.hpp"

using namespace galdef;
using ff::u64;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "galdef");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fx(const std::string& name) { return (support::fixture_dir() / name).string(); }

std::filesystem::path golden_dir() { return GALDEF_GOLDEN_DIR; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ReportIo, RoundTrip) {
  const auto f = support::fixture("11.3.d.a.json");
  const auto gallery = mf::load_gallery(support::fixture_dir() / "gallery11.json");
  for (u64 ell : {5ULL, 7ULL, 13ULL, 31ULL}) {
    for (const auto& q : ob::make_queries(f, ell, {2, 23})) {
      const auto r = ob::check_conditions(q, gallery);
      const OrderedJson j = io::to_json(r);
      const auto back = io::report_from_json(j);
      EXPECT_EQ(io::to_json(back), j);
      EXPECT_EQ(back.hits, r.hits);
      EXPECT_EQ(back.verdict, r.verdict);
    }
  }
}

TEST(ReportIo, CongruenceWitnessRoundTrip) {
  std::mt19937_64 gen(2);
  ff::Rng rng(4);
  const auto f = support::fixture("11.3.d.a.json");
  const auto g = mf::ingest(support::perturbed_record(support::fixture_json("11.3.d.a.json"), "g", 7, gen));
  for (const auto& w : mf::congruent_mod(*f, g, 7, rng)) {
    const auto back = io::congruence_from_json(io::to_json(w));
    EXPECT_EQ(back, w);
    EXPECT_TRUE(mf::replay_congruence(*f, g, 7, back));
  }
}

TEST(ReportIo, MalformedReportsAreSchemaErrors) {
  OrderedJson j = io::to_json(ob::check_conditions(ob::make_queries(support::fixture("49a1.json"), 5, {})[0],
                                                   mf::load_gallery(support::fixture_dir() / "gallery49.json")));
  j["verdict"] = "maybe";
  try {
    io::report_from_json(j);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Schema);
  }
  OrderedJson w = {{"kind", "telepathy"}};
  EXPECT_THROW(io::witness_from_json(w), Error);
}

TEST(ReportIo, DescribeNamesTheArithmetic) {
  const auto r = ob::check_conditions(ob::make_queries(support::fixture("49a1.json"), 5, {})[0],
                                      mf::load_gallery(support::fixture_dir() / "gallery49.json"));
  ASSERT_EQ(r.hits.size(), 1u);
  EXPECT_NE(io::describe(r.hits[0]).find("7^4 = 2401"), std::string::npos);
  EXPECT_NE(io::render_text(r).find("possibly-obstructed"), std::string::npos);
}

TEST(Cli, CheckGoldenJson) {
  const auto r = run({"check", fx("49a1.json"), fx("gallery49.json"), "--ell", "11", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(golden_dir() / "check_49a1_ell11.json"));
}

TEST(Cli, ScanGoldenJson) {
  const auto r = run({"scan", fx("delta.json"), fx("gallery1.json"), "--ell-max", "30", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, slurp(golden_dir() / "scan_delta_30.json"));
}

TEST(Cli, SameSeedSameBytes) {
  const std::vector<std::string> args{"check", fx("11.3.d.a.json"), fx("gallery11.json"), "--ell", "7", "--format", "json", "--seed", "42"};
  EXPECT_EQ(run(args).out, run(args).out);
  const std::vector<std::string> cong{"congruences", fx("11.3.d.a.json"), fx("gallery11.json"), "--ell-max", "40", "--seed", "9"};
  EXPECT_EQ(run(cong).out, run(cong).out);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"check", fx("49a1.json"), "--ell", "11"}).code, 0);
  EXPECT_EQ(run({"check", fx("49a1.json"), "--ell", "3"}).code, 3);
  EXPECT_EQ(run({"check", fx("49a1.json"), "--ell", "7"}).code, 3);
  EXPECT_EQ(run({"check", fx("49a1.json"), "--ell", "11", "--no-assume-irreducible"}).code, 3);
  EXPECT_EQ(run({"check", fx("49a1.json"), "--ell", "9"}).code, 2);
  EXPECT_EQ(run({"check", fx("missing.json"), "--ell", "11"}).code, 2);
  EXPECT_EQ(run({"check"}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);

  const auto bad = std::filesystem::temp_directory_path() / "galdef_bad.json";
  std::ofstream(bad) << "{ \"label\": ";
  const auto r = run({"check", bad.string(), "--ell", "11"});
  EXPECT_EQ(r.code, 2);
  EXPECT_FALSE(r.err.empty());

  const auto schema = std::filesystem::temp_directory_path() / "galdef_schema.json";
  Json rec = support::fixture_json("49a1.json");
  rec["an"][4]["den"] = 0;
  std::ofstream(schema) << rec.dump();
  const auto s = run({"check", schema.string(), "--ell", "11"});
  EXPECT_EQ(s.code, 2);
  EXPECT_NE(s.err.find("an[4]"), std::string::npos) << s.err;
}

TEST(Cli, OtherCommands) {
  auto levels = run({"levels", fx("49a1.json"), "--ell", "11", "--p-max", "100", "--format", "json"});
  ASSERT_EQ(levels.code, 0) << levels.err;
  const auto lj = Json::parse(levels.out);
  ASSERT_EQ(lj["lambdas"].size(), 1u);
  EXPECT_EQ(lj["lambdas"][0]["levels"].size(), 11u);
  EXPECT_EQ(lj["lambdas"][0]["levels"][0]["level"], 49);

  auto h2 = run({"h2bound", fx("49a1.json"), "--ell", "11", "--level", "1127", "--format", "json"});
  ASSERT_EQ(h2.code, 0) << h2.err;
  EXPECT_NE(h2.out.find("\"bound\": 1"), std::string::npos) << h2.out;

  auto cong = run({"congruences", fx("11.3.d.a.json"), fx("gallery11.json"), "--ell-max", "50", "--format", "json"});
  ASSERT_EQ(cong.code, 0) << cong.err;
  const auto cj = Json::parse(cong.out);
  EXPECT_TRUE(cj["primes"].empty());
  EXPECT_EQ(cj["unresolved"], Json::array({5}));

  auto text = run({"check", fx("49a1.json"), fx("gallery49.json"), "--ell", "5"});
  EXPECT_EQ(text.code, 0);
  EXPECT_NE(text.out.find("2401"), std::string::npos);
}
