#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <dyadic/io.hpp>

#include "cli.hpp"
#include "oracles.hpp"

using namespace dyadic;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "dyadic-density");
  std::vector<const char*> argv;
  for (const auto& a : args)
    argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out;
  std::ostringstream err;
  const int code =
      cli::run_cli(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto p = std::filesystem::temp_directory_path() / ("dyadic-test-" + name);
  std::ofstream(p) << text;
  return p;
}

} // namespace

TEST(ReadNumbers, SeparatorsAndErrors) {
  std::istringstream ok("0.5, 1e-3\n-2\t+3\r\n\n4,,5");
  EXPECT_EQ(read_numbers(ok), (std::vector<double>{0.5, 1e-3, -2, 3, 4, 5}));
  std::istringstream bad("1\n2\n0,5;\n");
  try {
    read_numbers(bad);
    FAIL() << "expected a parse error";
  } catch (const parse_error& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  for (const char* token : {"nan?", "1.2.3", "0x10", "", "--1"})
    EXPECT_FALSE(parse_number(token)) << token;
  EXPECT_EQ(parse_number("1e5"), 1e5);
}

TEST(StepDensityFormats, JsonAndCsvRoundTrip) {
  std::mt19937_64 rng(40);
  for (int t = 0; t < 100; ++t) {
    const auto f = step_cast<double>(oracle::random_step_density(rng));
    EXPECT_EQ(step_density_from_json(nlohmann::json::parse(to_json(f).dump())), f);
    std::istringstream csv(to_csv(f));
    EXPECT_EQ(step_density_from_csv(csv), f);
  }
  const StepDensity<double> zero;
  EXPECT_EQ(to_json(zero).dump(), R"({"breakpoints":[],"format_version":1,"heights":[]})");
  std::istringstream empty(to_csv(zero));
  EXPECT_EQ(step_density_from_csv(empty), zero);
  EXPECT_THROW(step_density_from_json(nlohmann::json::parse(R"({"breakpoints":[0]})")),
               parse_error);
  EXPECT_THROW(step_density_from_json(nlohmann::json::parse(
                   R"({"format_version":2,"breakpoints":[0,1],"heights":[1]})")),
               parse_error);
}

TEST(ParseBudget, Forms) {
  EXPECT_EQ(parse_budget("const:3")(7), 3.0);
  EXPECT_EQ(parse_budget("linear:1,0.5")(3), 2.5);
  EXPECT_EQ(parse_budget("exp:2,3")(3), 18.0);
  const auto table = temp_file("table.txt", "1\n2, 4\n");
  const auto b = parse_budget("table:" + table.string());
  EXPECT_EQ(b(1), 1.0);
  EXPECT_EQ(b(3), 4.0);
  EXPECT_EQ(b(10), 4.0);
  EXPECT_THROW(parse_budget("const:-1"), contract_error);
  EXPECT_ANY_THROW(parse_budget("quadratic:1"));
  EXPECT_ANY_THROW(parse_budget("table:/nonexistent/budget"));
}

TEST(EstimateCommand, SingleSample) {
  const auto r = run({"estimate", "--alpha", "const:1000", "--depth", "2"}, "0.25\n");
  EXPECT_EQ(r.code, 0);
  const auto f = step_density_from_json(nlohmann::json::parse(r.out));
  EXPECT_EQ(f, StepDensity<double>({0.25, 0.5}, {4}));
  EXPECT_NE(r.err.find("k_n = 2"), std::string::npos);
}

TEST(EstimateCommand, OddSixteenthsSelectLevelThree) {
  std::string input;
  for (int j = 1; j < 16; j += 2)
    input += std::to_string(j / 16.0) + "\n";
  const auto r = run({"estimate", "--alpha", "const:3", "--depth", "4"}, input);
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.err.find("k_n = 3"), std::string::npos);
  // output matches the in-memory estimate exactly
  SampleBuffer b;
  for (int j = 1; j < 16; j += 2)
    b.append(std::stod(std::to_string(j / 16.0)));
  const auto expect =
      estimate(b, EstimatorConfig(VariationBudget::constant(3), DepthSchedule::fixed(4)));
  EXPECT_EQ(step_density_from_json(nlohmann::json::parse(r.out)), expect.density);
}

TEST(EstimateCommand, ExitCodes) {
  EXPECT_EQ(run({"estimate", "--alpha", "const:3"}, "").code, cli::empty_input);
  EXPECT_EQ(run({"estimate", "--alpha", "const:3"}, " \n,\n").code, cli::empty_input);

  const auto zero = run({"estimate", "--alpha", "const:0.1", "--depth", "2"},
                        "0.25\n0.25\n0.25\n");
  EXPECT_EQ(zero.code, cli::zero_estimate);
  EXPECT_TRUE(step_density_from_json(nlohmann::json::parse(zero.out)).is_zero());

  const auto bad = run({"estimate", "--alpha", "const:3"}, "0.1\n0.2\nabc\n");
  EXPECT_EQ(bad.code, cli::bad_number);
  EXPECT_NE(bad.err.find("line 3"), std::string::npos);

  const auto far = run({"estimate", "--alpha", "const:3"}, "0.1\n3e7\n");
  EXPECT_EQ(far.code, cli::out_of_range);
  EXPECT_NE(far.err.find("30000000"), std::string::npos);

  EXPECT_EQ(run({"estimate"}, "0.1\n").code, cli::usage);
  EXPECT_EQ(run({"estimate", "--alpha", "const:3", "--format", "xml"}, "0.1\n").code, cli::usage);
  EXPECT_EQ(run({}).code, cli::usage);
  EXPECT_EQ(run({"estimate", "--alpha", "const:3", "/nonexistent/samples"}).code, cli::failure);
}

TEST(EstimateCommand, CsvOutputAndFileInput) {
  const auto path = temp_file("samples.txt", "0.1,0.2\n0.6\n0.9\n");
  const auto r = run({"estimate", path.string(), "--alpha", "const:1000", "--depth", "1",
                      "--format", "csv"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "left,height\n0,1\n1,0\n");
}

TEST(EstimateCommand, ConfigFileIsOverriddenByFlags) {
  const auto cfg = temp_file("estimate.ini", "alpha=\"const:1000\"\ndepth=\"2\"\n");
  const auto from_file = run({"estimate", "--config", cfg.string()}, "0.25\n");
  EXPECT_EQ(from_file.code, 0);
  EXPECT_NE(from_file.err.find("b_n = 2"), std::string::npos);
  const auto overridden = run({"estimate", "--config", cfg.string(), "--depth", "1"}, "0.25\n");
  EXPECT_EQ(overridden.code, 0);
  EXPECT_NE(overridden.err.find("b_n = 1"), std::string::npos);

  const auto unknown = temp_file("unknown.ini", "# comment\nbandwidth = 3\n");
  EXPECT_EQ(run({"estimate", "--alpha", "const:3", "--config", unknown.string()}, "0.2\n").code,
            cli::usage);
  EXPECT_EQ(run({"estimate", "--config", "/nonexistent/cfg.ini"}, "0.2\n").code, cli::usage);
}

TEST(SimulateCommand, Examples) {
  const auto vdc = run({"simulate", "--source", "vdc", "--n", "1000,10000"});
  EXPECT_EQ(vdc.code, 0);
  std::istringstream lines(vdc.out);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(lines, line))
    rows.push_back(line);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "n,k_n,l1_error,discrepancy,tail_bound");
  EXPECT_EQ(rows[1].rfind("1000,", 0), 0u);

  EXPECT_EQ(run({"simulate", "--source", "uniform", "--n", "100"}).code, cli::usage);
  EXPECT_EQ(run({"simulate", "--source", "uniform", "--n", "100", "--seed", "1", "--seed", "2"})
                .code,
            cli::usage);
  EXPECT_EQ(run({"simulate", "--source", "bogus", "--n", "100"}).code, cli::usage);
  EXPECT_EQ(run({"simulate", "--source", "vdc", "--n", "100,10"}).code, cli::usage);
}

TEST(SimulateCommand, JsonCarriesConfig) {
  const auto r = run({"simulate", "--source", "ar1:0.5,1.0", "--seed", "11", "--n", "500",
                      "--alpha", "const:1", "--format", "json"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("format_version"), 1);
  EXPECT_EQ(j.at("rows").size(), 1u);
  EXPECT_EQ(j.at("config").at("seed"), 11);
}

TEST(SimulateCommand, RepeatedRunsAreByteIdentical) {
  const std::vector<std::string> args{"simulate", "--source", "normal", "--seed", "7", "--n",
                                      "1000,20000", "--alpha", "const:1", "--format", "json"};
  const auto a = run(args);
  const auto b = run(args);
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(AdversaryCommand, Examples) {
  const auto r = run({"adversary", "--scheme", "phi-star:const:256", "--levels", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("status"), "complete");
  for (const auto& o : j.at("oscillations"))
    EXPECT_GE(o.get<double>(), 0.5);
  EXPECT_EQ(j.at("certificates").size(), 4u);
  EXPECT_EQ(run({"adversary", "--scheme", "phi-star:const:256", "--levels", "4"}).out, r.out);

  const auto fixed = run({"adversary", "--scheme", "fixed-k:1", "--levels", "3"});
  EXPECT_EQ(fixed.code, cli::adversary_failed);
  EXPECT_NE(fixed.err.find("scheme-not-consistent-for-h_k"), std::string::npos);
  EXPECT_EQ(nlohmann::json::parse(fixed.out).at("certificates").size(), 1u);

  EXPECT_EQ(run({"adversary", "--scheme", "phi-star:const:256", "--levels", "1"}).code,
            cli::usage);
  EXPECT_EQ(run({"adversary", "--scheme", "kernel:1", "--levels", "3"}).code, cli::usage);
}

TEST(AdversaryCommand, SequenceCap) {
  const auto r = run({"adversary", "--scheme", "phi-star:const:256", "--levels", "2",
                      "--sequence-cap", "10"});
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_TRUE(j.at("sequence").is_null());
  EXPECT_TRUE(j.at("sequence_elided").get<bool>());
  EXPECT_EQ(j.at("sequence_length"), 235);
}
