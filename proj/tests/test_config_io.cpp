#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "tfd/config.hpp"
#include "tfd/io.hpp"
#include "tfd/manifest.hpp"

using namespace tfd;

namespace {

std::filesystem::path scratch_dir(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("tfd_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(Config, DefaultsAreValid) {
  const ExperimentConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.alpha, 0.5);
  EXPECT_EQ(c.tol("w_tol"), 1e-9);
  EXPECT_THROW(c.tol("nope"), ConfigError);
}

TEST(Config, ParsesTopLevelGridAndTolerances) {
  const ExperimentConfig c = parse_config_string(
      "alpha = 0.3\nT = 2\nscenario = \"B\"\ndatum = flux\nthreads = 2\nt_large = 12\nt_horizon = 20\n"
      "dump_intermediates = true\n[grid]\nnx = 41\nnt = 30\nt_max = 2\n[tolerances]\nw_tol = 1e-8\n");
  EXPECT_EQ(c.alpha, 0.3);
  EXPECT_EQ(c.T, 2.0);
  EXPECT_EQ(c.scenario, "B");
  EXPECT_EQ(c.datum, "flux");
  EXPECT_EQ(c.threads, 2);
  EXPECT_TRUE(c.dump_intermediates);
  EXPECT_EQ(c.grid.nx, 41);
  EXPECT_EQ(c.grid.nt, 30);
  EXPECT_EQ(c.tol("w_tol"), 1e-8);
  EXPECT_EQ(c.tol("v_tol"), 1e-9);
}

TEST(Config, TextRoundTrip) {
  ExperimentConfig c;
  c.alpha = 0.3;
  c.T = 1.7;
  c.t_large = 11.1;
  c.grid = {33, 17, 1.7};
  c.tolerances["laplace_rel"] = 3.3e-5;
  const ExperimentConfig d = parse_config_string(to_config_text(c));
  EXPECT_EQ(d.alpha, c.alpha);
  EXPECT_EQ(d.T, c.T);
  EXPECT_EQ(d.t_large, c.t_large);
  EXPECT_EQ(d.grid.nx, 33);
  EXPECT_EQ(d.grid.t_max, 1.7);
  EXPECT_EQ(d.tolerances, c.tolerances);
  EXPECT_EQ(to_config_text(d), to_config_text(c));
}

TEST(Config, RejectsUnknownAndMalformed) {
  EXPECT_THROW(parse_config_string("alpah = 0.5\n"), ConfigError);
  EXPECT_THROW(parse_config_string("[solver]\nx = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_string("[grid]\nnz = 4\n"), ConfigError);
  EXPECT_THROW(parse_config_string("[tolerances]\nfoo = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_string("alpha = half\n"), ConfigError);
  EXPECT_THROW(parse_config_string("threads = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_config_string("dump_intermediates = yes\n"), ConfigError);
}

TEST(Config, ValidationRanges) {
  EXPECT_THROW(parse_config_string("alpha = 1\n"), ConfigError);
  EXPECT_THROW(parse_config_string("alpha = 0\n"), ConfigError);
  EXPECT_THROW(parse_config_string("scenario = D\n"), ConfigError);
  EXPECT_THROW(parse_config_string("datum = sine\n"), ConfigError);
  EXPECT_THROW(parse_config_string("threads = 0\n"), ConfigError);
  EXPECT_THROW(parse_config_string("t_large = 0.5\n"), ConfigError);
  EXPECT_THROW(parse_config_string("t_horizon = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_config_string("[tolerances]\nkappa = -1\n"), ConfigError);
  EXPECT_THROW(parse_config_string("[grid]\nnx = 2\n"), ConfigError);
}

TEST(Config, ToleranceOverride) {
  ExperimentConfig c;
  apply_tolerance_override(c, "kappa=5");
  EXPECT_EQ(c.tol("kappa"), 5.0);
  EXPECT_THROW(apply_tolerance_override(c, "kappa"), ConfigError);
  EXPECT_THROW(apply_tolerance_override(c, "=1"), ConfigError);
  EXPECT_THROW(apply_tolerance_override(c, "zeta=1"), ConfigError);
  EXPECT_THROW(apply_tolerance_override(c, "kappa=x"), ConfigError);
}

TEST(Config, SolverOptionsFollowTolerances) {
  ExperimentConfig c;
  c.tolerances["w_tol"] = 2e-7;
  c.threads = 3;
  const SolverOptions o = c.solver_options();
  EXPECT_EQ(o.w_tol, 2e-7);
  EXPECT_EQ(o.threads, 3);
}

TEST(Io, FieldCsvLayout) {
  const SolutionField f({2 + 1, 2, 1.0}, Provenance::l1_oracle, {0.0, 0.5, 1.0, 0.1, 0.25, 0.3});
  const std::string text = field_csv_text(f);
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "x,t,u,provenance");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0.5,0,l1_oracle");
  int rows = 1;
  while (std::getline(in, line)) ++rows;
  EXPECT_EQ(rows, 6);
  EXPECT_NE(text.find("0.5,1,0.25,l1_oracle"), std::string::npos);
}

TEST(Io, SeriesCsvAndJsonNumbers) {
  EXPECT_EQ(series_csv_text(TimeSeries{{0.0, 0.1}, {1.0, -2.5}}), "t,value\n0,1\n0.1,-2.5\n");
  EXPECT_EQ(json_number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(json_number(std::nan("")), "nan");
  EXPECT_EQ(json_number(0.1).get<double>(), 0.1);
  EXPECT_EQ(format_number(0.1), "0.1");
}

TEST(Io, FieldJsonCarriesProvenanceAndGrid) {
  const SolutionField f({3, 2, 1.0}, Provenance::spectral_oracle, {1.0, 2.0, 3.0, 4.0, 5.0, 6.0});
  const Json j = to_json(f);
  EXPECT_EQ(j.at("provenance"), "spectral_oracle");
  EXPECT_EQ(j.at("grid").at("nx"), 3);
  EXPECT_EQ(j.at("u").at(0).at(2), 3.0);
}

TEST(Io, ConfigJsonIsDeterministic) {
  EXPECT_EQ(dump_json(to_json(ExperimentConfig{})), dump_json(to_json(ExperimentConfig{})));
}

TEST(Manifest, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(Manifest, VerifyDetectsTampering) {
  const auto dir = scratch_dir("manifest");
  ManifestWriter w(dir);
  w.write("a.txt", "alpha\n");
  w.write("b.csv", "t,value\n0,1\n");
  w.finish(Json{{"note", "test"}});
  ManifestCheck c = verify_manifest(dir);
  EXPECT_TRUE(c.ok);
  EXPECT_EQ(c.files, 2u);

  std::ofstream(dir / "b.csv", std::ios::app) << "1,2\n";
  c = verify_manifest(dir);
  EXPECT_FALSE(c.ok);
  ASSERT_EQ(c.problems.size(), 1u);
  EXPECT_NE(c.problems[0].find("b.csv"), std::string::npos);

  std::filesystem::remove(dir / "a.txt");
  EXPECT_EQ(verify_manifest(dir).problems.size(), 2u);
  std::filesystem::remove(dir / "manifest.json");
  EXPECT_FALSE(verify_manifest(dir).ok);
  std::filesystem::remove_all(dir);
}
