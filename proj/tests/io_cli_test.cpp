#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <cyclic_frames/cli.hpp>

#include "test_support.hpp"

namespace cyclic_frames {
namespace {

using testing::I;
using testing::max_entry_distance;
using testing::Rng;

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

CliResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "frames");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("frames_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
             ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string write(const std::string& name, const std::string& content) const {
    const std::filesystem::path p = path_ / name;
    std::ofstream(p) << content;
    return p.string();
  }

 private:
  std::filesystem::path path_;
};

// --- JSON formatting -----------------------------------------------------------

TEST(Json, FloatsUseSeventeenSignificantDigits) {
  const std::string text = io::dump(io::Json{{"x", 0.1}}, 0);
  EXPECT_NE(text.find("1.0000000000000001e-01"), std::string::npos) << text;
}

TEST(Json, FrameRoundTripIsBitExact) {
  Rng rng(501);
  for (int trial = 0; trial < 20; ++trial) {
    const Frame f(rng.matrix(rng.index(1, 5), rng.index(1, 8)));
    const Frame back = io::frame_from_json(io::Json::parse(io::dump(io::to_json(f))));
    EXPECT_EQ(back.synthesis(), f.synthesis());
  }
}

TEST(Json, SystemRoundTripIsBitExact) {
  Rng rng(502);
  const DynamicalSystem sys{rng.matrix(3, 3), rng.vector(3), 5};
  const DynamicalSystem back = io::system_from_json(io::Json::parse(io::dump(io::to_json(sys))));
  EXPECT_EQ(back.op, sys.op);
  EXPECT_EQ(back.seed, sys.seed);
  EXPECT_EQ(back.n, 5u);
}

TEST(Json, FrameLayout) {
  const io::Json j = io::to_json(Frame(Matrix{{1.0, I}, {2.0, 0.0}}));
  EXPECT_EQ(j["d"], 2);
  EXPECT_EQ(j["n"], 2);
  ASSERT_EQ(j["vectors"].size(), 2u);
  EXPECT_EQ(j["vectors"][1][0][1].get<double>(), 1.0);
  EXPECT_EQ(j["vectors"][0][1][0].get<double>(), 2.0);
}

TEST(Json, FrameParsingErrors) {
  EXPECT_THROW(io::frame_from_json(io::Json::parse(R"({"d": 2, "vectors": []})")), FrameError);
  EXPECT_THROW(io::frame_from_json(io::Json::parse(R"({"d": 2, "n": 1, "vectors": [[[1, 0]]]})")), FrameError);
  EXPECT_THROW(io::frame_from_json(io::Json::parse(R"({"d": 1, "n": 2, "vectors": [[[1, 0]]]})")), FrameError);
  EXPECT_THROW(io::frame_from_json(io::Json::parse(R"({"d": 1, "n": 1, "vectors": [[["a", 0]]]})")), std::exception);
}

TEST(Json, MatrixAcceptsFlatAndNestedLayouts) {
  const Matrix expected{{1.0, 2.0}, {3.0, I}};
  const io::Json flat = io::Json::parse(R"([[1,0],[2,0],[3,0],[0,1]])");
  const io::Json nested = io::Json::parse(R"([[[1,0],[2,0]],[[3,0],[0,1]]])");
  EXPECT_EQ(io::matrix_from_json(flat, 2, 2, "T"), expected);
  EXPECT_EQ(io::matrix_from_json(nested, 2, 2, "T"), expected);
  EXPECT_THROW(io::matrix_from_json(flat, 3, 3, "T"), FrameError);
}

TEST(Json, IndicesAreOneBased) {
  const std::vector<std::size_t> idx{0, 4};
  EXPECT_EQ(io::indices_to_json(idx), io::Json::parse("[1, 5]"));
}

TEST(Json, WorstCaseCsv) {
  const ErasureReport r = erasure_analysis(Frame(Matrix::identity(2)), 2);
  const std::string csv = io::worst_case_csv(r);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "m,argmax_set,error");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 3);
}

// --- complex list syntax ---------------------------------------------------------

TEST(ComplexSyntax, Tokens) {
  EXPECT_EQ(io::parse_complex("1+2i"), Complex(1.0, 2.0));
  EXPECT_EQ(io::parse_complex("-i"), Complex(0.0, -1.0));
  EXPECT_EQ(io::parse_complex("i"), Complex(0.0, 1.0));
  EXPECT_EQ(io::parse_complex("2.5"), Complex(2.5, 0.0));
  EXPECT_EQ(io::parse_complex("1e-3-2i"), Complex(1e-3, -2.0));
  EXPECT_EQ(io::parse_complex("-2.5e+2+1e-1i"), Complex(-250.0, 0.1));
  EXPECT_EQ(io::parse_complex("3-i"), Complex(3.0, -1.0));
  EXPECT_EQ(io::parse_complex(" 4i "), Complex(0.0, 4.0));
}

TEST(ComplexSyntax, Rejects) {
  EXPECT_THROW(io::parse_complex(""), FrameError);
  EXPECT_THROW(io::parse_complex("abc"), FrameError);
  EXPECT_THROW(io::parse_complex("1+2"), FrameError);
  EXPECT_THROW(io::parse_complex("1+xi"), FrameError);
  EXPECT_THROW(io::parse_complex("nan"), FrameError);
}

TEST(ComplexSyntax, Lists) {
  EXPECT_EQ(io::parse_complex_list("0,1,0,0"), (Vector{0.0, 1.0, 0.0, 0.0}));
  EXPECT_EQ(io::parse_complex_list("1+2i,-i"), (Vector{Complex(1.0, 2.0), Complex(0.0, -1.0)}));
  EXPECT_THROW(io::parse_complex_list("1,,2"), FrameError);
}

// --- tolerance -----------------------------------------------------------------

TEST(Tolerance, EnvironmentOverride) {
  ::unsetenv("FRAMES_TOL");
  EXPECT_EQ(cli::default_tolerance(), kDefaultTol);
  ::setenv("FRAMES_TOL", "1e-6", 1);
  EXPECT_EQ(cli::default_tolerance(), 1e-6);
  ::setenv("FRAMES_TOL", "bogus", 1);
  EXPECT_THROW(cli::default_tolerance(), FrameError);
  ::setenv("FRAMES_TOL", "-1", 1);
  EXPECT_THROW(cli::default_tolerance(), FrameError);
  ::unsetenv("FRAMES_TOL");
}

// --- CLI verbs -----------------------------------------------------------------

TEST(Cli, ConstructCirculantExample) {
  const CliResult r = run_cli({"construct", "circulant", "--n", "4", "--d", "3", "--a", "0,1,0,0"});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::Json j = io::Json::parse(r.out);
  const Frame f = io::frame_from_json(j);
  EXPECT_EQ(f.dimension(), 3u);
  EXPECT_EQ(f.size(), 4u);
  const Matrix kernel = nullspace(f.synthesis());
  const Matrix expected = Matrix::from_columns(std::vector<Vector>{{0.5, I / 2.0, -0.5, -I / 2.0}});
  EXPECT_LE(subspace_distance(kernel, expected), 1e-9);
  EXPECT_EQ(j["report"]["kernel_shift_invariant"], true);
  EXPECT_EQ(j["report"]["cyclic"]["is_cyclic"], true);
  EXPECT_EQ(j["report"]["cyclic"]["characterization_holds"], true);
}

TEST(Cli, ConstructSimplexThenTighten) {
  TempDir dir;
  const CliResult built = run_cli({"construct", "simplex", "--d", "3"});
  ASSERT_EQ(built.code, 0) << built.err;
  const std::string path = dir.write("simplex.json", built.out);
  const CliResult tight = run_cli({"tight", path});
  ASSERT_EQ(tight.code, 0) << tight.err;
  const io::Json j = io::Json::parse(tight.out);
  EXPECT_EQ(j["report"]["analysis"]["is_parseval"], true);
  EXPECT_EQ(j["report"]["analysis"]["is_equiangular"], true);
  EXPECT_NEAR(j["report"]["analysis"]["common_modulus"].get<double>(), 0.25, 1e-12);
  const Frame f = io::frame_from_json(j);
  EXPECT_LE(frobenius_distance(f.synthesis(), orbit(simplex_etf(3)).synthesis()), 1e-12);
}

TEST(Cli, AnalyzeOrthonormalBasis) {
  TempDir dir;
  const std::string path = dir.write("onb.json", io::dump(io::to_json(Frame(Matrix::identity(3)))));
  const CliResult r = run_cli({"analyze", path});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::Json j = io::Json::parse(r.out);
  EXPECT_EQ(j["analysis"]["is_frame"], true);
  EXPECT_EQ(j["analysis"]["is_tight"], true);
  EXPECT_EQ(j["analysis"]["is_parseval"], true);
  EXPECT_EQ(j["kernel_shift_invariant"], true);
  EXPECT_EQ(j["cyclic"]["is_cyclic"], true);
  EXPECT_EQ(j["dynamical"]["detected"], true);
}

TEST(Cli, ConstructOutputReanalyzesIdentically) {
  TempDir dir;
  const std::vector<std::vector<std::string>> commands{
      {"construct", "simplex", "--d", "4"},
      {"construct", "roots", "--n", "5", "--d", "2", "--m", "1,3", "--f1", "1,2-i"},
      {"construct", "roots", "--n", "4", "--d", "2", "--m", "2,4", "--u", "1,2,0,1"},
      {"construct", "circulant", "--n", "7", "--d", "4", "--a", "0,1,0,2i,0,0,-1"},
  };
  for (const auto& cmd : commands) {
    const CliResult built = run_cli(cmd);
    ASSERT_EQ(built.code, 0) << built.err;
    const io::Json doc = io::Json::parse(built.out);
    const std::string path = dir.write("frame.json", built.out);
    const CliResult analyzed = run_cli({"analyze", path});
    ASSERT_EQ(analyzed.code, 0) << analyzed.err;
    EXPECT_EQ(io::Json::parse(analyzed.out), doc["report"]) << cmd[1];
  }
}

TEST(Cli, RootsReportsPeriodAndMinimality) {
  const CliResult r = run_cli({"construct", "roots", "--n", "4", "--d", "2", "--m", "2,4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::Json j = io::Json::parse(r.out);
  EXPECT_EQ(j["period"], 2);
  EXPECT_EQ(j["minimal"], false);
  EXPECT_EQ(j["primitive_root"], false);
  EXPECT_EQ(j["report"]["cyclic"]["minimal_period"], 2);
}

TEST(Cli, DualVerb) {
  TempDir dir;
  const std::string path = dir.write("f.json", io::dump(io::to_json(Frame(Matrix{{0.0, 0.0, 1.0}, {1.0, 1.0, 0.0}}))));
  const CliResult r = run_cli({"dual", path});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::Json j = io::Json::parse(r.out);
  EXPECT_EQ(j["permutation"], io::Json::parse("[1, 3, 2]"));
  EXPECT_LE(j["duality_residual"].get<double>(), 1e-12);
}

TEST(Cli, ErasureVerbJsonAndCsv) {
  TempDir dir;
  const std::string path = dir.write("etf.json", io::dump(io::to_json(orbit(simplex_etf(2)))));
  const CliResult r = run_cli({"erasure", path, "--m", "2", "--erase", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const io::Json j = io::Json::parse(r.out);
  EXPECT_EQ(j["erased_indices"], io::Json::parse("[1]"));
  EXPECT_EQ(j["survivor_is_frame"], true);
  EXPECT_NEAR(j["error_norm"].get<double>(), 2.0 / 3.0, 1e-10);
  EXPECT_EQ(j["worst_case_by_size"].size(), 2u);

  const CliResult csv = run_cli({"erasure", path, "--m", "2", "--csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("m,argmax_set,error\n", 0), 0u);

  EXPECT_EQ(run_cli({"erasure", path, "--m", "3"}).code, 1);
  EXPECT_EQ(run_cli({"erasure", path, "--erase", "9"}).code, 1);
}

TEST(Cli, VerifyPassesOnCyclicAndGenericFrames) {
  TempDir dir;
  Rng rng(503);
  const std::vector<Frame> frames{orbit(simplex_etf(3)), Frame(rng.matrix(3, 6)), Frame(Matrix::identity(2)),
                                  orbit(simplex_frame(Matrix::identity(5)))};
  for (const Frame& f : frames) {
    const std::string path = dir.write("f.json", io::dump(io::to_json(f)));
    const CliResult r = run_cli({"verify", path, "--seed", "7"});
    ASSERT_EQ(r.code, 0) << r.out << r.err;
    EXPECT_EQ(io::Json::parse(r.out)["passed"], true);
  }
}

TEST(Cli, VerifyFailsOnNonFrame) {
  TempDir dir;
  const std::string path = dir.write("bad.json", io::dump(io::to_json(Frame(Matrix{{1.0, 2.0}, {0.0, 0.0}}))));
  const CliResult r = run_cli({"verify", path});
  EXPECT_EQ(r.code, 2);
  EXPECT_EQ(io::Json::parse(r.out)["passed"], false);
}

TEST(Cli, VerifyIsDeterministic) {
  TempDir dir;
  Rng rng(504);
  const std::string path = dir.write("f.json", io::dump(io::to_json(Frame(rng.matrix(2, 4)))));
  EXPECT_EQ(run_cli({"verify", path, "--seed", "3"}).out, run_cli({"verify", path, "--seed", "3"}).out);
}

TEST(Cli, PrettyOutput) {
  const CliResult r = run_cli({"--pretty", "construct", "simplex", "--d", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("report.analysis.is_frame"), std::string::npos) << r.out;
}

TEST(Cli, UsageAndDataErrors) {
  EXPECT_EQ(run_cli({}).code, 1);
  EXPECT_EQ(run_cli({"construct", "simplex"}).code, 1);
  EXPECT_EQ(run_cli({"bogus"}).code, 1);
  EXPECT_EQ(run_cli({"--help"}).code, 0);
  EXPECT_EQ(run_cli({"construct", "roots", "--n", "3", "--d", "2", "--m", "1,1"}).code, 1);
  const CliResult support = run_cli({"construct", "circulant", "--n", "4", "--d", "3", "--a", "1,1,0,0"});
  EXPECT_EQ(support.code, 1);
  EXPECT_NE(support.err.find("error:"), std::string::npos);

  const CliResult missing = run_cli({"analyze", "/nonexistent/frame.json"});
  EXPECT_EQ(missing.code, 1);
  EXPECT_NE(missing.err.find("/nonexistent/frame.json"), std::string::npos);

  TempDir dir;
  const std::string garbage = dir.write("garbage.json", "{not json");
  const CliResult parse = run_cli({"analyze", garbage});
  EXPECT_EQ(parse.code, 1);
  EXPECT_NE(parse.err.find("garbage.json"), std::string::npos);
  EXPECT_EQ(run_cli({"--tol", "-1", "construct", "simplex", "--d", "2"}).code, 1);
}

}  // namespace
}  // namespace cyclic_frames
