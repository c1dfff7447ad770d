#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "normop/cli.hpp"
#include "normop/json_io.hpp"
#include "support.hpp"

using namespace normop;
using normop::testing::Rng;
namespace fs = std::filesystem;

namespace {

const Multiplicity kInf = Multiplicity::infinite();
Multiplicity fin(std::uint64_t n) { return Multiplicity::finite(n); }

class Scratch {
 public:
  Scratch() {
    dir_ = fs::temp_directory_path() / ("normop-test-" + std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  ~Scratch() { fs::remove_all(dir_); }

  std::string write_text(const std::string& name, const std::string& text) const {
    const fs::path p = dir_ / name;
    std::ofstream(p, std::ios::binary) << text;
    return p.string();
  }
  std::string write(const std::string& name, const io::Json& j) const { return write_text(name, io::dump(j)); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

 private:
  fs::path dir_;
};

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "normop");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(io::round12(0.1 + 0.2) == 0.3);
  CHECK(io::round12(-0.0) == 0.0);
  CHECK(!std::signbit(io::round12(-0.0)));
  CHECK(io::round12(1.0 / 3.0) == 0.333333333333);
  CHECK(io::number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(io::number(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(io::number(std::nan("")) == "nan");
  CHECK(io::dump(io::Json{{"b", 1}, {"a", 0.5}}) == "{\n  \"a\": 0.5,\n  \"b\": 1\n}\n");
}

TEST_CASE("parse errors carry positions") {
  try {
    io::parse("{\n  \"a\": [1, 2,\n}", "broken.json");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Input);
    CHECK(std::string(e.what()).rfind("broken.json:3:", 0) == 0);
  }
}

TEST_CASE("model, vector, measure, region, theory and type round-trips") {
  SpectralModel m = build_model({0.5, {0, -0.25}}, {kInf, fin(2)}, "M");
  m.allocate_fresh(0);
  const io::Json mj = io::to_json(m);
  CHECK(io::model_from_json(mj) == m);
  CHECK(io::dump(io::to_json(io::model_from_json(mj))) == io::dump(mj));

  ModelVector v("M");
  v.set({0, 0}, Complex(0.25, -0.5));
  v.set({1, 1}, 1.0);
  const ModelVector v2 = io::vector_from_json(io::to_json(v));
  CHECK(v2.model() == "M");
  CHECK(distance(v2, v) == 0.0);
  CHECK(io::vectors_from_json(io::Json{{"vectors", {io::to_json(v)}}}).size() == 1);

  AtomicMeasure mu;
  mu.add(0.5, Complex(0.25, 0.5));
  mu.add(-1, 1.0);
  CHECK(measures_close(io::measure_from_json(io::to_json(mu)), mu, 0.0));

  const Region r{{0.5, {0, 1}}, {{0, 1, -1, 0}}};
  const Region r2 = io::region_from_json(io::to_json(r));
  CHECK(r2.atoms.size() == 2);
  CHECK(r2.boxes.size() == 1);
  CHECK(r2.contains(Complex(0.5, -0.5)));

  const TheoryDescriptor t{{{0, Multiplicity(), false}, {1, kInf, true}, {0.5, fin(3), true}},
                           {{0, 0.25, 0, 0.25}}};
  const TheoryDescriptor t2 = io::theory_from_json(io::to_json(t));
  REQUIRE(t2.atoms.size() == 3);
  CHECK_FALSE(t2.atoms[0].isolated);
  CHECK(t2.atoms[1].mult == kInf);
  CHECK(t2.atoms[2].mult == fin(3));
  CHECK(t2.perfect.size() == 1);

  const TypeDescriptor p = type_of(m, {v}, {ModelVector::unit("M", {1, 0})});
  CHECK(types_equal(io::type_from_json(io::to_json(p)), p, 1e-12));

  linalg::ComplexMatrix a(2, 2, {1, Complex(0, 2), 3, 4});
  const linalg::ComplexMatrix a2 = io::matrix_from_json(io::to_json(a));
  CHECK((a2 - a).max_abs() == 0.0);
}

TEST_CASE("schema errors are input errors") {
  auto kind = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Precondition;
  };
  CHECK(kind([] { io::model_from_json(io::Json::array()); }) == ErrorKind::Input);
  CHECK(kind([] { io::model_from_json(io::Json{{"label", "x"}}); }) == ErrorKind::Input);
  CHECK(kind([] {
          io::model_from_json(io::parse(R"({"label":"x","blocks":[{"re":0,"im":0,"mult":-1}]})", "m"));
        }) == ErrorKind::Input);
  CHECK(kind([] { io::matrix_from_json(io::parse(R"({"rows":2,"cols":2,"re":[1],"im":[1]})", "t")); }) ==
        ErrorKind::Dimension);
}

TEST_CASE("cli exit codes and reports") {
  Scratch s;
  const SpectralModel m = build_model({0, 0.5}, {kInf, fin(2)}, "M");
  const std::string a = s.write("a.json", io::to_json(m));
  const std::string b = s.write("b.json", io::to_json(build_model({0, 0.5}, {kInf, fin(3)}, "N")));

  const Run same = run({"equiv", a, a, "--tol", "1e-9"});
  CHECK(same.code == cli::kHolds);
  const io::Json rep = io::parse(same.out, "out");
  CHECK(rep["equivalent"] == true);
  CHECK(rep["v"] == 1);

  CHECK(run({"equiv", a, b}).code == cli::kFails);
  CHECK(run({"nonsense"}).code == cli::kUsage);
  CHECK(run({}).code == cli::kUsage);
  CHECK(run({"equiv", a}).code == cli::kUsage);
  CHECK(run({"--help"}).code == cli::kHolds);

  const std::string broken = s.write_text("broken.json", "{\"label\": \"x\",\n \"blocks\": [}");
  const Run bad = run({"equiv", broken, a});
  CHECK(bad.code == cli::kUsage);
  CHECK(bad.err.find("broken.json:2:") != std::string::npos);
  CHECK(run({"equiv", s.path("missing.json"), a}).code == cli::kUsage);

  const TheoryDescriptor t{{{0, kInf, true}, {0.5, fin(2), true}}, {}};
  const std::string th = s.write("t.json", io::to_json(t));
  const Run ax = run({"axioms", a, th});
  CHECK(ax.code == cli::kHolds);
  const io::Json axr = io::parse(ax.out, "out");
  CHECK(axr["max_eigen_residual"] == 0.0);
  CHECK(axr["max_violation"] == 0.0);

  // Library failures other than input errors exit 1 with an error report.
  const std::string c = s.write("c.json", io::to_json(build_model({0}, {fin(2)}, "C")));
  const std::string d = s.write("d.json", io::to_json(build_model({0.1}, {fin(1)}, "D")));
  const Run na = run({"align", c, d});
  CHECK(na.code == cli::kFails);
  CHECK(io::parse(na.out, "out")["error"] == "no-alignment");

  const std::string out = s.path("report.json");
  CHECK(run({"equiv", a, a, "--out", out}).code == cli::kHolds);
  std::ifstream f(out);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == same.out);
}

TEST_CASE("cli decompose round-trip is idempotent") {
  Scratch s;
  Rng rng(91);
  const linalg::ComplexMatrix u = testing::random_unitary(rng, 4);
  const linalg::ComplexMatrix t = testing::conjugate(u, {0.5, 0.5, Complex(0, -0.3), -0.25});
  const std::string tp = s.write("t.json", io::to_json(t));
  const Run r = run({"decompose", tp, "--label", "T"});
  REQUIRE(r.code == cli::kHolds);
  const io::Json j = io::parse(r.out, "out");
  const SpectralModel m = io::model_from_json(j);
  CHECK(m.size() == 3);
  CHECK(j["reconstruction_residual"].get<double>() <= 1e-8);
  const io::Json again = io::to_json(io::model_from_json(io::to_json(m)));
  CHECK(io::dump(again) == io::dump(io::to_json(m)));

  linalg::ComplexMatrix big = linalg::ComplexMatrix::diagonal(std::vector<Complex>{2.0, 0.0});
  const Run w = run({"decompose", s.write("big.json", io::to_json(big))});
  CHECK(w.code == cli::kHolds);
  CHECK(w.err.find("warning") != std::string::npos);

  const Run nn = run({"decompose", s.write("nn.json", io::to_json(linalg::ComplexMatrix(2, 2, {0, 1, 0, 0})))});
  CHECK(nn.code == cli::kFails);
  CHECK(io::parse(nn.out, "out")["error"] == "not-normal");
}
