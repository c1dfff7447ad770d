#include "normop/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace normop::io {

namespace {

[[noreturn]] void bad(const std::string& ctx, const std::string& what) {
  throw Error(ErrorKind::Input, ctx + ": " + what);
}

const Json& member(const Json& j, const char* key, const std::string& ctx) {
  if (!j.is_object()) bad(ctx, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(ctx, std::string("missing '") + key + "'");
  return *it;
}

double as_number(const Json& j, const std::string& ctx) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return HUGE_VAL;
    if (s == "-inf") return -HUGE_VAL;
  }
  bad(ctx, "expected a number");
}

double number_at(const Json& j, const char* key, const std::string& ctx) {
  return as_number(member(j, key, ctx), ctx + "." + key);
}

double number_or(const Json& j, const char* key, double fallback, const std::string& ctx) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_number(*it, ctx + "." + key);
}

std::uint64_t count_at(const Json& j, const char* key, const std::string& ctx) {
  const Json& v = member(j, key, ctx);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
    bad(ctx + "." + key, "expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

const Json& array_at(const Json& j, const char* key, const std::string& ctx) {
  const Json& v = member(j, key, ctx);
  if (!v.is_array()) bad(ctx + "." + key, "expected an array");
  return v;
}

std::string item(const std::string& ctx, const char* key, std::size_t i) {
  return ctx + "." + key + "[" + std::to_string(i) + "]";
}

Multiplicity multiplicity_from(const Json& v, const std::string& ctx) {
  if (v.is_string() && v.get<std::string>() == "inf") return Multiplicity::infinite();
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0))
    return Multiplicity::finite(v.get<std::uint64_t>());
  bad(ctx, "multiplicity must be a nonnegative integer or \"inf\"");
}

Complex complex_from(const Json& j, const std::string& ctx) {
  return {number_at(j, "re", ctx), number_at(j, "im", ctx)};
}

}  // namespace

double round12(double x) {
  if (!std::isfinite(x) || x == 0.0) return x == 0.0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.11e", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return round12(x);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    // Drop the library prefix "[json.exception.parse_error.101] ".
    if (auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
    throw Error(ErrorKind::Input,
                source + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + what);
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Input, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

Json complex_json(Complex z) { return Json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

Json to_json(Multiplicity m) {
  if (m.is_infinite()) return "inf";
  return m.value();
}

// --- Matrix ---------------------------------------------------------------------------

Json to_json(const linalg::ComplexMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (Complex z : m.entries()) {
    re.push_back(number(z.real()));
    im.push_back(number(z.imag()));
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

linalg::ComplexMatrix matrix_from_json(const Json& j) {
  const std::string ctx = "matrix";
  const std::uint64_t rows = count_at(j, "rows", ctx);
  const std::uint64_t cols = count_at(j, "cols", ctx);
  if (rows == 0 || cols == 0) bad(ctx, "rows and cols must be positive");
  const Json& re = array_at(j, "re", ctx);
  auto im_it = j.find("im");
  if (im_it != j.end() && !im_it->is_array()) bad(ctx + ".im", "expected an array");
  if (re.size() != rows * cols) {
    throw Error(ErrorKind::Dimension, ctx + ".re: " + std::to_string(re.size()) +
                                          " entries for a " + std::to_string(rows) + "x" +
                                          std::to_string(cols) + " matrix");
  }
  if (im_it != j.end() && im_it->size() != re.size())
    throw Error(ErrorKind::Dimension, ctx + ".im: length differs from re");
  std::vector<Complex> entries;
  for (std::size_t i = 0; i < re.size(); ++i) {
    const double x = as_number(re[i], ctx + ".re[" + std::to_string(i) + "]");
    const double y =
        im_it == j.end() ? 0.0 : as_number((*im_it)[i], ctx + ".im[" + std::to_string(i) + "]");
    entries.emplace_back(x, y);
  }
  return linalg::ComplexMatrix(rows, cols, std::move(entries));
}

// --- Model and vectors ------------------------------------------------------------------

Json to_json(const SpectralModel& m) {
  Json blocks = Json::array();
  for (const Block& b : m.blocks()) {
    blocks.push_back(Json{{"re", number(b.lambda.real())},
                          {"im", number(b.lambda.imag())},
                          {"mult", to_json(b.mult)},
                          {"allocated", b.allocated}});
  }
  return Json{{"label", m.label()}, {"blocks", blocks}};
}

SpectralModel model_from_json(const Json& j) {
  const std::string ctx = "model";
  const Json& label = member(j, "label", ctx);
  if (!label.is_string()) bad(ctx + ".label", "expected a string");
  const Json& arr = array_at(j, "blocks", ctx);
  std::vector<Block> blocks;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string c = item(ctx, "blocks", i);
    Block b;
    b.lambda = complex_from(arr[i], c);
    b.mult = multiplicity_from(member(arr[i], "mult", c), c + ".mult");
    b.allocated = arr[i].contains("allocated") ? count_at(arr[i], "allocated", c) : 0;
    if (b.mult.is_finite() && b.allocated > b.mult.value())
      bad(c, "allocated exceeds the multiplicity");
    blocks.push_back(b);
  }
  return SpectralModel(label.get<std::string>(), std::move(blocks));
}

Json to_json(const ModelVector& v) {
  Json coords = Json::array();
  for (const auto& [c, z] : v.coords()) {
    coords.push_back(Json{{"block", c.block},
                          {"index", c.index},
                          {"re", number(z.real())},
                          {"im", number(z.imag())}});
  }
  return Json{{"model", v.model()}, {"coords", coords}};
}

ModelVector vector_from_json(const Json& j) {
  const std::string ctx = "vector";
  const Json& model = member(j, "model", ctx);
  if (!model.is_string()) bad(ctx + ".model", "expected a string");
  ModelVector v(model.get<std::string>());
  const Json& arr = array_at(j, "coords", ctx);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string c = item(ctx, "coords", i);
    const std::uint64_t block = count_at(arr[i], "block", c);
    if (block > 0xffffffffULL) bad(c + ".block", "block index out of range");
    v.add({static_cast<std::uint32_t>(block), count_at(arr[i], "index", c)},
          {number_at(arr[i], "re", c), number_or(arr[i], "im", 0.0, c)});
  }
  return v;
}

std::vector<ModelVector> vectors_from_json(const Json& j) {
  const Json* arr = &j;
  if (j.is_object()) arr = &array_at(j, "vectors", "vector list");
  if (!arr->is_array()) bad("vector list", "expected an array of vectors");
  std::vector<ModelVector> out;
  for (const Json& v : *arr) out.push_back(vector_from_json(v));
  return out;
}

// --- Measures, regions, theories ----------------------------------------------------------------

Json to_json(const AtomicMeasure& mu) {
  Json atoms = Json::array();
  for (const auto& a : mu.atoms()) {
    atoms.push_back(Json{{"re", number(a.point.real())},
                         {"im", number(a.point.imag())},
                         {"mass_re", number(a.mass.real())},
                         {"mass_im", number(a.mass.imag())}});
  }
  return Json{{"atoms", atoms}};
}

AtomicMeasure measure_from_json(const Json& j) {
  const std::string ctx = "measure";
  const Json& arr = array_at(j, "atoms", ctx);
  AtomicMeasure mu;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string c = item(ctx, "atoms", i);
    mu.add(complex_from(arr[i], c),
           {number_at(arr[i], "mass_re", c), number_or(arr[i], "mass_im", 0.0, c)});
  }
  return mu;
}

namespace {

Json box_json(const Box& b) {
  return Json{{"x0", number(b.x0)}, {"x1", number(b.x1)}, {"y0", number(b.y0)}, {"y1", number(b.y1)}};
}

Box box_from(const Json& j, const std::string& ctx) {
  Box b{number_at(j, "x0", ctx), number_at(j, "x1", ctx), number_at(j, "y0", ctx),
        number_at(j, "y1", ctx)};
  if (!(b.x0 <= b.x1) || !(b.y0 <= b.y1)) bad(ctx, "box corners out of order");
  return b;
}

}  // namespace

Json to_json(const Region& r) {
  Json atoms = Json::array(), boxes = Json::array();
  for (Complex z : r.atoms) atoms.push_back(complex_json(z));
  for (const Box& b : r.boxes) boxes.push_back(box_json(b));
  return Json{{"atoms", atoms}, {"boxes", boxes}};
}

Region region_from_json(const Json& j) {
  const std::string ctx = "region";
  Region r;
  if (j.contains("atoms")) {
    const Json& arr = array_at(j, "atoms", ctx);
    for (std::size_t i = 0; i < arr.size(); ++i) r.atoms.push_back(complex_from(arr[i], item(ctx, "atoms", i)));
  }
  if (j.contains("boxes")) {
    const Json& arr = array_at(j, "boxes", ctx);
    for (std::size_t i = 0; i < arr.size(); ++i) r.boxes.push_back(box_from(arr[i], item(ctx, "boxes", i)));
  }
  return r;
}

Json to_json(const TheoryDescriptor& t) {
  Json atoms = Json::array(), perfect = Json::array();
  for (const TheoryAtom& a : t.atoms) {
    Json e{{"re", number(a.lambda.real())}, {"im", number(a.lambda.imag())}, {"isolated", a.isolated}};
    if (a.isolated) e["mult"] = to_json(a.mult);
    atoms.push_back(e);
  }
  for (const Box& b : t.perfect) perfect.push_back(box_json(b));
  return Json{{"atoms", atoms}, {"perfect", perfect}};
}

TheoryDescriptor theory_from_json(const Json& j) {
  const std::string ctx = "theory";
  TheoryDescriptor t;
  const Json& arr = array_at(j, "atoms", ctx);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string c = item(ctx, "atoms", i);
    TheoryAtom a;
    a.lambda = complex_from(arr[i], c);
    a.isolated = true;
    if (arr[i].contains("isolated")) {
      const Json& iso = arr[i]["isolated"];
      if (!iso.is_boolean()) bad(c + ".isolated", "expected a boolean");
      a.isolated = iso.get<bool>();
    }
    if (a.isolated) a.mult = multiplicity_from(member(arr[i], "mult", c), c + ".mult");
    t.atoms.push_back(a);
  }
  if (j.contains("perfect")) {
    const Json& boxes = array_at(j, "perfect", ctx);
    for (std::size_t i = 0; i < boxes.size(); ++i) t.perfect.push_back(box_from(boxes[i], item(ctx, "perfect", i)));
  }
  return t;
}

// --- Types ---------------------------------------------------------------------------------------

Json to_json(const TypeDescriptor& t) {
  Json base = Json::array(), gram = Json::array();
  for (const ModelVector& v : t.base) base.push_back(to_json(v));
  for (const auto& row : t.gram) {
    Json r = Json::array();
    for (const AtomicMeasure& mu : row) r.push_back(to_json(mu));
    gram.push_back(r);
  }
  return Json{{"n", t.n}, {"params", t.param_label}, {"base", base}, {"gram", gram}};
}

TypeDescriptor type_from_json(const Json& j) {
  const std::string ctx = "type";
  TypeDescriptor t;
  t.n = count_at(j, "n", ctx);
  const Json& params = member(j, "params", ctx);
  if (!params.is_string()) bad(ctx + ".params", "expected a string");
  t.param_label = params.get<std::string>();
  const Json& base = array_at(j, "base", ctx);
  const Json& gram = array_at(j, "gram", ctx);
  if (base.size() != t.n || gram.size() != t.n)
    throw Error(ErrorKind::Dimension, ctx + ": base and gram must have n entries");
  for (const Json& v : base) t.base.push_back(vector_from_json(v));
  for (std::size_t i = 0; i < t.n; ++i) {
    if (!gram[i].is_array() || gram[i].size() != t.n)
      throw Error(ErrorKind::Dimension, item(ctx, "gram", i) + ": expected " + std::to_string(t.n) + " measures");
    std::vector<AtomicMeasure> row;
    for (const Json& mu : gram[i]) row.push_back(measure_from_json(mu));
    t.gram.push_back(std::move(row));
  }
  return t;
}

}  // namespace normop::io
