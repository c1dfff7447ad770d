#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "normop/linalg.hpp"
#include "normop/measure.hpp"
#include "normop/model.hpp"
#include "normop/theory.hpp"
#include "normop/typespace.hpp"

namespace normop::io {

using Json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

/// x rounded to 12 significant digits, with -0 folded to 0.
double round12(double x);
/// JSON number of round12(x); non-finite values become the strings
/// "inf", "-inf" or "nan".
Json number(double x);

/// Pretty-printed JSON with sorted keys and a trailing newline.
std::string dump(const Json& j);

/// Parses `text`; malformed input throws Input with "source:line:col".
Json parse(const std::string& text, const std::string& source);
Json read_file(const std::string& path);

Json to_json(const linalg::ComplexMatrix& m);
linalg::ComplexMatrix matrix_from_json(const Json& j);

Json to_json(const SpectralModel& m);
SpectralModel model_from_json(const Json& j);

Json to_json(const ModelVector& v);
ModelVector vector_from_json(const Json& j);
/// Either an array of vectors or an object {"vectors": [...]}.
std::vector<ModelVector> vectors_from_json(const Json& j);

Json to_json(const AtomicMeasure& mu);
AtomicMeasure measure_from_json(const Json& j);

Json to_json(const Region& r);
Region region_from_json(const Json& j);

Json to_json(const TheoryDescriptor& t);
TheoryDescriptor theory_from_json(const Json& j);

Json to_json(const TypeDescriptor& t);
TypeDescriptor type_from_json(const Json& j);

Json to_json(Multiplicity m);
Json complex_json(Complex z);  // {"re", "im"}

}  // namespace normop::io
