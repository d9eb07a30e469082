#pragma once

// JSON projections of library objects, shared by the CLI and the tests.

#include <string>

#include <json.hpp>

#include "ellhomog/counter.hpp"
#include "ellhomog/field.hpp"
#include "ellhomog/gram.hpp"
#include "ellhomog/matrix.hpp"
#include "ellhomog/model.hpp"
#include "ellhomog/shapes.hpp"

namespace ellhomog {

using Json = nlohmann::ordered_json;

// "rat" or "gf:p[,m]".
Field parse_field(const std::string& text, int max_depth = kDefaultMaxDepth);
std::vector<int> parse_int_list(const std::string& text);

Json field_json(const Field& field);
// Coordinates as decimal strings.
Json element_json(const FieldElement& x);
Json matrix_json(const ExactMatrix& m);
Json shape_json(const ShapeSeq& shape);
Json diagnostics_json(const GramDiagnostics& d);
Json check_json(const CheckReport& r);
Json count_json(const CountResult& r);

}  // namespace ellhomog
