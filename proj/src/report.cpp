#include "ellhomog/report.hpp"

#include <sstream>

#include "ellhomog/errors.hpp"

namespace ellhomog {

namespace {

int parse_int(const std::string& s) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    throw UsageError("expected an integer, got '" + s + "'");
  }
  if (used != s.size()) throw UsageError("expected an integer, got '" + s + "'");
  return v;
}

Json coords_json(const RationalCoords& c) {
  Json out = Json::array();
  for (const auto& x : c) out.push_back(x.get_str());
  return out;
}

}  // namespace

Field parse_field(const std::string& text, int max_depth) {
  if (text == "rat" || text == "Q") return FieldDescriptor::rationals(max_depth);
  if (text.rfind("gf:", 0) == 0) {
    const std::vector<int> pm = parse_int_list(text.substr(3));
    if (pm.empty() || pm.size() > 2) throw UsageError("field syntax is gf:p or gf:p,m");
    const int p = pm[0];
    const int m = pm.size() == 2 ? pm[1] : 1;
    if (p < 2 || m < 1) throw UsageError("bad finite field '" + text + "'");
    for (int d = 2; d * d <= p; ++d) {
      if (p % d == 0) throw UsageError("characteristic " + std::to_string(p) + " is not prime");
    }
    return FieldDescriptor::galois(static_cast<std::uint32_t>(p), m, max_depth);
  }
  throw UsageError("unknown field '" + text + "' (use rat or gf:p[,m])");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) throw UsageError("empty entry in list '" + text + "'");
    out.push_back(parse_int(item));
  }
  return out;
}

Json field_json(const Field& field) {
  Json j;
  j["name"] = field->name();
  if (field->is_finite()) {
    j["kind"] = "finite";
    j["p"] = field->characteristic();
    j["m"] = field->degree();
    Json mod = Json::array();
    for (auto c : field->modulus()) mod.push_back(c);
    j["modulus"] = mod;
  } else {
    j["kind"] = "rational-tower";
    j["p"] = 0;
    j["m"] = field->degree();
    Json rad = Json::array();
    for (const auto& r : field->radicands()) rad.push_back(coords_json(r));
    j["radicands"] = rad;
  }
  j["depth"] = field->depth();
  return j;
}

Json element_json(const FieldElement& x) {
  Json out = Json::array();
  for (const auto& s : x.coordinate_strings()) out.push_back(s);
  return out;
}

Json matrix_json(const ExactMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(m(i, j).to_string());
    rows.push_back(row);
  }
  return rows;
}

Json shape_json(const ShapeSeq& shape) {
  Json j;
  j["parts"] = shape.parts();
  j["kappa"] = shape.kappa();
  j["psi"] = psi(shape).values;
  Json jordan;
  for (Mode mode : {Mode::SymplecticOrChar2, Mode::OrthogonalOdd}) {
    if (shape.valid_for(mode)) {
      jordan[mode_name(mode)] = jordan_prediction(shape, mode);
    } else {
      jordan[mode_name(mode)] = nullptr;
    }
  }
  j["jordan"] = jordan;
  return j;
}

Json diagnostics_json(const GramDiagnostics& d) {
  Json j;
  j["mu_zero_fallback"] = d.mu_zero_fallback;
  j["singular_fallback"] = d.singular_fallback;
  j["virtual_nu_zero"] = d.virtual_nu_zero;
  return j;
}

Json check_json(const CheckReport& r) {
  Json j;
  j["pass"] = r.pass;
  j["failures"] = r.failures;
  return j;
}

Json count_json(const CountResult& r) {
  Json j;
  j["space"] = space_kind_name(r.kind);
  j["q"] = r.q;
  j["nu"] = r.nu;
  j["gamma"] = r.gamma;
  j["group_order"] = r.group_order;
  j["unipotents"] = r.unipotents;
  j["flags"] = r.flags;
  j["count"] = r.count;
  j["flag_outer_count"] = r.flag_outer_count;
  j["double_count_agrees"] = r.double_count_agrees;
  if (r.adjoint) {
    if (r.adjoint->fits_ulong_p()) {
      j["adjoint_order"] = r.adjoint->get_ui();
    } else {
      j["adjoint_order"] = r.adjoint->get_str();
    }
    j["verdict"] = r.equals_adjoint ? "equal" : "differs";
  } else {
    j["adjoint_order"] = nullptr;
    j["verdict"] = "not applicable";
  }
  return j;
}

}  // namespace ellhomog
