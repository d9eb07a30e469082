// Batch command surface: psi, gram, build, verify, flags, count,
// conjecture210, identities.  Exit codes: 0 ok, 1 falsifier fired, 2 usage
// error, 3 resource bound.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "ellhomog/counter.hpp"
#include "ellhomog/errors.hpp"
#include "ellhomog/gram.hpp"
#include "ellhomog/model.hpp"
#include "ellhomog/report.hpp"
#include "ellhomog/shapes.hpp"

#ifndef ELLHOMOG_VERSION
#define ELLHOMOG_VERSION "unknown"
#endif

using namespace ellhomog;

namespace {

struct Options {
  std::string shape;
  int kappa = 0;
  std::string mode = "symplectic-or-char2";
  std::string field = "rat";
  std::optional<int> window;
  int kmax = 0;
  int degree = 20;
  std::string type = "A";
  int n = 0;
  int q = 3;
  std::string gamma;
  std::string format = "json";
  std::string out;
  int jobs = 0;
  bool timing = false;
};

struct Output {
  Json body;
  std::string csv;  // used when --format csv
  Json diagnostics = nullptr;
  Json field = nullptr;
  bool falsified = false;
};

Json parameters_json(const std::string& command, const Options& o) {
  Json p;
  p["shape"] = o.shape.empty() ? Json(nullptr) : Json(o.shape);
  p["kappa"] = o.kappa;
  p["mode"] = o.mode;
  p["field"] = o.field;
  p["window"] = o.window ? Json(*o.window) : Json(nullptr);
  if (command == "conjecture210" || command == "identities") p["kmax"] = o.kmax;
  if (command == "identities") p["degree"] = o.degree;
  if (command == "count") {
    p["type"] = o.type;
    p["q"] = o.q;
    p["gamma"] = o.gamma.empty() ? Json(nullptr) : Json(o.gamma);
    p["jobs"] = o.jobs;
  }
  if (command == "count" || command == "verify") p["n"] = o.n;
  p["format"] = o.format;
  return p;
}

ShapeSeq require_shape(const Options& o) {
  if (o.shape.empty()) throw UsageError("--shape is required");
  return ShapeSeq::parse(o.shape, o.kappa);
}

std::string csv_manifest(const Json& manifest) { return "# manifest " + manifest.dump() + "\n"; }

Output cmd_psi(const Options& o) {
  const ShapeSeq s = require_shape(o);
  Output out;
  out.body["shape"] = shape_json(s);
  out.body["psi"] = psi(s).values;
  std::ostringstream csv;
  csv << "t,psi\n";
  const PsiVector ps = psi(s);
  for (int t = 1; t <= s.sigma(); ++t) csv << t << "," << ps.at(t) << "\n";
  out.csv = csv.str();
  return out;
}

Output cmd_gram(const Options& o) {
  const ShapeSeq s = require_shape(o);
  const Mode mode = parse_mode(o.mode);
  GramTable table(s, mode, parse_field(o.field), o.window);
  const int w = o.window.value_or(2 * s.p(1) + 2);
  const int count = s.sigma() + s.kappa();
  struct Entry {
    int t, r, d;
    FieldElement v;
  };
  std::vector<Entry> entries;
  for (int t = 1; t <= count; ++t) {
    for (int r = 1; r <= count; ++r) {
      for (int d = -w; d <= w; ++d) entries.push_back({t, r, d, table.value(t, r, d)});
    }
  }
  const ExactMatrix g = gram_matrix(table);
  // The field is final only after every value above has been requested.
  const Field& f = table.field();
  Output out;
  out.field = field_json(f);
  out.diagnostics = diagnostics_json(table.diagnostics());
  out.body["shape"] = shape_json(s);
  out.body["mode"] = mode_name(mode);
  out.body["field"] = field_json(f);
  out.body["window"] = w;
  Json values = Json::array();
  std::ostringstream csv;
  csv << "t,r,delta,value\n";
  for (const auto& e : entries) {
    const FieldElement v = e.v.lifted(f);
    Json j;
    j["t"] = e.t;
    j["r"] = e.r;
    j["delta"] = e.d;
    j["value"] = element_json(v);
    j["text"] = v.to_string();
    values.push_back(j);
    csv << e.t << "," << e.r << "," << e.d << "," << v.to_string() << "\n";
  }
  out.body["values"] = values;
  out.body["gram_matrix"] = matrix_json(g.lifted(f));
  out.body["diagnostics"] = out.diagnostics;
  out.csv = csv.str();
  return out;
}

Output cmd_build(const Options& o) {
  const ShapeSeq s = require_shape(o);
  const Mode mode = parse_mode(o.mode);
  ModelOptions mo;
  mo.window = o.window;
  const IsometryModel m = build_model(s, mode, parse_field(o.field), mo);
  const CheckReport rt = round_trip_check(m);
  Output out;
  out.field = field_json(m.field());
  out.diagnostics = diagnostics_json(m.table->diagnostics());
  out.body["shape"] = shape_json(s);
  out.body["mode"] = mode_name(mode);
  out.body["field"] = out.field;
  out.body["form"] = form_kind_name(m.space.kind);
  out.body["nu"] = m.dim();
  out.body["jordan"] = m.jordan;
  out.body["prediction"] = jordan_prediction(s, mode);
  Json index = Json::array();
  for (const auto& [t, i] : m.index) index.push_back({t, i});
  out.body["basis"] = index;
  out.body["gram"] = matrix_json(m.space.gram);
  out.body["g"] = matrix_json(m.g);
  Json checks;
  checks["isometry"] = true;
  checks["nilpotent"] = true;
  checks["jordan_matches"] = true;
  checks["adapted"] = check_json(check_adapted(m, canonical_collection(m)));
  checks["round_trip"] = check_json(rt);
  out.body["checks"] = checks;
  out.falsified = !rt.pass;
  std::ostringstream csv;
  csv << "row";
  for (std::size_t j = 0; j < m.dim(); ++j) csv << ",c" << j;
  csv << "\n";
  for (std::size_t i = 0; i < m.dim(); ++i) {
    csv << i;
    for (std::size_t j = 0; j < m.dim(); ++j) csv << "," << m.g(i, j).to_string();
    csv << "\n";
  }
  out.csv = csv.str();
  return out;
}

// Every model-level check on one shape; failures are collected, not thrown.
Json verify_one(const ShapeSeq& s, Mode mode, const Field& field, bool& ok) {
  Json j;
  j["shape"] = s.to_string();
  const auto fail = [&](const std::string& what) {
    ok = false;
    j["failures"].push_back(what);
  };
  j["failures"] = Json::array();
  try {
    const IsometryModel m = build_model(s, mode, field);
    j["field"] = m.field()->name();
    j["jordan"] = m.jordan;
    const CheckReport rt = round_trip_check(m);
    j["round_trip"] = rt.pass;
    if (!rt.pass) fail("round trip: " + rt.failures.front());
    const FlagPair fl = flags_from(m);
    const CheckReport iso_v = check_iso_flag(m.space, fl.v, s.n());
    const CheckReport iso_w = check_iso_flag(m.space, fl.v_prime, s.n());
    j["isotropic"] = iso_v.pass && iso_w.pass;
    if (!iso_v.pass) fail("V: " + iso_v.failures.front());
    if (!iso_w.pass) fail("V': " + iso_w.failures.front());
    const bool pc = position_check(fl.v, fl.v_prime, s);
    j["position"] = pc;
    if (!pc) fail("position check");
    const bool gm = maps_flag(m.g, fl.v, fl.v_prime);
    j["g_maps_flag"] = gm;
    if (!gm) fail("g V != V'");
    const Collection c = canonical_collection(m);
    std::vector<int> eps;
    for (std::size_t t = 0; t < c.generators.size(); ++t) eps.push_back(t % 2 ? -1 : 1);
    const IntertwinerReport t1 = build_T(m, c, sign_flipped(c, eps));
    const ExactMatrix minus = FieldElement::from_int(m.field(), -1) * ExactMatrix::identity(m.dim(), m.field());
    const IntertwinerReport t2 = build_T(m, c, conjugated(c, minus));
    j["intertwiner_sign_flip"] = t1.all();
    j["intertwiner_central"] = t2.all();
    j["central_identity_component"] = t2.identity_component;
    Json splits = Json::array();
    const PsiVector ps = psi(s);
    for (int r = 1; r <= s.sigma(); ++r) {
      if (mode == Mode::OrthogonalOdd && ps.at(r) != -1) continue;
      const CheckReport sp = split_check(m, r);
      splits.push_back({{"r", r}, {"pass", sp.pass}});
      if (!sp.pass) fail("split at " + std::to_string(r) + ": " + sp.failures.front());
    }
    j["splits"] = splits;
    j["diagnostics"] = diagnostics_json(m.table->diagnostics());
  } catch (const VerificationFailed& e) {
    fail(e.what());
  } catch (const NotNilpotent& e) {
    fail(e.what());
  }
  j["ok"] = j["failures"].empty();
  return j;
}

Output cmd_verify(const Options& o) {
  const Mode mode = parse_mode(o.mode);
  const Field field = parse_field(o.field);
  std::vector<ShapeSeq> shapes;
  if (!o.shape.empty()) {
    shapes.push_back(require_shape(o));
  } else {
    for (const auto& s : shapes_up_to(o.n > 0 ? o.n : 5, mode)) {
      if (mode == Mode::SymplecticOrChar2 && field->characteristic() != 2 && s.kappa() == 1) continue;
      shapes.push_back(s);
    }
  }
  Output out;
  out.field = field_json(field);
  out.body["mode"] = mode_name(mode);
  out.body["field"] = out.field;
  Json results = Json::array();
  bool all_ok = true;
  std::ostringstream csv;
  csv << "shape,ok,failures\n";
  for (const auto& s : shapes) {
    bool ok = true;
    Json r = verify_one(s, mode, field, ok);
    all_ok = all_ok && ok;
    csv << "\"" << s.to_string() << "\"," << (ok ? "true" : "false") << "," << r["failures"].size() << "\n";
    results.push_back(std::move(r));
  }
  out.body["results"] = results;
  out.body["all_ok"] = all_ok;
  out.falsified = !all_ok;
  out.csv = csv.str();
  return out;
}

Output cmd_flags(const Options& o) {
  const ShapeSeq s = require_shape(o);
  const Mode mode = parse_mode(o.mode);
  const IsometryModel m = build_model(s, mode, parse_field(o.field));
  const FlagPair fl = flags_from(m);
  Output out;
  out.field = field_json(m.field());
  out.body["shape"] = shape_json(s);
  out.body["mode"] = mode_name(mode);
  out.body["field"] = out.field;
  auto flag_json = [](const IsoFlag& f) {
    Json a = Json::array();
    for (const auto& sp : f.spaces) a.push_back(matrix_json(sp.transpose()));
    return a;
  };
  out.body["V"] = flag_json(fl.v);
  out.body["V_prime"] = flag_json(fl.v_prime);
  const CheckReport iso_v = check_iso_flag(m.space, fl.v, s.n());
  const CheckReport iso_w = check_iso_flag(m.space, fl.v_prime, s.n());
  const bool pc = position_check(fl.v, fl.v_prime, s);
  const bool gm = maps_flag(m.g, fl.v, fl.v_prime);
  out.body["checks"] = {{"V_isotropic", check_json(iso_v)},
                        {"V_prime_isotropic", check_json(iso_w)},
                        {"position", pc},
                        {"g_maps_flag", gm}};
  out.falsified = !(iso_v.pass && iso_w.pass && pc && gm);
  std::ostringstream csv;
  csv << "i,dim_V,dim_V_prime,dim_cap\n";
  for (std::size_t i = 0; i < fl.v.spaces.size(); ++i) {
    csv << i << "," << span_dim(fl.v.spaces[i]) << "," << span_dim(fl.v_prime.spaces[i]) << ","
        << intersection_dim(fl.v.spaces[i], fl.v_prime.spaces[i]) << "\n";
  }
  out.csv = csv.str();
  return out;
}

Output cmd_count(const Options& o) {
  if (o.n < 1) throw UsageError("--n (rank) must be >= 1");
  if (o.type.size() != 1) throw UsageError("--type is one of A, B, C, D");
  const char type = o.type[0];
  std::optional<ShapeSeq> shape;
  FiniteFormSpace space;
  std::vector<int> gamma;
  switch (type) {
    case 'A':
      space = make_space(SpaceKind::TypeA, o.n + 1, o.q);
      gamma = {o.n + 1};
      break;
    case 'C':
      shape = o.shape.empty() ? ShapeSeq({o.n}, 0) : ShapeSeq::parse(o.shape, 0);
      space = make_space(SpaceKind::Symplectic, 2 * o.n, o.q);
      gamma = jordan_prediction(*shape, Mode::SymplecticOrChar2);
      break;
    case 'B':
      shape = o.shape.empty() ? ShapeSeq({o.n}, 1) : ShapeSeq::parse(o.shape, 1);
      space = make_space(SpaceKind::OrthogonalOdd, 2 * o.n + 1, o.q);
      gamma = jordan_prediction(*shape, Mode::OrthogonalOdd);
      break;
    case 'D':
      shape = ShapeSeq::parse(o.shape.empty() ? "" : o.shape, 0);
      space = make_space(SpaceKind::OrthogonalEven, 2 * o.n, o.q);
      gamma = jordan_prediction(*shape, Mode::OrthogonalOdd);
      break;
    default:
      throw UsageError("--type is one of A, B, C, D");
  }
  if (shape && shape->n() != o.n) throw UsageError("shape must have sum equal to the rank");
  if (!o.gamma.empty()) gamma = parse_int_list(o.gamma);
  CountOptions co;
  co.jobs = o.jobs;
  co.per_g = o.format == "csv";
  const PositionSpec spec = shape ? PositionSpec(*shape) : PositionSpec(Coxeter{});
  const auto t0 = std::chrono::steady_clock::now();
  const CountResult r = count_pairs(space, spec, gamma, co);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Output out;
  const Json details = count_json(r);
  out.body["type"] = std::string(1, type);
  out.body["n"] = o.n;
  out.body["q"] = o.q;
  out.body["shape"] = shape ? shape_json(*shape) : Json(nullptr);
  out.body["gamma"] = r.gamma;
  out.body["count"] = r.count;
  out.body["adjoint_order"] = details["adjoint_order"];
  out.body["verdict"] = details["verdict"];
  out.body["runtime"] = o.timing ? Json(secs) : Json(nullptr);
  out.body["details"] = details;
  out.falsified = !r.double_count_agrees;
  std::ostringstream csv;
  csv << "element,count\n";
  for (std::size_t k = 0; k < r.per_g.size(); ++k) csv << k << "," << r.per_g[k] << "\n";
  out.csv = csv.str();
  return out;
}

Output cmd_conjecture(const Options& o) {
  const int kmax = o.kmax > 0 ? o.kmax : 4;
  if (kmax < 2) throw UsageError("--kmax must be >= 2");
  Output out;
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "k,value,square,expected,matches,asserted\n";
  for (int k = 2; k <= kmax; ++k) {
    const SquareCheck c = check_square_conjecture(k);
    const bool asserted = k <= 4;
    if (asserted && !c.matches) out.falsified = true;
    rows.push_back({{"k", k},
                    {"value", c.value.to_string()},
                    {"field", c.value.field()->name()},
                    {"square", c.square.to_string()},
                    {"expected", c.expected.get_str()},
                    {"matches", c.matches},
                    {"asserted", asserted}});
    csv << k << "," << c.value.to_string() << "," << c.square.to_string() << "," << c.expected.get_str() << ","
        << (c.matches ? "true" : "false") << "," << (asserted ? "true" : "false") << "\n";
  }
  out.body["results"] = rows;
  out.body["all_matches"] = std::all_of(rows.begin(), rows.end(), [](const Json& r) { return r["matches"].get<bool>(); });
  out.csv = csv.str();
  return out;
}

Output cmd_identities(const Options& o) {
  const int mmax = o.kmax > 0 ? o.kmax : 8;
  Output out;
  Json rows = Json::array();
  std::ostringstream csv;
  csv << "M,negative_binomial,two_pole,two_pole_as_printed\n";
  for (int M = 1; M <= mmax; ++M) {
    const bool nb = verify_series_identity(SeriesIdentity::NegativeBinomial, M, o.degree);
    Json tp = nullptr;
    Json printed = nullptr;
    if (M >= 2) {
      tp = verify_series_identity(SeriesIdentity::TwoPole, M, o.degree);
      printed = verify_two_pole_as_printed(M, o.degree);
      if (!tp.get<bool>()) out.falsified = true;
    }
    if (!nb) out.falsified = true;
    rows.push_back({{"M", M}, {"negative_binomial", nb}, {"two_pole", tp}, {"two_pole_as_printed", printed}});
    csv << M << "," << (nb ? "true" : "false") << "," << (tp.is_null() ? "" : tp.dump()) << ","
        << (printed.is_null() ? "" : printed.dump()) << "\n";
  }
  out.body["degree"] = o.degree;
  out.body["results"] = rows;
  out.csv = csv.str();
  return out;
}

int emit(const std::string& command, const Options& o, Output out, double secs) {
  Json manifest;
  manifest["command"] = command;
  manifest["parameters"] = parameters_json(command, o);
  manifest["field"] = out.field;
  manifest["library_version"] = ELLHOMOG_VERSION;
  manifest["diagnostics"] = out.diagnostics;
  manifest["wall_time_seconds"] = o.timing ? Json(secs) : Json(nullptr);
  std::string text;
  if (o.format == "csv") {
    text = csv_manifest(manifest) + out.csv;
  } else {
    Json doc;
    doc["command"] = command;
    for (auto it = out.body.begin(); it != out.body.end(); ++it) doc[it.key()] = it.value();
    doc["manifest"] = manifest;
    text = doc.dump(2) + "\n";
  }
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw UsageError("cannot write " + o.out);
    f << text;
  }
  return out.falsified ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairing tables, isometry models and flag counts for elliptic unipotent classes"};
  app.require_subcommand(1);
  Options o;
  std::string window;

  auto common = [&](CLI::App* sub, bool shape, bool model) {
    if (shape) {
      sub->add_option("--shape", o.shape, "descending parts, e.g. 3,2,2,1");
      sub->add_option("--kappa", o.kappa, "0 or 1")->check(CLI::Range(0, 1));
    }
    if (model) {
      sub->add_option("--mode", o.mode, "symplectic-or-char2 | orthogonal-odd");
      sub->add_option("--field", o.field, "rat or gf:p[,m]");
      sub->add_option("--window", window, "bound on |delta|");
    }
    sub->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_flag("--timing", o.timing, "record wall time (output is then not byte-stable)");
    sub->add_option("--jobs", o.jobs, "worker cap for parallel kernels");
  };

  auto* psi_cmd = app.add_subcommand("psi", "psi vector and Jordan predictions of a shape");
  common(psi_cmd, true, false);
  auto* gram_cmd = app.add_subcommand("gram", "pairing table values");
  common(gram_cmd, true, true);
  auto* build_cmd = app.add_subcommand("build", "explicit space and isometry g");
  common(build_cmd, true, true);
  auto* verify_cmd = app.add_subcommand("verify", "all model checks for a shape or a sweep");
  common(verify_cmd, true, true);
  verify_cmd->add_option("--n", o.n, "sweep shapes with sum <= n when --shape is absent");
  auto* flags_cmd = app.add_subcommand("flags", "the flags V and V' = gV");
  common(flags_cmd, true, true);
  auto* count_cmd = app.add_subcommand("count", "brute-force pair count over GF(q)");
  common(count_cmd, false, false);
  count_cmd->add_option("--type", o.type, "A, B, C or D");
  count_cmd->add_option("--n", o.n, "rank");
  count_cmd->add_option("--q", o.q, "field order");
  count_cmd->add_option("--shape", o.shape, "shape for types B, C, D (default: the rank)");
  count_cmd->add_option("--gamma", o.gamma, "Jordan type of the unipotent elements");
  auto* conj_cmd = app.add_subcommand("conjecture210", "squares of |^1_{2k} : ^2_1| for shapes (k,1)");
  common(conj_cmd, false, false);
  conj_cmd->add_option("--kmax", o.kmax, "largest k (default 4)");
  auto* id_cmd = app.add_subcommand("identities", "series identities behind the closed forms");
  common(id_cmd, false, false);
  id_cmd->add_option("--kmax", o.kmax, "largest M (default 8)");
  id_cmd->add_option("--degree", o.degree, "series degree (default 20)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto t0 = std::chrono::steady_clock::now();
  std::string command;
  try {
    if (!window.empty()) {
      const auto w = parse_int_list(window);
      if (w.size() != 1 || w[0] < 0) throw UsageError("--window takes one non-negative integer");
      o.window = w[0];
    }
    Output out;
    if (psi_cmd->parsed()) {
      command = "psi";
      out = cmd_psi(o);
    } else if (gram_cmd->parsed()) {
      command = "gram";
      out = cmd_gram(o);
    } else if (build_cmd->parsed()) {
      command = "build";
      out = cmd_build(o);
    } else if (verify_cmd->parsed()) {
      command = "verify";
      out = cmd_verify(o);
    } else if (flags_cmd->parsed()) {
      command = "flags";
      out = cmd_flags(o);
    } else if (count_cmd->parsed()) {
      command = "count";
      out = cmd_count(o);
    } else if (conj_cmd->parsed()) {
      command = "conjecture210";
      out = cmd_conjecture(o);
    } else {
      command = "identities";
      out = cmd_identities(o);
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return emit(command, o, std::move(out), secs);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const BoundExceeded& e) {
    std::cerr << "bound exceeded: " << e.what() << "\n";
    return 3;
  } catch (const VerificationFailed& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const NotNilpotent& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const SingularMatrix& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
