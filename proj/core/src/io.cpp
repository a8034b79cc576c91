#include "quasicomb/io.hpp"

#include <array>
#include <fstream>
#include <sstream>

#include "quasicomb/errors.hpp"

namespace quasicomb::io {

namespace {

const std::array<const char*, 7> kKinds = {"lattice",       "coset_expression", "distribution",
                                           "testfunction",  "point_cloud",      "fit",
                                           "report"};

[[noreturn]] void fail(const std::string& what) { throw ParseError(what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) fail(std::string("expected an object with key '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing key '") + key + "'");
  return *it;
}

int get_dim(const Json& j) {
  const Json& d = field(j, "dim");
  if (!d.is_number_integer() || d.get<int>() < 1) fail("'dim' must be a positive integer");
  return d.get<int>();
}

Json encode_vec(std::span<const Real> v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(encode(r));
  return out;
}

Vec decode_vec(const Json& j, int dim) {
  if (!j.is_array()) fail("expected an array of numbers");
  if (dim >= 0 && static_cast<int>(j.size()) != dim)
    fail("expected " + std::to_string(dim) + " components, got " + std::to_string(j.size()));
  Vec v;
  for (const auto& e : j) v.push_back(decode_real(e));
  return v;
}

std::vector<double> decode_doubles(const Json& j, int dim = -1) {
  if (!j.is_array()) fail("expected an array of numbers");
  if (dim >= 0 && static_cast<int>(j.size()) != dim)
    fail("expected " + std::to_string(dim) + " components, got " + std::to_string(j.size()));
  std::vector<double> v;
  for (const auto& e : j) {
    if (!e.is_number()) fail("expected a number");
    v.push_back(e.get<double>());
  }
  return v;
}

Json encode_complex(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex decode_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail("expected a complex number [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

MultiIndex decode_index(const Json& j, int dim) {
  if (j.is_null()) return zero_index(dim);
  if (!j.is_array() || static_cast<int>(j.size()) != dim) fail("bad multi-index");
  MultiIndex k;
  for (const auto& e : j) {
    if (!e.is_number_integer() || e.get<int>() < 0) fail("multi-index entries must be >= 0");
    k.push_back(e.get<int>());
  }
  return k;
}

Json encode_points(const std::vector<std::vector<double>>& pts) {
  Json out = Json::array();
  for (const auto& p : pts) out.push_back(p);
  return out;
}

std::vector<std::vector<double>> decode_points(const Json& j, int dim) {
  if (!j.is_array()) fail("expected an array of points");
  std::vector<std::vector<double>> out;
  for (const auto& p : j) out.push_back(decode_doubles(p, dim));
  return out;
}

template <class F>
auto guarded(F&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ParseError&) {
    throw;
  } catch (const Json::exception& e) {
    fail(e.what());
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  } catch (const Error& e) {
    fail(e.what());
  }
}

}  // namespace

Json encode(const Real& r) {
  if (r.is_exact()) return r.to_string();
  return r.to_double();
}

Real decode_real(const Json& j) {
  if (j.is_number_integer()) return Real(mpq_class(j.dump()));
  if (j.is_number()) return Real::numeric(j.get<double>());
  if (j.is_string()) {
    try {
      return Real::parse(j.get<std::string>());
    } catch (const std::exception& e) {
      fail(e.what());
    }
  }
  fail("expected a number or a rational string");
}

Json encode(const Lattice& lattice) {
  const RMatrix& b = lattice.basis();
  Json rows = Json::array();
  for (int i = 0; i < b.rows; ++i) {
    Json row = Json::array();
    for (int j = 0; j < b.cols; ++j) row.push_back(encode(b(i, j)));
    rows.push_back(std::move(row));
  }
  return Json{{"dim", lattice.dim()}, {"basis", std::move(rows)}};
}

Lattice decode_lattice(const Json& j) {
  return guarded([&] {
    int d = get_dim(j);
    const Json& rows = field(j, "basis");
    if (!rows.is_array() || static_cast<int>(rows.size()) != d)
      fail("'basis' must have one row per dimension");
    int cols = -1;
    for (const auto& row : rows) {
      if (!row.is_array()) fail("basis rows must be arrays");
      if (cols >= 0 && static_cast<int>(row.size()) != cols) fail("ragged basis");
      cols = static_cast<int>(row.size());
    }
    RMatrix m(d, cols);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = decode_real(rows[r][c]);
    if (cols == d) return Lattice::canonicalize(m);
    return Lattice::from_generators(m);
  });
}

Json encode(const Coset& coset) {
  return Json{{"lattice", encode(coset.lattice())}, {"offset", encode_vec(coset.offset())}};
}

Coset decode_coset(const Json& j) {
  return guarded([&] {
    Lattice lat = decode_lattice(field(j, "lattice"));
    auto it = j.find("offset");
    if (it == j.end()) return Coset(std::move(lat));
    Vec off = decode_vec(*it, lat.dim());
    return Coset(std::move(lat), std::move(off));
  });
}

Json encode(const CosetExpression& expr) {
  using Op = CosetExpression::Op;
  if (expr.op() == Op::Leaf) return encode(expr.coset());
  const char* name = expr.op() == Op::Union ? "union"
                     : expr.op() == Op::Difference ? "diff"
                                                   : "intersect";
  Json args = Json::array();
  for (const auto& a : expr.args()) args.push_back(encode(a));
  return Json{{"op", name}, {"args", std::move(args)}};
}

CosetExpression decode_expression(const Json& j) {
  return guarded([&] {
    if (!j.is_object()) fail("expected an expression object");
    if (!j.contains("op")) return CosetExpression::leaf(decode_coset(j));
    const Json& op = field(j, "op");
    if (!op.is_string()) fail("'op' must be a string");
    const Json& args = field(j, "args");
    if (!args.is_array() || args.empty()) fail("'args' must be a nonempty array");
    std::vector<CosetExpression> sub;
    for (const auto& a : args) sub.push_back(decode_expression(a));
    std::string name = op.get<std::string>();
    if (name == "union") return CosetExpression::make(CosetExpression::Op::Union, std::move(sub));
    if (name == "intersect")
      return CosetExpression::make(CosetExpression::Op::Intersection, std::move(sub));
    if (name == "diff")
      return CosetExpression::make(CosetExpression::Op::Difference, std::move(sub));
    fail("unknown op '" + name + "'");
  });
}

Json encode(const WFunction& w) {
  Json out = Json::array();
  for (const auto& t : w.terms())
    out.push_back(Json{{"a", encode_complex(t.amp)}, {"s", encode_vec(t.freq)}});
  return out;
}

WFunction decode_wfunction(const Json& j, int dim) {
  return guarded([&] {
    if (!j.is_array()) fail("a W function is an array of {amp, freq}");
    std::vector<WTerm> terms;
    for (const auto& t : j)
      terms.push_back(WTerm{decode_complex(field(t, "a")), decode_vec(field(t, "s"), dim)});
    return WFunction(dim, std::move(terms));
  });
}

Json encode(const CombDistribution& f) {
  Json terms = Json::array();
  for (const auto& t : f.terms()) {
    Json support;
    if (t.is_coset()) {
      support = encode(t.coset());
    } else if (t.is_points()) {
      const auto& ps = t.points();
      Json pts = Json::array();
      Json ws = Json::array();
      for (std::size_t i = 0; i < ps.points.size(); ++i) {
        pts.push_back(encode_vec(ps.points[i]));
        ws.push_back(encode_complex(ps.weights[i]));
      }
      support = Json{{"points", std::move(pts)}, {"weights", std::move(ws)}};
    } else {
      support = Json{{"dense", true}};
    }
    terms.push_back(Json{{"support", std::move(support)},
                         {"m", t.m},
                         {"k", t.k},
                         {"coeff", encode(t.coeff)}});
  }
  return Json{{"dim", f.dim()}, {"terms", std::move(terms)}};
}

CombDistribution decode_distribution(const Json& j) {
  return guarded([&] {
    int d = get_dim(j);
    const Json& terms = field(j, "terms");
    if (!terms.is_array()) fail("'terms' must be an array");
    std::vector<CombTerm> out;
    for (const auto& t : terms) {
      const Json& s = field(t, "support");
      if (!s.is_object()) fail("'support' must be an object");
      MultiIndex m = decode_index(t.value("m", Json()), d);
      MultiIndex k = decode_index(t.value("k", Json()), d);
      WFunction coeff = t.contains("coeff") ? decode_wfunction(t["coeff"], d)
                                            : WFunction::constant(d, 1.0);
      Support support = DenseSupport{};
      if (s.contains("lattice")) {
        support = decode_coset(s);
      } else if (s.contains("points")) {
        PointSupport ps;
        for (const auto& p : field(s, "points")) ps.points.push_back(decode_vec(p, d));
        if (s.contains("weights")) {
          for (const auto& w : s["weights"]) ps.weights.push_back(decode_complex(w));
          if (ps.weights.size() != ps.points.size()) fail("one weight per point required");
        } else {
          ps.weights.assign(ps.points.size(), 1.0);
        }
        support = std::move(ps);
      } else if (s.value("dense", false)) {
        support = DenseSupport{};
      } else {
        fail("support must be a coset, a point list or {\"dense\": true}");
      }
      out.push_back(CombTerm{std::move(support), std::move(m), std::move(k), std::move(coeff)});
    }
    return CombDistribution(d, std::move(out));
  });
}

Json encode(const TestFunction& f) {
  Json atoms = Json::array();
  for (const auto& a : f.atoms()) {
    Json poly = Json::array();
    for (const auto& [n, c] : a.poly) poly.push_back(Json{{"n", n}, {"c", encode_complex(c)}});
    atoms.push_back(Json{{"poly", std::move(poly)},
                         {"width", a.width},
                         {"center", a.center},
                         {"modulation", a.modulation}});
  }
  return Json{{"dim", f.dim()}, {"atoms", std::move(atoms)}};
}

TestFunction decode_testfunction(const Json& j) {
  return guarded([&] {
    int d = get_dim(j);
    const Json& atoms = field(j, "atoms");
    if (!atoms.is_array()) fail("'atoms' must be an array");
    std::vector<Atom> out;
    for (const auto& a : atoms) {
      Atom atom;
      if (a.contains("poly")) {
        for (const auto& p : a["poly"])
          atom.poly[decode_index(field(p, "n"), d)] += decode_complex(field(p, "c"));
      } else {
        atom.poly[zero_index(d)] = 1.0;
      }
      atom.width = a.value("width", 1.0);
      if (!(atom.width > 0)) fail("atom width must be positive");
      atom.center = a.contains("center") ? decode_doubles(a["center"], d) : std::vector<double>(d);
      atom.modulation =
          a.contains("modulation") ? decode_doubles(a["modulation"], d) : std::vector<double>(d);
      out.push_back(std::move(atom));
    }
    return TestFunction(d, std::move(out));
  });
}

Json encode(const PointCloud& cloud) {
  Json amps = Json::array();
  for (auto c : cloud.amplitudes) amps.push_back(encode_complex(c));
  return Json{{"dim", cloud.dim},
              {"points", encode_points(cloud.points)},
              {"amplitudes", std::move(amps)},
              {"box_lo", cloud.box_lo},
              {"box_hi", cloud.box_hi}};
}

PointCloud decode_point_cloud(const Json& j) {
  return guarded([&] {
    int d = get_dim(j);
    auto pts = decode_points(field(j, "points"), d);
    std::vector<Complex> amps;
    if (j.contains("amplitudes"))
      for (const auto& a : j["amplitudes"]) amps.push_back(decode_complex(a));
    std::vector<double> lo = j.contains("box_lo") ? decode_doubles(j["box_lo"], d)
                                                  : std::vector<double>{};
    std::vector<double> hi = j.contains("box_hi") ? decode_doubles(j["box_hi"], d)
                                                  : std::vector<double>{};
    return PointCloud::from_points(std::move(pts), std::move(amps), std::move(lo), std::move(hi));
  });
}

Json encode(const CosetFit& fit) {
  Json cosets = Json::array();
  for (const auto& c : fit.cosets) cosets.push_back(encode(c));
  Json amps = Json::array();
  for (const auto& a : fit.amplitudes)
    amps.push_back(Json{{"count", a.count},
                        {"mean", encode_complex(a.mean)},
                        {"min_abs", a.min_abs},
                        {"max_abs", a.max_abs}});
  return Json{{"J", fit.J()},
              {"cosets", std::move(cosets)},
              {"coverage", fit.coverage},
              {"uncovered", encode_points(fit.uncovered)},
              {"overcover", encode_points(fit.overcover)},
              {"double_covered", encode_points(fit.double_covered)},
              {"amplitudes", std::move(amps)}};
}

CosetFit decode_fit(const Json& j) {
  return guarded([&] {
    CosetFit fit;
    for (const auto& c : field(j, "cosets")) fit.cosets.push_back(decode_coset(c));
    fit.coverage = j.value("coverage", std::vector<std::size_t>{});
    int d = fit.cosets.empty() ? -1 : fit.cosets.front().lattice().dim();
    if (j.contains("uncovered")) fit.uncovered = decode_points(j["uncovered"], d);
    if (j.contains("overcover")) fit.overcover = decode_points(j["overcover"], d);
    if (j.contains("double_covered")) fit.double_covered = decode_points(j["double_covered"], d);
    if (j.contains("amplitudes"))
      for (const auto& a : j["amplitudes"])
        fit.amplitudes.push_back(AmplitudeSummary{field(a, "count").get<std::size_t>(),
                                                  decode_complex(field(a, "mean")),
                                                  field(a, "min_abs").get<double>(),
                                                  field(a, "max_abs").get<double>()});
    return fit;
  });
}

Json encode(const NormalizedSystem& system) {
  Json cosets = Json::array();
  for (const auto& c : system.full_rank_cosets) cosets.push_back(encode(c));
  Json residue = Json::array();
  for (const auto& r : system.residue)
    residue.push_back(Json{{"coset", encode(r.coset)}, {"multiplicity", r.multiplicity}});
  return Json{{"dim", system.dim},
              {"full_rank_cosets", std::move(cosets)},
              {"residue", std::move(residue)}};
}

Document make_document(std::string kind, Json payload, Json meta) {
  return Document{std::move(kind), std::move(payload), std::move(meta)};
}

const Json& expect_kind(const Document& doc, std::string_view kind) {
  if (doc.kind != kind)
    fail("expected a '" + std::string(kind) + "' document, got '" + doc.kind + "'");
  return doc.payload;
}

std::string dump(const Document& doc) {
  Json j{{"format_version", kFormatVersion},
         {"kind", doc.kind},
         {"payload", doc.payload},
         {"meta", doc.meta}};
  return j.dump(2) + "\n";
}

Document parse(std::string_view text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    fail(std::string("malformed JSON: ") + e.what());
  }
  const Json& v = field(j, "format_version");
  if (!v.is_string() || v.get<std::string>() != kFormatVersion)
    fail("unsupported format_version " + v.dump());
  const Json& k = field(j, "kind");
  if (!k.is_string()) fail("'kind' must be a string");
  std::string kind = k.get<std::string>();
  bool known = false;
  for (const char* name : kKinds) known = known || kind == name;
  if (!known) fail("unknown document kind '" + kind + "'");
  Json meta = j.value("meta", Json::object());
  return Document{std::move(kind), field(j, "payload"), std::move(meta)};
}

Document read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void write_file(const std::filesystem::path& path, const Document& doc) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dump(doc);
}

}  // namespace quasicomb::io
