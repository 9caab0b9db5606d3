#include <cmath>
#include <cstdio>
#include <sstream>

#include "condcvx/cli.hpp"
#include "condcvx/convex_sets.hpp"

namespace condcvx::cli {

namespace {

template <typename Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& name, const char* kind) {
  auto it = m.find(name);
  if (it == m.end()) throw InputError(std::string("unresolved ") + kind + " name '" + name + "'");
  return it->second;
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  return j.at(key);
}

std::vector<std::string> names(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of names");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw InputError(where + ": expected a name");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Vector<double> numbers(const Json& j, Index expect, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array");
  if (expect >= 0 && static_cast<Index>(j.size()) != expect)
    throw InputError(where + ": expected " + std::to_string(expect) + " entries, got " + std::to_string(j.size()));
  Vector<double> v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = read_number(j[i]);
  return v;
}

Matrix<double> rows(const Json& j, Index k, Index d, const std::string& where) {
  if (!j.is_array() || static_cast<Index>(j.size()) != k)
    throw InputError(where + ": expected " + std::to_string(k) + " rows");
  Matrix<double> m(k, d);
  for (Index i = 0; i < k; ++i) m.row(i) = numbers(j[static_cast<std::size_t>(i)], d, where).transpose();
  return m;
}

std::vector<CondVector<double>> vector_list(const Scenario& s, const Json& j, const std::string& where) {
  std::vector<CondVector<double>> out;
  for (const auto& n : names(j, where)) out.push_back(s.vector(n));
  return out;
}

HullKind hull_kind(const std::string& k) {
  static const std::map<std::string, HullKind> kinds = {{"stable", HullKind::stable}, {"sigma", HullKind::sigma},
                                                        {"convex", HullKind::convex}, {"cone", HullKind::cone},
                                                        {"affine", HullKind::affine}, {"linear", HullKind::linear}};
  auto it = kinds.find(k);
  if (it == kinds.end()) throw InputError("unknown hull kind '" + k + "'");
  return it->second;
}

void emit(const Json& j, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + Json(it.key()).dump() + ": ";
        emit(it.value(), out, indent + 2);
      }
      out += "\n" + std::string(static_cast<std::size_t>(indent), ' ') + "}";
      return;
    }
    case Json::value_t::array: {
      // Arrays of scalars stay on one line.
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += flat ? ", " : ",";
        if (!flat) out += "\n" + pad;
        emit(j[i], out, indent + 2);
      }
      if (!flat && !j.empty()) out += "\n" + std::string(static_cast<std::size_t>(indent), ' ');
      out += "]";
      return;
    }
    case Json::value_t::number_float: {
      const double v = j.get<double>();
      if (std::isinf(v)) {
        out += v > 0 ? "\"+inf\"" : "\"-inf\"";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", v == 0 ? 0.0 : v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Json number(double v) {
  if (std::isinf(v)) return v > 0 ? Json("+inf") : Json("-inf");
  return Json(v);
}

double read_number(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "+inf" || s == "inf") return infinity<double>();
    if (s == "-inf") return -infinity<double>();
  }
  throw InputError("expected a number or \"+inf\"/\"-inf\", got " + j.dump());
}

std::string render(const Json& doc) {
  std::string out;
  emit(doc, out, 0);
  out += "\n";
  return out;
}

const CondVector<double>& Scenario::vector(const std::string& name) const { return lookup(vectors, name, "vector"); }
const MeasurableSet& Scenario::set(const std::string& name) const { return lookup(sets, name, "set"); }
const CondExtScalar<double>& Scenario::scalar(const std::string& name) const {
  return lookup(scalars, name, "scalar");
}
CondScalar<double> Scenario::finite_scalar(const std::string& name) const {
  const auto& v = scalar(name);
  if (!v.all_finite()) throw InputError("scalar '" + name + "' must be finite");
  return v.finite();
}
const ConvexSetRep<double>& Scenario::convex_set(const std::string& name) const {
  return lookup(convex_sets, name, "convex set");
}
const CondSequence<double>& Scenario::sequence(const std::string& name) const {
  return lookup(sequences, name, "sequence");
}

Scenario parse_document(const Json& doc) {
  if (!doc.is_object()) throw InputError("document must be a JSON object");
  Scenario s;
  const Vector<double> w = numbers(field(doc, "weights", "document"), -1, "weights");
  try {
    s.space = MeasureSpace::make(std::vector<double>(w.data(), w.data() + w.size()));
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  const Index k = s.space->atoms();
  const auto& dj = field(doc, "d", "document");
  if (!dj.is_number_integer() || dj.get<long>() < 1) throw InputError("d must be a positive integer");
  s.dim = dj.get<Index>();

  try {
    if (doc.contains("vectors")) {
      for (const auto& [name, v] : doc["vectors"].items()) {
        s.vectors.emplace(name, CondVector<double>(s.space, rows(v, k, s.dim, "vector '" + name + "'")));
        s.vector_order.push_back(name);
      }
    }
    if (doc.contains("sets")) {
      for (const auto& [name, v] : doc["sets"].items()) {
        if (!v.is_array() || static_cast<Index>(v.size()) != k) throw InputError("set '" + name + "': expected K flags");
        Mask m(k);
        for (Index i = 0; i < k; ++i) {
          const auto& e = v[static_cast<std::size_t>(i)];
          if (e.is_boolean()) m(i) = e.get<bool>();
          else if (e.is_number_integer() && (e.get<int>() == 0 || e.get<int>() == 1)) m(i) = e.get<int>() == 1;
          else throw InputError("set '" + name + "': flags must be 0/1");
        }
        s.sets.emplace(name, MeasurableSet(s.space, std::move(m)));
      }
    }
    if (doc.contains("scalars")) {
      for (const auto& [name, v] : doc["scalars"].items()) {
        Vector<double> vals = numbers(v, k, "scalar '" + name + "'");
        s.scalars.emplace(name, CondExtScalar<double>(std::move(vals)));
      }
    }
    if (doc.contains("convex_sets")) {
      for (const auto& [name, v] : doc["convex_sets"].items()) {
        const std::string where = "convex set '" + name + "'";
        if (v.contains("hull")) {
          s.convex_sets.emplace(name, hull(vector_list(s, field(v, "generators", where), where),
                                           hull_kind(v["hull"].get<std::string>())));
          continue;
        }
        auto pts = vector_list(s, field(v, "points", where), where);
        auto rays = v.contains("rays") ? vector_list(s, v["rays"], where) : std::vector<CondVector<double>>{};
        auto lines = v.contains("lines") ? vector_list(s, v["lines"], where) : std::vector<CondVector<double>>{};
        s.convex_sets.emplace(name, ConvexSetRep<double>(std::move(pts), std::move(rays), std::move(lines)));
      }
    }
    if (doc.contains("functions")) {
      for (const auto& [name, v] : doc["functions"].items()) {
        const std::string where = "function '" + name + "'";
        if (v.contains("pieces")) {
          std::vector<AffinePiece<double>> pieces;
          for (const auto& p : v["pieces"]) {
            if (!p.is_array() || p.size() != 2) throw InputError(where + ": pieces are [slope, offset] name pairs");
            pieces.push_back({s.vector(p[0].get<std::string>()), s.finite_scalar(p[1].get<std::string>())});
          }
          std::optional<ConvexSetRep<double>> dom;
          if (v.contains("domain")) dom = s.convex_set(v["domain"].get<std::string>());
          s.max_affine.emplace(name, MaxAffineFn<double>(std::move(pieces), std::move(dom)));
        } else {
          const Vector<double> mins = numbers(field(v, "mins", where), -1, where + " mins");
          const auto grid = Lattice<double>::from_bounds(mins, numbers(field(v, "maxs", where), mins.size(), where),
                                                         numbers(field(v, "steps", where), mins.size(), where));
          s.grids.emplace(name, GridFn<double>(s.space, grid, rows(field(v, "values", where), k, grid.nodes(), where)));
        }
      }
    }
    if (doc.contains("sequences")) {
      for (const auto& [name, v] : doc["sequences"].items()) {
        const std::string where = "sequence '" + name + "'";
        if (v.is_array()) {
          s.sequences.emplace(name, CondSequence<double>(vector_list(s, v, where)));
        } else {
          std::optional<CondScalar<double>> bound;
          if (v.contains("bound")) bound = s.finite_scalar(v["bound"].get<std::string>());
          s.sequences.emplace(name, CondSequence<double>(vector_list(s, field(v, "terms", where), where), bound));
        }
      }
    }
  } catch (const InputError&) {
    throw;
  } catch (const Json::exception& e) {
    throw InputError(e.what());
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  if (doc.contains("args")) {
    if (!doc["args"].is_object()) throw InputError("args must be an object");
    s.args = doc["args"];
  }
  return s;
}

Writer::Writer(const std::string& command, const SpacePtr& space, Index dim) {
  doc_["command"] = command;
  Json w = Json::array();
  for (double x : space->weights()) w.push_back(number(x));
  doc_["weights"] = std::move(w);
  doc_["d"] = dim;
  doc_["vectors"] = Json::object();
  doc_["sets"] = Json::object();
  doc_["scalars"] = Json::object();
}

void Writer::vector(const std::string& name, const CondVector<double>& x) {
  Json rowsj = Json::array();
  for (Index i = 0; i < x.atoms(); ++i) {
    Json r = Json::array();
    for (Index a = 0; a < x.dim(); ++a) r.push_back(number(x.coords()(i, a)));
    rowsj.push_back(std::move(r));
  }
  doc_["vectors"][name] = std::move(rowsj);
}

void Writer::set(const std::string& name, const MeasurableSet& s) { set(name, s.mask()); }

void Writer::set(const std::string& name, const Mask& m) {
  Json flags = Json::array();
  for (Index i = 0; i < m.size(); ++i) flags.push_back(m(i) ? 1 : 0);
  doc_["sets"][name] = std::move(flags);
}

void Writer::scalar(const std::string& name, const Vector<double>& v) {
  Json vals = Json::array();
  for (Index i = 0; i < v.size(); ++i) vals.push_back(number(v(i)));
  doc_["scalars"][name] = std::move(vals);
}

void Writer::scalar(const std::string& name, const Eigen::VectorXi& v) {
  Json vals = Json::array();
  for (Index i = 0; i < v.size(); ++i) vals.push_back(v(i));
  doc_["scalars"][name] = std::move(vals);
}

void Writer::grid(const std::string& name, const GridFn<double>& f) {
  Json g;
  Json mins = Json::array(), maxs = Json::array(), steps = Json::array();
  const Vector<double> mx = f.grid.maxs();
  for (Index a = 0; a < f.grid.dim(); ++a) {
    mins.push_back(number(f.grid.mins(a)));
    maxs.push_back(number(mx(a)));
    steps.push_back(number(f.grid.steps(a)));
  }
  g["mins"] = std::move(mins);
  g["maxs"] = std::move(maxs);
  g["steps"] = std::move(steps);
  Json vals = Json::array();
  for (Index i = 0; i < f.values.rows(); ++i) {
    Json r = Json::array();
    for (Index n = 0; n < f.values.cols(); ++n) r.push_back(number(f.values(i, n)));
    vals.push_back(std::move(r));
  }
  g["values"] = std::move(vals);
  doc_["functions"][name] = std::move(g);
}

}  // namespace condcvx::cli
