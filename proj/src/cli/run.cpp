#include <cmath>
#include <functional>
#include <sstream>

#include "condcvx/cli.hpp"
#include "condcvx/convex_sets.hpp"
#include "condcvx/parallel.hpp"
#include "condcvx/random.hpp"
#include "condcvx/stratified.hpp"

namespace condcvx::cli {

namespace {

// Command arguments: document `args` overridden by --arg key=value.
class Args {
 public:
  Args(const Json& doc_args, const std::map<std::string, std::string>& overrides)
      : doc_(doc_args), overrides_(overrides) {}

  bool has(const std::string& key) const { return overrides_.count(key) || doc_.contains(key); }

  std::string str(const std::string& key, const std::string& fallback = {}) const {
    if (auto it = overrides_.find(key); it != overrides_.end()) return it->second;
    if (doc_.contains(key)) {
      if (!doc_[key].is_string()) throw InputError("argument '" + key + "' must be a name");
      return doc_[key].get<std::string>();
    }
    if (fallback.empty()) throw InputError("missing argument '" + key + "'");
    return fallback;
  }

  std::vector<std::string> list(const std::string& key) const {
    std::vector<std::string> out;
    if (auto it = overrides_.find(key); it != overrides_.end()) {
      std::stringstream ss(it->second);
      for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
      return out;
    }
    if (!doc_.contains(key)) throw InputError("missing argument '" + key + "'");
    for (const auto& e : doc_[key]) out.push_back(e.get<std::string>());
    return out;
  }

  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    if (auto it = overrides_.find(key); it != overrides_.end()) {
      std::stringstream ss(it->second);
      for (std::string item; std::getline(ss, item, ',');) out.push_back(read_number(Json::parse(item)));
      return out;
    }
    if (!doc_.contains(key)) throw InputError("missing argument '" + key + "'");
    for (const auto& e : doc_[key]) out.push_back(read_number(e));
    return out;
  }

  long integer(const std::string& key, long fallback) const {
    if (auto it = overrides_.find(key); it != overrides_.end()) return std::stol(it->second);
    if (doc_.contains(key)) return doc_[key].get<long>();
    return fallback;
  }

 private:
  const Json& doc_;
  const std::map<std::string, std::string>& overrides_;
};

struct Context {
  const Options& opt;
  const Scenario& s;
  Args args;
  Writer out;
  bool demanded_failure = false;  // a failure set the command wanted empty was not

  void require_full(const MeasurableSet& m) {
    if (!m.is_full()) demanded_failure = true;
  }
  void require_empty(const MeasurableSet& m) {
    if (!m.is_null()) demanded_failure = true;
  }
};

std::vector<CondVector<double>> generators(Context& c) {
  std::vector<std::string> ns = c.args.has("generators") ? c.args.list("generators") : c.s.vector_order;
  std::vector<CondVector<double>> g;
  for (const auto& n : ns) g.push_back(c.s.vector(n));
  if (g.empty()) throw InputError("no generators given");
  return g;
}

// Per-atom distance of each generator from the span of the first label rows.
Vector<double> span_residual(const std::vector<CondVector<double>>& gens, const std::vector<CondVector<double>>& vecs,
                             const Eigen::VectorXi& labels) {
  const Index k = labels.size();
  Vector<double> res = Vector<double>::Zero(k);
  for (Index atom = 0; atom < k; ++atom) {
    const Index r = labels(atom);
    const Index d = gens.front().dim();
    Matrix<double> b(d, r);
    for (Index j = 0; j < r; ++j) b.col(j) = vecs[static_cast<std::size_t>(j)].row(atom).transpose();
    for (const auto& g : gens) {
      const Vector<double> x = g.row(atom).transpose();
      const Vector<double> fit = r ? Vector<double>(b * b.colPivHouseholderQr().solve(x)) : Vector<double>::Zero(d);
      res(atom) = std::max(res(atom), (x - fit).norm());
    }
  }
  return res;
}

void cmd_basis(Context& c) {
  const auto gens = generators(c);
  const auto basis = rank_partition<double>(gens, c.opt.tol);
  c.out.scalar("labels", basis.labels);
  for (Index i = 0; i < basis.rank(); ++i)
    c.out.vector("X" + std::to_string(i + 1), basis.vectors[static_cast<std::size_t>(i)]);
  c.out.certificates()["rank_max"] = basis.rank();
  c.out.scalar("span_residual", span_residual(gens, basis.vectors, basis.labels));
}

void cmd_orthonormalize(Context& c) {
  const auto gens = generators(c);
  const auto frame = orthonormalize(rank_partition<double>(gens, c.opt.tol));
  c.out.scalar("labels", frame.labels);
  for (Index i = 0; i < frame.dim; ++i) c.out.vector("U" + std::to_string(i + 1), frame.frame[static_cast<std::size_t>(i)]);
  Vector<double> gram(frame.labels.size());
  for (Index atom = 0; atom < gram.size(); ++atom) {
    const Matrix<double> u = frame.at(atom);
    gram(atom) = (u * u.transpose() - Matrix<double>::Identity(frame.dim, frame.dim)).cwiseAbs().maxCoeff();
  }
  c.out.scalar("gram_deviation", gram);
  c.out.scalar("span_residual", span_residual(gens, frame.frame, frame.labels));
}

void cmd_decompose(Context& c) {
  const auto gens = generators(c);
  const auto& x = c.s.vector(c.args.str("x"));
  const auto frame = submodule_frame<double>(gens, c.opt.tol);
  const auto [y, z] = decompose(x, frame);
  c.out.vector("Y", y);
  c.out.vector("Z", z);
  c.out.scalar("labels", frame.labels);
  Vector<double> orth = Vector<double>::Zero(x.atoms());
  for (const auto& g : gens) orth = orth.cwiseMax(inner(z, g).values().cwiseAbs());
  c.out.scalar("orthogonality", orth);
  c.out.scalar("reconstruction", Vector<double>((x.coords() - y.coords() - z.coords()).cwiseAbs().rowwise().maxCoeff()));
}

SeparationKind separation_kind(const std::string& k) {
  if (k == "strong") return SeparationKind::strong;
  if (k == "weak") return SeparationKind::weak;
  if (k == "proper") return SeparationKind::proper;
  throw InputError("unknown separation kind '" + k + "'");
}

void cmd_separate(Context& c) {
  const auto& cs = c.s.convex_set(c.args.str("c"));
  const auto& ds = c.s.convex_set(c.args.str("d"));
  const auto r = separate(cs, ds, separation_kind(c.opt.kind), c.opt.tol);
  c.out.vector("Z", r.z);
  c.out.scalar("gap", r.gap.values());
  c.out.scalar("sup_gap", r.sup_gap.values());
  c.out.set("failure", r.failure);
  c.out.certificates()["kind"] = c.opt.kind;
  c.out.scalar("norm_sq", inner(r.z, r.z).values());
  c.require_empty(r.failure);
}

const MaxAffineFn<double>& max_affine(Context& c, const std::string& key) {
  const auto name = c.args.str(key);
  auto it = c.s.max_affine.find(name);
  if (it == c.s.max_affine.end()) throw InputError("unresolved max-affine function name '" + name + "'");
  return it->second;
}

const GridFn<double>& grid_fn(Context& c, const std::string& name) {
  auto it = c.s.grids.find(name);
  if (it == c.s.grids.end()) throw InputError("unresolved grid function name '" + name + "'");
  return it->second;
}

void cmd_hahn_banach(Context& c) {
  const auto& p = max_affine(c, "p");
  const auto& e = c.s.convex_set(c.args.str("e"));
  std::vector<CondScalar<double>> g;
  for (const auto& n : c.args.list("g")) g.push_back(c.s.finite_scalar(n));
  const auto h = hahn_banach_extend<double>(p, e, g, c.opt.tol);
  c.out.vector("H", h);

  const auto frame = submodule_frame<double>(e.lines, c.opt.tol);
  const Index k = h.atoms(), d = h.dim();
  Vector<double> ext = Vector<double>::Zero(k), dom = Vector<double>::Constant(k, -infinity<double>());
  const int probes = static_cast<int>(c.args.integer("probes", 1000));
  for_each_atom(k, [&](Index atom) {
    for (Index j = 0; j < frame.labels(atom) && j < static_cast<Index>(g.size()); ++j)
      ext(atom) = std::max(ext(atom), std::abs(frame.frame[static_cast<std::size_t>(j)].row(atom).dot(h.row(atom)) -
                                               g[static_cast<std::size_t>(j)][atom]));
    auto rng = atom_rng(c.opt.seed, atom, 3);
    const Matrix<double> ys = p.slopes(atom);
    const Vector<double> zs = p.offsets(atom);
    for (int i = 0; i < probes; ++i) {
      const Vector<double> x = std::exp2(double(i % 11) - 5) * random_unit<double>(rng, d);
      dom(atom) = std::max(dom(atom), h.row(atom).dot(x) - (ys * x + zs).maxCoeff());
    }
  });
  c.out.scalar("extension_error", ext);
  c.out.scalar("domination_excess", dom);
}

Lattice<double> dual_from_args(Context& c, Index dim) {
  auto vec = [&](const char* key) {
    const auto v = c.args.numbers(key);
    if (static_cast<Index>(v.size()) != dim) throw InputError(std::string(key) + ": wrong dimension");
    return Vector<double>(Eigen::Map<const Vector<double>>(v.data(), dim));
  };
  return Lattice<double>::from_bounds(vec("dual_mins"), vec("dual_maxs"), vec("dual_steps"));
}

void cmd_conjugate(Context& c) {
  const auto name = c.args.str("f");
  if (c.s.max_affine.count(name)) {
    const auto& f = c.s.max_affine.at(name);
    c.out.grid("conjugate", conjugate(f, dual_from_args(c, f.dim())));
    return;
  }
  const auto& f = grid_fn(c, name);
  const auto dual = c.args.has("dual_mins") ? dual_from_args(c, f.grid.dim()) : default_dual_lattice(f);
  Eigen::MatrixXi argmax;
  const auto conj = conjugate(f, dual, &argmax);
  c.out.grid("conjugate", conj);
  c.out.set("improper", f.improper());
  c.require_empty(MeasurableSet(c.s.space, f.improper()));
}

void cmd_fenchel_moreau(Context& c) {
  const auto& f = grid_fn(c, c.args.str("f"));
  std::optional<Lattice<double>> dual;
  if (c.args.has("dual_mins")) dual = dual_from_args(c, f.grid.dim());
  const auto r = fenchel_moreau_check(f, dual);
  c.out.grid("conjugate", r.conj);
  c.out.grid("biconjugate", r.biconj);
  c.out.grid("triconjugate", r.triconj);
  c.out.grid("envelope", r.envelope);
  c.out.scalar("max_deviation", r.max_deviation.values());
  c.out.scalar("min_gap", r.min_gap.values());
  c.out.scalar("conj_mismatch", r.conj_mismatch.values());
  const double step = f.grid.steps.maxCoeff();
  const Mask close = r.max_deviation.values().array() <= 2 * step;
  const Mask below = r.min_gap.values().array() >= -1e-9;
  const Mask exact = r.conj_mismatch.values().array() == 0;
  c.out.set("envelope_within_two_steps", close);
  c.out.set("dominates_biconjugate", below);
  c.out.set("conjugate_equals_triconjugate", exact);
  c.out.certificates()["grid_step"] = number(step);
  c.require_full(MeasurableSet(c.s.space, close && below && exact));
}

void cmd_subgrad(Context& c) {
  const auto& f = max_affine(c, "f");
  const auto& x0 = c.s.vector(c.args.str("x0"));
  const auto probes = static_cast<int>(c.args.integer("probes", 1000));
  CondVector<double> y = c.args.has("v")
                             ? bounded_subgradient(f, x0, c.s.finite_scalar(c.args.str("v")), c.opt.seed, 64, c.opt.tol)
                             : subdifferential(f, x0, c.opt.tol).representative;
  c.out.vector("Y", y);
  const auto fx0 = eval(f, x0, c.opt.tol);
  const Index k = x0.atoms(), d = x0.dim();
  Vector<double> worst = Vector<double>::Constant(k, -infinity<double>());
  for_each_atom(k, [&](Index atom) {
    auto rng = atom_rng(c.opt.seed, atom, 4);
    const Matrix<double> ys = f.slopes(atom);
    const Vector<double> zs = f.offsets(atom);
    const Vector<double> xr = x0.row(atom).transpose();
    for (int i = 0; i < probes; ++i) {
      const Vector<double> h = kGrowthRadii[i % 5] * random_unit<double>(rng, d);
      const double fx = (ys * (xr + h) + zs).maxCoeff();
      worst(atom) = std::max(worst(atom), y.row(atom).dot(h) - (fx - fx0[atom]));
    }
  });
  c.out.scalar("inequality_violation", worst);
  if (c.args.has("direction")) {
    c.out.scalar("derivative", directional_derivative(f, x0, c.s.vector(c.args.str("direction")), c.opt.tol).values());
  }
  const auto diff = differentiability_check(f, x0, c.opt.seed, 20, c.opt.tol);
  c.out.set("differentiable", diff.diff_on);
  c.out.scalar("quotient_tail", diff.quotient_tail.values());
}

void cmd_argmin(Context& c) {
  const auto& f = max_affine(c, "f");
  const auto& cs = c.s.convex_set(c.args.str("c"));
  const auto r = argmin(f, cs, c.opt.tol);
  c.out.vector("X", r.x);
  c.out.scalar("value", r.value.values());
  c.out.set("unique", r.unique_on);
  c.out.set("coercive", r.coercive_on);
  c.out.set("unbounded", r.unbounded_on);
  c.out.vector("ray", r.ray);
  c.require_empty(r.unbounded_on);
}

void cmd_infconv(Context& c) {
  std::vector<GridFn<double>> fs;
  for (const auto& n : c.args.list("fs")) fs.push_back(grid_fn(c, n));
  if (fs.empty()) throw InputError("infconv needs at least one function");
  const auto r = inf_convolution(fs);
  const auto checks = infconv_checks(fs);
  c.out.grid("infconv", r.g);
  c.out.scalar("midpoint_violation", r.midpoint_violation.values());
  c.out.scalar("conj_deviation", checks.conj_deviation.values());
  if (checks.subdiff_evaluated) c.out.scalar("subdiff_violation", checks.subdiff_violation.values());
  c.out.scalar("interior_violations", checks.interior_violations);
  c.out.scalar("interior_checked", checks.interior_checked);
  c.out.certificates()["slope_step"] = number(checks.slope_step);
}

void cmd_bw(Context& c) {
  const auto& seq = c.s.sequence(c.args.str("sequence"));
  const auto r = bw_extract(seq, c.opt.depth, c.opt.slack);
  for (std::size_t j = 0; j < r.indices.size(); ++j) c.out.scalar("N" + std::to_string(j + 1), r.indices[j].values());
  c.out.vector("limit", r.limit);
  c.out.vector("levels", r.levels);
  c.out.scalar("max_excess", r.max_excess.values());
  c.out.certificates()["depth"] = c.opt.depth;
  c.out.certificates()["slack"] = number(c.opt.slack);
}

void cmd_cauchy(Context& c) {
  const auto& seq = c.s.sequence(c.args.str("sequence"));
  std::vector<CondScalar<double>> schedule;
  for (const auto& n : c.args.list("schedule")) schedule.push_back(c.s.finite_scalar(n));
  const auto r = cauchy_limit(seq, schedule, static_cast<Index>(c.args.integer("min_tail", 0)));
  c.out.vector("limit", r.limit);
  c.out.set("cauchy", r.cauchy_on);
  for (std::size_t e = 0; e < schedule.size(); ++e) {
    c.out.scalar("cut" + std::to_string(e + 1), r.cuts[e]);
    c.out.scalar("diameter" + std::to_string(e + 1), r.diameters[e].values());
  }
  c.require_full(r.cauchy_on);
}

void cmd_bounded_test(Context& c) {
  const auto r = bounded_test(c.s.convex_set(c.args.str("c")), c.opt.tol);
  c.out.set("bounded", r.bounded_on);
  c.out.vector("witness", r.witness);
  c.require_full(r.bounded_on);
}

void cmd_ri_test(Context& c) {
  InteriorMode mode;
  if (c.opt.mode == "relative") mode = InteriorMode::relative;
  else if (c.opt.mode == "interior") mode = InteriorMode::interior;
  else throw InputError("unknown mode '" + c.opt.mode + "'");
  const auto inside = ri_membership(c.s.vector(c.args.str("x")), c.s.convex_set(c.args.str("c")), mode, c.opt.tol);
  c.out.set("inside", inside);
  c.out.certificates()["mode"] = c.opt.mode;
  c.require_full(inside);
}

const std::map<std::string, std::function<void(Context&)>>& table() {
  static const std::map<std::string, std::function<void(Context&)>> t = {
      {"basis", cmd_basis},           {"orthonormalize", cmd_orthonormalize},
      {"decompose", cmd_decompose},   {"separate", cmd_separate},
      {"hahn-banach", cmd_hahn_banach}, {"conjugate", cmd_conjugate},
      {"fenchel-moreau", cmd_fenchel_moreau}, {"subgrad", cmd_subgrad},
      {"argmin", cmd_argmin},         {"infconv", cmd_infconv},
      {"bw", cmd_bw},                 {"cauchy", cmd_cauchy},
      {"bounded-test", cmd_bounded_test}, {"ri-test", cmd_ri_test}};
  return t;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : table()) n.push_back(k);
    return n;
  }();
  return names;
}

Outcome run(const Options& options, const std::string& document_text) {
  const auto it = table().find(options.command);
  if (it == table().end()) return {1, {}, "unknown command '" + options.command + "'"};
  if (options.threads < 1) return {1, {}, "--threads must be >= 1"};
  set_thread_count(options.threads);

  Json doc;
  try {
    doc = Json::parse(document_text);
  } catch (const Json::parse_error& e) {
    return {1, {}, std::string("malformed document: ") + e.what()};
  }
  std::optional<Scenario> scenario;
  try {
    scenario = parse_document(doc);
  } catch (const Error& e) {
    return {1, {}, e.what()};
  }

  Context ctx{options, *scenario, Args(scenario->args, options.args),
              Writer(options.command, scenario->space, scenario->dim)};
  try {
    it->second(ctx);
  } catch (const PreconditionError& e) {
    Writer fail(options.command, scenario->space, scenario->dim);
    fail.set("failure", e.atoms());
    fail.root()["error"] = e.what();
    fail.certificates()["failure_count"] = static_cast<Index>(e.atoms().count());
    return {2, render(fail.root()), e.what()};
  } catch (const InputError& e) {
    return {1, {}, e.what()};
  } catch (const Json::exception& e) {
    return {1, {}, e.what()};
  } catch (const std::invalid_argument& e) {
    return {1, {}, std::string("bad argument value: ") + e.what()};
  } catch (const Error& e) {
    return {1, {}, e.what()};
  }
  if (ctx.out.root().find("certificates") == ctx.out.root().end()) ctx.out.certificates() = Json::object();
  ctx.out.certificates()["failure_demanded_empty"] = ctx.demanded_failure;
  const int code = options.strict && ctx.demanded_failure ? 2 : 0;
  return {code, render(ctx.out.root()), code ? "a failure set demanded empty is nonempty" : ""};
}

}  // namespace condcvx::cli
