#pragma once

// Scenario runner behind the `condcvx` executable: one interchange document
// in, one result document out.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "condcvx/convex_functions.hpp"
#include "condcvx/sequences.hpp"

namespace condcvx::cli {

using Json = nlohmann::ordered_json;

/// Parsed interchange document.
struct Scenario {
  SpacePtr space;
  Index dim = 0;
  std::map<std::string, CondVector<double>> vectors;
  std::map<std::string, MeasurableSet> sets;
  std::map<std::string, CondExtScalar<double>> scalars;
  std::map<std::string, ConvexSetRep<double>> convex_sets;
  std::map<std::string, MaxAffineFn<double>> max_affine;
  std::map<std::string, GridFn<double>> grids;
  std::map<std::string, CondSequence<double>> sequences;
  std::vector<std::string> vector_order;  // document order of `vectors`
  Json args = Json::object();

  const CondVector<double>& vector(const std::string& name) const;
  const MeasurableSet& set(const std::string& name) const;
  const CondExtScalar<double>& scalar(const std::string& name) const;
  CondScalar<double> finite_scalar(const std::string& name) const;
  const ConvexSetRep<double>& convex_set(const std::string& name) const;
  const CondSequence<double>& sequence(const std::string& name) const;
};

/// Malformed documents, unresolved names and dimension mismatches.
struct InputError : Error {
  using Error::Error;
};

Scenario parse_document(const Json& doc);

/// Builds result documents in the interchange format.
class Writer {
 public:
  Writer(const std::string& command, const SpacePtr& space, Index dim);

  void vector(const std::string& name, const CondVector<double>& x);
  void set(const std::string& name, const MeasurableSet& s);
  void set(const std::string& name, const Mask& m);
  void scalar(const std::string& name, const Vector<double>& v);
  void scalar(const std::string& name, const Eigen::VectorXi& v);
  void grid(const std::string& name, const GridFn<double>& f);
  Json& certificates() { return doc_["certificates"]; }
  Json& root() { return doc_; }

 private:
  Json doc_;
};

/// Numbers with 17 significant digits, infinities as "+inf" / "-inf".
std::string render(const Json& doc);

Json number(double v);
double read_number(const Json& j);

struct Options {
  std::string command;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string kind = "strong";       // separate
  int depth = 5;                     // bw
  double slack = 0.0;                // bw
  std::string mode = "relative";     // ri-test
  bool strict = false;               // exit 2 on a nonempty failure set
  std::map<std::string, std::string> args;  // override document `args`
};

struct Outcome {
  int exit_code = 0;
  std::string output;   // rendered result document (empty on malformed input)
  std::string message;  // diagnostics for stderr
};

/// Exit codes: 0 success, 1 malformed input or unknown command, 2 failed
/// precondition (or, with `strict`, a nonempty failure set).
Outcome run(const Options& options, const std::string& document_text);

const std::vector<std::string>& commands();

}  // namespace condcvx::cli
