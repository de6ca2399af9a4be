#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "tpq/liealg.hpp"
#include "tpq/quant.hpp"

namespace tpq::cli {

struct LieSection {
  LieAlgebraModel algebra;
  AlgMultiVector r;
  AlgForm phi;
};

struct Candidates {
  std::optional<MultiVector> z;
  std::optional<Form> big_phi;
  std::vector<Expr> chi;
  std::vector<Expr> g;
  std::vector<std::pair<Expr, Expr>> pairs;
  std::vector<Form> gamma;
  bool empty() const { return !z && !big_phi && chi.empty() && g.empty() && pairs.empty() && gamma.empty(); }
};

/// In-memory form of a structure file. `chart` is null for files that only
/// carry a [lie] section.
struct StructureFile {
  ChartPtr chart;
  std::optional<MultiVector> bivector;
  std::array<std::optional<Form>, 4> forms;  // forms[k] from [form<k>], k = 1..3; form3 is phi
  bool has_bundle = false;
  Form omega;
  MultiVector z;
  std::optional<std::vector<Form>> polarization;
  std::vector<Form> complement;
  std::optional<LieSection> lie;
  Candidates candidates;

  /// Lambda and phi (zero when [form3] is absent), without the twisted check.
  TwistedPoissonStructure structure() const;
};

bool operator==(const StructureFile& a, const StructureFile& b);

/// Throws Error with a line number for syntax problems and with the
/// offending section for semantic ones.
StructureFile parse_structure(std::string_view text, int max_dim = 0);
StructureFile load_structure(const std::string& path, int max_dim = 0);
std::string save_structure(const StructureFile& s);

/// "{1,2: expr; 3,4: expr}" with 1-based, strictly increasing keys.
Form parse_form(std::string_view text, const ChartPtr& chart, int grade);
MultiVector parse_multivector(std::string_view text, const ChartPtr& chart, int grade);

enum class Status { Pass, Fail, Error };
std::string to_string(Status s);

struct Residual {
  std::string where;
  std::string expr;
};

struct Report {
  std::string check;
  Status status = Status::Pass;
  std::vector<Residual> residuals;  // nonzero only
  std::vector<std::string> assumptions;
  std::vector<std::pair<std::string, std::string>> values;  // informational, ordered
  std::string message;
  std::int64_t millis = 0;

  void add(const std::string& where, const Expr& e, const ChartSignature& chart);
  void add(const std::string& where, const std::string& text);
  /// Pass iff no residuals, unless already marked as an error.
  void settle();
};

nlohmann::ordered_json to_json(const Report& r);
int exit_code(const Report& r);

struct Options {
  int n = 2;
  std::uint64_t seed = 1;
  int max_dim = 0;
  int trials = 20;
  bool timing = true;
};

extern const std::vector<std::string> kCommands;
extern const std::vector<std::string> kExamples;

/// Runs one command. For run-example `target` is an example name, else a
/// structure file path. Never throws: failures become error reports.
Report run_command(const std::string& command, const std::string& target, const Options& opt);
/// The same on an already-parsed file.
Report run_on_structure(const std::string& command, const StructureFile& s, const Options& opt);
Report run_example(const std::string& name, const Options& opt);

}  // namespace tpq::cli
