#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "nhs/abstraction.h"
#include "nhs/error.h"

namespace nhs {

/// CTL formula over cell atoms Q<i>, EXIT and true. Immutable; copies share
/// structure.
class CtlFormula {
 public:
  enum class Kind { kAtom, kExit, kTrue, kNot, kAnd, kOr, kEX, kAX, kEF, kAF, kEG, kAG, kEU, kAU };

  static CtlFormula Atom(int cell_id);
  static CtlFormula Exit();
  static CtlFormula True();
  static CtlFormula Not(CtlFormula f);
  static CtlFormula And(CtlFormula a, CtlFormula b);
  static CtlFormula Or(CtlFormula a, CtlFormula b);
  static CtlFormula EX(CtlFormula f);
  static CtlFormula AX(CtlFormula f);
  static CtlFormula EF(CtlFormula f);
  static CtlFormula AF(CtlFormula f);
  static CtlFormula EG(CtlFormula f);
  static CtlFormula AG(CtlFormula f);
  static CtlFormula EU(CtlFormula a, CtlFormula b);
  static CtlFormula AU(CtlFormula a, CtlFormula b);

  Kind kind() const;
  /// Cell id of an atom.
  int atom() const;
  /// Operand of unary operators, left operand of binary ones.
  const CtlFormula& lhs() const;
  const CtlFormula& rhs() const;

  /// Fully parenthesised text in the parser's grammar.
  std::string str() const;
  bool operator==(const CtlFormula& other) const;

 private:
  struct Node;
  explicit CtlFormula(std::shared_ptr<const Node> node);
  static CtlFormula Make(Kind kind, int atom, const CtlFormula* lhs,
                         const CtlFormula* rhs);

  std::shared_ptr<const Node> node_;
};

class CtlSyntaxError : public UsageError {
 public:
  CtlSyntaxError(const std::string& message, std::size_t position);
  /// 0-based character offset in the parsed text.
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Grammar, loosest binding first:
///
///   f ::= f '|' f | f '&' f
///       | '!' f | EX f | AX f | EF f | AF f | EG f | AG f
///       | 'E' '[' f 'U' f ']' | 'A' '[' f 'U' f ']'
///       | 'Q' int | EXIT | true | '(' f ')'
///
/// Binary operators associate to the left. Whitespace is ignored.
CtlFormula parse_ctl(std::string_view text);

/// Throws UsageError if an atom names a cell the system does not have, or
/// EXIT is used on a system without a sink.
void check_atoms(const TransitionSystem& ts, const CtlFormula& f);

/// Satisfaction set indexed by state (cells first, then the sink).
using StateSet = std::vector<bool>;

/// Work done by the fixpoint loops of one sat_set call.
struct FixpointStats {
  std::size_t fixpoints = 0;
  /// Most state-changing rounds any single fixpoint needed; at most size().
  std::size_t max_rounds = 0;
};

/// Fixpoint labeling. EX/AX by successor scans, EU/EF as least fixpoints,
/// EG/AG as greatest fixpoints, AF/AU through their existential duals.
StateSet sat_set(const TransitionSystem& ts, const CtlFormula& f,
                 FixpointStats* stats = nullptr);

/// Whether cell `initial` (1-based) satisfies f.
bool check(const TransitionSystem& ts, const CtlFormula& f, int initial);

}  // namespace nhs
