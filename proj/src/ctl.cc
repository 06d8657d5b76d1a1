#include "nhs/ctl.h"

#include <algorithm>
#include <cctype>
#include <optional>

namespace nhs {

struct CtlFormula::Node {
  Kind kind;
  int atom = 0;
  std::optional<CtlFormula> lhs;
  std::optional<CtlFormula> rhs;
};

CtlFormula::CtlFormula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

CtlFormula CtlFormula::Make(Kind kind, int atom, const CtlFormula* lhs,
                            const CtlFormula* rhs) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->atom = atom;
  if (lhs) node->lhs = *lhs;
  if (rhs) node->rhs = *rhs;
  return CtlFormula(std::move(node));
}

CtlFormula CtlFormula::Atom(int cell_id) {
  if (cell_id < 1) throw UsageError("CTL atom index must be >= 1");
  return Make(Kind::kAtom, cell_id, nullptr, nullptr);
}
CtlFormula CtlFormula::Exit() { return Make(Kind::kExit, 0, nullptr, nullptr); }
CtlFormula CtlFormula::True() { return Make(Kind::kTrue, 0, nullptr, nullptr); }
CtlFormula CtlFormula::Not(CtlFormula f) { return Make(Kind::kNot, 0, &f, nullptr); }
CtlFormula CtlFormula::And(CtlFormula a, CtlFormula b) { return Make(Kind::kAnd, 0, &a, &b); }
CtlFormula CtlFormula::Or(CtlFormula a, CtlFormula b) { return Make(Kind::kOr, 0, &a, &b); }
CtlFormula CtlFormula::EX(CtlFormula f) { return Make(Kind::kEX, 0, &f, nullptr); }
CtlFormula CtlFormula::AX(CtlFormula f) { return Make(Kind::kAX, 0, &f, nullptr); }
CtlFormula CtlFormula::EF(CtlFormula f) { return Make(Kind::kEF, 0, &f, nullptr); }
CtlFormula CtlFormula::AF(CtlFormula f) { return Make(Kind::kAF, 0, &f, nullptr); }
CtlFormula CtlFormula::EG(CtlFormula f) { return Make(Kind::kEG, 0, &f, nullptr); }
CtlFormula CtlFormula::AG(CtlFormula f) { return Make(Kind::kAG, 0, &f, nullptr); }
CtlFormula CtlFormula::EU(CtlFormula a, CtlFormula b) { return Make(Kind::kEU, 0, &a, &b); }
CtlFormula CtlFormula::AU(CtlFormula a, CtlFormula b) { return Make(Kind::kAU, 0, &a, &b); }

CtlFormula::Kind CtlFormula::kind() const { return node_->kind; }
int CtlFormula::atom() const { return node_->atom; }

const CtlFormula& CtlFormula::lhs() const {
  if (!node_->lhs) throw UsageError("CTL formula has no operand");
  return *node_->lhs;
}

const CtlFormula& CtlFormula::rhs() const {
  if (!node_->rhs) throw UsageError("CTL formula has no right operand");
  return *node_->rhs;
}

std::string CtlFormula::str() const {
  switch (kind()) {
    case Kind::kAtom: return "Q" + std::to_string(atom());
    case Kind::kExit: return "EXIT";
    case Kind::kTrue: return "true";
    case Kind::kNot: return "!" + lhs().str();
    case Kind::kAnd: return "(" + lhs().str() + " & " + rhs().str() + ")";
    case Kind::kOr: return "(" + lhs().str() + " | " + rhs().str() + ")";
    case Kind::kEX: return "EX " + lhs().str();
    case Kind::kAX: return "AX " + lhs().str();
    case Kind::kEF: return "EF " + lhs().str();
    case Kind::kAF: return "AF " + lhs().str();
    case Kind::kEG: return "EG " + lhs().str();
    case Kind::kAG: return "AG " + lhs().str();
    case Kind::kEU: return "E[" + lhs().str() + " U " + rhs().str() + "]";
    case Kind::kAU: return "A[" + lhs().str() + " U " + rhs().str() + "]";
  }
  return {};
}

bool CtlFormula::operator==(const CtlFormula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind() || atom() != other.atom()) return false;
  if (node_->lhs.has_value() != other.node_->lhs.has_value()) return false;
  if (node_->rhs.has_value() != other.node_->rhs.has_value()) return false;
  if (node_->lhs && !(*node_->lhs == *other.node_->lhs)) return false;
  if (node_->rhs && !(*node_->rhs == *other.node_->rhs)) return false;
  return true;
}

CtlSyntaxError::CtlSyntaxError(const std::string& message, std::size_t position)
    : UsageError("CTL syntax error at position " + std::to_string(position) +
                 ": " + message),
      position_(position) {}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  CtlFormula parse() {
    CtlFormula f = parse_or();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw CtlSyntaxError(message, pos_);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  // Reads an alphabetic word without consuming it.
  std::string_view peek_word() {
    skip_space();
    std::size_t end = pos_;
    while (end < text_.size() && std::isalpha(static_cast<unsigned char>(text_[end]))) ++end;
    return text_.substr(pos_, end - pos_);
  }

  CtlFormula parse_or() {
    CtlFormula f = parse_and();
    while (accept('|')) f = CtlFormula::Or(f, parse_and());
    return f;
  }

  CtlFormula parse_and() {
    CtlFormula f = parse_unary();
    while (accept('&')) f = CtlFormula::And(f, parse_unary());
    return f;
  }

  CtlFormula parse_until(bool universal) {
    expect('[');
    CtlFormula lhs = parse_or();
    skip_space();
    if (peek_word() != "U") fail("expected 'U'");
    pos_ += 1;
    CtlFormula rhs = parse_or();
    expect(']');
    return universal ? CtlFormula::AU(lhs, rhs) : CtlFormula::EU(lhs, rhs);
  }

  CtlFormula parse_unary() {
    if (accept('!')) return CtlFormula::Not(parse_unary());
    if (accept('(')) {
      CtlFormula f = parse_or();
      expect(')');
      return f;
    }
    const std::size_t start = pos_;
    const std::string_view word = peek_word();
    if (word.empty()) fail(pos_ < text_.size() ? "unexpected character" : "unexpected end of formula");
    pos_ += word.size();
    if (word == "EX") return CtlFormula::EX(parse_unary());
    if (word == "AX") return CtlFormula::AX(parse_unary());
    if (word == "EF") return CtlFormula::EF(parse_unary());
    if (word == "AF") return CtlFormula::AF(parse_unary());
    if (word == "EG") return CtlFormula::EG(parse_unary());
    if (word == "AG") return CtlFormula::AG(parse_unary());
    if (word == "E") return parse_until(false);
    if (word == "A") return parse_until(true);
    if (word == "EXIT") return CtlFormula::Exit();
    if (word == "true" || word == "TRUE") return CtlFormula::True();
    if (word == "Q") return CtlFormula::Atom(parse_index());
    pos_ = start;
    fail("unknown operator or atom '" + std::string(word) + "'");
  }

  int parse_index() {
    skip_space();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1'000'000'000) fail("atom index too large");
      ++pos_;
    }
    if (pos_ == start) fail("expected cell index after 'Q'");
    if (value < 1) {
      pos_ = start;
      fail("cell indices start at 1");
    }
    return static_cast<int>(value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

using Kind = CtlFormula::Kind;

StateSet complement(StateSet s) {
  s.flip();
  return s;
}

StateSet intersect(const StateSet& a, const StateSet& b) {
  StateSet out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

StateSet pre_exists(const TransitionSystem& ts, const StateSet& target) {
  StateSet out(ts.size(), false);
  for (std::size_t s = 0; s < ts.size(); ++s) {
    for (std::size_t t : ts.successors(s)) {
      if (target[t]) {
        out[s] = true;
        break;
      }
    }
  }
  return out;
}

StateSet pre_forall(const TransitionSystem& ts, const StateSet& target) {
  StateSet out(ts.size(), true);
  for (std::size_t s = 0; s < ts.size(); ++s) {
    for (std::size_t t : ts.successors(s)) {
      if (!target[t]) {
        out[s] = false;
        break;
      }
    }
  }
  return out;
}

void record(FixpointStats* stats, std::size_t rounds) {
  if (!stats) return;
  ++stats->fixpoints;
  stats->max_rounds = std::max(stats->max_rounds, rounds);
}

// Least fixpoint of Z = goal ∪ (path ∩ EX Z).
StateSet exists_until(const TransitionSystem& ts, const StateSet& path,
                      const StateSet& goal, FixpointStats* stats) {
  StateSet z = goal;
  for (std::size_t rounds = 0;; ++rounds) {
    const StateSet pre = pre_exists(ts, z);
    bool changed = false;
    for (std::size_t s = 0; s < z.size(); ++s) {
      if (!z[s] && path[s] && pre[s]) {
        z[s] = true;
        changed = true;
      }
    }
    if (!changed) {
      record(stats, rounds);
      return z;
    }
  }
}

// Greatest fixpoint of Z = keep ∩ pre(Z).
template <typename Pre>
StateSet greatest(const TransitionSystem& ts, const StateSet& keep, Pre pre,
                  FixpointStats* stats) {
  StateSet z = keep;
  for (std::size_t rounds = 0;; ++rounds) {
    StateSet next = intersect(keep, pre(ts, z));
    if (next == z) {
      record(stats, rounds);
      return z;
    }
    z = std::move(next);
  }
}

}  // namespace

CtlFormula parse_ctl(std::string_view text) { return Parser(text).parse(); }

void check_atoms(const TransitionSystem& ts, const CtlFormula& f) {
  switch (f.kind()) {
    case Kind::kAtom:
      if (f.atom() > static_cast<int>(ts.num_cells())) {
        throw UsageError("CTL atom Q" + std::to_string(f.atom()) +
                         " does not name a cell (system has " +
                         std::to_string(ts.num_cells()) + ")");
      }
      return;
    case Kind::kExit:
      if (!ts.has_sink()) throw UsageError("CTL atom EXIT used on a system without a sink");
      return;
    case Kind::kTrue:
      return;
    case Kind::kAnd: case Kind::kOr: case Kind::kEU: case Kind::kAU:
      check_atoms(ts, f.lhs());
      check_atoms(ts, f.rhs());
      return;
    default:
      check_atoms(ts, f.lhs());
  }
}

StateSet sat_set(const TransitionSystem& ts, const CtlFormula& f,
                  FixpointStats* stats) {
  const std::size_t n = ts.size();
  switch (f.kind()) {
    case Kind::kAtom: {
      StateSet s(n, false);
      if (f.atom() > static_cast<int>(ts.num_cells())) check_atoms(ts, f);
      s[f.atom() - 1] = true;
      return s;
    }
    case Kind::kExit: {
      check_atoms(ts, f);
      StateSet s(n, false);
      s[ts.sink()] = true;
      return s;
    }
    case Kind::kTrue:
      return StateSet(n, true);
    case Kind::kNot:
      return complement(sat_set(ts, f.lhs(), stats));
    case Kind::kAnd:
      return intersect(sat_set(ts, f.lhs(), stats), sat_set(ts, f.rhs(), stats));
    case Kind::kOr: {
      StateSet a = sat_set(ts, f.lhs(), stats);
      const StateSet b = sat_set(ts, f.rhs(), stats);
      for (std::size_t i = 0; i < n; ++i) a[i] = a[i] || b[i];
      return a;
    }
    case Kind::kEX:
      return pre_exists(ts, sat_set(ts, f.lhs(), stats));
    case Kind::kAX:
      return pre_forall(ts, sat_set(ts, f.lhs(), stats));
    case Kind::kEF:
      return exists_until(ts, StateSet(n, true), sat_set(ts, f.lhs(), stats), stats);
    case Kind::kEU:
      return exists_until(ts, sat_set(ts, f.lhs(), stats), sat_set(ts, f.rhs(), stats), stats);
    case Kind::kEG:
      return greatest(ts, sat_set(ts, f.lhs(), stats), pre_exists, stats);
    case Kind::kAG:
      return greatest(ts, sat_set(ts, f.lhs(), stats), pre_forall, stats);
    case Kind::kAF:
      // AF φ = ¬EG ¬φ
      return complement(
          greatest(ts, complement(sat_set(ts, f.lhs(), stats)), pre_exists, stats));
    case Kind::kAU: {
      // A[φ U ψ] = ¬(E[¬ψ U (¬φ ∧ ¬ψ)] ∨ EG ¬ψ)
      const StateSet not_phi = complement(sat_set(ts, f.lhs(), stats));
      const StateSet not_psi = complement(sat_set(ts, f.rhs(), stats));
      const StateSet stuck = exists_until(ts, not_psi, intersect(not_phi, not_psi), stats);
      const StateSet never = greatest(ts, not_psi, pre_exists, stats);
      StateSet out(n);
      for (std::size_t i = 0; i < n; ++i) out[i] = !(stuck[i] || never[i]);
      return out;
    }
  }
  return StateSet(n, false);
}

bool check(const TransitionSystem& ts, const CtlFormula& f, int initial) {
  if (initial < 1 || initial > static_cast<int>(ts.num_cells())) {
    throw UsageError("initial cell Q" + std::to_string(initial) + " does not exist");
  }
  check_atoms(ts, f);
  return sat_set(ts, f)[initial - 1];
}

}  // namespace nhs
