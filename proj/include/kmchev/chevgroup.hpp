#pragma once
#include "kmchev/hwmod.hpp"
#include "kmchev/rootsys.hpp"
#include <map>
#include <mutex>
#include <optional>
#include <vector>

namespace kmchev {

enum class Sgn { Plus, Minus };

// One group generator. ChiReal letters carry their root together with the
// Weyl witness that realizes the root vector as Ad(wtilde)(e_i); the
// (root, witness) pair is the canonical datum.
struct Letter {
  enum class Kind { ChiSimple, ChiReal, Torus, WTilde };
  Kind kind = Kind::ChiSimple;
  int i = 0;              // simple index; for ChiReal the witness simple
  Sgn sign = Sgn::Plus;   // ChiSimple / ChiReal
  RootCoords root;        // ChiReal only, positive coordinates
  std::vector<int> wword; // ChiReal witness word
  Rat t;

  bool operator==(const Letter&) const = default;
};

using Word = std::vector<Letter>;

Letter chi(int i, Sgn s, const Rat& t);
Letter chi_real_letter(const RealRoot& r, Sgn s, const Rat& t);
Letter torus_letter(int i, const Rat& t);  // t != 0
Letter wtilde_letter(int i, const Rat& t); // t != 0

Letter inverse_letter(const Letter& l);
Word inverse_word(const Word& w);

// Rewrites ChiReal letters as wtilde-conjugated simple letters; all other
// letters pass through.
Word expand_elementary(const Word& w);

// Weight-graded vector in integral-basis coordinates.
using Graded = std::map<KVec, QVec>;

Graded graded_unit(const TruncatedModule& M, const KVec& k, size_t index);
bool graded_is_zero(const Graded& v);
bool graded_is_integral(const Graded& v);

// Raw Lie-algebra actions for probe vectors (not divided powers).
Graded apply_f(const TruncatedModule& M, int i, const Graded& v);
Graded apply_e(const TruncatedModule& M, int i, const Graded& v);

// Applies one generator exactly; TruncationOverflow when a descending
// exponential cannot be certified to terminate inside the truncation.
Graded apply_letter(const TruncatedModule& M, const Letter& l, const Graded& v);

// Right-to-left application of the word (rightmost letter first).
Graded apply_word(const TruncatedModule& M, const Word& w, Graded v);

// Lazy per-weight block map of an evaluated word, with an idempotent-fill
// cache safe for concurrent readers.
class BlockOperator {
public:
  BlockOperator(ModulePtr M, Word letters);

  const TruncatedModule& module() const { return *M_; }
  const Word& letters() const { return letters_; }

  // Blocks with source weight k: target weight -> matrix (zero blocks are
  // omitted). Throws TruncationOverflow if the evaluation overflows.
  std::map<KVec, QMat> row(const KVec& k) const;
  bool row_ok(const KVec& k) const;

  // Largest p <= pmax such that every source weight of depth <= p
  // evaluates without overflow; -1 if even depth 0 fails.
  long valid_source_depth(long pmax) const;

  Graded apply(const Graded& v) const;

private:
  struct Cache {
    std::mutex mu;
    std::map<KVec, std::optional<std::map<KVec, QMat>>> rows;
  };
  const std::map<KVec, QMat>* fill(const KVec& k) const;
  ModulePtr M_;
  Word letters_;
  std::shared_ptr<Cache> cache_;
};

BlockOperator chi_simple(ModulePtr M, int i, Sgn s, const Rat& t);
BlockOperator chi_real(ModulePtr M, const RealRoot& r, Sgn s, const Rat& t);
BlockOperator wtilde(ModulePtr M, int i, const Rat& t);
BlockOperator torus(ModulePtr M, int i, const Rat& t);
BlockOperator eval_word(ModulePtr M, const Word& w);
std::vector<BlockOperator> eval_word(const ModuleCollection& C, const Word& w);

// Exact block comparison to depth p; necessary-only evidence of equality
// in the group. DepthOutOfRange if either side overflows within depth p.
bool operator_eq(const BlockOperator& a, const BlockOperator& b, long p);

} // namespace kmchev
