#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "specbench/formula.hpp"

namespace specbench {

enum class Verdict { Satisfied, Violated, Open };

std::string_view to_string(Verdict v) noexcept;

/// Syntactic simplification: constant folding, flattening and idempotence
/// of And/Or, complementary-literal detection, absorption
/// (`a & (a | b) -> a`, `a | (a & b) -> a`), and canonical ordering of
/// commutative operands. Also folds trivial temporal cases such as
/// `F true`, `G false`, `a U true`, `false U b`, `F F a`.
Formula simplify(Formula f);

/// Obligation left on the suffix after observing `sigma`. Expects NNF input
/// (non-NNF input is normalized first). The result is simplified.
Formula progress(Formula f, const LabelSet& sigma);

Verdict verdict_of(Formula progressed) noexcept;

struct ProgressionResult {
  Verdict verdict = Verdict::Open;
  /// 1-based index of the deciding symbol.
  std::optional<std::size_t> steps_to_decision;
  Formula residual;
};

ProgressionResult run_progression(Formula f, const std::vector<LabelSet>& trace);

}  // namespace specbench
