#pragma once

#include "specbench/formula.hpp"

namespace specbench {

/// Negation normal form: negation only on atoms, `->` eliminated. F, G, U
/// and X stay primitive; a negated until is rewritten as
/// `!(a U b)  ==  (!b U (!a & !b)) | G !b`.
Formula nnf(Formula f);

bool is_nnf(Formula f);

/// Standard LTL semantics of `f` on the infinite word `prefix · loop^ω`,
/// evaluated at position 0. Each subformula is evaluated once over all
/// |prefix| + |loop| distinct positions (fixpoints for U, F, G).
bool holds_on_lasso(Formula f, const LassoTrace& w);

}  // namespace specbench
