#pragma once

#include <vector>

#include "fairadapt/dsl/diagnostic.hpp"
#include "fairadapt/model/types.hpp"
#include "syntax.hpp"

namespace fairadapt::dsl {

/// Turns declaration trees into model values. Names may refer to `base`
/// (the live bundle, for injected requirements) as well as to the new
/// declarations. Returns only the new declarations. With `payload` set,
/// resource declarations and attaching operations to `base` OFRs are
/// rejected.
model::ModelBundle resolve(const RawModel& raw, const model::ModelBundle& base, bool payload,
                           std::vector<Diagnostic>& diagnostics);

/// Runs the model load invariants on `bundle` and reports each issue at the
/// span of its subject declaration (or at `fallback`).
void check_consistency(const model::ModelBundle& bundle, const SourceSpan& fallback,
                       std::vector<Diagnostic>& diagnostics);

}  // namespace fairadapt::dsl
