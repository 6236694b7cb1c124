#pragma once

#include "creol2ta/creol/ast.hpp"
#include "creol2ta/diag.hpp"

namespace creol2ta::creol {

/// Semantic validation of a parsed model. Collects every violation instead
/// of stopping at the first one. Errors block translation; warnings do not.
///
/// Checked per class: calls carry deadlines, deadlines only on calls,
/// best <= worst, label uniqueness and resolution, interface conformance,
/// name clashes, identifier resolution, and a warning for release points
/// reachable with zero accumulated best-case time from the activation start.
DiagnosticList validate(const SourceModel& model);

/// Minimum accumulated best-case execution time from the activation start
/// (method entry or latest release/blocking-reply continuation) to each
/// release point, keyed by statement address. Exposed for tests.
void min_best_to_release_points(
    const StmtSeq& body,
    const std::function<void(const Stmt&, long)>& on_release_point);

}  // namespace creol2ta::creol
