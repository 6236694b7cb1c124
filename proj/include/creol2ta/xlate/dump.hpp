#pragma once

#include <string>

#include "creol2ta/ta/model.hpp"
#include "creol2ta/xlate/translate.hpp"

namespace creol2ta::xlate {

/// Normalized textual dump of a translation: constants, task table with
/// enabling conditions, label/remote-method numbering, every template with
/// locations (urgency, invariant, source line) and edges sorted by
/// (source, target, rendered text). Byte-identical across runs for the same
/// input; used for golden-file comparison.
std::string dump_translation(const TranslationResult& res);

/// Same normalization applied to a bare system model (used to golden-test
/// composed systems including the scheduler and interfaces).
std::string dump_system(const ta::SystemModel& sys);

}  // namespace creol2ta::xlate
