#pragma once

#include <string>

#include "creol2ta/creol/ast.hpp"

namespace creol2ta::creol {

/// Regenerates Creol source from the AST, annotations included. Parsing the
/// output yields a structurally identical model.
std::string print_model(const SourceModel& m);
std::string print_stmt_inline(const Stmt& s);
std::string print_guard(const GuardPtr& g);

}  // namespace creol2ta::creol
