#pragma once

#include <string_view>

#include "creol2ta/creol/ast.hpp"
#include "creol2ta/diag.hpp"

namespace creol2ta::creol {

/// Parses a Creol model. Syntax errors are reported with line/column in
/// `diags`; the returned model contains everything parsed up to recovery
/// points. Identifier resolution is deferred to validate().
SourceModel parse_model(std::string_view text, DiagnosticList& diags, std::string file = {});

/// Extracts `@b<int> @w<int> @d<int>` directives from a block comment body.
/// Directives may appear anywhere inside the comment, in any order, embedded
/// in prose; absent @b/@w default to 0, absent @d to no deadline. Duplicate
/// or malformed directives are reported.
TimingAnnotation extract_annotation(std::string_view comment_text, DiagnosticList& diags,
                                    SourceLoc loc = {}, const std::string& file = {});

}  // namespace creol2ta::creol
