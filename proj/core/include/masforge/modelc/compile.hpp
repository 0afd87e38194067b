#pragma once

#include "masforge/metamodel.hpp"
#include "masforge/modelc/syntax.hpp"

namespace masforge {

struct LowerResult {
    ModelSpec model;
    ValidationReport report;
};

/// Resolves agent kinds and top-level names. Total on any parsed Ast:
/// problems become diagnostics.
LowerResult lower(const Ast& ast);

struct CompileResult {
    Ast ast;
    ModelSpec model;
    ValidationReport report;
    bool parsed = false;  // false when syntax errors stopped the pipeline before lowering
};

/// parse, then lower and validate when parsing succeeded. Diagnostics that
/// lowering and validation both raise at one site are reported once.
CompileResult compile(const SourceText& source);

}  // namespace masforge
