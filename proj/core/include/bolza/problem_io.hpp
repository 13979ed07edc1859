#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "bolza/problem.hpp"

namespace bolza {

/// Parses a problem document (schema in docs/problem-format.md). Unknown
/// fields, ragged matrices and dimension clashes throw ParseError naming the
/// offending field.
BolzaProblem parseProblem(std::string_view text);
BolzaProblem loadProblem(const std::filesystem::path& path);

/// Serializes a problem whose mixed data, if any, is quadratic. Infinite box
/// bounds are written as null.
std::string problemToJson(const BolzaProblem& problem, int indent = 2);

}  // namespace bolza
