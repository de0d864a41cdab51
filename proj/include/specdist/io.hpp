#pragma once

// Matrix files, report serialisation and the --f function syntax.
//
// Matrix file: {"dim": n, "data": [[re, im], ...]} with n*n entries in
// row-major order. Doubles are written with 17 significant digits, so
// parse(write(m)) reproduces m bit for bit (including -0.0).

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "specdist/holo.hpp"
#include "specdist/matrix.hpp"
#include "specdist/suites.hpp"

namespace specdist::io {

/// `origin` names the source in error messages.
ComplexMatrix parse_matrix_text(std::string_view text, std::string_view origin = "<string>");
ComplexMatrix parse_matrix(const std::filesystem::path& path);

std::string matrix_to_json(const ComplexMatrix& m);
void write_matrix(const ComplexMatrix& m, const std::filesystem::path& path);

/// %.17g; -0.0 keeps its sign, non-finite values become "Infinity" / "-Infinity" / "NaN" strings.
std::string json_number(double v);
std::string json_string(std::string_view s);

std::string reports_to_json(const std::vector<TrialReport>& reports);
/// suite,trials,pass,fail,inconclusive,seconds
std::string summary_csv(const std::vector<SuiteSummary>& summaries);

void write_text(const std::filesystem::path& path, std::string_view text);

/// exp | log[:angle] | poly:c0,c1,... | rational:plus | rational:minus | pow:k
/// Polynomial coefficients are real numbers or re+imi / re-imi.
FunctionSpec parse_function(std::string_view text);

}  // namespace specdist::io
