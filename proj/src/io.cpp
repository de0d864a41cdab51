#include "specdist/io.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace specdist::io {

namespace {

using nlohmann::json;

[[noreturn]] void malformed(std::string_view origin, const std::string& what) {
  throw Error(ErrorCode::MalformedDocument, std::string(origin) + ": " + what);
}

double entry_value(const json& v, std::string_view origin, std::size_t index, int part) {
  const std::string where = "data[" + std::to_string(index) + "][" + std::to_string(part) + "]";
  if (v.is_number()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      throw Error(ErrorCode::NonFinite, std::string(origin) + ": non-finite value at " + where);
    }
    return d;
  }
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "NaN" || s == "Infinity" || s == "-Infinity" || s == "nan" || s == "inf" || s == "-inf") {
      throw Error(ErrorCode::NonFinite, std::string(origin) + ": non-finite value at " + where);
    }
  }
  malformed(origin, where + " is not a number");
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, path.string() + ": cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorCode::Io, path.string() + ": read failed");
  return ss.str();
}

Complex parse_complex(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw Error(ErrorCode::InvalidArgument, "empty coefficient");
  const char* begin = s.c_str();
  char* end = nullptr;
  errno = 0;
  const double first = std::strtod(begin, &end);
  if (end == begin || errno == ERANGE) throw Error(ErrorCode::InvalidArgument, "bad coefficient '" + s + "'");
  if (*end == '\0') return {first, 0.0};
  if (*end == 'i' && end[1] == '\0') return {0.0, first};
  const char* rest = end;
  const double second = std::strtod(rest, &end);
  if (end == rest || *end != 'i' || end[1] != '\0' || (rest[0] != '+' && rest[0] != '-')) {
    throw Error(ErrorCode::InvalidArgument, "bad coefficient '" + s + "'");
  }
  return {first, second};
}

double parse_real(std::string_view text, std::string_view what) {
  const std::string s(text);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidArgument, "bad " + std::string(what) + " '" + s + "'");
  }
  return v;
}

}  // namespace

ComplexMatrix parse_matrix_text(std::string_view text, std::string_view origin) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    malformed(origin, "invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  } catch (const json::out_of_range& e) {
    // number overflow while parsing
    throw Error(ErrorCode::NonFinite, std::string(origin) + ": " + e.what());
  }
  if (!doc.is_object()) malformed(origin, "top level must be an object");
  const auto dim_it = doc.find("dim");
  const auto data_it = doc.find("data");
  if (dim_it == doc.end() || data_it == doc.end()) malformed(origin, "requires keys \"dim\" and \"data\"");
  if (!dim_it->is_number_integer() || dim_it->get<long long>() < 1) {
    malformed(origin, "\"dim\" must be a positive integer");
  }
  if (!data_it->is_array()) malformed(origin, "\"data\" must be an array");
  const long long dim = dim_it->get<long long>();
  if (dim > 4096) malformed(origin, "\"dim\" too large");
  const std::size_t expected = static_cast<std::size_t>(dim * dim);
  if (data_it->size() != expected) {
    throw Error(ErrorCode::LengthMismatch, std::string(origin) + ": \"data\" has " +
                                               std::to_string(data_it->size()) + " entries, dim " +
                                               std::to_string(dim) + " needs " + std::to_string(expected));
  }
  ComplexMatrix m(dim, dim);
  for (std::size_t k = 0; k < expected; ++k) {
    const json& e = (*data_it)[k];
    if (!e.is_array() || e.size() != 2) {
      malformed(origin, "data[" + std::to_string(k) + "] must be a [re, im] pair");
    }
    const double re = entry_value(e[0], origin, k, 0);
    const double im = entry_value(e[1], origin, k, 1);
    m(static_cast<Eigen::Index>(k / dim), static_cast<Eigen::Index>(k % dim)) = Complex(re, im);
  }
  return m;
}

ComplexMatrix parse_matrix(const std::filesystem::path& path) {
  return parse_matrix_text(read_file(path), path.string());
}

std::string json_number(double v) {
  if (std::isnan(v)) return "\"NaN\"";
  if (std::isinf(v)) return v > 0 ? "\"Infinity\"" : "\"-Infinity\"";
  if (v == 0.0) return std::signbit(v) ? "-0.0" : "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string json_string(std::string_view s) { return json(std::string(s)).dump(); }

std::string matrix_to_json(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::NotSquare, "matrix files hold square matrices");
  std::string out = "{\"dim\":" + std::to_string(m.rows()) + ",\"data\":[";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (i != 0 || j != 0) out += ',';
      out += '[' + json_number(m(i, j).real()) + ',' + json_number(m(i, j).imag()) + ']';
    }
  }
  out += "]}\n";
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, path.string() + ": cannot open for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw Error(ErrorCode::Io, path.string() + ": write failed");
}

void write_matrix(const ComplexMatrix& m, const std::filesystem::path& path) {
  require_valid(m, "matrix");
  write_text(path, matrix_to_json(m));
}

std::string reports_to_json(const std::vector<TrialReport>& reports) {
  std::string out = "[";
  for (std::size_t k = 0; k < reports.size(); ++k) {
    const TrialReport& r = reports[k];
    out += k == 0 ? "\n  " : ",\n  ";
    out += "{\"suite\":" + json_string(r.suite) + ",\"trial\":" + std::to_string(r.trial) +
           ",\"digest\":" + json_string(r.digest) + ",\"quantities\":{";
    for (std::size_t i = 0; i < r.quantities.size(); ++i) {
      if (i) out += ',';
      out += json_string(r.quantities[i].first) + ':' + json_number(r.quantities[i].second);
    }
    out += "},\"verdict\":" + json_string(to_string(r.verdict)) + ",\"detail\":" + json_string(r.detail) + '}';
  }
  out += reports.empty() ? "]\n" : "\n]\n";
  return out;
}

std::string summary_csv(const std::vector<SuiteSummary>& summaries) {
  std::string out = "suite,trials,pass,fail,inconclusive,seconds\n";
  for (const SuiteSummary& s : summaries) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", s.seconds);
    out += s.suite + ',' + std::to_string(s.trials) + ',' + std::to_string(s.pass) + ',' +
           std::to_string(s.fail) + ',' + std::to_string(s.inconclusive) + ',' + secs + '\n';
  }
  return out;
}

FunctionSpec parse_function(std::string_view text) {
  const std::string t(text);
  if (t == "exp") return FunctionSpec::exp();
  if (t == "log") return FunctionSpec::principal_log();
  if (t.rfind("log:", 0) == 0) return FunctionSpec::rotated_log(parse_real(t.substr(4), "cut angle"));
  if (t == "rational:plus") return FunctionSpec::rational(1.0);
  if (t == "rational:minus") return FunctionSpec::rational(-1.0);
  if (t.rfind("pow:", 0) == 0) {
    const double k = parse_real(t.substr(4), "power");
    if (k != std::floor(k) || std::abs(k) > 1e6) throw Error(ErrorCode::InvalidArgument, "power must be an integer");
    return FunctionSpec::power(static_cast<int>(k));
  }
  if (t.rfind("poly:", 0) == 0) {
    std::vector<Complex> c;
    std::stringstream ss(t.substr(5));
    std::string item;
    while (std::getline(ss, item, ',')) c.push_back(parse_complex(item));
    if (c.empty()) throw Error(ErrorCode::InvalidArgument, "poly: needs coefficients");
    return FunctionSpec::polynomial(std::move(c));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown function '" + t + "'");
}

}  // namespace specdist::io
