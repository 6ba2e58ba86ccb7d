#pragma once

// Text formats: StepDensity as JSON or two-column CSV, convergence reports as
// CSV or JSON, adversary transcripts as JSON, and decimal-number input.
// All JSON outputs carry "format_version": 1. Numbers are written in the
// shortest form that reads back to the same double.

#include <charconv>
#include <cstddef>
#include <fstream>
#include <istream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "adversary.hpp"
#include "budget.hpp"
#include "errors.hpp"
#include "evaluation.hpp"
#include "step_density.hpp"

namespace dyadic {

inline constexpr int format_version = 1;

/// Malformed text input. line() is 1-based, 0 when not tied to a line.
class parse_error : public std::runtime_error {
public:
  parse_error(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

inline std::string format_number(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

/// Locale-independent decimal parse of the whole token.
inline std::optional<double> parse_number(std::string_view token) {
  if (!token.empty() && token.front() == '+')
    token.remove_prefix(1);
  double value = 0.0;
  const auto res =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size() ||
      token.empty())
    return std::nullopt;
  return value;
}

/// Reads decimals separated by newlines, commas, or blanks.
inline std::vector<double> read_numbers(std::istream& in) {
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t pos = 0;
    while (pos < line.size()) {
      const auto start = line.find_first_not_of(", \t\r", pos);
      if (start == std::string::npos)
        break;
      auto end = line.find_first_of(", \t\r", start);
      if (end == std::string::npos)
        end = line.size();
      const std::string_view token(line.data() + start, end - start);
      const auto v = parse_number(token);
      if (!v)
        throw parse_error("line " + std::to_string(line_no) +
                              ": cannot parse '" + std::string(token) +
                              "' as a number",
                          line_no);
      values.push_back(*v);
      pos = end;
    }
  }
  return values;
}

// ---- StepDensity --------------------------------------------------------

inline nlohmann::json to_json(const StepDensity<double>& f) {
  return nlohmann::json{{"format_version", format_version},
                        {"breakpoints", f.breakpoints()},
                        {"heights", f.heights()}};
}

inline StepDensity<double> step_density_from_json(const nlohmann::json& j) {
  try {
    if (j.contains("format_version") &&
        j.at("format_version").get<int>() != format_version)
      throw parse_error("unsupported format_version", 0);
    return StepDensity<double>(j.at("breakpoints").get<std::vector<double>>(),
                               j.at("heights").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw parse_error(std::string("step density JSON: ") + e.what(), 0);
  }
}

/// One "left,height" row per piece plus a closing row at the last
/// breakpoint with height 0. The zero function is the header alone.
inline std::string to_csv(const StepDensity<double>& f) {
  std::string out = "left,height\n";
  for (std::size_t p = 0; p < f.pieces(); ++p)
    out += format_number(f.breakpoints()[p]) + "," +
           format_number(f.heights()[p]) + "\n";
  if (!f.is_zero())
    out += format_number(f.breakpoints().back()) + ",0\n";
  return out;
}

inline StepDensity<double> step_density_from_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> bps;
  std::vector<double> hs;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || (line_no == 1 && line == "left,height"))
      continue;
    const auto comma = line.find(',');
    const auto left = comma == std::string::npos
                          ? std::nullopt
                          : parse_number(std::string_view(line).substr(0, comma));
    const auto height =
        comma == std::string::npos
            ? std::nullopt
            : parse_number(std::string_view(line).substr(comma + 1));
    if (!left || !height)
      throw parse_error("line " + std::to_string(line_no) +
                            ": expected 'left,height'",
                        line_no);
    bps.push_back(*left);
    hs.push_back(*height);
  }
  if (bps.empty())
    return {};
  hs.pop_back(); // the closing row only marks the last breakpoint
  return StepDensity<double>(std::move(bps), std::move(hs));
}

// ---- variation budgets ----------------------------------------------------

/// "const:v", "linear:a,b", "exp:a,r", or "table:<file>" (numbers separated
/// by newlines, commas or blanks; repeats the last entry beyond the table).
inline VariationBudget parse_budget(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw parse_error("budget spec '" + spec + "' lacks a kind prefix", 0);
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  auto numbers = [&](std::size_t expected) {
    std::istringstream in(rest);
    auto v = read_numbers(in);
    if (v.size() != expected)
      throw parse_error("budget spec '" + spec + "' needs " +
                            std::to_string(expected) + " number(s)",
                        0);
    return v;
  };
  if (kind == "const")
    return VariationBudget::constant(numbers(1)[0]);
  if (kind == "linear") {
    const auto v = numbers(2);
    return VariationBudget::linear(v[0], v[1]);
  }
  if (kind == "exp") {
    const auto v = numbers(2);
    return VariationBudget::exponential(v[0], v[1]);
  }
  if (kind == "table") {
    std::ifstream in(rest);
    if (!in)
      throw parse_error("cannot open budget table '" + rest + "'", 0);
    return VariationBudget::table(read_numbers(in));
  }
  throw parse_error("unknown budget kind '" + kind + "'", 0);
}

// ---- convergence reports --------------------------------------------------

inline std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = "n,k_n,l1_error,discrepancy,tail_bound\n";
  for (const auto& r : rows) {
    out += std::to_string(r.n) + ",";
    out += r.level ? std::to_string(*r.level) : std::string("none");
    out += "," + format_number(r.l1_error) + "," +
           format_number(r.discrepancy) + "," + format_number(r.tail_bound) +
           "\n";
  }
  return out;
}

inline nlohmann::json report_json(const std::vector<ReportRow>& rows,
                                  const nlohmann::json& config) {
  nlohmann::json j{{"format_version", format_version}, {"config", config}};
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows)
    j["rows"].push_back({{"n", r.n},
                         {"k_n", r.level ? nlohmann::json(*r.level)
                                         : nlohmann::json(nullptr)},
                         {"l1_error", r.l1_error},
                         {"discrepancy", r.discrepancy},
                         {"tail_bound", r.tail_bound}});
  return j;
}

// ---- adversary transcripts ------------------------------------------------

/// The sequence is written out only when it has at most `sequence_cap`
/// values; otherwise "sequence" is null and "sequence_elided" is true.
inline nlohmann::json transcript_json(const AdversaryTranscript& t,
                                      std::size_t sequence_cap) {
  nlohmann::json j{{"format_version", format_version},
                   {"sequence_length", t.sequence.size()}};
  if (t.sequence.size() <= sequence_cap) {
    j["sequence"] = t.sequence;
    j["sequence_elided"] = false;
  } else {
    j["sequence"] = nullptr;
    j["sequence_elided"] = true;
  }
  j["checkpoints"] = nlohmann::json::array();
  j["certificates"] = nlohmann::json::array();
  for (const auto& c : t.certificates) {
    j["checkpoints"].push_back({{"k", c.level}, {"n", c.n}});
    j["certificates"].push_back({{"k", c.level},
                                 {"n", c.n},
                                 {"l1_to_target", c.l1_to_target},
                                 {"l1_threshold", 0.25},
                                 {"delta", c.delta},
                                 {"delta_threshold", c.delta_threshold},
                                 {"m_next", c.m_next},
                                 {"min_length", c.min_length}});
  }
  j["oscillations"] = t.oscillations;
  return j;
}

} // namespace dyadic
