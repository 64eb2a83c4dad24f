#include "msbc/series/serialize.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>

namespace msbc {
namespace {

void write_terms(std::ostream& os, const TruncatedSeries<Rational>& s) {
  const std::size_t n = s.variables()->size();
  for (const auto& [m, c] : s) {
    os << c.get_num().get_str() << '/' << c.get_den().get_str();
    for (std::size_t i = 0; i < n; ++i) os << ' ' << m[i];
    os << '\n';
  }
}

bool is_blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

void parse_term(const std::string& line, TruncatedSeries<Rational>& out) {
  std::istringstream ls(line);
  std::string coeff;
  ls >> coeff;
  Rational c;
  if (c.set_str(coeff, 10) != 0) throw ValidationError("series text: bad coefficient '" + coeff + "'");
  c.canonicalize();
  std::vector<int> e;
  int x;
  while (ls >> x) e.push_back(x);
  if (!ls.eof()) throw ValidationError("series text: bad exponent in '" + line + "'");
  if (e.size() != out.variables()->size())
    throw ValidationError("series text: expected " + std::to_string(out.variables()->size()) + " exponents in '" +
                          line + "'");
  Monomial m{std::span<const int>(e)};
  if (!out.admits(m)) throw ValidationError("series text: term beyond truncation in '" + line + "'");
  out.add_term(m, c);
}

std::string monomial_text(const Monomial& m, const VariableSet& vars) {
  std::string t;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (m[i] == 0) continue;
    if (!t.empty()) t += '*';
    t += vars.name(i);
    if (m[i] > 1) t += '^' + std::to_string(m[i]);
  }
  return t;
}

template <class C, class F>
std::string format_generic(const TruncatedSeries<C>& s, F coeff_text, bool reversed_within_degree = false) {
  if (s.empty()) return "0";
  std::string out;
  // Lowest degree first reads more naturally than lexicographic order.
  std::vector<std::pair<Monomial, C>> terms(s.begin(), s.end());
  if (reversed_within_degree) std::reverse(terms.begin(), terms.end());
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& a, const auto& b) { return a.first.degree() < b.first.degree(); });
  for (const auto& [m, c] : terms) {
    auto [neg, mag] = coeff_text(c);
    auto mono = monomial_text(m, *s.variables());
    std::string body = mono.empty() ? mag : (mag == "1" ? mono : mag + "*" + mono);
    if (out.empty())
      out = (neg ? "-" : "") + body;
    else
      out += (neg ? " - " : " + ") + body;
  }
  return out;
}

}  // namespace

void write_series(std::ostream& os, const TruncatedSeries<Rational>& s) {
  os << "# variables";
  for (const auto& n : s.variables()->names()) os << ' ' << n;
  os << "\n# truncation " << s.truncation().order << ' ' << s.truncation().param_order << '\n';
  write_terms(os, s);
}

TruncatedSeries<Rational> read_series(std::istream& is, VariablesPtr vars, Truncation trunc) {
  TruncatedSeries<Rational> out(std::move(vars), trunc);
  std::string line;
  while (std::getline(is, line)) {
    if (is_blank(line) || line[0] == '#') continue;
    parse_term(line, out);
  }
  return out;
}

void write_series_vector(std::ostream& os, const SeriesVector<Rational>& v, const std::vector<std::string>& names) {
  if (names.size() != v.size()) throw StructuralError("write_series_vector: one name per component required");
  os << "# variables";
  for (const auto& n : v.variables()->names()) os << ' ' << n;
  os << "\n# truncation " << v.truncation().order << ' ' << v.truncation().param_order << '\n';
  for (std::size_t i = 0; i < v.size(); ++i) {
    os << "# component " << names[i] << '\n';
    write_terms(os, v[i]);
  }
}

SeriesVector<Rational> read_series_vector(std::istream& is, VariablesPtr vars, Truncation trunc,
                                          std::vector<std::string>* names) {
  std::vector<TruncatedSeries<Rational>> comps;
  std::vector<std::string> found;
  std::string line;
  while (std::getline(is, line)) {
    if (is_blank(line)) continue;
    if (line.rfind("# component ", 0) == 0) {
      found.push_back(line.substr(12));
      comps.emplace_back(vars, trunc);
      continue;
    }
    if (line[0] == '#') continue;
    if (comps.empty()) throw ValidationError("series text: term before the first component header");
    parse_term(line, comps.back());
  }
  if (comps.empty()) throw ValidationError("series text: no components");
  if (names) *names = found;
  return SeriesVector<Rational>(std::move(comps));
}

std::string format_series(const TruncatedSeries<Rational>& s) {
  return format_generic(s, [](const Rational& c) {
    Rational a = abs(c);
    return std::pair<bool, std::string>(sgn(c) < 0, to_string(a));
  });
}

std::string format_series(const TruncatedSeries<double>& s, int digits) {
  return format_generic(s, [digits](double c) {
    return std::pair<bool, std::string>(c < 0, fmt::format("{:.{}g}", std::fabs(c), digits));
  });
}

std::string format_rounded(const TruncatedSeries<Rational>& s, int digits, Rounding mode) {
  return format_generic(
      s,
      [digits, mode](const Rational& c) {
        Rational r = round_significant(c, digits, mode);
        return std::pair<bool, std::string>(sgn(r) < 0, decimal_string(abs(r), digits + 2));
      },
      true);
}

}  // namespace msbc
