#include "netboost/pajek.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "netboost/error.hpp"

namespace netboost {
namespace {

enum class Section { None, Vertices, Edges };

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

/// Splits off the next whitespace-delimited token; a leading `"` reads up to
/// the closing quote.
std::optional<std::string_view> next_token(std::string_view& rest, bool* quoted = nullptr) {
  rest = trim(rest);
  if (rest.empty()) return std::nullopt;
  if (rest.front() == '"') {
    auto close = rest.find('"', 1);
    if (close == std::string_view::npos) return std::nullopt;
    auto token = rest.substr(1, close - 1);
    rest.remove_prefix(close + 1);
    if (quoted) *quoted = true;
    return token;
  }
  auto end = std::find_if(rest.begin(), rest.end(),
                          [](unsigned char c) { return std::isspace(c) != 0; });
  auto len = static_cast<std::size_t>(end - rest.begin());
  auto token = rest.substr(0, len);
  rest.remove_prefix(len);
  if (quoted) *quoted = false;
  return token;
}

std::string where(std::size_t line_no) { return "line " + std::to_string(line_no); }

std::uint64_t parse_id(std::string_view token, std::size_t line_no) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::MalformedLine,
                where(line_no) + ": expected a node id, got '" + std::string(token) + "'");
  }
  return value;
}

/// Integer weights; integral decimals such as "3.0" are accepted as 3.
Weight parse_weight(std::string_view token, std::size_t line_no) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    double real = 0.0;
    auto [rptr, rec] = std::from_chars(token.data(), token.data() + token.size(), real);
    const bool integral = rec == std::errc() && rptr == token.data() + token.size() &&
                          std::isfinite(real) && std::floor(real) == real &&
                          std::abs(real) < 9.0e15;
    if (!integral) {
      throw Error(ErrorCode::NonIntegerWeight,
                  where(line_no) + ": weight '" + std::string(token) + "' is not an integer");
    }
    value = static_cast<std::int64_t>(real);
  }
  if (value <= 0) {
    throw Error(ErrorCode::NonpositiveWeight,
                where(line_no) + ": weight " + std::to_string(value) + " is not positive");
  }
  return static_cast<Weight>(value);
}

}  // namespace

Network parse_pajek(std::string_view text) {
  Section section = Section::None;
  std::size_t n = 0;
  std::vector<std::string> labels;
  std::vector<bool> seen;
  std::vector<Edge> edges;

  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto eol = text.find('\n');
    auto raw = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);
    auto line = trim(raw);
    if (line.empty() || line.front() == '%') continue;

    if (line.front() == '*') {
      auto rest = line;
      auto keyword = lower(*next_token(rest));
      if (keyword == "*vertices") {
        if (section != Section::None) {
          throw Error(ErrorCode::MalformedLine, where(line_no) + ": second *Vertices section");
        }
        auto count = next_token(rest);
        if (!count) throw Error(ErrorCode::MalformedLine, where(line_no) + ": missing vertex count");
        n = parse_id(*count, line_no);
        if (n > std::numeric_limits<NodeId>::max() - 1) {
          throw Error(ErrorCode::MalformedLine, where(line_no) + ": vertex count too large");
        }
        labels.resize(n);
        seen.assign(n, false);
        for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i + 1);
        section = Section::Vertices;
      } else if (keyword == "*arcs" || keyword == "*arcslist") {
        throw Error(ErrorCode::ArcsNotSupported,
                    where(line_no) + ": directed *Arcs sections are not supported");
      } else if (keyword == "*edges") {
        if (section == Section::None) {
          throw Error(ErrorCode::MissingVerticesHeader, where(line_no) + ": *Edges before *Vertices");
        }
        section = Section::Edges;
      } else {
        throw Error(ErrorCode::MalformedLine,
                    where(line_no) + ": unsupported section '" + std::string(line) + "'");
      }
      continue;
    }

    switch (section) {
      case Section::None:
        throw Error(ErrorCode::MissingVerticesHeader,
                    where(line_no) + ": content before the *Vertices header");
      case Section::Vertices: {
        auto rest = line;
        auto id = parse_id(*next_token(rest), line_no);
        if (id < 1 || id > n) {
          throw Error(ErrorCode::OutOfRangeNodeId,
                      where(line_no) + ": vertex " + std::to_string(id) + " outside 1.." +
                          std::to_string(n));
        }
        if (seen[id - 1]) {
          throw Error(ErrorCode::MalformedLine, where(line_no) + ": vertex " + std::to_string(id) +
                                                    " declared twice");
        }
        seen[id - 1] = true;
        if (!trim(rest).empty()) {
          auto label = next_token(rest);
          if (!label) {
            throw Error(ErrorCode::MalformedLine, where(line_no) + ": unterminated label");
          }
          labels[id - 1] = std::string(*label);
        }
        break;
      }
      case Section::Edges: {
        auto rest = line;
        auto u_tok = next_token(rest);
        auto v_tok = next_token(rest);
        if (!u_tok || !v_tok) {
          throw Error(ErrorCode::MalformedLine, where(line_no) + ": expected 'u v [w]'");
        }
        auto u = parse_id(*u_tok, line_no);
        auto v = parse_id(*v_tok, line_no);
        if (u < 1 || u > n || v < 1 || v > n) {
          throw Error(ErrorCode::OutOfRangeNodeId,
                      where(line_no) + ": edge endpoint outside 1.." + std::to_string(n));
        }
        if (u == v) throw Error(ErrorCode::SelfLoop, where(line_no) + ": self-loop");
        Weight w = 1;
        if (auto w_tok = next_token(rest)) w = parse_weight(*w_tok, line_no);
        edges.push_back(Edge{static_cast<NodeId>(u), static_cast<NodeId>(v), w});
        break;
      }
    }
  }

  if (section == Section::None) {
    throw Error(ErrorCode::MissingVerticesHeader, "document has no *Vertices section");
  }
  return Network::build(std::move(labels), std::move(edges));
}

std::string serialize_pajek(const Network& net) {
  std::ostringstream out;
  out << "*Vertices " << net.node_count() << '\n';
  for (NodeId id = 1; id <= net.node_count(); ++id) {
    out << id << " \"" << net.label(id) << "\"\n";
  }
  out << "*Edges\n";
  for (const auto& e : net.edges()) out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
  return out.str();
}

}  // namespace netboost
