#pragma once
#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "htk/complex.hpp"

namespace htk::core {

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

// Format: first line `dim=<d> n=<n>`; then one face per line as d+1
// space-separated, strictly increasing 0-based vertex ids. `#` starts a
// comment line; blank lines are ignored.
inline SimplicialComplex read_complex(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_content_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t i = line.find_first_not_of(" \t\r");
      if (i == std::string::npos || line[i] == '#') continue;
      return true;
    }
    return false;
  };

  if (!next_content_line()) throw ParseError(lineno ? lineno : 1, "missing header");
  int d = -1, n = -1;
  if (std::sscanf(line.c_str(), " dim=%d n=%d", &d, &n) != 2)
    throw ParseError(lineno, "bad header, expected `dim=<d> n=<n>`");
  if (d < 1 || n <= d) throw ParseError(lineno, "need n > d >= 1");

  SimplicialComplex x(n, d);
  while (next_content_line()) {
    std::istringstream ss(line);
    FaceKey f;
    std::int64_t v;
    while (ss >> v) f.push_back(static_cast<std::int32_t>(v));
    if (!ss.eof()) throw ParseError(lineno, "non-numeric token in face line");
    if (static_cast<int>(f.size()) != d + 1)
      throw ParseError(lineno, "face must list exactly " + std::to_string(d + 1) + " vertices");
    std::uint64_t r;
    try {
      r = face_rank(f, n);
    } catch (const std::invalid_argument& e) {
      throw ParseError(lineno, e.what());
    }
    if (x.has(r)) throw ParseError(lineno, "duplicate face");
    x.faces.insert(std::lower_bound(x.faces.begin(), x.faces.end(), r), r);
  }
  return x;
}

inline void write_complex(const SimplicialComplex& x, std::ostream& out) {
  out << "dim=" << x.d << " n=" << x.n << "\n";
  std::vector<std::int32_t> face(static_cast<std::size_t>(x.d) + 1);
  for (std::uint64_t r : x.faces) {
    colex_unrank(r, x.d + 1, face.data());
    for (std::size_t i = 0; i < face.size(); ++i)
      out << face[i] << (i + 1 < face.size() ? ' ' : '\n');
  }
}

}  // namespace htk::core
