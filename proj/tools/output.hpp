#pragma once
#include <cstdio>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace htk::tools {

// 12 significant digits for every floating-point value we print
inline std::string g12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

// a JSON number that serializes exactly like g12 printed it
inline nlohmann::json json_num(double x) { return nlohmann::json::parse(g12(x)); }

// payload goes to `out` when set, stdout otherwise
inline void emit(const std::string& payload, const std::string& out) {
  if (out.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write output: " + out);
  f << payload;
}

}  // namespace htk::tools
