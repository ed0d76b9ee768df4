#pragma once

#include <cstdlib>
#include <string>

inline std::string fixture(const std::string& name) {
  const char* dir = std::getenv("PCX_FIXTURES");
  return std::string(dir ? dir : "fixtures") + "/" + name;
}
