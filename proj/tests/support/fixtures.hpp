#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "dimpact/io.hpp"

namespace dimpact::testing {

inline std::string fixturePath(const std::string& name) {
  return std::string(DIMPACT_FIXTURE_DIR) + "/" + name;
}

inline std::string readText(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline const ProcessModel& hotelModel() {
  static const ProcessModel model = parseModel(readText(fixturePath("hotel/hotel.model.json")));
  return model;
}

inline const RelationalSchema& hotelSchema() {
  static const RelationalSchema schema =
      parseSchema(readText(fixturePath("hotel/hotel.schema.json")));
  return schema;
}

}  // namespace dimpact::testing
