#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace geosynth::fixtures {

struct ShapeFixture {
  std::string task;
  int stage = 0;
  std::string source;
};

/// The built-in shape corpus, one "<task>\t<stage>\t<dsl>" line per shape.
inline std::vector<ShapeFixture> corpus_shapes() {
  std::ifstream in(std::string(GEOSYNTH_FIXTURES) + "/shapes.tsv");
  std::vector<ShapeFixture> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    ShapeFixture f;
    std::string stage;
    std::getline(row, f.task, '\t');
    std::getline(row, stage, '\t');
    std::getline(row, f.source);
    f.stage = std::stoi(stage);
    out.push_back(f);
  }
  return out;
}

inline std::string read_fixture(const std::string& relative) {
  std::ifstream in(std::string(GEOSYNTH_FIXTURES) + "/" + relative, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace geosynth::fixtures
