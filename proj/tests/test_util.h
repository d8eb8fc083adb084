// tests/test_util.h

// Copyright 2026  The cabkws Authors

// See LICENSE at the repository root for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef CABKWS_TESTS_TEST_UTIL_H_
#define CABKWS_TESTS_TEST_UTIL_H_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include <unistd.h>

#include "cabkws/common/random.h"
#include "cabkws/common/tensor.h"

namespace cabkws::testing {

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("cabkws_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  std::string path() const { return path_.string(); }
  std::string File(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::vector<uint8_t> ReadBytes(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return std::vector<uint8_t>(std::istreambuf_iterator<char>(f), {});
}

inline std::string ReadText(const std::string& path) {
  std::ifstream f(path);
  return std::string(std::istreambuf_iterator<char>(f), {});
}

inline Mat<double> RandomMat(int rows, int cols, Rng& rng, double lo = -1.0, double hi = 1.0) {
  Mat<double> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.Uniform(lo, hi);
  return m;
}

inline Mat<double> UnitRows(Mat<double> m) {
  for (int i = 0; i < m.rows(); ++i) m.row(i) /= m.row(i).norm();
  return m;
}

// Minimal RIFF/WAVE writer, independent of the library's encoder.
inline std::vector<uint8_t> MakeWavBytes(const std::vector<int16_t>& samples, int rate,
                                         int channels = 1, int bits = 16, int format = 1) {
  std::vector<uint8_t> b;
  auto put = [&](uint32_t v, int n) {
    for (int i = 0; i < n; ++i) b.push_back(static_cast<uint8_t>((v >> (8 * i)) & 0xff));
  };
  auto tag = [&](const char* s) { b.insert(b.end(), s, s + 4); };
  const uint32_t data_bytes = static_cast<uint32_t>(samples.size() * (bits / 8));
  tag("RIFF");
  put(36 + data_bytes, 4);
  tag("WAVE");
  tag("fmt ");
  put(16, 4);
  put(static_cast<uint32_t>(format), 2);
  put(static_cast<uint32_t>(channels), 2);
  put(static_cast<uint32_t>(rate), 4);
  put(static_cast<uint32_t>(rate * channels * bits / 8), 4);
  put(static_cast<uint32_t>(channels * bits / 8), 2);
  put(static_cast<uint32_t>(bits), 2);
  tag("data");
  put(data_bytes, 4);
  for (int16_t s : samples) {
    if (bits == 16) {
      put(static_cast<uint16_t>(s), 2);
    } else {
      put(static_cast<uint8_t>(s), 1);
    }
  }
  return b;
}

}  // namespace cabkws::testing

#endif  // CABKWS_TESTS_TEST_UTIL_H_
