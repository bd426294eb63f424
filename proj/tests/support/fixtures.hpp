#pragma once

#include <filesystem>
#include <string>

namespace wxtest {

std::filesystem::path source_dir();
std::filesystem::path fixture_path(const std::string& name);
std::string read_fixture(const std::string& name);
std::string read_text(const std::filesystem::path& p);

/// A loopback port that was free a moment ago and has nothing listening now.
int closed_local_port();

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace wxtest
