#include "cmtsim/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "cmtsim/errors.hpp"

namespace cmtsim {

std::string format17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void atomic_write_file(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw usage_error("cannot open output path: " + tmp.string());
    os.write(content.data(), std::streamsize(content.size()));
    if (!os) throw usage_error("short write to: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw usage_error("cannot rename into place: " + target.string() + " (" + ec.message() + ")");
  }
}

}  // namespace cmtsim
