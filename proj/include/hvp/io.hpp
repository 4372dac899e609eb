#pragma once

#include <string>
#include <vector>

namespace hvp {

// Writes to a sibling temp file and renames it over `path`.
void atomic_write(const std::string& path, const std::string& bytes);
std::string read_file(const std::string& path);

// Small CSV builder; numbers are printed with round-trip precision.
class CsvWriter {
public:
  explicit CsvWriter(std::vector<std::string> header);
  void row(const std::vector<double>& values);
  const std::string& str() const { return buf_; }
  void save(const std::string& path) const { atomic_write(path, buf_); }

private:
  std::size_t width_;
  std::string buf_;
};

std::string format_double(double v);

}  // namespace hvp
