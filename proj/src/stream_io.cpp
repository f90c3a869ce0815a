#include "pss/stream_io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <stdexcept>
#include <string>

namespace pss {
namespace {

enum class Format { kRaw, kText };

Format format_of(const std::filesystem::path& path) {
  const auto ext = path.extension();
  if (ext == ".u32") return Format::kRaw;
  if (ext == ".txt") return Format::kText;
  throw std::runtime_error("unsupported stream file extension '" + ext.string() + "' for " +
                           path.string() + " (expected .u32 or .txt)");
}

std::vector<Item> read_raw(std::ifstream& in, const std::filesystem::path& path) {
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.size() % 4 != 0) {
    throw std::runtime_error(path.string() + ": size " + std::to_string(bytes.size()) +
                             " is not a multiple of 4");
  }
  std::vector<Item> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto* b = reinterpret_cast<const unsigned char*>(bytes.data() + 4 * i);
    out[i] = Item{b[0]} | Item{b[1]} << 8 | Item{b[2]} << 16 | Item{b[3]} << 24;
  }
  return out;
}

std::vector<Item> read_text(std::ifstream& in, const std::filesystem::path& path) {
  std::vector<Item> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* begin = line.data() + first;
    const char* end = line.data() + last + 1;
    Item value = 0;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) {
      throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                               ": not an unsigned 32-bit integer: '" +
                               std::string(begin, end) + "'");
    }
    out.push_back(value);
  }
  return out;
}

}  // namespace

std::vector<Item> read_stream(const std::filesystem::path& path) {
  const Format format = format_of(path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open stream file " + path.string());
  return format == Format::kRaw ? read_raw(in, path) : read_text(in, path);
}

void write_stream(const std::filesystem::path& path, std::span<const Item> stream) {
  const Format format = format_of(path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot create stream file " + path.string());
  if (format == Format::kText) {
    for (Item x : stream) out << x << '\n';
  } else {
    std::string buf(stream.size() * 4, '\0');
    for (std::size_t i = 0; i < stream.size(); ++i) {
      for (int b = 0; b < 4; ++b) buf[4 * i + b] = static_cast<char>((stream[i] >> (8 * b)) & 0xffu);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  }
  if (!out) throw std::runtime_error("failed writing stream file " + path.string());
}

}  // namespace pss
