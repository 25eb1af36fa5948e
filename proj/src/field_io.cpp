#include "choq/field_io.hpp"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace choq {

namespace {

void put_u32(std::string& s, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) s.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& s, double v) {
  std::uint64_t b;
  std::memcpy(&b, &v, 8);
  for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((b >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& s, std::size_t& pos) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(s[pos++])) << (8 * i);
  return v;
}

double get_f64(const std::string& s, std::size_t& pos) {
  std::uint64_t b = 0;
  for (int i = 0; i < 8; ++i) b |= static_cast<std::uint64_t>(static_cast<unsigned char>(s[pos++])) << (8 * i);
  double v;
  std::memcpy(&v, &b, 8);
  return v;
}

}  // namespace

void atomic_write(const std::string& path, const std::string& bytes) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open for writing: " + tmp);
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("short write: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

void write_field(const std::string& path, const Field& u) {
  std::string s;
  s.reserve(10 + 12 * u.grid.dim + 8 * u.size());
  s += "CHQF";
  s.push_back(1);
  s.push_back(static_cast<char>(u.grid.dim));
  for (int a = 0; a < u.grid.dim; ++a) {
    put_u32(s, static_cast<std::uint32_t>(u.grid.m));
    put_f64(s, u.grid.box);
  }
  for (double x : u.v) put_f64(s, x);
  atomic_write(path, s);
}

Field read_field(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open field file: " + path);
  std::string s((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  if (s.size() < 6 || s.compare(0, 4, "CHQF") != 0)
    throw std::runtime_error("not a CHQF field file: " + path);
  std::size_t pos = 4;
  int version = static_cast<unsigned char>(s[pos++]);
  if (version != 1) throw std::runtime_error("unsupported CHQF version");
  int dim = static_cast<unsigned char>(s[pos++]);
  if (dim < 1 || dim > 3) throw std::runtime_error("CHQF: bad dimension byte");
  std::uint32_t m = 0;
  double box = 0;
  for (int a = 0; a < dim; ++a) {
    if (pos + 12 > s.size()) throw std::runtime_error("CHQF: truncated header");
    std::uint32_t ma = get_u32(s, pos);
    double la = get_f64(s, pos);
    if (a == 0) {
      m = ma;
      box = la;
    } else if (ma != m || la != box) {
      throw std::runtime_error("CHQF: anisotropic grids are not supported");
    }
  }
  Grid g(dim, static_cast<int>(m), box);
  if (pos + 8 * g.size() > s.size()) throw std::runtime_error("CHQF: truncated data");
  Field u(g);
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = get_f64(s, pos);
  return u;
}

}  // namespace choq
