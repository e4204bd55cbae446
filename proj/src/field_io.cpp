#include "halfheat/field_io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace halfheat {

namespace {

constexpr char kMagic[8] = {'H', 'H', 'F', 'I', 'E', 'L', 'D', '1'};

struct Header {
  std::uint32_t kind = 0;  // 0 sampled, 1 spectral
  std::uint32_t d = 0;
  std::uint32_t n_x = 0;
  std::uint32_t n_t = 0;
  double box_x = 0.0;
  double box_t = 0.0;
};

void write_raw(const std::filesystem::path& path, std::uint32_t kind,
               const Grid& g, const std::vector<cplx>& data) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  Header h{kind, std::uint32_t(g.d), std::uint32_t(g.n_x), std::uint32_t(g.n_t),
           g.box_x, g.box_t};
  os.write(kMagic, sizeof kMagic);
  os.write(reinterpret_cast<const char*>(&h), sizeof h);
  os.write(reinterpret_cast<const char*>(data.data()),
           std::streamsize(data.size() * sizeof(cplx)));
  if (!os) throw std::runtime_error("short write: " + path.string());
}

std::pair<Grid, std::vector<cplx>> read_raw(const std::filesystem::path& path,
                                            std::uint32_t want_kind) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open for reading: " + path.string());
  char magic[8];
  Header h;
  is.read(magic, sizeof magic);
  is.read(reinterpret_cast<char*>(&h), sizeof h);
  if (!is || std::memcmp(magic, kMagic, sizeof magic) != 0)
    throw std::runtime_error("not a field file: " + path.string());
  if (h.kind != want_kind)
    throw std::runtime_error("field kind mismatch: " + path.string());
  Grid g = make_grid(int(h.d), h.box_x, h.box_t, int(h.n_x), int(h.n_t));
  std::vector<cplx> data(g.size());
  is.read(reinterpret_cast<char*>(data.data()),
          std::streamsize(data.size() * sizeof(cplx)));
  if (!is) throw std::runtime_error("truncated field file: " + path.string());
  return {g, std::move(data)};
}

void csv_body(std::ostream& os, const char* kind, const Grid& g,
              const std::vector<cplx>& data) {
  char line[128];
  std::snprintf(line, sizeof line,
                "# field kind=%s d=%d n_x=%d n_t=%d box_x=%.17g box_t=%.17g\n",
                kind, g.d, g.n_x, g.n_t, g.box_x, g.box_t);
  os << line << "index,re,im\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", i, data[i].real(),
                  data[i].imag());
    os << line;
  }
}

}  // namespace

void write_field(const std::filesystem::path& path, const SampledField& u) {
  write_raw(path, 0, u.grid, u.v);
}

void write_field(const std::filesystem::path& path, const SpectralField& f) {
  write_raw(path, 1, f.grid, f.c);
}

SampledField read_sampled(const std::filesystem::path& path) {
  auto [g, data] = read_raw(path, 0);
  return SampledField{g, std::move(data)};
}

SpectralField read_spectral(const std::filesystem::path& path) {
  auto [g, data] = read_raw(path, 1);
  return SpectralField{g, std::move(data)};
}

void write_field_csv(std::ostream& os, const SampledField& u) {
  csv_body(os, "sampled", u.grid, u.v);
}

void write_field_csv(std::ostream& os, const SpectralField& f) {
  csv_body(os, "spectral", f.grid, f.c);
}

void write_field_csv(const std::filesystem::path& path, const SampledField& u) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path.string());
  write_field_csv(os, u);
}

}  // namespace halfheat
