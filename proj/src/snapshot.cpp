#include <algorithm>
#include <bit>
#include <cstring>
#include <fstream>

#include "lowmach/errors.hpp"
#include "lowmach/fields.hpp"

namespace lowmach {

namespace {

constexpr char kMagic[8] = {'L', 'M', 'S', 'N', 'A', 'P', '0', '1'};

template <typename T>
void put(std::ostream& os, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw Error("snapshot: unexpected end of file");
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(const std::string& path, const Grid& grid, const std::vector<NamedField>& fields) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("snapshot: cannot open '" + path + "' for writing");
  const int n = grid.n();
  os.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(os, n);
  put<double>(os, grid.dealias_fraction());
  put<std::uint32_t>(os, static_cast<std::uint32_t>(fields.size()));
  for (const auto& [name, field] : fields) {
    if (!(field.grid() == grid)) throw InvalidParameter("snapshot: field '" + name + "' is on another grid");
    put<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    put<std::uint32_t>(os, n);
    for (int kx = -n / 2 + 1; kx <= n / 2; ++kx)
      for (int ky = -n / 2 + 1; ky <= n / 2; ++ky) {
        const Complex c = field.coeff(kx, ky);
        put<double>(os, c.real());
        put<double>(os, c.imag());
      }
  }
  if (!os) throw Error("snapshot: write to '" + path + "' failed");
}

std::vector<NamedField> read_snapshot(const std::string& path, Grid* grid_out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("snapshot: cannot open '" + path + "'");
  char magic[8];
  if (!is.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw Error("snapshot: '" + path + "' is not a snapshot archive");
  const auto n = static_cast<int>(get<std::uint32_t>(is));
  const double fraction = get<double>(is);
  const Grid grid(n, fraction);
  const auto count = get<std::uint32_t>(is);
  std::vector<NamedField> fields;
  for (std::uint32_t f = 0; f < count; ++f) {
    const auto len = get<std::uint32_t>(is);
    std::string name(len, '\0');
    if (!is.read(name.data(), len)) throw Error("snapshot: truncated field name");
    if (static_cast<int>(get<std::uint32_t>(is)) != n) throw Error("snapshot: field size mismatch");
    Field field(grid);
    for (int kx = -n / 2 + 1; kx <= n / 2; ++kx)
      for (int ky = -n / 2 + 1; ky <= n / 2; ++ky) {
        const double re = get<double>(is);
        const double im = get<double>(is);
        field.coeffs()(grid.index(kx), grid.index(ky)) = Complex(re, im);
      }
    fields.push_back({std::move(name), std::move(field)});
  }
  if (grid_out != nullptr) *grid_out = grid;
  return fields;
}

void save_state(const std::string& path, const SplitState& s) {
  write_snapshot(path, s.grid(),
                 {{"U_x", s.U[0]}, {"U_y", s.U[1]}, {"P", s.P}, {"v_x", s.v[0]}, {"v_y", s.v[1]},
                  {"eta", s.eta}, {"theta", s.theta}});
}

SplitState load_state(const std::string& path) {
  Grid grid;
  const auto fields = read_snapshot(path, &grid);
  SplitState s = SplitState::zero(grid);
  auto find = [&](const std::string& name) -> const Field& {
    for (const auto& nf : fields)
      if (nf.name == name) return nf.field;
    throw Error("snapshot: '" + path + "' has no field '" + name + "'");
  };
  s.U = VectorField(find("U_x"), find("U_y"));
  s.P = find("P");
  s.v = VectorField(find("v_x"), find("v_y"));
  s.eta = find("eta");
  s.theta = find("theta");
  return s;
}

}  // namespace lowmach
