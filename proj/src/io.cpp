#include "cosserat/io.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <vector>

namespace cosserat {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts are unsupported");

namespace {

constexpr char kMagic[5] = {'C', 'S', 'R', 'F', '1'};

template <class T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) fail(ErrorCode::FormatError, "truncated field file");
  return v;
}

}  // namespace

void save_field(const CosseratField& f, const std::string& path) {
  f.validate();
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) fail(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  os.write(kMagic, sizeof(kMagic));
  put<std::uint8_t>(os, static_cast<std::uint8_t>(f.domain.shape));
  for (int a = 0; a < 3; ++a) put<double>(os, f.domain.shape_lo[a]);
  for (int a = 0; a < 3; ++a) put<double>(os, f.domain.shape_hi[a]);
  put<double>(os, f.domain.h);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.domain.nx));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.domain.ny));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(f.domain.nz));
  for (const Vector3& v : f.phi)
    for (int a = 0; a < 3; ++a) put<double>(os, v[a]);
  for (const Vector3& v : f.n)
    for (int a = 0; a < 3; ++a) put<double>(os, v[a]);
  os.write(reinterpret_cast<const char*>(f.domain.node_class.data()),
           static_cast<std::streamsize>(f.domain.node_class.size()));
  if (!os) fail(ErrorCode::Internal, "write failed for '" + path + "'");
}

CosseratField load_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorCode::InvalidArgument, "cannot open '" + path + "'");
  char magic[5];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    fail(ErrorCode::FormatError, "bad magic; not a CSRF1 field file");

  const auto tag = static_cast<ShapeTag>(get<std::uint8_t>(is));
  Vector3 lo, hi;
  for (int a = 0; a < 3; ++a) lo[a] = get<double>(is);
  for (int a = 0; a < 3; ++a) hi[a] = get<double>(is);
  const double h = get<double>(is);
  std::uint32_t dims[3];
  for (auto& d : dims) d = get<std::uint32_t>(is);

  GridDomain dom;
  switch (tag) {
    case ShapeTag::Ball: {
      Vector3 center = 0.5 * (lo + hi);
      double radius = 0.5 * (hi[0] - lo[0]);
      dom = make_ball_domain(center, radius, h);
      break;
    }
    case ShapeTag::Box:
    case ShapeTag::Cuboid:
      dom = make_box_domain(lo, hi, h, tag);
      break;
    default:
      fail(ErrorCode::FormatError, "unknown shape tag");
  }
  if (dom.nx != static_cast<int>(dims[0]) || dom.ny != static_cast<int>(dims[1]) ||
      dom.nz != static_cast<int>(dims[2]))
    fail(ErrorCode::FormatError, "stored dims do not match the reconstructed lattice");

  CosseratField f;
  f.domain = dom;
  const std::size_t sz = dom.size();
  f.phi.resize(sz);
  f.n.resize(sz);
  for (std::size_t i = 0; i < sz; ++i)
    for (int a = 0; a < 3; ++a) f.phi[i][a] = get<double>(is);
  for (std::size_t i = 0; i < sz; ++i)
    for (int a = 0; a < 3; ++a) f.n[i][a] = get<double>(is);
  std::vector<std::uint8_t> mask(sz);
  is.read(reinterpret_cast<char*>(mask.data()), static_cast<std::streamsize>(sz));
  if (!is) fail(ErrorCode::FormatError, "truncated field file");
  f.domain.node_class = std::move(mask);

  f.dirichlet.assign(sz, 0);
  for (std::size_t i = 0; i < sz; ++i)
    if (static_cast<NodeClass>(f.domain.node_class[i]) == NodeClass::Boundary)
      f.dirichlet[i] = 1;
  f.validate();
  return f;
}

void export_vtk(const CosseratField& f, const std::string& path) {
  std::FILE* fp = std::fopen(path.c_str(), "w");
  if (!fp) fail(ErrorCode::InvalidArgument, "cannot open '" + path + "' for writing");
  const GridDomain& d = f.domain;
  std::fprintf(fp, "# vtk DataFile Version 3.0\n");
  std::fprintf(fp, "cosserat field\nASCII\nDATASET STRUCTURED_POINTS\n");
  std::fprintf(fp, "DIMENSIONS %d %d %d\n", d.nx, d.ny, d.nz);
  std::fprintf(fp, "ORIGIN %.17g %.17g %.17g\n", d.node_lo[0], d.node_lo[1],
               d.node_lo[2]);
  std::fprintf(fp, "SPACING %.17g %.17g %.17g\n", d.h, d.h, d.h);
  std::fprintf(fp, "POINT_DATA %zu\n", d.size());
  // VTK structured points iterate x fastest; our storage is z fastest.
  auto for_each_vtk = [&](auto&& emit) {
    for (int k = 0; k < d.nz; ++k)
      for (int j = 0; j < d.ny; ++j)
        for (int i = 0; i < d.nx; ++i) emit(d.index(i, j, k));
  };
  std::fprintf(fp, "VECTORS deformation double\n");
  for_each_vtk([&](std::size_t idx) {
    std::fprintf(fp, "%.17g %.17g %.17g\n", f.phi[idx][0], f.phi[idx][1], f.phi[idx][2]);
  });
  std::fprintf(fp, "VECTORS director double\n");
  for_each_vtk([&](std::size_t idx) {
    std::fprintf(fp, "%.17g %.17g %.17g\n", f.n[idx][0], f.n[idx][1], f.n[idx][2]);
  });
  std::fprintf(fp, "SCALARS node_class int 1\nLOOKUP_TABLE default\n");
  for_each_vtk(
      [&](std::size_t idx) { std::fprintf(fp, "%d\n", int(f.domain.node_class[idx])); });
  std::fclose(fp);
}

}  // namespace cosserat
