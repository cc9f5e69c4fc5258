#include "tnc/io.hpp"

#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace tnc {

static_assert(std::endian::native == std::endian::little,
              "TNC1 payloads are little-endian");

namespace {

using json = nlohmann::json;

// CRC-64/XZ (reflected, poly 0xC96C5795D7870F42)
const std::array<std::uint64_t, 256>& crc_table() {
  static const auto table = [] {
    std::array<std::uint64_t, 256> t{};
    for (std::uint64_t i = 0; i < 256; ++i) {
      std::uint64_t crc = i;
      for (int k = 0; k < 8; ++k)
        crc = (crc >> 1) ^ ((crc & 1) ? 0xC96C5795D7870F42ULL : 0);
      t[static_cast<size_t>(i)] = crc;
    }
    return t;
  }();
  return table;
}

std::string header_json_mps(const Mps& psi) {
  json j;
  j["kind"] = "mps";
  j["n"] = psi.n();
  j["d"] = psi.phys_dim();
  j["bonds"] = psi.bonds();
  return j.dump();
}

std::string header_json_mpo(const Mpo& h) {
  json j;
  j["kind"] = "mpo";
  j["n"] = h.n();
  j["d_out"] = h.phys_dim_out();
  j["d_in"] = h.phys_dim_in();
  j["bonds"] = h.bonds();
  return j.dump();
}

void write_payload(std::ofstream& out, const std::vector<DenseTensor>& sites) {
  std::uint64_t crc = ~0ULL;
  const auto& table = crc_table();
  for (const auto& s : sites) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(s.data().data());
    const size_t len = s.data().size() * sizeof(cplx);
    out.write(reinterpret_cast<const char*>(bytes),
              static_cast<std::streamsize>(len));
    for (size_t i = 0; i < len; ++i)
      crc = (crc >> 8) ^ table[(crc ^ bytes[i]) & 0xff];
  }
  crc = ~crc;
  out.write(reinterpret_cast<const char*>(&crc), 8);
}

struct Header {
  json fields;
};

Header read_header(std::ifstream& in, const std::string& path) {
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": truncated file");
  if (line.rfind("TNC1 ", 0) != 0)
    throw IoError(path + ": not a TNC1 file or unsupported version");
  Header h;
  try {
    h.fields = json::parse(line.substr(5));
  } catch (const json::exception& e) {
    throw IoError(path + ": bad header: " + e.what());
  }
  return h;
}

std::vector<DenseTensor> read_payload(std::ifstream& in,
                                      const std::vector<std::vector<Index>>& shapes,
                                      const std::string& path) {
  std::vector<DenseTensor> sites;
  std::uint64_t crc = ~0ULL;
  const auto& table = crc_table();
  for (const auto& shape : shapes) {
    DenseTensor t(shape);
    auto* bytes = reinterpret_cast<unsigned char*>(t.data().data());
    const size_t len = t.data().size() * sizeof(cplx);
    in.read(reinterpret_cast<char*>(bytes), static_cast<std::streamsize>(len));
    if (static_cast<size_t>(in.gcount()) != len)
      throw IoError(path + ": truncated file");
    for (size_t i = 0; i < len; ++i)
      crc = (crc >> 8) ^ table[(crc ^ bytes[i]) & 0xff];
    sites.push_back(std::move(t));
  }
  crc = ~crc;
  std::uint64_t stored = 0;
  in.read(reinterpret_cast<char*>(&stored), 8);
  if (in.gcount() != 8) throw IoError(path + ": truncated file");
  if (stored != crc) throw ChecksumError(path + ": payload checksum mismatch");
  return sites;
}

std::vector<Index> header_bonds(const json& j, const std::string& path) {
  if (!j.contains("bonds") || !j["bonds"].is_array())
    throw IoError(path + ": bad header: missing bonds");
  std::vector<Index> bonds = j["bonds"].get<std::vector<Index>>();
  for (Index b : bonds)
    if (b < 1) throw IoError(path + ": bad header: nonpositive bond");
  return bonds;
}

}  // namespace

std::uint64_t crc64(const void* data, std::size_t len) {
  std::uint64_t crc = ~0ULL;
  const auto* bytes = static_cast<const unsigned char*>(data);
  const auto& table = crc_table();
  for (size_t i = 0; i < len; ++i)
    crc = (crc >> 8) ^ table[(crc ^ bytes[i]) & 0xff];
  return ~crc;
}

void save_mps(const Mps& psi, const std::string& path) {
  psi.check_consistent();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << "TNC1 " << header_json_mps(psi) << "\n";
  write_payload(out, psi.sites);
  if (!out) throw IoError(path + ": write failed");
}

void save_mpo(const Mpo& h, const std::string& path) {
  h.check_consistent();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << "TNC1 " << header_json_mpo(h) << "\n";
  write_payload(out, h.sites);
  if (!out) throw IoError(path + ": write failed");
}

Mps load_mps(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open");
  Header h = read_header(in, path);
  if (h.fields.value("kind", "") != "mps")
    throw IoError(path + ": expected an MPS file");
  const Index n = h.fields.value("n", Index(0));
  const Index d = h.fields.value("d", Index(0));
  auto bonds = header_bonds(h.fields, path);
  if (n < 1 || d < 1 || static_cast<Index>(bonds.size()) != n + 1)
    throw IoError(path + ": bad header fields");
  std::vector<std::vector<Index>> shapes;
  for (Index j = 0; j < n; ++j)
    shapes.push_back({bonds[static_cast<size_t>(j)], d,
                      bonds[static_cast<size_t>(j) + 1]});
  Mps psi;
  psi.sites = read_payload(in, shapes, path);
  psi.check_consistent();
  return psi;
}

Mpo load_mpo(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open");
  Header h = read_header(in, path);
  if (h.fields.value("kind", "") != "mpo")
    throw IoError(path + ": expected an MPO file");
  const Index n = h.fields.value("n", Index(0));
  const Index d_out = h.fields.value("d_out", Index(0));
  const Index d_in = h.fields.value("d_in", Index(0));
  auto bonds = header_bonds(h.fields, path);
  if (n < 1 || d_out < 1 || d_in < 1 ||
      static_cast<Index>(bonds.size()) != n + 1)
    throw IoError(path + ": bad header fields");
  std::vector<std::vector<Index>> shapes;
  for (Index j = 0; j < n; ++j)
    shapes.push_back({bonds[static_cast<size_t>(j)], d_out, d_in,
                      bonds[static_cast<size_t>(j) + 1]});
  Mpo h_out;
  h_out.sites = read_payload(in, shapes, path);
  h_out.check_consistent();
  return h_out;
}

FileKind probe_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open");
  Header h = read_header(in, path);
  const std::string kind = h.fields.value("kind", "");
  if (kind == "mps") return FileKind::MpsFile;
  if (kind == "mpo") return FileKind::MpoFile;
  throw IoError(path + ": unknown kind '" + kind + "'");
}

namespace {

void write_values(std::ofstream& out, const DenseTensor& t) {
  char buf[128];
  for (const cplx& v : t.data()) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", v.real(), v.imag());
    out << buf;
  }
}

}  // namespace

void write_dense_dump_mps(const Mps& psi, const std::string& path) {
  DenseTensor dense = to_dense(psi);
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << "# tnc-dense kind=mps n=" << psi.n() << " d=" << psi.phys_dim()
      << "\n";
  write_values(out, dense);
  if (!out) throw IoError(path + ": write failed");
}

void write_dense_dump_mpo(const Mpo& h, const std::string& path) {
  DenseTensor dense = to_dense_matrix(h);
  std::ofstream out(path);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << "# tnc-dense kind=mpo n=" << h.n() << " d=" << h.phys_dim_out()
      << "\n";
  write_values(out, dense);
  if (!out) throw IoError(path + ": write failed");
}

DenseDump read_dense_dump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path + ": cannot open");
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  DenseDump dump;
  {
    std::istringstream hs(line);
    std::string tag, word;
    hs >> tag >> word;
    if (tag != "#" || word != "tnc-dense")
      throw IoError(path + ": not a tnc-dense dump");
    std::string kind;
    while (hs >> word) {
      auto eq = word.find('=');
      if (eq == std::string::npos) continue;
      std::string key = word.substr(0, eq), val = word.substr(eq + 1);
      if (key == "kind") kind = val;
      else if (key == "n") dump.n = std::stoll(val);
      else if (key == "d") dump.d = std::stoll(val);
    }
    if (kind == "mps") dump.kind = FileKind::MpsFile;
    else if (kind == "mpo") dump.kind = FileKind::MpoFile;
    else throw IoError(path + ": bad kind in dense dump header");
  }
  if (dump.n < 1 || dump.d < 1) throw IoError(path + ": bad dump header");
  Index total = 1;
  for (Index j = 0; j < dump.n; ++j) total *= dump.d;
  const Index count =
      dump.kind == FileKind::MpsFile ? total : total * total;
  std::vector<cplx> values;
  values.reserve(static_cast<size_t>(count));
  double re = 0, im = 0;
  while (static_cast<Index>(values.size()) < count && (in >> re >> im))
    values.emplace_back(re, im);
  if (static_cast<Index>(values.size()) != count)
    throw IoError(path + ": truncated dense dump");
  if (dump.kind == FileKind::MpsFile)
    dump.data = DenseTensor({count}, std::move(values));
  else
    dump.data = DenseTensor({total, total}, std::move(values));
  return dump;
}

}  // namespace tnc
