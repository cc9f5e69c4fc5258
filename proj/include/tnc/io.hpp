#ifndef TNC_IO_HPP
#define TNC_IO_HPP

#include <string>

#include "tnc/mps.hpp"

namespace tnc {

/// TNC1 container: one ASCII header line `TNC1 {json}`, a raw payload of
/// little-endian doubles (re, im interleaved, row-major site order), and
/// a trailing CRC-64 of the payload.
void save_mps(const Mps& psi, const std::string& path);
void save_mpo(const Mpo& h, const std::string& path);
Mps load_mps(const std::string& path);
Mpo load_mpo(const std::string& path);

enum class FileKind { MpsFile, MpoFile };
FileKind probe_file(const std::string& path);

/// Plain-text dense dumps for the convert tool: a comment header
/// carrying kind/n/d, then one `re im` pair per line (17 significant
/// digits). MPOs are dumped as the dense d^n x d^n matrix in row-major
/// order.
void write_dense_dump_mps(const Mps& psi, const std::string& path);
void write_dense_dump_mpo(const Mpo& h, const std::string& path);

struct DenseDump {
  FileKind kind;
  Index n = 0;
  Index d = 0;
  DenseTensor data;  // rank-1 d^n vector or d^n x d^n matrix
};
DenseDump read_dense_dump(const std::string& path);

std::uint64_t crc64(const void* data, std::size_t len);

}  // namespace tnc

#endif  // TNC_IO_HPP
