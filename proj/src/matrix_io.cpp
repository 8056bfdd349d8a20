#include "specgal/matrix_io.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "specgal/linalg.hpp"

namespace specgal::io {

namespace {

constexpr char kTextMagic[] = "specgal matrices v1";
constexpr char kBinaryMagic[8] = {'S', 'G', 'M', 'X', 'B', 'I', 'N', '1'};

void validate_loaded(problems::FormMatrices& fm, const std::string& origin) {
  if (fm.dim <= 0) throw Error(Errc::io_error, origin + ": dimension must be positive");
  if (!fm.t_hat.allFinite() || !fm.mass.allFinite() || (fm.a_hat && !fm.a_hat->allFinite()))
    throw Error(Errc::io_error, origin + ": non-finite entries");
  if (!is_hermitian(fm.t_hat, 1e-12))
    throw Error(Errc::io_error, origin + ": t_hat is not Hermitian");
  if (!is_hermitian(fm.mass, 1e-12))
    throw Error(Errc::io_error, origin + ": mass is not Hermitian");
  try {
    linalg::cholesky_factor(fm.mass);
  } catch (const Error& e) {
    throw Error(Errc::io_error, origin + ": mass is not positive-definite (" + e.what() + ")",
                e.index());
  }
}

Matrix read_text_matrix(std::istream& in, Index dim, const std::string& section,
                        const std::string& origin) {
  std::string header;
  if (!(in >> header) || header != section)
    throw Error(Errc::io_error, origin + ": expected section '" + section + "'");
  Matrix m(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) {
      double re, im;
      if (!(in >> re >> im))
        throw Error(Errc::io_error,
                    origin + ": dimension mismatch in section '" + section + "' (truncated entries)");
      m(i, j) = Complex(re, im);
    }
  return m;
}

void write_text_matrix(std::ostream& out, const Matrix& m, const std::string& section) {
  out << section << "\n";
  char buf[64];
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g %.17g", m(i, j).real(), m(i, j).imag());
      out << buf << (j + 1 == m.cols() ? "" : "  ");
    }
    out << "\n";
  }
}

Matrix read_binary_matrix(std::istream& in, Index dim, const std::string& origin) {
  Matrix m(dim, dim);
  for (Index i = 0; i < dim; ++i)
    for (Index j = 0; j < dim; ++j) {
      double buf[2];
      if (!in.read(reinterpret_cast<char*>(buf), sizeof buf))
        throw Error(Errc::io_error, origin + ": dimension mismatch (truncated binary payload)");
      m(i, j) = Complex(buf[0], buf[1]);
    }
  return m;
}

void write_binary_matrix(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) {
      const double buf[2] = {m(i, j).real(), m(i, j).imag()};
      out.write(reinterpret_cast<const char*>(buf), sizeof buf);
    }
}

problems::FormMatrices import_text(std::ifstream& in, const std::string& origin) {
  std::string line;
  std::getline(in, line);
  if (line != kTextMagic) throw Error(Errc::io_error, origin + ": bad magic line");
  std::string dim_kw, ahat_kw;
  long long dim = 0;
  int has_ahat = 0;
  if (!(in >> dim_kw >> dim >> ahat_kw >> has_ahat) || dim_kw != "dim" || ahat_kw != "a_hat")
    throw Error(Errc::io_error, origin + ": bad header (expected 'dim <n> a_hat <0|1>')");
  if (dim <= 0) throw Error(Errc::io_error, origin + ": dimension mismatch (dim must be positive)");

  problems::FormMatrices fm;
  fm.dim = Index(dim);
  fm.t_hat = read_text_matrix(in, fm.dim, "t_hat", origin);
  fm.mass = read_text_matrix(in, fm.dim, "mass", origin);
  if (has_ahat) fm.a_hat = read_text_matrix(in, fm.dim, "a_hat", origin);
  return fm;
}

problems::FormMatrices import_binary(std::ifstream& in, const std::string& origin) {
  char magic[8];
  std::uint32_t version = 0, flags = 0;
  std::uint64_t dim = 0;
  if (!in.read(magic, 8) || std::memcmp(magic, kBinaryMagic, 8) != 0)
    throw Error(Errc::io_error, origin + ": bad magic");
  if (!in.read(reinterpret_cast<char*>(&version), 4) || version != 1)
    throw Error(Errc::io_error, origin + ": unsupported version");
  if (!in.read(reinterpret_cast<char*>(&flags), 4) ||
      !in.read(reinterpret_cast<char*>(&dim), 8))
    throw Error(Errc::io_error, origin + ": truncated header");
  if (dim == 0 || dim > (1u << 20))
    throw Error(Errc::io_error, origin + ": dimension mismatch (implausible dim in header)");

  problems::FormMatrices fm;
  fm.dim = Index(dim);
  fm.t_hat = read_binary_matrix(in, fm.dim, origin);
  fm.mass = read_binary_matrix(in, fm.dim, origin);
  if (flags & 1u) fm.a_hat = read_binary_matrix(in, fm.dim, origin);
  return fm;
}

}  // namespace

problems::FormMatrices import_matrices(const std::filesystem::path& path) {
  const std::string origin = path.filename().string();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io_error, origin + ": cannot open file");

  char probe[8] = {};
  in.read(probe, 8);
  in.seekg(0);
  problems::FormMatrices fm;
  if (std::memcmp(probe, kBinaryMagic, 8) == 0) {
    fm = import_binary(in, origin);
  } else {
    fm = import_text(in, origin);
  }
  fm.space_id = "imported:" + path.stem().string();
  validate_loaded(fm, origin);
  return fm;
}

void export_matrices(const std::filesystem::path& path, const problems::FormMatrices& fm,
                     MatrixFileFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::io_error, path.string() + ": cannot open for writing");
  if (format == MatrixFileFormat::text) {
    out << kTextMagic << "\n";
    out << "dim " << fm.dim << " a_hat " << (fm.a_hat ? 1 : 0) << "\n";
    write_text_matrix(out, fm.t_hat, "t_hat");
    write_text_matrix(out, fm.mass, "mass");
    if (fm.a_hat) write_text_matrix(out, *fm.a_hat, "a_hat");
  } else {
    out.write(kBinaryMagic, 8);
    const std::uint32_t version = 1, flags = fm.a_hat ? 1u : 0u;
    const std::uint64_t dim = std::uint64_t(fm.dim);
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&flags), 4);
    out.write(reinterpret_cast<const char*>(&dim), 8);
    write_binary_matrix(out, fm.t_hat);
    write_binary_matrix(out, fm.mass);
    if (fm.a_hat) write_binary_matrix(out, *fm.a_hat);
  }
  if (!out) throw Error(Errc::io_error, path.string() + ": write failed");
}

}  // namespace specgal::io
