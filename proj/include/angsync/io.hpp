#pragma once

// Text formats.
//
// Matrix:  line 1 is n; then n lines of 2n whitespace-separated decimals,
//          re and im interleaved: re(M_i1) im(M_i1) re(M_i2) ...
// Vector:  line 1 is n; line 2 holds 2n decimals, re and im interleaved.
// Bundle:  an instance (z, sigma, seed, W, C):
//
//            angsync-instance 1
//            n <n>
//            sigma <sigma>
//            seed <seed>
//            z
//            <2n decimals>
//            W
//            <matrix>
//            C
//            <matrix>
//
// Writers emit 17 significant digits so doubles round-trip exactly.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "angsync/model.hpp"

namespace angsync {

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace detail {

// Whitespace tokenizer over a whole stream, tracking nothing but position.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string next(const char* what) {
    std::string tok;
    if (!(in_ >> tok)) throw FormatError(std::string("unexpected end of input while reading ") + what);
    return tok;
  }

  double next_double(const char* what) {
    const std::string tok = next(what);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw FormatError("bad number '" + tok + "' while reading " + what);
    return v;
  }

  std::uint64_t next_u64(const char* what) {
    const std::string tok = next(what);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
      throw FormatError("bad integer '" + tok + "' while reading " + what);
    return v;
  }

  int next_dim(const char* what) {
    const std::uint64_t v = next_u64(what);
    if (v < 1 || v > 1'000'000) throw FormatError(std::string("bad dimension while reading ") + what);
    return static_cast<int>(v);
  }

  void expect(std::string_view word) {
    const std::string tok = next(std::string(word).c_str());
    if (tok != word) throw FormatError("expected '" + std::string(word) + "', got '" + tok + "'");
  }

 private:
  std::istream& in_;
};

inline void write_complex_row(std::ostream& out, const ComplexVector& v) {
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    if (j) out << ' ';
    out << format_double(v(j).real()) << ' ' << format_double(v(j).imag());
  }
  out << '\n';
}

inline ComplexVector read_complex_row(TokenReader& rd, int n, const char* what) {
  ComplexVector v(n);
  for (int j = 0; j < n; ++j) {
    const double re = rd.next_double(what);
    const double im = rd.next_double(what);
    v(j) = Complex(re, im);
  }
  return v;
}

inline ComplexMatrix read_matrix_body(TokenReader& rd) {
  const int n = rd.next_dim("matrix dimension");
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.row(i) = read_complex_row(rd, n, "matrix entries").transpose();
  return m;
}

template <class F>
void with_output_file(const std::string& path, F&& body) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  body(out);
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

template <class F>
auto with_input_file(const std::string& path, F&& body) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  return body(in);
}

}  // namespace detail

inline void write_matrix(std::ostream& out, const HermitianMatrix& m) {
  out << m.size() << '\n';
  for (int i = 0; i < m.size(); ++i) detail::write_complex_row(out, m.matrix().row(i).transpose());
}

/// Reads a matrix and validates it as Hermitian.
inline HermitianMatrix read_matrix(std::istream& in) {
  detail::TokenReader rd(in);
  return HermitianMatrix(detail::read_matrix_body(rd));
}

inline void write_vector(std::ostream& out, const ComplexVector& v) {
  out << v.size() << '\n';
  detail::write_complex_row(out, v);
}

inline ComplexVector read_vector(std::istream& in) {
  detail::TokenReader rd(in);
  const int n = rd.next_dim("vector dimension");
  return detail::read_complex_row(rd, n, "vector entries");
}

inline void write_instance(std::ostream& out, const SyncInstance& inst) {
  out << "angsync-instance 1\n";
  out << "n " << inst.n() << '\n';
  out << "sigma " << format_double(inst.sigma()) << '\n';
  out << "seed " << inst.seed() << '\n';
  out << "z\n";
  detail::write_complex_row(out, inst.z().values());
  out << "W\n";
  write_matrix(out, inst.W());
  out << "C\n";
  write_matrix(out, inst.C());
}

/// Reads a bundle, rebuilds C from (z, W, sigma) and checks it against the
/// stored C.
inline SyncInstance read_instance(std::istream& in) {
  detail::TokenReader rd(in);
  rd.expect("angsync-instance");
  if (rd.next_u64("format version") != 1) throw FormatError("unsupported instance format version");
  rd.expect("n");
  const int n = rd.next_dim("n");
  rd.expect("sigma");
  const double sigma = rd.next_double("sigma");
  rd.expect("seed");
  const std::uint64_t seed = rd.next_u64("seed");
  rd.expect("z");
  const PhaseVector z(detail::read_complex_row(rd, n, "z"));
  rd.expect("W");
  const HermitianMatrix w(detail::read_matrix_body(rd));
  rd.expect("C");
  const ComplexMatrix c = detail::read_matrix_body(rd);
  if (w.size() != n || c.rows() != n) throw FormatError("instance: inconsistent dimensions");
  SyncInstance inst = assemble_instance(z, w, sigma, seed);
  const double mismatch = (inst.C().matrix() - c).cwiseAbs().maxCoeff();
  if (mismatch > 1e-12 * std::max(1.0, sigma))
    throw FormatError("instance: stored C does not equal z z* + sigma W");
  return inst;
}

inline void save_matrix(const std::string& path, const HermitianMatrix& m) {
  detail::with_output_file(path, [&](std::ostream& out) { write_matrix(out, m); });
}
inline HermitianMatrix load_matrix(const std::string& path) {
  return detail::with_input_file(path, [](std::istream& in) { return read_matrix(in); });
}
inline void save_vector(const std::string& path, const ComplexVector& v) {
  detail::with_output_file(path, [&](std::ostream& out) { write_vector(out, v); });
}
inline ComplexVector load_vector(const std::string& path) {
  return detail::with_input_file(path, [](std::istream& in) { return read_vector(in); });
}
inline void save_instance(const std::string& path, const SyncInstance& inst) {
  detail::with_output_file(path, [&](std::ostream& out) { write_instance(out, inst); });
}
inline SyncInstance load_instance(const std::string& path) {
  return detail::with_input_file(path, [](std::istream& in) { return read_instance(in); });
}

}  // namespace angsync
