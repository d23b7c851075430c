// Copyright 2026 The Qracle Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qracle/pauli.hpp"

#include "qracle/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace qracle {

namespace {

constexpr Complex kI{0.0, 1.0};

// table[a][b] = (phase, c) with a·b = phase·c.
struct TableEntry {
  Complex phase;
  Pauli result;
};

const std::array<std::array<TableEntry, 4>, 4>& product_table() {
  static const std::array<std::array<TableEntry, 4>, 4> table = [] {
    using P = Pauli;
    std::array<std::array<TableEntry, 4>, 4> t{};
    const Complex one{1.0, 0.0};
    for (int a = 0; a < 4; ++a) {
      t[0][a] = {one, static_cast<P>(a)};
      t[a][0] = {one, static_cast<P>(a)};
      t[a][a] = {one, P::I};
    }
    t[1][2] = {kI, P::Z};
    t[2][1] = {-kI, P::Z};
    t[2][3] = {kI, P::X};
    t[3][2] = {-kI, P::X};
    t[3][1] = {kI, P::Y};
    t[1][3] = {-kI, P::Y};
    return t;
  }();
  return table;
}

// Symbolic index map for qubit k, on 1-based matrix indices: the factor's
// 1-based row is ((ceil(p / 2^(n-k-1)) - 1) mod 2) + 1. For the last qubit
// this reduces to ((p - 1) mod 2) + 1.
int factor_index(std::size_t p1, std::size_t n, std::size_t k) {
  const std::size_t block = std::size_t{1} << (n - k - 1);
  const std::size_t ceil_div = (p1 + block - 1) / block;
  return static_cast<int>((ceil_div - 1) % 2);  // 0-based for pauli_entry
}

Complex entry_one_based(const PauliString& s, std::size_t p1, std::size_t q1) {
  const std::size_t n = s.size();
  Complex value{1.0, 0.0};
  for (std::size_t k = 0; k < n; ++k) {
    value *= pauli_entry(s[k], factor_index(p1, n, k), factor_index(q1, n, k));
    if (value == Complex{}) break;
  }
  return value;
}

bool parse_double(std::string_view text, double& out) {
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  if (text.empty()) return false;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace

char to_char(Pauli p) { return "IXYZ"[static_cast<int>(p)]; }

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': return Pauli::I;
    case 'X': return Pauli::X;
    case 'Y': return Pauli::Y;
    case 'Z': return Pauli::Z;
    default: break;
  }
  throw DomainError(std::string("not a Pauli letter: '") + c + "'");
}

Complex pauli_entry(Pauli p, int row, int col) {
  switch (p) {
    case Pauli::I: return row == col ? Complex{1, 0} : Complex{};
    case Pauli::X: return row != col ? Complex{1, 0} : Complex{};
    case Pauli::Y:
      if (row == col) return {};
      return row == 0 ? Complex{0, -1} : Complex{0, 1};
    case Pauli::Z:
      if (row != col) return {};
      return row == 0 ? Complex{1, 0} : Complex{-1, 0};
  }
  return {};
}

// PauliString

PauliString::PauliString(std::vector<Pauli> ops) : ops_(std::move(ops)) {}

PauliString PauliString::parse(std::string_view letters) {
  std::vector<Pauli> ops;
  ops.reserve(letters.size());
  for (char c : letters) ops.push_back(pauli_from_char(c));
  if (ops.empty()) throw DomainError("empty Pauli string");
  return PauliString(std::move(ops));
}

PauliString PauliString::identity(std::size_t n) {
  return PauliString(std::vector<Pauli>(n, Pauli::I));
}

PauliString PauliString::single(std::size_t n, std::size_t site, Pauli p) {
  if (site >= n) throw IndexError("site " + std::to_string(site) + " out of range");
  auto s = identity(n);
  s[site] = p;
  return s;
}

std::size_t PauliString::weight() const noexcept {
  return static_cast<std::size_t>(
      std::count_if(ops_.begin(), ops_.end(), [](Pauli p) { return p != Pauli::I; }));
}

std::uint64_t PauliString::flip_mask() const noexcept {
  std::uint64_t mask = 0;
  const std::size_t n = ops_.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (ops_[k] == Pauli::X || ops_[k] == Pauli::Y) mask |= std::uint64_t{1} << (n - 1 - k);
  }
  return mask;
}

std::string PauliString::str() const {
  std::string s;
  s.reserve(ops_.size());
  for (Pauli p : ops_) s.push_back(to_char(p));
  return s;
}

PauliProduct multiply_strings(const PauliString& a, const PauliString& b) {
  if (a.size() != b.size()) {
    throw ShapeError("multiply_strings: lengths " + std::to_string(a.size()) + " and " +
                     std::to_string(b.size()));
  }
  const auto& table = product_table();
  Complex phase{1.0, 0.0};
  std::vector<Pauli> out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto& e = table[static_cast<int>(a[k])][static_cast<int>(b[k])];
    phase *= e.phase;
    out[k] = e.result;
  }
  return {phase, PauliString(std::move(out))};
}

// PauliSum

PauliSum::PauliSum(std::size_t n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits == 0) throw DomainError("PauliSum needs at least one qubit");
}

PauliSum::PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms) : PauliSum(n_qubits) {
  for (auto& t : terms) add(t.coeff, std::move(t.string));
}

PauliSum& PauliSum::add(Complex coeff, PauliString s) {
  if (s.size() != n_qubits_) {
    throw ShapeError("Pauli string " + s.str() + " has length " + std::to_string(s.size()) +
                     ", expected " + std::to_string(n_qubits_));
  }
  terms_.push_back({coeff, std::move(s)});
  return *this;
}

PauliSum PauliSum::simplified() const {
  std::map<PauliString, Complex> merged;
  for (const auto& t : terms_) merged[t.string] += t.coeff;
  PauliSum out(n_qubits_);
  for (auto& [s, c] : merged) {
    if (std::abs(c) > kPruneTol) out.terms_.push_back({c, s});
  }
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [tol](const PauliTerm& t) { return std::abs(t.coeff.imag()) <= tol; });
}

Complex PauliSum::coefficient(const PauliString& s) const {
  Complex c{};
  for (const auto& t : terms_) {
    if (t.string == s) c += t.coeff;
  }
  return c;
}

PauliSum& PauliSum::operator+=(const PauliSum& other) {
  if (other.n_qubits_ != n_qubits_) throw ShapeError("PauliSum qubit counts differ");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
  return *this;
}

PauliSum& PauliSum::operator*=(Complex scale) {
  for (auto& t : terms_) t.coeff *= scale;
  return *this;
}

PauliSum operator+(PauliSum a, const PauliSum& b) { return a += b; }

PauliSum operator*(Complex scale, PauliSum a) { return a *= scale; }

PauliSum operator*(const PauliSum& a, const PauliSum& b) {
  if (a.n_qubits() != b.n_qubits()) throw ShapeError("PauliSum qubit counts differ");
  PauliSum out(a.n_qubits());
  for (const auto& ta : a.terms()) {
    for (const auto& tb : b.terms()) {
      auto prod = multiply_strings(ta.string, tb.string);
      out.add(ta.coeff * tb.coeff * prod.phase, std::move(prod.string));
    }
  }
  return out.simplified();
}

// SparseHermitian

Complex SparseHermitian::at(std::size_t row, std::size_t col) const {
  const auto it = entries.find({row, col});
  return it == entries.end() ? Complex{} : it->second;
}

bool SparseHermitian::is_hermitian(double tol) const {
  for (const auto& [key, value] : entries) {
    if (std::abs(at(key.second, key.first) - std::conj(value)) > tol) return false;
  }
  return true;
}

Eigen::MatrixXcd SparseHermitian::to_dense() const {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (const auto& [key, value] : entries) {
    m(static_cast<Eigen::Index>(key.first), static_cast<Eigen::Index>(key.second)) = value;
  }
  return m;
}

Complex pauli_matrix_entry(const PauliString& s, std::size_t row, std::size_t col) {
  if (s.size() >= 64) throw CapacityError("Pauli string too long for index arithmetic");
  const std::size_t dim = std::size_t{1} << s.size();
  if (row >= dim || col >= dim) {
    throw IndexError("matrix index (" + std::to_string(row) + ", " + std::to_string(col) +
                     ") outside dimension " + std::to_string(dim));
  }
  return entry_one_based(s, row + 1, col + 1);
}

SparseHermitian expand_to_matrix(const PauliSum& h) {
  const std::size_t n = h.n_qubits();
  if (n > kMaxExpandQubits) {
    throw CapacityError("expand_to_matrix: " + std::to_string(n) + " qubits exceeds " +
                        std::to_string(kMaxExpandQubits));
  }
  SparseHermitian m;
  m.dim = std::size_t{1} << n;
  // Each string has exactly one nonzero per row, at column row ^ flip_mask.
  for (const auto& t : h.terms()) {
    const std::uint64_t mask = t.string.flip_mask();
    for (std::size_t p = 0; p < m.dim; ++p) {
      const std::size_t q = p ^ mask;
      m.entries[{p, q}] += t.coeff * pauli_matrix_entry(t.string, p, q);
    }
  }
  std::erase_if(m.entries, [](const auto& kv) { return std::abs(kv.second) <= kPruneTol; });
  return m;
}

double min_eigenvalue(const SparseHermitian& m) {
  if (m.dim > 4096) throw CapacityError("min_eigenvalue: dimension above 4096");
  if (m.dim == 0) throw DomainError("min_eigenvalue: empty matrix");
  if (!m.is_hermitian()) throw ValidityError("min_eigenvalue: matrix is not Hermitian");
  if (m.entries.empty()) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m.to_dense(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
  return solver.eigenvalues().minCoeff();
}

// Jordan-Wigner

namespace {

// c_j = I^{j} ⊗ (X + iY)/2 ⊗ Z^{n-j-1}; the dagger flips the sign of iY.
PauliSum ladder_operator(std::size_t site, bool dagger, std::size_t n) {
  std::vector<Pauli> ops(n, Pauli::I);
  for (std::size_t k = site + 1; k < n; ++k) ops[k] = Pauli::Z;
  auto x_ops = ops;
  auto y_ops = ops;
  x_ops[site] = Pauli::X;
  y_ops[site] = Pauli::Y;
  PauliSum out(n);
  out.add({0.5, 0.0}, PauliString(std::move(x_ops)));
  out.add(dagger ? Complex{0.0, -0.5} : Complex{0.0, 0.5}, PauliString(std::move(y_ops)));
  return out;
}

}  // namespace

PauliSum jordan_wigner(const FermionicTerm& t, std::size_t n) {
  PauliSum acc(n);
  acc.add(t.coeff, PauliString::identity(n));
  for (const auto& f : t.factors) {
    if (f.site >= n) {
      throw IndexError("fermionic site " + std::to_string(f.site) + " outside " +
                       std::to_string(n) + " modes");
    }
    acc = acc * ladder_operator(f.site, f.dagger, n);
  }
  return acc.simplified();
}

PauliSum jordan_wigner(const std::vector<FermionicTerm>& terms, std::size_t n) {
  PauliSum acc(n);
  for (const auto& t : terms) acc += jordan_wigner(t, n);
  return acc.simplified();
}

// Text format

std::string format_term(const PauliTerm& t) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gi ", t.coeff.real(), t.coeff.imag());
  return buf + t.string.str();
}

std::string to_text(const PauliSum& h) {
  std::string out;
  for (const auto& t : h.terms()) {
    out += format_term(t);
    out += '\n';
  }
  return out;
}

PauliTerm parse_term(std::string_view line, std::size_t line_no) {
  std::istringstream in{std::string(line)};
  std::string number, letters, extra;
  if (!(in >> number >> letters) || (in >> extra)) {
    throw ParseError(line_no, "expected '<re>[+-]<im>i <LETTERS>'");
  }
  if (number.size() < 2 || number.back() != 'i') {
    throw ParseError(line_no, "coefficient must end with 'i': " + number);
  }
  number.pop_back();
  // The imaginary part starts at the last sign that is not an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = number.size(); k-- > 1;) {
    if ((number[k] == '+' || number[k] == '-') && number[k - 1] != 'e' && number[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  double re = 0.0, im = 0.0;
  if (split == std::string::npos || !parse_double(std::string_view(number).substr(0, split), re) ||
      !parse_double(std::string_view(number).substr(split), im)) {
    throw ParseError(line_no, "malformed complex coefficient: " + number + "i");
  }
  try {
    return {{re, im}, PauliString::parse(letters)};
  } catch (const DomainError& e) {
    throw ParseError(line_no, e.what());
  }
}

PauliSum parse_pauli_sum(std::string_view text, std::size_t n_qubits_hint) {
  std::vector<PauliTerm> terms;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    const auto raw = text.substr(start, end == std::string_view::npos ? std::string_view::npos
                                                                      : end - start);
    ++line_no;
    const auto line = trim(raw);
    if (!line.empty() && line.front() != '#') {
      auto term = parse_term(line, line_no);
      if (!terms.empty() && term.string.size() != terms.front().string.size()) {
        throw ParseError(line_no, "string length differs from earlier terms");
      }
      terms.push_back(std::move(term));
    }
    if (end == std::string_view::npos) break;
    start = end + 1;
  }
  const std::size_t n = terms.empty() ? n_qubits_hint : terms.front().string.size();
  return PauliSum(n, std::move(terms));
}

}  // namespace qracle
