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

#pragma once

// Pauli-string algebra and expansion of Pauli sums into sparse matrices.
//
// Qubit 0 is the leftmost Kronecker factor, so it maps to the most
// significant bit of a 0-based basis index.

#include <Eigen/Dense>

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qracle {

using Complex = std::complex<double>;

/// Magnitude at or below which coefficients and matrix entries are dropped.
inline constexpr double kPruneTol = 1e-12;

/// Largest qubit count `expand_to_matrix` accepts.
inline constexpr std::size_t kMaxExpandQubits = 12;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

/// Single-qubit 2x2 entry (0-based row/col).
Complex pauli_entry(Pauli p, int row, int col);

class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> ops);

  /// From letters like "XXIZ"; throws DomainError on other characters.
  static PauliString parse(std::string_view letters);
  static PauliString identity(std::size_t n);
  /// `p` on qubit `site`, identity elsewhere.
  static PauliString single(std::size_t n, std::size_t site, Pauli p);

  std::size_t size() const noexcept { return ops_.size(); }
  Pauli operator[](std::size_t k) const { return ops_[k]; }
  Pauli& operator[](std::size_t k) { return ops_[k]; }
  const std::vector<Pauli>& ops() const noexcept { return ops_; }

  /// Number of non-identity factors.
  std::size_t weight() const noexcept;
  bool is_identity() const noexcept { return weight() == 0; }

  /// Bit mask (MSB = qubit 0) of qubits carrying X or Y; row p of the
  /// string's matrix has its single nonzero in column p ^ flip_mask().
  std::uint64_t flip_mask() const noexcept;

  std::string str() const;

  auto operator<=>(const PauliString&) const = default;
  bool operator==(const PauliString&) const = default;

 private:
  std::vector<Pauli> ops_;
};

struct PauliProduct {
  Complex phase;
  PauliString string;
};

/// a·b = phase·c under the single-qubit multiplication table.
PauliProduct multiply_strings(const PauliString& a, const PauliString& b);

struct PauliTerm {
  Complex coeff;
  PauliString string;

  bool operator==(const PauliTerm&) const = default;
};

class PauliSum {
 public:
  explicit PauliSum(std::size_t n_qubits = 1);
  PauliSum(std::size_t n_qubits, std::vector<PauliTerm> terms);

  std::size_t n_qubits() const noexcept { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const noexcept { return terms_; }
  std::size_t size() const noexcept { return terms_.size(); }
  bool empty() const noexcept { return terms_.empty(); }

  /// Appends without merging; the string length must equal n_qubits.
  PauliSum& add(Complex coeff, PauliString s);
  PauliSum& add(Complex coeff, std::string_view letters) {
    return add(coeff, PauliString::parse(letters));
  }

  /// Merges equal strings, drops |coeff| <= 1e-12, sorts by string.
  PauliSum simplified() const;

  /// All coefficients have |imag| <= tol.
  bool is_hermitian(double tol = kPruneTol) const;

  /// Coefficient of `s` after merging duplicates (0 when absent).
  Complex coefficient(const PauliString& s) const;

  PauliSum& operator+=(const PauliSum& other);
  PauliSum& operator*=(Complex scale);

  bool operator==(const PauliSum&) const = default;

 private:
  std::size_t n_qubits_;
  std::vector<PauliTerm> terms_;
};

PauliSum operator+(PauliSum a, const PauliSum& b);
PauliSum operator*(Complex scale, PauliSum a);
/// Distributes the product term by term; result is simplified.
PauliSum operator*(const PauliSum& a, const PauliSum& b);

/// Coordinate-map matrix produced from a Pauli sum. Keys are 0-based
/// (row, col); no stored entry has magnitude <= 1e-12.
struct SparseHermitian {
  std::size_t dim = 0;
  std::map<std::pair<std::size_t, std::size_t>, Complex> entries;

  Complex at(std::size_t row, std::size_t col) const;
  /// Every stored (p, q) has a stored (q, p) equal to its conjugate.
  bool is_hermitian(double tol = 1e-10) const;
  Eigen::MatrixXcd to_dense() const;
};

/// Matrix entry of a Pauli string at 0-based (row, col); IndexError when out
/// of range.
Complex pauli_matrix_entry(const PauliString& s, std::size_t row, std::size_t col);

/// Sums coefficient-weighted string matrices. CapacityError above 12 qubits.
SparseHermitian expand_to_matrix(const PauliSum& h);

/// Smallest eigenvalue of the densified matrix. ValidityError when the
/// input is not Hermitian, CapacityError above dimension 4096.
double min_eigenvalue(const SparseHermitian& m);

/// Product of creation/annihilation operators times a coefficient. Factors
/// apply right to left as written, i.e. factors[0] is leftmost.
struct FermionicTerm {
  struct Factor {
    std::size_t site;
    bool dagger;
  };
  std::vector<Factor> factors;
  Complex coeff{1.0, 0.0};
};

/// Jordan-Wigner image of a single fermionic term on `n` modes.
PauliSum jordan_wigner(const FermionicTerm& t, std::size_t n);
/// Sum of images, simplified.
PauliSum jordan_wigner(const std::vector<FermionicTerm>& terms, std::size_t n);

/// Text form, one term per line: `<re>[+-]<im>i <LETTERS>`.
std::string format_term(const PauliTerm& t);
std::string to_text(const PauliSum& h);
/// Parses a single term line; throws ParseError tagged with `line_no`.
PauliTerm parse_term(std::string_view line, std::size_t line_no);
/// Blank lines and `#` comments are skipped. n_qubits comes from the first
/// term, or `n_qubits_hint` for an empty document.
PauliSum parse_pauli_sum(std::string_view text, std::size_t n_qubits_hint = 1);

}  // namespace qracle
