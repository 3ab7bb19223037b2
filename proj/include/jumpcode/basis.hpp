#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "jumpcode/errors.hpp"

namespace jumpcode {

/// Computational-basis product state of n qubits.
///
/// Qubit indices are 1-based and count from the left of the ket string, so
/// in |1100> qubits 1 and 2 are excited. Internally the string is packed
/// into a 64-bit word with qubit 1 in the most significant used bit; with
/// that packing, numeric order of the words equals lexicographic order of
/// the ket strings.
class BasisState {
 public:
  static constexpr int max_qubits = 64;

  BasisState(int n, std::uint64_t bits) : n_(n), bits_(bits) {
    if (n < 1 || n > max_qubits)
      throw InvalidBasisState("qubit count out of range: " + std::to_string(n));
    if (n < max_qubits && (bits >> n) != 0)
      throw InvalidBasisState("bit pattern wider than qubit count");
  }

  static BasisState from_string(std::string_view s) {
    if (s.empty() || s.size() > max_qubits)
      throw InvalidBasisState("basis string length out of range");
    std::uint64_t bits = 0;
    for (char c : s) {
      if (c != '0' && c != '1')
        throw InvalidBasisState("basis string must contain only 0 and 1");
      bits = (bits << 1) | static_cast<std::uint64_t>(c - '0');
    }
    return BasisState(static_cast<int>(s.size()), bits);
  }

  int n() const { return n_; }
  std::uint64_t bits() const { return bits_; }

  /// Value of qubit alpha (1-based from the left).
  bool bit(int alpha) const {
    check_index(alpha);
    return (bits_ >> (n_ - alpha)) & 1u;
  }

  BasisState flipped(int alpha) const {
    check_index(alpha);
    return BasisState(n_, bits_ ^ (std::uint64_t{1} << (n_ - alpha)));
  }

  BasisState with_bit(int alpha, bool value) const {
    check_index(alpha);
    const std::uint64_t mask = std::uint64_t{1} << (n_ - alpha);
    return BasisState(n_, value ? (bits_ | mask) : (bits_ & ~mask));
  }

  /// Bitwise complement within the n used qubits.
  BasisState complement() const {
    const std::uint64_t full =
        (n_ == max_qubits) ? ~std::uint64_t{0}
                           : ((std::uint64_t{1} << n_) - 1);
    return BasisState(n_, bits_ ^ full);
  }

  /// Number of excited (1) qubits.
  int excitation_count() const { return std::popcount(bits_); }

  std::string str() const {
    std::string s(static_cast<std::size_t>(n_), '0');
    for (int alpha = 1; alpha <= n_; ++alpha)
      if ((bits_ >> (n_ - alpha)) & 1u) s[alpha - 1] = '1';
    return s;
  }

  friend auto operator<=>(const BasisState&, const BasisState&) = default;

 private:
  void check_index(int alpha) const {
    if (alpha < 1 || alpha > n_)
      throw InvalidQubitIndex("qubit index " + std::to_string(alpha) +
                              " out of range for n=" + std::to_string(n_));
  }

  int n_;
  std::uint64_t bits_;
};

/// Exact binomial coefficient. All values for n <= 64 fit in 64 bits.
inline std::uint64_t binomial(int n, int k) {
  if (n < 0 || k < 0 || k > n)
    throw InvalidParameters("binomial(" + std::to_string(n) + "," +
                            std::to_string(k) + ") undefined");
  if (n > 64) throw InvalidParameters("binomial limited to n <= 64");
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
  }
  return static_cast<std::uint64_t>(acc);
}

}  // namespace jumpcode
