#pragma once

#include <bit>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "graphcert/graph.hpp"

namespace graphcert {

using cplx = std::complex<double>;

namespace detail {

/// Fixed-width bit vector over 64-bit words.
struct BitVec {
  std::vector<std::uint64_t> w;
  std::size_t n = 0;

  BitVec() = default;
  explicit BitVec(std::size_t bits) : w((bits + 63) / 64, 0), n(bits) {}

  bool get(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
  void set(std::size_t i, bool v) {
    std::uint64_t m = std::uint64_t(1) << (i & 63);
    if (v)
      w[i >> 6] |= m;
    else
      w[i >> 6] &= ~m;
  }
  void flip(std::size_t i) { w[i >> 6] ^= std::uint64_t(1) << (i & 63); }

  BitVec& operator^=(const BitVec& o) {
    for (std::size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
    return *this;
  }
  bool any() const {
    for (auto x : w)
      if (x) return true;
    return false;
  }
  bool operator==(const BitVec& o) const { return n == o.n && w == o.w; }

  static std::size_t popcount_and(const BitVec& a, const BitVec& b) {
    std::size_t c = 0;
    for (std::size_t i = 0; i < a.w.size(); ++i)
      c += static_cast<std::size_t>(std::popcount(a.w[i] & b.w[i]));
    return c;
  }
  std::size_t popcount() const {
    std::size_t c = 0;
    for (auto x : w) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }
};

}  // namespace detail

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char letter_char(PauliLetter l) { return "IXYZ"[static_cast<int>(l)]; }

/// Phased Pauli string over n sites. Internally the operator is
/// i^k * prod_v X^{x_v} Z^{z_v}; a Y site is x=z=1 with its i-factor folded
/// into k, so multiplication is bitwise xor plus a mod-4 phase counter.
class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::size_t n) : x_(n), z_(n), n_(n) {}

  static PauliString identity(std::size_t n) { return PauliString(n); }

  static PauliString single(std::size_t n, std::size_t site, PauliLetter l) {
    PauliString p(n);
    p.set_letter(site, l);
    return p;
  }

  std::size_t num_sites() const { return n_; }

  PauliLetter letter(std::size_t i) const {
    bool x = x_.get(i), z = z_.get(i);
    if (x && z) return PauliLetter::Y;
    if (x) return PauliLetter::X;
    if (z) return PauliLetter::Z;
    return PauliLetter::I;
  }

  /// Replaces the letter at a site, keeping the letter-relative phase of the
  /// rest of the string unchanged.
  void set_letter(std::size_t i, PauliLetter l) {
    if (x_.get(i) && z_.get(i)) k_ = (k_ + 3) & 3;  // drop the old Y's i
    bool x = l == PauliLetter::X || l == PauliLetter::Y;
    bool z = l == PauliLetter::Z || l == PauliLetter::Y;
    x_.set(i, x);
    z_.set(i, z);
    if (l == PauliLetter::Y) k_ = (k_ + 1) & 3;  // Y = i XZ
  }

  bool xbit(std::size_t i) const { return x_.get(i); }
  bool zbit(std::size_t i) const { return z_.get(i); }

  /// Phase relative to the literal letters, as a power of i (0..3).
  int letter_phase_pow() const {
    std::size_t t = detail::BitVec::popcount_and(x_, z_);
    return static_cast<int>((k_ + 4 - (t & 3)) & 3);
  }

  cplx phase() const {
    static const cplx tab[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return tab[letter_phase_pow()];
  }

  bool hermitian() const { return (letter_phase_pow() & 1) == 0; }
  /// +1 or -1; valid only for hermitian strings.
  int sign() const { return letter_phase_pow() == 0 ? 1 : -1; }

  std::size_t weight() const {
    detail::BitVec u = x_;
    u ^= z_;
    std::size_t both = detail::BitVec::popcount_and(x_, z_);
    return u.popcount() + both;
  }

  std::vector<std::size_t> support() const {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < n_; ++i)
      if (x_.get(i) || z_.get(i)) s.push_back(i);
    return s;
  }

  PauliString operator*(const PauliString& o) const {
    if (n_ != o.n_) throw validation_error("pauli universes differ");
    PauliString r(n_);
    r.x_ = x_;
    r.x_ ^= o.x_;
    r.z_ = z_;
    r.z_ ^= o.z_;
    std::size_t cross = detail::BitVec::popcount_and(z_, o.x_);  // Z past X
    r.k_ = static_cast<int>((k_ + o.k_ + 2 * cross) & 3);
    return r;
  }

  bool commutes_with(const PauliString& o) const {
    if (n_ != o.n_) throw validation_error("pauli universes differ");
    std::size_t s = detail::BitVec::popcount_and(x_, o.z_) +
                    detail::BitVec::popcount_and(z_, o.x_);
    return (s & 1) == 0;
  }

  bool same_letters(const PauliString& o) const {
    return x_ == o.x_ && z_ == o.z_;
  }

  bool operator==(const PauliString& o) const {
    return n_ == o.n_ && x_ == o.x_ && z_ == o.z_ &&
           letter_phase_pow() == o.letter_phase_pow();
  }

  /// Text form like "+XIZZY"; phase prefixes are +, +i, -, -i.
  std::string str() const {
    static const char* pre[4] = {"+", "+i", "-", "-i"};
    std::string s = pre[letter_phase_pow()];
    for (std::size_t i = 0; i < n_; ++i) s.push_back(letter_char(letter(i)));
    return s;
  }

  static PauliString parse(const std::string& text) {
    std::size_t pos = 0;
    int k = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      if (text[pos] == '-') k = 2;
      ++pos;
      if (pos < text.size() && text[pos] == 'i') {
        k += 1;
        ++pos;
      }
    }
    PauliString p(text.size() - pos);
    for (std::size_t i = 0; pos < text.size(); ++pos, ++i) {
      switch (text[pos]) {
        case 'I': break;
        case 'X': p.set_letter(i, PauliLetter::X); break;
        case 'Y': p.set_letter(i, PauliLetter::Y); break;
        case 'Z': p.set_letter(i, PauliLetter::Z); break;
        default: throw validation_error("bad pauli letter in " + text);
      }
    }
    p.k_ = (p.k_ + k) & 3;
    return p;
  }

  const detail::BitVec& xbits() const { return x_; }
  const detail::BitVec& zbits() const { return z_; }

 private:
  detail::BitVec x_, z_;
  std::size_t n_ = 0;
  int k_ = 0;  // power of i
};

}  // namespace graphcert
