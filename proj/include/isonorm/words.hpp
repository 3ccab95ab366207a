#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace isonorm {

// Letters are +k for generator k (1-based) and -k for its inverse.
using Word = std::vector<int>;

// Free group on named generators. Generators are single lowercase letters;
// the uppercase letter is the inverse, "1" or "" the identity.
class FreeGroup {
 public:
  FreeGroup() = default;
  explicit FreeGroup(std::vector<char> generators);
  static FreeGroup from_names(const std::vector<std::string>& names);

  std::size_t rank() const { return gens_.size(); }
  const std::vector<char>& generators() const { return gens_; }
  int generator_index(char c) const;  // 1-based, 0 if unknown

  Word parse(std::string_view text) const;  // throws InputError, returns reduced word
  std::string format(const Word& w) const;
  std::string canonical(std::string_view text) const { return format(parse(text)); }

  static Word reduce(Word w);
  static Word multiply(const Word& a, const Word& b);
  static Word inverse(const Word& a);

  // All reduced words of length <= len, shortlex order.
  std::vector<Word> ball(int len) const;

 private:
  std::vector<char> gens_;
};

// Finitely supported element of a group algebra, written in generator words.
struct WordElement {
  std::vector<std::pair<Word, std::complex<double>>> terms;

  static WordElement parse(const FreeGroup& alphabet, const std::vector<std::pair<std::string, std::complex<double>>>& raw);
  // Merges equal words and drops exact zeros.
  void normalize();
  bool is_self_adjoint(double tol = 0.0) const;
  std::complex<double> coefficient_sum() const;
  int max_length() const;
};

// Finite permutation action of a free group on cosets: images[k][c] is
// generator k+1 applied to coset c.
struct SchreierLevel {
  std::size_t cosets = 0;
  std::vector<std::vector<int>> images;
  std::vector<std::vector<int>> inverse_images;

  // Checks every image is a permutation and fills inverse_images. Throws InputError.
  void finalize();
  // w.c for the left action: the last letter acts first.
  int act(const Word& w, int c) const;
  int act_letter(int letter, int c) const {
    return letter > 0 ? images[letter - 1][c] : inverse_images[-letter - 1][c];
  }
};

}  // namespace isonorm
