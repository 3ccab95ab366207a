#include "isonorm/words.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>

#include "isonorm/errors.hpp"

namespace isonorm {

FreeGroup::FreeGroup(std::vector<char> generators) : gens_(std::move(generators)) {
  for (std::size_t i = 0; i < gens_.size(); ++i) {
    char c = gens_[i];
    if (!std::islower(static_cast<unsigned char>(c))) throw InputError(std::string("generator name must be a lowercase letter: ") + c);
    for (std::size_t j = 0; j < i; ++j)
      if (gens_[j] == c) throw InputError(std::string("duplicate generator ") + c);
  }
}

FreeGroup FreeGroup::from_names(const std::vector<std::string>& names) {
  std::vector<char> g;
  for (const auto& n : names) {
    if (n.size() != 1) throw InputError("generator name must be a single letter: " + n);
    g.push_back(n[0]);
  }
  return FreeGroup(std::move(g));
}

int FreeGroup::generator_index(char c) const {
  for (std::size_t i = 0; i < gens_.size(); ++i)
    if (gens_[i] == c) return static_cast<int>(i) + 1;
  return 0;
}

Word FreeGroup::parse(std::string_view text) const {
  Word w;
  if (text == "1") return w;
  for (char c : text) {
    bool upper = std::isupper(static_cast<unsigned char>(c));
    int k = generator_index(upper ? static_cast<char>(std::tolower(static_cast<unsigned char>(c))) : c);
    if (k == 0) throw InputError(std::string("word uses unknown generator '") + c + "' in \"" + std::string(text) + "\"");
    w.push_back(upper ? -k : k);
  }
  return reduce(std::move(w));
}

std::string FreeGroup::format(const Word& w) const {
  if (w.empty()) return "1";
  std::string s;
  for (int l : w) {
    char c = gens_.at(static_cast<std::size_t>(std::abs(l) - 1));
    s.push_back(l > 0 ? c : static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  }
  return s;
}

Word FreeGroup::reduce(Word w) {
  Word out;
  out.reserve(w.size());
  for (int l : w) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word FreeGroup::multiply(const Word& a, const Word& b) {
  std::size_t k = 0;
  while (k < a.size() && k < b.size() && a[a.size() - 1 - k] == -b[k]) ++k;
  Word out(a.begin(), a.end() - static_cast<std::ptrdiff_t>(k));
  out.insert(out.end(), b.begin() + static_cast<std::ptrdiff_t>(k), b.end());
  return out;
}

Word FreeGroup::inverse(const Word& a) {
  Word out(a.rbegin(), a.rend());
  for (int& l : out) l = -l;
  return out;
}

std::vector<Word> FreeGroup::ball(int len) const {
  std::vector<Word> out{Word{}};
  std::size_t begin = 0;
  const int k = static_cast<int>(rank());
  for (int r = 1; r <= len; ++r) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      for (int g = 1; g <= k; ++g)
        for (int sgn : {1, -1}) {
          int l = sgn * g;
          if (!out[i].empty() && out[i].back() == -l) continue;
          Word w = out[i];
          w.push_back(l);
          out.push_back(std::move(w));
        }
    }
    begin = end;
  }
  return out;
}

WordElement WordElement::parse(const FreeGroup& alphabet,
                               const std::vector<std::pair<std::string, std::complex<double>>>& raw) {
  WordElement a;
  for (const auto& [w, c] : raw) a.terms.emplace_back(alphabet.parse(w), c);
  a.normalize();
  return a;
}

void WordElement::normalize() {
  std::map<Word, std::complex<double>> merged;
  for (auto& [w, c] : terms) merged[FreeGroup::reduce(w)] += c;
  terms.clear();
  for (auto& [w, c] : merged)
    if (c != std::complex<double>(0.0, 0.0)) terms.emplace_back(w, c);
}

bool WordElement::is_self_adjoint(double tol) const {
  std::map<Word, std::complex<double>> m(terms.begin(), terms.end());
  for (const auto& [w, c] : terms) {
    auto it = m.find(FreeGroup::inverse(w));
    std::complex<double> partner = it == m.end() ? 0.0 : it->second;
    if (std::abs(partner - std::conj(c)) > tol) return false;
  }
  return true;
}

std::complex<double> WordElement::coefficient_sum() const {
  std::complex<double> s = 0.0;
  for (const auto& t : terms) s += t.second;
  return s;
}

int WordElement::max_length() const {
  int m = 0;
  for (const auto& t : terms) m = std::max(m, static_cast<int>(t.first.size()));
  return m;
}

void SchreierLevel::finalize() {
  inverse_images.assign(images.size(), std::vector<int>(cosets, -1));
  for (std::size_t k = 0; k < images.size(); ++k) {
    if (images[k].size() != cosets) throw InputError("generator image has the wrong length");
    for (std::size_t c = 0; c < cosets; ++c) {
      const int d = images[k][c];
      if (d < 0 || static_cast<std::size_t>(d) >= cosets || inverse_images[k][d] >= 0)
        throw InputError("generator image is not a permutation of the cosets");
      inverse_images[k][d] = static_cast<int>(c);
    }
  }
}

int SchreierLevel::act(const Word& w, int c) const {
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (*it == 0 || static_cast<std::size_t>(std::abs(*it)) > images.size()) throw InputError("word uses unknown generator");
    c = act_letter(*it, c);
  }
  return c;
}

}  // namespace isonorm
