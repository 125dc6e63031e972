#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qstar/errors.hpp"

namespace qstar {

// One generator occurrence, optionally starred (its adjoint).
struct Letter {
  std::uint8_t gen = 0;
  bool star = false;

  int rank() const { return int(gen) * 2 + (star ? 1 : 0); }
  friend bool operator==(Letter a, Letter b) { return a.gen == b.gen && a.star == b.star; }
  friend bool operator!=(Letter a, Letter b) { return !(a == b); }
  friend bool operator<(Letter a, Letter b) { return a.rank() < b.rank(); }
};

// Generator names for one session.  Also owns the word-length cap so every
// product in the session obeys the same bound.
class Alphabet {
 public:
  static std::shared_ptr<const Alphabet> make(std::vector<std::string> names,
                                              std::size_t degree_cap = 64) {
    static const char* reserved[] = {"q", "qbar", "r", "rinv", "i"};
    if (names.empty() || names.size() > 32)
      throw config_error("alphabet must have between 1 and 32 generators");
    for (std::size_t a = 0; a < names.size(); ++a) {
      if (names[a].empty()) throw config_error("empty generator name");
      for (const char* rsv : reserved)
        if (names[a] == rsv)
          throw config_error("generator name collides with scalar token: " + names[a]);
      for (std::size_t b = a + 1; b < names.size(); ++b)
        if (names[a] == names[b]) throw config_error("duplicate generator name: " + names[a]);
    }
    auto al = std::shared_ptr<Alphabet>(new Alphabet);
    al->names_ = std::move(names);
    al->degree_cap_ = degree_cap;
    return al;
  }

  std::size_t size() const { return names_.size(); }
  std::size_t degree_cap() const { return degree_cap_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  std::optional<std::size_t> index(const std::string& n) const {
    for (std::size_t i = 0; i < names_.size(); ++i)
      if (names_[i] == n) return i;
    return std::nullopt;
  }
  bool same(const Alphabet& other) const { return names_ == other.names_; }

 private:
  Alphabet() = default;
  std::vector<std::string> names_;
  std::size_t degree_cap_ = 64;
};

// Finite product of letters; the empty word is the unit of the algebra.
// Ordered graded-lexicographically: length first, then letter ranks.
struct Word {
  std::vector<Letter> letters;

  Word() = default;
  explicit Word(std::vector<Letter> ls) : letters(std::move(ls)) {}

  static Word one() { return Word{}; }
  static Word gen(std::uint8_t g, bool star = false, std::size_t copies = 1) {
    Word w;
    w.letters.assign(copies, Letter{g, star});
    return w;
  }

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }

  Word adjoint() const {
    Word w;
    w.letters.reserve(letters.size());
    for (auto it = letters.rbegin(); it != letters.rend(); ++it)
      w.letters.push_back(Letter{it->gen, !it->star});
    return w;
  }

  friend Word operator*(const Word& x, const Word& y) {
    Word w = x;
    w.letters.insert(w.letters.end(), y.letters.begin(), y.letters.end());
    return w;
  }

  friend bool operator==(const Word& x, const Word& y) { return x.letters == y.letters; }
  friend bool operator!=(const Word& x, const Word& y) { return !(x == y); }
  friend bool operator<(const Word& x, const Word& y) {
    if (x.size() != y.size()) return x.size() < y.size();
    for (std::size_t i = 0; i < x.size(); ++i)
      if (x.letters[i] != y.letters[i]) return x.letters[i] < y.letters[i];
    return false;
  }

  bool matches_at(const Word& pattern, std::size_t pos) const {
    if (pos + pattern.size() > size()) return false;
    return std::equal(pattern.letters.begin(), pattern.letters.end(),
                      letters.begin() + pos);
  }
};

}  // namespace qstar
