#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "qstar/errors.hpp"
#include "qstar/word.hpp"

namespace qstar {

enum class SpaceKind { NaturalNumbers, FockWords, TensorPair };

inline std::string space_kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::NaturalNumbers: return "natural_numbers";
    case SpaceKind::FockWords: return "fock_words";
    case SpaceKind::TensorPair: return "tensor_pair";
  }
  return "?";
}

// Finite truncation of a graded basis.  Basis order is level-major with a
// lexicographic tie-break, so the span of "all labels of level <= d" is
// always a prefix of the basis.
class GradedSpace : public std::enable_shared_from_this<GradedSpace> {
 public:
  using Ptr = std::shared_ptr<const GradedSpace>;

  // e_0 .. e_L, level(e_n) = n.
  static Ptr natural_numbers(std::size_t L) {
    auto s = std::shared_ptr<GradedSpace>(new GradedSpace(SpaceKind::NaturalNumbers, L));
    for (std::size_t n = 0; n <= L; ++n) {
      s->levels_.push_back(int(n));
      s->labels_.push_back(std::to_string(n));
    }
    return s;
  }

  // All words over d letters of length <= L, level = length, lex within a
  // level.  Labels use 1-based letter names, matching generator numbering.
  // Pass orthonormal = false when the word vectors carry a nontrivial Gram
  // pairing; adjoints must then be supplied explicitly instead of by
  // transposition.
  static Ptr fock_words(std::size_t d, std::size_t L, bool orthonormal = true) {
    if (d < 1 || d > 32) throw config_error("fock_words needs 1 <= d <= 32");
    auto s = std::shared_ptr<GradedSpace>(new GradedSpace(SpaceKind::FockWords, L));
    s->orthonormal_ = orthonormal;
    s->arity_ = d;
    std::vector<std::vector<std::uint8_t>> level{{}};
    s->push_word({});
    for (std::size_t l = 1; l <= L; ++l) {
      std::vector<std::vector<std::uint8_t>> next;
      for (const auto& w : level)
        for (std::uint8_t g = 0; g < d; ++g) {
          auto v = w;
          v.push_back(g);
          s->push_word(v);
          next.push_back(std::move(v));
        }
      level = std::move(next);
    }
    return s;
  }

  // Pairs of factor basis vectors, level = sum of factor levels.
  static Ptr tensor_pair(Ptr left, Ptr right) {
    auto s = std::shared_ptr<GradedSpace>(
        new GradedSpace(SpaceKind::TensorPair, left->truncation_ + right->truncation_));
    s->orthonormal_ = left->orthonormal_ && right->orthonormal_;
    s->left_ = left;
    s->right_ = right;
    for (std::size_t i = 0; i < left->size(); ++i)
      for (std::size_t j = 0; j < right->size(); ++j)
        s->pairs_.emplace_back(i, j);
    std::stable_sort(s->pairs_.begin(), s->pairs_.end(),
                     [&](const auto& a, const auto& b) {
                       int la = left->level(a.first) + right->level(a.second);
                       int lb = left->level(b.first) + right->level(b.second);
                       if (la != lb) return la < lb;
                       return a < b;
                     });
    s->pair_index_.assign(left->size(), std::vector<std::size_t>(right->size(), 0));
    for (std::size_t idx = 0; idx < s->pairs_.size(); ++idx) {
      const auto& [i, j] = s->pairs_[idx];
      s->levels_.push_back(left->level(i) + right->level(j));
      s->labels_.push_back(left->label(i) + "|" + right->label(j));
      s->pair_index_[i][j] = idx;
    }
    return s;
  }

  SpaceKind kind() const { return kind_; }
  bool orthonormal() const { return orthonormal_; }
  std::size_t truncation() const { return truncation_; }
  std::size_t size() const { return levels_.size(); }
  int level(std::size_t i) const { return levels_[i]; }
  const std::string& label(std::size_t i) const { return labels_[i]; }

  // Number of basis vectors with level <= depth (they are a prefix).
  std::size_t prefix_size(int depth) const {
    std::size_t n = 0;
    while (n < levels_.size() && levels_[n] <= depth) ++n;
    return n;
  }

  std::size_t arity() const { return arity_; }
  const std::vector<std::uint8_t>& word_at(std::size_t i) const { return words_[i]; }
  // Index of a word, or size() when the word is absent (too long).
  std::size_t word_index(const std::vector<std::uint8_t>& w) const {
    auto it = word_index_.find(w);
    return it == word_index_.end() ? size() : it->second;
  }

  const Ptr& left() const { return left_; }
  const Ptr& right() const { return right_; }
  const std::pair<std::size_t, std::size_t>& pair_at(std::size_t i) const {
    return pairs_[i];
  }
  std::size_t pair_index(std::size_t i, std::size_t j) const { return pair_index_[i][j]; }

  bool same(const GradedSpace& o) const {
    if (kind_ != o.kind_ || truncation_ != o.truncation_ || size() != o.size() ||
        orthonormal_ != o.orthonormal_)
      return false;
    switch (kind_) {
      case SpaceKind::NaturalNumbers: return true;
      case SpaceKind::FockWords: return arity_ == o.arity_;
      case SpaceKind::TensorPair:
        return left_->same(*o.left_) && right_->same(*o.right_);
    }
    return false;
  }

 private:
  GradedSpace(SpaceKind k, std::size_t L) : kind_(k), truncation_(L) {}

  void push_word(std::vector<std::uint8_t> w) {
    word_index_[w] = words_.size();
    levels_.push_back(int(w.size()));
    std::string lbl;
    if (w.empty()) lbl = "e";
    for (auto g : w) {
      if (!lbl.empty() && lbl != "e") lbl += arity_ > 9 ? "." : "";
      if (lbl == "e") lbl.clear();
      lbl += std::to_string(int(g) + 1);
    }
    labels_.push_back(lbl);
    words_.push_back(std::move(w));
  }

  SpaceKind kind_;
  std::size_t truncation_;
  bool orthonormal_ = true;
  std::vector<int> levels_;
  std::vector<std::string> labels_;

  std::size_t arity_ = 0;
  std::vector<std::vector<std::uint8_t>> words_;
  std::map<std::vector<std::uint8_t>, std::size_t> word_index_;

  Ptr left_, right_;
  std::vector<std::pair<std::size_t, std::size_t>> pairs_;
  std::vector<std::vector<std::size_t>> pair_index_;
};

}  // namespace qstar
