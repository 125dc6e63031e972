#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "qstar/operators.hpp"

using namespace qstar;

namespace {

// Hand-built shift and diagonal matrices; the representations module has its
// own builders, these serve as independent fixtures for the operator layer.
template <class F>
TruncatedOperator<F> shift(const F& f, GradedSpace::Ptr sp) {
  auto s = TruncatedOperator<F>::zero(f, sp, 1, -1);
  for (std::size_t n = 0; n + 1 < sp->size(); ++n) s.set_entry(n + 1, n, f.one());
  return s;
}

template <class F>
TruncatedOperator<F> diag_geom(const F& f, GradedSpace::Ptr sp) {
  auto d = TruncatedOperator<F>::zero(f, sp, 0);
  auto p = f.one();
  for (std::size_t n = 0; n < sp->size(); ++n) {
    d.set_entry(n, n, p);
    p = p * f.q();
  }
  return d;
}

}  // namespace

TEST_CASE("graded bases are level-major") {
  auto nat = GradedSpace::natural_numbers(5);
  CHECK(nat->size() == 6);
  CHECK(nat->level(0) == 0);
  CHECK(nat->level(5) == 5);
  CHECK(nat->label(3) == "3");
  CHECK(nat->prefix_size(2) == 3);
  CHECK(nat->prefix_size(-1) == 0);

  auto fock = GradedSpace::fock_words(2, 3);
  CHECK(fock->size() == 15);
  CHECK(fock->label(0) == "e");
  CHECK(fock->label(1) == "1");
  CHECK(fock->label(4) == "12");
  CHECK(fock->label(5) == "21");
  CHECK(fock->word_index({0, 1}) == 4);
  CHECK(fock->word_index({0, 1, 0, 1}) == fock->size());  // absent: too long
  for (std::size_t i = 1; i < fock->size(); ++i) {
    CHECK(fock->level(i - 1) <= fock->level(i));
    if (fock->level(i - 1) == fock->level(i))
      CHECK(fock->word_at(i - 1) < fock->word_at(i));
  }

  auto pair = GradedSpace::tensor_pair(GradedSpace::natural_numbers(1),
                                       GradedSpace::natural_numbers(1));
  CHECK(pair->truncation() == 2);
  REQUIRE(pair->size() == 4);
  CHECK(pair->pair_at(0) == std::pair<std::size_t, std::size_t>{0, 0});
  CHECK(pair->pair_at(1) == std::pair<std::size_t, std::size_t>{0, 1});
  CHECK(pair->pair_at(2) == std::pair<std::size_t, std::size_t>{1, 0});
  CHECK(pair->pair_at(3) == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(pair->level(3) == 2);
  CHECK(pair->label(2) == "1|0");
  CHECK(pair->pair_index(1, 0) == 2);
}

TEST_CASE("composition tracks raise and valid depth") {
  auto f = make_float_field({0.5, 0.0});
  auto sp = GradedSpace::natural_numbers(5);
  auto s = shift(f, sp);
  CHECK(s.raise() == 1);
  CHECK(s.valid_depth() == 4);

  auto ss = s * s;
  CHECK(ss.raise() == 2);
  CHECK(ss.valid_depth() == 3);
  CHECK(std::abs(ss.entry(2, 0).value() - 1.0) == 0.0);

  auto st = s.adjoint();
  CHECK(st.raise() == -1);
  // the truncated deletion matrix is the untruncated one on every level
  CHECK(st.valid_depth() == 5);
  CHECK(st.entry(0, 1).value() == 1.0);
  CHECK(st.row(0).size() == 1);

  auto sts = st * s;
  CHECK(sts.valid_depth() == 4);
  auto defect = sts - TruncatedOperator<FloatField>::identity(f, sp);
  CHECK(residual_norm(defect, 4) == 0.0);
  CHECK_THROWS_AS(residual_norm(defect, 5), operator_error);

  CHECK(s.adjoint().adjoint().valid_depth() <= s.valid_depth());
  CHECK((s.adjoint().adjoint() - s).is_zero());
}

TEST_CASE("weighted shift commutation on safe levels") {
  auto f = make_exact_field(GaussianRational(BigRat(1, 2)));
  auto sp = GradedSpace::natural_numbers(6);
  auto s = shift(f, sp), d = diag_geom(f, sp);
  auto lhs = d * s;
  auto rhs = f.q() * (s * d);
  CHECK((lhs - rhs).is_zero());  // exact: both sides q^{n+1} on the subdiagonal
  CHECK(residual_norm(lhs - rhs, lhs.valid_depth()) == 0.0);
}

TEST_CASE("entry bookkeeping rejects band violations") {
  auto f = make_float_field({0.0, 0.0});
  auto sp = GradedSpace::natural_numbers(3);
  auto a = TruncatedOperator<FloatField>::zero(f, sp, 1);
  CHECK(a.drop() == 0);  // default: a raising operator need not lower
  CHECK_NOTHROW(a.set_entry(1, 0, f.one()));
  CHECK_NOTHROW(a.set_entry(2, 2, f.one()));
  CHECK_THROWS_AS(a.set_entry(2, 0, f.one()), operator_error);
  CHECK_THROWS_AS(a.set_entry(0, 3, f.one()), operator_error);
  a.set_entry(1, 0, f.zero());
  CHECK(a.row(1).empty());

  CHECK(TruncatedOperator<FloatField>::zero(f, sp, -1).drop() == 1);
  auto b = TruncatedOperator<FloatField>::zero(f, sp, 1, 3);
  CHECK_NOTHROW(b.set_entry(0, 3, f.one()));
  CHECK(b.adjoint().raise() == 3);
}

TEST_CASE("tensor products act factorwise") {
  auto f = make_float_field({0.5, 0.0});
  auto two = GradedSpace::natural_numbers(1);
  auto nat = GradedSpace::natural_numbers(4);
  auto id2 = TruncatedOperator<FloatField>::identity(f, two);
  auto s = shift(f, nat);
  auto block = tensor(id2, s);
  CHECK(block.raise() == 1);
  CHECK(block.valid_depth() == 3);  // capped by the shift factor
  auto sp = block.space();
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t n = 0; n + 1 < 5; ++n)
      CHECK(block.entry(sp->pair_index(i, n + 1), sp->pair_index(i, n)).value() == 1.0);

  auto d = diag_geom(f, nat);
  auto a = tensor(shift(f, two), d, sp);
  auto b = tensor(id2, s, sp);
  // mixed product rule and commutation of the two factor embeddings
  auto prod = a * b;
  auto direct = tensor(shift(f, two), d * s, sp);
  CHECK(spectral_upper_bound(prod - direct) == 0.0);
  auto left = tensor(shift(f, two) + id2, TruncatedOperator<FloatField>::identity(f, nat), sp);
  CHECK(spectral_upper_bound(left * b - b * left) == 0.0);

  auto full = tensor(id2, TruncatedOperator<FloatField>::identity(f, nat), sp);
  CHECK(full.valid_depth() == int(sp->truncation()));  // identities stay fully valid
}

TEST_CASE("safe projections are basis prefixes") {
  auto f = make_float_field({0.3, 0.0});
  auto sp = GradedSpace::fock_words(2, 3);
  auto id = TruncatedOperator<FloatField>::identity(f, sp);
  CHECK((safe_projection(f, sp, 3) - id).is_zero());
  CHECK(safe_projection(f, sp, -1).is_zero());
  auto p0 = safe_projection(f, sp, 0);
  CHECK(p0.nonzeros() == 1);
  CHECK(p0.entry(0, 0).value() == 1.0);
  CHECK_THROWS_AS(safe_projection(f, sp, 4), operator_error);
}

TEST_CASE("norm bounds are certified and monotone") {
  auto f = make_float_field({0.5, 0.0});
  auto sp = GradedSpace::natural_numbers(8);
  auto a = TruncatedOperator<FloatField>::zero(f, sp, 2, 8);
  // deterministic mixed-magnitude entries within the raise band
  for (std::size_t r = 0; r < sp->size(); ++r)
    for (std::size_t c = (r >= 2 ? r - 2 : 0); c < sp->size(); ++c)
      a.set_entry(r, c, f.make_complex({std::sin(1.0 + 3.0 * r + c), std::cos(2.0 * c)}));
  double lo = spectral_lower_bound(a);
  double hi = spectral_upper_bound(a);
  CHECK(lo <= hi + 1e-12);
  CHECK(hi <= frobenius_norm(a) + 1e-12);
  double prev = 0;
  for (int depth = -1; depth <= a.valid_depth(); ++depth) {
    double rn = residual_norm(a, depth);
    CHECK(rn >= prev - 1e-12);
    prev = rn;
  }

  // rank-one case: both bounds are tight
  auto rank1 = TruncatedOperator<FloatField>::zero(f, sp, 0, 1);
  rank1.set_entry(2, 3, f.make_complex({3.0, 4.0}));
  CHECK(spectral_upper_bound(rank1) == Catch::Approx(5.0));
  CHECK(spectral_lower_bound(rank1) == Catch::Approx(5.0));
}

TEST_CASE("shift words match the closed-form action on safe levels") {
  auto f = make_float_field({0.0, 0.0});
  const std::size_t L = 6;
  auto sp = GradedSpace::natural_numbers(L);
  auto s = shift(f, sp);
  auto st = s.adjoint();
  // enumerate words over {S, S*} up to length 4 as bit patterns
  for (std::size_t k = 1; k <= 4; ++k) {
    for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
      auto op = TruncatedOperator<FloatField>::identity(f, sp);
      std::vector<int> letters;
      for (std::size_t i = 0; i < k; ++i) letters.push_back((mask >> i) & 1);
      for (int l : letters) op = op * (l ? st : s);
      CHECK(op.valid_depth() >= int(L - k));
      for (std::size_t n = 0; n + k <= L; ++n) {
        // oracle: apply the word to index n right-to-left; -1 means killed
        long target = long(n);
        for (auto it = letters.rbegin(); it != letters.rend() && target >= 0; ++it)
          target += *it ? -1 : 1;
        for (std::size_t r = 0; r < sp->size(); ++r) {
          double expect = (target >= 0 && std::size_t(r) == std::size_t(target)) ? 1.0 : 0.0;
          CHECK(std::abs(op.entry(r, n).value() - expect) == 0.0);
        }
      }
    }
  }
}

TEST_CASE("operators serialize with a JSON header") {
  auto f = make_float_field({0.5, 0.0});
  auto sp = GradedSpace::natural_numbers(3);
  auto s = shift(f, sp);
  std::ostringstream os;
  export_operator(s, os);
  auto text = os.str();
  CHECK(text.find("\"space\": \"natural_numbers\"") != std::string::npos);
  CHECK(text.find("\"raise\": 1") != std::string::npos);
  CHECK(text.find("\"valid_depth\": 2") != std::string::npos);
  CHECK(text.find("\"nnz\": 3") != std::string::npos);
  CHECK(text.find("\n1 0 1 0\n") != std::string::npos);
}
