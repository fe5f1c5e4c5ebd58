#include <doctest.h>

#include "support.hpp"
#include "ttwist/errors.hpp"
#include "ttwist/fixtures.hpp"
#include "ttwist/pipeline.hpp"
#include "ttwist/spectral.hpp"

using namespace ttwist;
using namespace ttwist::testing;

namespace {

std::vector<MWComplex> mw_fixtures(std::vector<std::unique_ptr<Fixture>>& fs) {
  std::vector<MWComplex> out;
  for (auto& f : fs) out.push_back(mw_complex(f->complex, *f->rep, f->theta));
  return out;
}

}  // namespace

TEST_CASE("parity filtration with t = 0 reproduces the untwisted complex on E1") {
  auto f = fixture_boundary3();
  MWComplex mw = mw_complex(f->complex, *f->rep, {});
  FilteredZ2Complex fz = parity_filtration(mw.module);
  CHECK(fz.steps() == 3);
  auto pages = compute_pages(fz, 4);
  const BasedComplex& m = mw.module.m;
  for (int p = 0; p <= m.high(); ++p) {
    const PageCell& c = pages[0].cell(p, p % 2);
    CHECK(c.reps == standard_block(fz.dim(p % 2), offset_of(m, p), m.dim(p)));
    CHECK(pages[0].cell(p, 1 - p % 2).dim() == 0);
  }
  // E2 = Betti numbers, nothing changes afterwards.
  auto betti = m.betti();
  for (int p = 0; p <= m.high(); ++p) CHECK(pages[1].cell(p, p % 2).dim() == betti[static_cast<size_t>(p)]);
  for (size_t r = 2; r < pages.size(); ++r) {
    CHECK(pages[r].differential_is_zero());
    for (size_t i = 0; i < pages[r].cells.size(); ++i) CHECK(pages[r].cells[i].dim() == pages[1].cells[i].dim());
  }
  Abutment a = abutment(fz);
  CHECK(a.cohomology.even.cols() == betti[0] + betti[2]);
  CHECK(a.cohomology.odd.cols() == betti[1]);
}

TEST_CASE("filtration of a degree 0..3 module with one t3 map") {
  BasedComplex m(0, {1, 1, 1, 1}, {Matrix(1, 1), Matrix(1, 1), Matrix(1, 1)});
  DGModuleInput dg(m, {{{0, 3}, Matrix(1, 1, {5})}});
  FilteredZ2Complex f = parity_filtration(dg);
  REQUIRE(f.steps() == 4);
  // Even part = m^0 ⊕ m^2.
  CHECK(rank(f.filtration(0, 0)) == 2);
  CHECK(f.filtration(0, 1) == Matrix(2, 1, {0, 1}));
  CHECK(f.filtration(0, 2) == Matrix(2, 1, {0, 1}));
  CHECK(f.filtration(0, 3).cols() == 0);
  CHECK(f.filtration(0, 4).cols() == 0);
}

TEST_CASE("parity filtration of the S3 module has steps F_0 .. F_4 = 0") {
  auto f = fixture_s3();
  MWComplex mw = mw_complex(f->complex, *f->rep, f->theta);
  FilteredZ2Complex fz = parity_filtration(mw.module);
  CHECK(fz.steps() == 4);
  CHECK(fz.filtration(0, 4).cols() == 0);
  CHECK(fz.filtration(1, 4).cols() == 0);
  CHECK(fz.filtration(1, 3).cols() == 5);
}

TEST_CASE("S3 pages: E2 dims (1,0,0,1), E4 = 0") {
  auto f = fixture_s3();
  MWComplex mw = mw_complex(f->complex, *f->rep, f->theta);
  FilteredZ2Complex fz = parity_filtration(mw.module);
  auto pages = compute_pages(fz, 5);
  std::vector<size_t> e2;
  for (int p = 0; p < 4; ++p) e2.push_back(pages[1].cell(p, p % 2).dim());
  CHECK(e2 == std::vector<size_t>{1, 0, 0, 1});
  for (size_t r = 3; r < pages.size(); ++r)
    for (auto& c : pages[r].cells) CHECK(c.dim() == 0);
  Abutment a = abutment(fz);
  CHECK(a.cohomology.even.cols() == 0);
  CHECK(a.cohomology.odd.cols() == 0);
  CHECK(a.matches);
  CHECK(mw.h_even() == 0);
  CHECK(mw.h_odd() == 0);
}

TEST_CASE("zero differential: all pages agree") {
  BasedComplex m(0, {2, 1, 1}, {Matrix(1, 2), Matrix(1, 1)});
  FilteredZ2Complex f = parity_filtration(DGModuleInput(m, {}));
  auto pages = compute_pages(f, 4);
  for (auto& pg : pages) {
    CHECK(pg.differential_is_zero());
    for (size_t i = 0; i < pg.cells.size(); ++i) CHECK(pg.cells[i].dim() == pages[0].cells[i].dim());
  }
  CHECK(stabilization_page(pages) == 1);
}

TEST_CASE("compute_pages rejects r_max < 1") {
  BasedComplex m(0, {1}, {});
  FilteredZ2Complex f = parity_filtration(DGModuleInput(m, {}));
  CHECK_THROWS_AS(compute_pages(f, 0), InputError);
}

TEST_CASE("circle with rho = 3 abuts to zero") {
  auto f = fixture_circle_three();
  MWComplex mw = mw_complex(f->complex, *f->rep, {});
  Abutment a = abutment(parity_filtration(mw.module));
  CHECK(a.cohomology.even.cols() == 0);
  CHECK(a.cohomology.odd.cols() == 0);
  CHECK(a.matches);
}

TEST_CASE("E1 rows reproduce m and d1 equals the untwisted differential on every fixture") {
  auto fs = all_fixtures();
  for (auto& mw : mw_fixtures(fs)) {
    FilteredZ2Complex fz = parity_filtration(mw.module);
    auto pages = compute_pages(fz, 2);
    const BasedComplex& m = mw.module.m;
    const SpectralPage& e1 = pages[0];
    for (int p = 0; p <= m.high(); ++p) {
      size_t i = *e1.index(p, p % 2);
      CHECK(e1.cells[i].reps == standard_block(fz.dim(p % 2), offset_of(m, p), m.dim(p)));
      if (p < m.high()) {
        REQUIRE(e1.target[i]);
        CHECK(e1.d[i] == m.d(p));
      }
    }
  }
}

TEST_CASE("E_r^{p,q} = E_r^{p,q+2} for r >= 2 on every fixture") {
  auto fs = all_fixtures();
  for (auto& mw : mw_fixtures(fs)) {
    FilteredZ2Complex fz = parity_filtration(mw.module);
    int n = static_cast<int>(fz.steps());
    int r_max = n + 1;
    auto z2 = compute_pages(fz, r_max);
    int lo = -n - 2, hi = 2 * n + 2;
    auto unrolled = compute_unrolled_pages(fz, r_max, lo, hi);
    for (int r = 2; r <= r_max; ++r) {
      const SpectralPage& u = unrolled[static_cast<size_t>(r - 1)];
      const SpectralPage& z = z2[static_cast<size_t>(r - 1)];
      for (int p = 0; p < n; ++p)
        for (int q = -n; q <= n; ++q) {
          int deg = p + q;
          const PageCell& a = u.cell(p, deg);
          const PageCell& b = u.cell(p, deg + 2);
          CHECK(a.dim() == b.dim());
          CHECK(a.reps == b.reps);
          CHECK(a.reps == z.cell(p, ((deg % 2) + 2) % 2).reps);
        }
    }
  }
}

TEST_CASE("E_infinity graded dims equal the abutment on every fixture") {
  auto fs = all_fixtures();
  for (auto& mw : mw_fixtures(fs)) {
    FilteredZ2Complex fz = parity_filtration(mw.module);
    Abutment a = abutment(fz);
    CHECK(a.matches);
    CHECK(a.graded_even == graded_oracle(fz, 0));
    CHECK(a.graded_odd == graded_oracle(fz, 1));
    auto pages = compute_pages(fz, static_cast<int>(fz.steps()) + 1);
    REQUIRE(stabilization_page(pages));
    std::vector<size_t> ev, od;
    for (int p = 0; p < static_cast<int>(fz.steps()); ++p) {
      ev.push_back(pages.back().cell(p, 0).dim());
      od.push_back(pages.back().cell(p, 1).dim());
    }
    CHECK(ev == graded_oracle(fz, 0));
    CHECK(od == graded_oracle(fz, 1));
    size_t total_even = 0, total_odd = 0;
    for (auto x : ev) total_even += x;
    for (auto x : od) total_odd += x;
    CHECK(total_even == mw.h_even());
    CHECK(total_odd == mw.h_odd());
  }
}

TEST_CASE("pure degree 3 twists with top degree <= 4 degenerate from E4 on") {
  auto fs = all_fixtures();
  for (auto& mw : mw_fixtures(fs)) {
    FilteredZ2Complex fz = parity_filtration(mw.module);
    REQUIRE(fz.steps() <= 5);
    auto pages = compute_pages(fz, 6);
    for (size_t r = 3; r < pages.size(); ++r) {
      CHECK(pages[r].differential_is_zero());
      for (size_t i = 0; i < pages[r].cells.size(); ++i) CHECK(pages[r].cells[i].dim() == pages[3].cells[i].dim());
    }
  }
}

TEST_CASE("twisted det chain with t = 0 and equal bases is 1") {
  auto fs = all_fixtures();
  for (auto& f : fs) {
    MWComplex mw = mw_complex(f->complex, *f->rep, {});
    FilteredZ2Complex fz = parity_filtration(mw.module);
    CohomologyBases h = default_cohomology_bases(mw.module.m);
    Z2Bases hz = parity_collapse_bases(mw.module.m, h);
    CHECK(twisted_det_chain(fz, h, hz) == Rational(1));
  }
}

TEST_CASE("single nonzero page differential M gives +-det M") {
  // In a parity filtration d_2 vanishes for parity reasons; the first
  // differential that can be nonzero is d_3, carried by a t_3 map m^0 -> m^3.
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    size_t k = 1 + rng() % 3;
    Matrix mmat = random_invertible(k, rng);
    BasedComplex m(0, {k, 0, 0, k}, {Matrix(0, k), Matrix(0, 0), Matrix(k, 0)});
    FilteredZ2Complex fz = parity_filtration(DGModuleInput(m, {{{0, 3}, mmat}}));
    CohomologyBases h{Matrix::identity(k), Matrix(0, 0), Matrix(0, 0), Matrix::identity(k)};
    Z2Bases empty{Matrix(k, 0), Matrix(k, 0)};
    Rational chain = twisted_det_chain(fz, h, empty);
    CHECK(chain.abs() == laplace_det(mmat).abs());
    Z2Complex single(mmat, Matrix(k, k));
    CHECK(equal_up_to_sign(chain, lemma1_scalar(single, {Matrix(k, 0), Matrix(k, 0)})));
  }
}

TEST_CASE("twisted det chain agrees with the direct route on every fixture") {
  auto fs = all_fixtures();
  for (auto& mw : mw_fixtures(fs)) {
    FilteredZ2Complex fz = parity_filtration(mw.module);
    CohomologyBases h = default_cohomology_bases(mw.module.m);
    Z2Bases t = default_z2_bases(mw.z);
    Rational chain = twisted_det_chain(fz, h, t);
    Rational direct = lemma1_scalar(mw.z, t) / km_scalar(mw.module.m, h);
    CHECK(equal_up_to_sign(chain, direct));
  }
}

TEST_CASE("twisted det chain is invariant under randomized representatives") {
  std::mt19937_64 rng(32);
  std::vector<std::unique_ptr<Fixture>> fs;
  fs.push_back(fixture_s3());
  fs.push_back(fixture_boundary3());
  fs.push_back(fixture_circle_minus());
  fs.push_back(fixture_random(3));
  fs.push_back(fixture_random(4));
  for (auto& mw : mw_fixtures(fs)) {
    FilteredZ2Complex fz = parity_filtration(mw.module);
    CohomologyBases h = default_cohomology_bases(mw.module.m);
    Z2Bases t = default_z2_bases(mw.z);
    Rational chain = twisted_det_chain(fz, h, t);
    for (int k = 0; k < 20; ++k) CHECK(twisted_det_chain(fz, h, t, &rng) == chain);
  }
}

TEST_CASE("twisted det chain rejects invalid bases") {
  auto f = fixture_boundary3();
  MWComplex mw = mw_complex(f->complex, *f->rep, {});
  FilteredZ2Complex fz = parity_filtration(mw.module);
  CohomologyBases h = default_cohomology_bases(mw.module.m);
  Z2Bases t = default_z2_bases(mw.z);
  CohomologyBases bad = h;
  bad[0] = Matrix(bad[0].rows(), bad[0].cols());
  CHECK_THROWS_AS(twisted_det_chain(fz, bad, t), InputError);
  Z2Bases bad_t = t;
  bad_t.even = Matrix(t.even.rows(), 0);
  CHECK_THROWS_AS(twisted_det_chain(fz, h, bad_t), InputError);
}
