#include <gtest/gtest.h>

#include <random>

#include "netsense/fusion.hpp"
#include "netsense/imaging.hpp"
#include "netsense/metrics.hpp"
#include "netsense/presets.hpp"

using namespace netsense;

namespace {

ComplexImage random_image(PairId p, std::mt19937 &rng, ImageGrid g = {{0, 0}, 1, 1, 9, 7}) {
  std::normal_distribution<double> n;
  ComplexImage img(g, Provenance::of_pair(p));
  for (auto &v : img.pixels) v = {n(rng), n(rng)};
  return img;
}

} // namespace

TEST(FuseIncoherent, IdenticalImagesAverageToMagnitude) {
  std::mt19937 rng(1);
  const auto base = random_image({0, 0}, rng);
  std::vector<ComplexImage> imgs;
  for (std::size_t l = 0; l < 5; ++l) {
    auto c = base;
    c.provenance = Provenance::of_pair({l, l});
    imgs.push_back(c);
  }
  const auto out = fuse_incoherent(imgs, FusionWeights::uniform(imgs));
  EXPECT_EQ(out.provenance.label, "fused:inc");
  for (std::size_t i = 0; i < out.pixels.size(); ++i) {
    EXPECT_NEAR(out.pixels[i].real(), std::abs(base.pixels[i]), 1e-12);
    EXPECT_EQ(out.pixels[i].imag(), 0.0);
  }
}

TEST(FuseIncoherent, PhaseIsDiscardedAndOutputNonNegative) {
  std::mt19937 rng(2);
  auto a = random_image({0, 0}, rng);
  auto b = a;
  b.provenance = Provenance::of_pair({1, 1});
  auto c = b;
  for (auto &v : c.pixels) v = -v;
  std::vector<ComplexImage> same{a, b}, opposite{a, c};
  const auto x = fuse_incoherent(same, FusionWeights::uniform(same));
  const auto y = fuse_incoherent(opposite, FusionWeights::uniform(opposite));
  EXPECT_EQ(x.pixels, y.pixels);
  for (auto v : y.pixels) EXPECT_GE(v.real(), 0.0);
}

TEST(FuseIncoherent, RejectsBistaticAndGridMismatch) {
  std::mt19937 rng(3);
  std::vector<ComplexImage> bi{random_image({0, 1}, rng)};
  EXPECT_THROW(fuse_incoherent(bi, FusionWeights::uniform(bi)), ValidationError);
  std::vector<ComplexImage> mixed{random_image({0, 0}, rng), random_image({1, 1}, rng, {{0, 0}, 1, 1, 9, 8})};
  EXPECT_THROW(fuse_incoherent(mixed, FusionWeights::uniform(mixed)), ValidationError);
  EXPECT_THROW(fuse_coherent(mixed, FusionWeights::uniform(mixed)), ValidationError);
}

TEST(FuseCoherent, GainAndCancellation) {
  std::mt19937 rng(4);
  const auto a = random_image({0, 0}, rng);
  std::vector<ComplexImage> copies;
  FusionWeights ones;
  for (std::size_t l = 0; l < 4; ++l) {
    auto c = a;
    c.provenance = Provenance::of_pair({l, 0});
    copies.push_back(c);
    ones.values[{l, 0}] = 1.0;
  }
  const auto sum = fuse_coherent(copies, ones);
  EXPECT_EQ(sum.provenance.label, "fused:coh");
  for (std::size_t i = 0; i < a.pixels.size(); ++i) EXPECT_NEAR(std::abs(sum.pixels[i] - 4.0 * a.pixels[i]), 0, 1e-12);

  auto neg = a;
  neg.provenance = Provenance::of_pair({1, 0});
  for (auto &v : neg.pixels) v = -v;
  std::vector<ComplexImage> pair{a, neg};
  for (auto v : fuse_coherent(pair, ones).pixels) EXPECT_EQ(v, cplx(0, 0));
}

TEST(FuseCoherent, LinearAndWeightScaling) {
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-2, 2), w(0.1, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<ComplexImage> i1, i2, mix;
    FusionWeights W, W3;
    const cplx al{u(rng), u(rng)}, be{u(rng), u(rng)};
    for (std::size_t l = 0; l < 3; ++l) {
      i1.push_back(random_image({l, 2 - l}, rng));
      i2.push_back(random_image({l, 2 - l}, rng));
      auto m = i1.back();
      for (std::size_t k = 0; k < m.pixels.size(); ++k) m.pixels[k] = al * i1.back().pixels[k] + be * i2.back().pixels[k];
      mix.push_back(m);
      W.values[{l, 2 - l}] = w(rng);
      W3.values[{l, 2 - l}] = 3.0 * W.values[{l, 2 - l}];
    }
    const auto f1 = fuse_coherent(i1, W), f2 = fuse_coherent(i2, W), fm = fuse_coherent(mix, W);
    const auto f3 = fuse_coherent(i1, W3);
    for (std::size_t k = 0; k < fm.pixels.size(); ++k) {
      EXPECT_NEAR(std::abs(fm.pixels[k] - (al * f1.pixels[k] + be * f2.pixels[k])), 0.0, 1e-12);
      EXPECT_NEAR(std::abs(f3.pixels[k] - 3.0 * f1.pixels[k]), 0.0, 1e-12);
    }
  }
}

TEST(FusionWeights, Validation) {
  std::mt19937 rng(6);
  std::vector<ComplexImage> imgs{random_image({0, 0}, rng)};
  FusionWeights w;
  w.values[{0, 0}] = -1;
  EXPECT_THROW(fuse_coherent(imgs, w), ValidationError);
  w.values[{0, 0}] = 0;
  EXPECT_THROW(fuse_coherent(imgs, w), ValidationError);
  FusionWeights missing;
  missing.values[{1, 1}] = 1;
  EXPECT_THROW(fuse_coherent(imgs, missing), ValidationError);
}

TEST(FusionWeights, EqualizedSharesReciprocalCentres) {
  const auto s = lane_scenario({3, 0.7, {0, 20}, 28e9, 500e6, 3.0});
  std::mt19937 rng(7);
  std::vector<ComplexImage> imgs;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) imgs.push_back(random_image({a, b}, rng));
  const auto w = FusionWeights::equalized(s, imgs);
  double total = 0;
  for (auto &[p, v] : w.values) total += v;
  EXPECT_NEAR(total, 1.0, 1e-12);
  // (0,2), (2,0) and (1,1) share the centre x = 0.
  EXPECT_NEAR(w.at({0, 2}), w.at({1, 1}), 1e-15);
  EXPECT_NEAR(w.at({0, 0}), 3.0 * w.at({1, 1}), 1e-15);
  EXPECT_NEAR(w.at({0, 1}), 1.5 * w.at({1, 1}), 1e-15);
}

TEST(SelectPairs, Gating) {
  std::mt19937 rng(8);
  std::vector<ComplexImage> imgs;
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 3; ++b) imgs.push_back(random_image({a, b}, rng));
  EXPECT_EQ(select_pairs(AssociationMatrix::identity(3), imgs).size(), 3u);
  for (const auto &i : select_pairs(AssociationMatrix::identity(3), imgs)) EXPECT_TRUE(i.provenance.pair->monostatic());
  EXPECT_EQ(select_pairs(AssociationMatrix::full(3), imgs).size(), 9u);
  AssociationMatrix one(3);
  one.set(1, 2);
  const auto sel = select_pairs(one, imgs);
  ASSERT_EQ(sel.size(), 1u);
  EXPECT_EQ(*sel[0].provenance.pair, (PairId{1, 2}));
}

TEST(FuseCoherent, MonostaticLadderOnSmallLane) {
  // Three terminals: the coherent sum narrows x and the cross pairs fill the gaps.
  auto s = lane_scenario({3, 0.7, {0, 20}, 28e9, 500e6, 0.30});
  const Vec2 t{0, 20};
  const auto g = ImageGrid::centered(t, 0.6, 0.45, 0.006, 0.03);
  Scenario one = s;
  one.pairing = AssociationMatrix(3);
  one.pairing.set(1, 1);
  const double single = measure_resolution(point_spread(one, t, g), Axis::x);
  const auto mono = point_spread(s, t, g);
  s.pairing = AssociationMatrix::full(3);
  const auto imgs = simulate_images(probe_scenario(s, t), g);
  const auto multi = fuse_coherent(imgs, FusionWeights::equalized(s, imgs));
  EXPECT_LT(measure_resolution(mono, Axis::x), single);
  EXPECT_LT(pslr(multi), pslr(mono) - 3.0);
  EXPECT_LT(measure_resolution(multi, Axis::x), 0.5 * single);
  EXPECT_LT(islr(multi), islr(mono));
}
