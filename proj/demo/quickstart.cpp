// Library walk-through: draw from a step density, estimate it at a few
// sample sizes, and compare with the truth.

#include <cstdio>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include <dyadic/dyadic.hpp>

int main() {
  using namespace dyadic;

  // h_3: height 2 on [0, 1/8), [1/4, 3/8), ...; total variation 16 on [-1, 1)
  const auto truth = rademacher_density<double>(3);
  auto source = iid_source(truth, 2024);

  // alpha(i) = 5 admits h_3 (4 * alpha = 20 > 16) and anything flatter
  const EstimatorConfig config(VariationBudget::constant(5));

  SampleBuffer buffer;
  for (std::size_t n : {100, 1000, 10000, 100000}) {
    while (buffer.size() < n)
      buffer.append(*source.next());
    const EstimateReport report = estimate(buffer, config);
    std::printf("n = %6zu  b_n = %2d  k_n = %s  L1 = %.4f\n", n, report.depth,
                report.level ? std::to_string(*report.level).c_str() : "none",
                l1_step(report.density, truth));
  }

  // exact arithmetic: the same code with rational scalars
  using Q = boost::multiprecision::cpp_rational;
  const auto coarse = conditional_on_partition(rademacher_density<Q>(3), 2);
  std::printf("V(h_3 averaged over level-2 cells : -1, 1) = %s\n",
              step_variation(coarse, Q(-1), Q(1)).str().c_str());
}
