#include <doctest.h>

#include <cmath>
#include <limits>

#include "rocoin/assignment.hpp"
#include "rocoin/errors.hpp"
#include "rocoin/rng.hpp"
#include "support/instance_gen.hpp"
#include "support/oracles.hpp"

using namespace rocoin;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m(0, 0) = a; m(0, 1) = b; m(1, 0) = c; m(1, 1) = d;
  return m;
}

Matrix random_int_matrix(Rng& rng, int n, int lo, int hi) {
  Matrix m(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      m(i, j) = static_cast<double>(lo + static_cast<int>(next_index(
                    rng, static_cast<std::size_t>(hi - lo + 1))));
  return m;
}

}  // namespace

TEST_CASE("feasible_students filters on the group's tightest memory") {
  const std::vector<DeviceProfile> devices = {{"a", 1e7, 1e6, 1000, 0.3},
                                              {"b", 1e7, 3e6, 1000, 0.3}};
  const DeviceGroup g{{"a", "b"}, 2e6, 1e7};
  const std::vector<StudentArch> students = {{"small", 1e7, 5e5, 100},
                                             {"large", 2e7, 2e6, 100}};
  const auto feasible = feasible_students(g, students, devices);
  REQUIRE(feasible.size() == 1);
  CHECK(feasible[0].id == "small");

  const std::vector<StudentArch> huge = {{"x", 1e7, 5e6, 100}};
  CHECK(feasible_students(g, huge, devices).empty());

  // The bound is inclusive.
  const std::vector<StudentArch> exact = {{"fit", 1e7, 1e6, 100}};
  CHECK(feasible_students(g, exact, devices).size() == 1);
}

TEST_CASE("partition_size under both metrics") {
  const auto g = testing::make_graph(3, {{0, 1, 2.0}, {0, 2, 1.0}});
  const FilterPartition p{{0, 1, 2}};
  CHECK(partition_size(p, g, PartitionSizeMetric::filter_count) == 3.0);
  CHECK(partition_size({{0}}, g, PartitionSizeMetric::volume) == doctest::Approx(3.0));
  CHECK(partition_size({{1}}, g, PartitionSizeMetric::volume) == doctest::Approx(2.0));
  CHECK_THROWS_AS(partition_size({{}}, g, PartitionSizeMetric::filter_count),
                  ValidationError);
  // Zero volume under the volume metric is an error.
  const auto iso = testing::make_graph(3, {{0, 1, 1.0}});
  CHECK_THROWS_AS(partition_size({{2}}, iso, PartitionSizeMetric::volume), ValidationError);
}

TEST_CASE("group_delay takes the fastest replica") {
  const std::vector<DeviceProfile> devices = {{"a", 1e7, 1e6, 1000, 0.3},
                                              {"b", 1e7, 1e6, 1000, 0.3},
                                              {"c", 5e6, 1e6, 1000, 0.3}};
  const StudentArch s{"s", 48.58e6, 5e5, 1000};
  CHECK(group_delay({{"a"}, 0, 0}, s, devices) == doctest::Approx(5.858));
  CHECK(group_delay({{"a", "b"}, 0, 0}, s, devices) ==
        doctest::Approx(group_delay({{"a"}, 0, 0}, s, devices)));
  // Faster core wins.
  CHECK(group_delay({{"a", "c"}, 0, 0}, s, devices) == doctest::Approx(5.858));
}

TEST_CASE("assignment_weight") {
  const std::vector<DeviceProfile> devices = {{"a", 5e6, 1e6, 1000, 0.3}};
  const DeviceGroup g{{"a"}, 1e6, 5e6};
  const auto graph = testing::make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}});
  const FilterPartition two{{0, 1}};

  CHECK(assignment_weight(g, two, {}, graph, devices, PartitionSizeMetric::filter_count) ==
        -kInf);

  // flops 2e6, delay 2e6/5e6 + 100/1000 = 0.5 s, size 2 -> 2e6.
  const StudentArch s{"s", 2e6, 5e5, 100};
  CHECK(assignment_weight(g, two, {s}, graph, devices,
                          PartitionSizeMetric::filter_count) == doctest::Approx(2e6));

  // The max picks the better ratio: the larger student amortizes its
  // transmission, so its ratio wins here.
  const StudentArch big{"big", 8e6, 5e5, 100};  // delay 1.7, ratio 8e6/3.4
  const double w = assignment_weight(g, two, {s, big}, graph, devices,
                                     PartitionSizeMetric::filter_count);
  CHECK(w == doctest::Approx(8e6 / (2.0 * 1.7)));
  CHECK(w > 2e6);
}

TEST_CASE("km_match on hand matrices") {
  const auto m = mat2(1, 2, 3, 1);
  const auto match = km_match(m);
  CHECK(match == std::vector<int>{1, 0});
  CHECK(oracles::matching_total(m, match) == 5.0);

  CHECK(km_match(mat2(10, 1, 1, 10)) == std::vector<int>{0, 1});

  Matrix infeasible = mat2(1, 1, 1, 1);
  infeasible(1, 0) = -kInf;
  infeasible(1, 1) = -kInf;
  CHECK_THROWS_AS(km_match(infeasible), InfeasibleError);
}

TEST_CASE("km_match ties break to the lexicographically smallest vector") {
  // Every permutation scores 2.
  CHECK(km_match(mat2(1, 1, 1, 1)) == std::vector<int>{0, 1});
  Matrix all_equal(4, 4, 3.0);
  CHECK(km_match(all_equal) == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("km_match ignores constant shifts") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(next_index(rng, 5));
    const Matrix w = random_int_matrix(rng, n, 0, 30);
    Matrix shifted = w;
    for (std::size_t i = 0; i < shifted.rows(); ++i)
      for (std::size_t j = 0; j < shifted.cols(); ++j) shifted(i, j) += 1000.0;
    CHECK(km_match(w) == km_match(shifted));
  }
}

TEST_CASE("km_match equals brute force on random integer matrices") {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    Rng rng(derive_seed(seed, 1));
    const int n = 2 + static_cast<int>(next_index(rng, 5));  // K in 2..6
    const Matrix w = random_int_matrix(rng, n, 0, 20);       // small range forces ties
    const auto fast = km_match(w);
    const auto slow = oracles::brute_force_match(w);
    CHECK(oracles::matching_total(w, fast) == oracles::matching_total(w, slow));
    CHECK(fast == slow);  // identical tie rules
  }
}

TEST_CASE("brute_force_match basics") {
  CHECK(oracles::brute_force_match(mat2(1, 2, 3, 1)) == std::vector<int>{1, 0});
  Matrix one(1, 1, 4.0);
  CHECK(oracles::brute_force_match(one) == std::vector<int>{0});
  Matrix big(9, 9, 1.0);
  CHECK_THROWS_AS(oracles::brute_force_match(big), ValidationError);
}

TEST_CASE("select_student tie-breaking") {
  const std::vector<DeviceProfile> devices = {{"a", 1e7, 4e6, 1000, 0.3}};
  const DeviceGroup g{{"a"}, 4e6, 1e7};
  const auto graph = testing::make_graph(2, {{0, 1, 1.0}});
  const FilterPartition p{{0, 1}};
  const auto metric = PartitionSizeMetric::filter_count;

  const StudentArch only{"only", 2e6, 5e5, 100};
  CHECK(select_student(g, p, {only}, graph, devices, metric) == "only");

  // Identical score, different footprint: the smaller one wins.
  const StudentArch heavy{"heavy", 2e6, 9e5, 100};
  const StudentArch light{"light", 2e6, 5e5, 100};
  CHECK(select_student(g, p, {heavy, light}, graph, devices, metric) == "light");

  // Full tie: lexicographic id.
  const StudentArch beta{"beta", 2e6, 5e5, 100};
  CHECK(select_student(g, p, {only, beta}, graph, devices, metric) == "beta");

  CHECK_THROWS_AS(select_student(g, p, {}, graph, devices, metric), InfeasibleError);

  // The score winner is selected: same pair as the assignment_weight case.
  const StudentArch small{"small", 2e6, 5e5, 100};
  const StudentArch big{"big", 8e6, 5e5, 100};
  const std::vector<DeviceProfile> slow = {{"a", 5e6, 4e6, 1000, 0.3}};
  CHECK(select_student({{"a"}, 4e6, 5e6}, p, {small, big}, graph, slow, metric) == "big");
}
