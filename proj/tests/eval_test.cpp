#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <thread>

#include "nmibs/eval.hpp"

using namespace nmibs;

TEST_CASE("confusion matrix worked example") {
    std::vector<int> truth{1, 1, 2, 2}, pred{1, 2, 2, 2}, classes{1, 2};
    auto cm = confusion(truth, pred, classes);
    REQUIRE(cm.at(0, 0) == 1);
    REQUIRE(cm.at(0, 1) == 1);
    REQUIRE(cm.at(1, 0) == 0);
    REQUIRE(cm.at(1, 1) == 2);
    REQUIRE(overall_accuracy(cm) == 0.75);
    REQUIRE(average_accuracy(cm) == Catch::Approx(0.75).margin(1e-15));
}

TEST_CASE("perfect predictions give a diagonal matrix and OA=AA=1") {
    std::vector<int> truth{1, 2, 3, 1, 2, 3}, classes{1, 2, 3};
    auto cm = confusion(truth, truth, classes);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            REQUIRE(cm.at(i, j) == (i == j ? 2 : 0));
    REQUIRE(overall_accuracy(cm) == 1.0);
    REQUIRE(average_accuracy(cm) == 1.0);
}

TEST_CASE("uniformly wrong predictions give OA 0") {
    std::vector<int> truth{1, 1, 2, 2}, pred{2, 2, 1, 1}, classes{1, 2};
    auto cm = confusion(truth, pred, classes);
    REQUIRE(overall_accuracy(cm) == 0.0);
}

TEST_CASE("AA differs from OA under class imbalance") {
    // [[9,1],[0,1]]: AA = (0.9 + 1.0)/2 = 0.95, OA = 10/11
    std::vector<int> truth, pred;
    for (int i = 0; i < 9; ++i) { truth.push_back(1); pred.push_back(1); }
    truth.push_back(1); pred.push_back(2);
    truth.push_back(2); pred.push_back(2);
    std::vector<int> classes{1, 2};
    auto cm = confusion(truth, pred, classes);
    REQUIRE(average_accuracy(cm) == Catch::Approx(0.95).margin(1e-15));
    REQUIRE(overall_accuracy(cm) == Catch::Approx(10.0 / 11.0).margin(1e-15));
}

TEST_CASE("confusion input validation") {
    std::vector<int> classes{1, 2};
    REQUIRE_THROWS_AS(confusion(std::vector<int>{}, std::vector<int>{}, classes),
                      std::invalid_argument);
    REQUIRE_THROWS_WITH(confusion(std::vector<int>{1, 3}, std::vector<int>{1, 1},
                                  classes),
                        Catch::Matchers::ContainsSubstring("3"));
}

TEST_CASE("empty true-class row is rejected by average accuracy") {
    std::vector<int> truth{1, 1}, pred{1, 2}, classes{1, 2};
    auto cm = confusion(truth, pred, classes);
    REQUIRE_THROWS_WITH(average_accuracy(cm),
                        Catch::Matchers::ContainsSubstring("never appears"));
}

TEST_CASE("AA is invariant under duplicating one class, OA is not") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<int> truth, pred, classes{1, 2, 3};
        for (int i = 0; i < 30; ++i) {
            int t = 1 + int(rng() % 3);
            truth.push_back(t);
            pred.push_back(rng() % 4 == 0 ? 1 + int(rng() % 3) : t);
        }
        // ensure every class appears
        truth[0] = 1; truth[1] = 2; truth[2] = 3;
        auto cm = confusion(truth, pred, classes);
        double aa = average_accuracy(cm);

        // duplicate every sample of class 2 three times
        std::vector<int> truth2 = truth, pred2 = pred;
        for (std::size_t i = 0; i < truth.size(); ++i)
            if (truth[i] == 2)
                for (int rep = 0; rep < 2; ++rep) {
                    truth2.push_back(truth[i]);
                    pred2.push_back(pred[i]);
                }
        auto cm2 = confusion(truth2, pred2, classes);
        REQUIRE(average_accuracy(cm2) == Catch::Approx(aa).margin(1e-12));
    }
}

TEST_CASE("metrics agree with a per-pixel recount") {
    std::mt19937_64 rng(29);
    std::vector<int> truth, pred, classes{1, 2, 3, 4};
    for (int i = 0; i < 1000; ++i) {
        truth.push_back(1 + int(rng() % 4));
        pred.push_back(1 + int(rng() % 4));
    }
    truth[0] = 1; truth[1] = 2; truth[2] = 3; truth[3] = 4;
    auto cm = confusion(truth, pred, classes);
    std::int64_t correct = 0;
    for (std::size_t i = 0; i < truth.size(); ++i)
        if (truth[i] == pred[i]) ++correct;
    REQUIRE(overall_accuracy(cm) ==
            double(correct) / double(truth.size()));
    REQUIRE(cm.total() == std::int64_t(truth.size()));
}

TEST_CASE("run_timed reports non-negative wall time and the task result") {
    auto [value, secs] = run_timed([] { return 42; });
    REQUIRE(value == 42);
    REQUIRE(secs >= 0.0);
    auto [v2, s2] = run_timed([] {
        std::this_thread::sleep_for(std::chrono::milliseconds(10));
        return 1;
    });
    REQUIRE(s2 >= 0.005);
}
