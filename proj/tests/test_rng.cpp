// Copyright 2026 The qkge Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include <qkge/errors.hpp>
#include <qkge/rng.hpp>

using namespace qkge;

TEST_CASE("uniform draws are deterministic per seed", "[rng]") {
    std::mt19937_64 a(42);
    std::mt19937_64 b(42);
    for (int i = 0; i < 100; ++i) {
        REQUIRE(uniform_unit(a) == uniform_unit(b));
        REQUIRE(uniform_angle(a) == uniform_angle(b));
        REQUIRE(uniform_index(a, 17) == uniform_index(b, 17));
    }
}

TEST_CASE("uniform_unit stays in [0, 1)", "[rng]") {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = uniform_unit(rng);
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}

TEST_CASE("uniform_angle stays in [0, 2*pi)", "[rng]") {
    std::mt19937_64 rng(2);
    for (int i = 0; i < 10000; ++i) {
        const double a = uniform_angle(rng);
        REQUIRE(a >= 0.0);
        REQUIRE(a < kTwoPi);
    }
}

TEST_CASE("uniform_index covers the whole range", "[rng]") {
    std::mt19937_64 rng(3);
    std::vector<int> seen(5, 0);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t k = uniform_index(rng, seen.size());
        REQUIRE(k < seen.size());
        ++seen[k];
    }
    REQUIRE(std::all_of(seen.begin(), seen.end(),
                        [](int c) { return c > 0; }));
    REQUIRE_THROWS_AS(uniform_index(rng, 0), SamplingError);
}

TEST_CASE("shuffle_in_place permutes deterministically", "[rng]") {
    std::vector<int> base{0, 1, 2, 3, 4, 5, 6, 7};
    std::vector<int> first = base;
    std::vector<int> second = base;
    std::mt19937_64 a(9);
    std::mt19937_64 b(9);
    shuffle_in_place(first, a);
    shuffle_in_place(second, b);
    REQUIRE(first == second);

    std::vector<int> sorted = first;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(sorted == base); // a permutation, nothing lost
}
