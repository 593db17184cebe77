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
/**
 * @file
 * Convenience umbrella for the whole library.
 */
#pragma once

#include "adam.hpp"       // IWYU pragma: export
#include "ansatz.hpp"     // IWYU pragma: export
#include "checkpoint.hpp" // IWYU pragma: export
#include "circuit.hpp"    // IWYU pragma: export
#include "data.hpp"       // IWYU pragma: export
#include "errors.hpp"     // IWYU pragma: export
#include "eval.hpp"       // IWYU pragma: export
#include "gates.hpp"      // IWYU pragma: export
#include "gradient.hpp"   // IWYU pragma: export
#include "parallel.hpp"   // IWYU pragma: export
#include "params.hpp"     // IWYU pragma: export
#include "rng.hpp"        // IWYU pragma: export
#include "scoring.hpp"    // IWYU pragma: export
#include "statevector.hpp" // IWYU pragma: export
#include "train.hpp"      // IWYU pragma: export
