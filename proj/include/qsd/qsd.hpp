// Copyright 2026 The qsd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Umbrella header for the numerical library (io.hpp additionally needs nlohmann/json).

#include "qsd/discrimination.hpp"
#include "qsd/experiments.hpp"
#include "qsd/linalg.hpp"
#include "qsd/nelder_mead.hpp"
#include "qsd/rng.hpp"
#include "qsd/robustness.hpp"
#include "qsd/states.hpp"
#include "qsd/version.hpp"
