// Copyright 2026 The lichenwatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#ifndef LICHEN_LICHEN_HPP_
#define LICHEN_LICHEN_HPP_

#include "lichen/csv.hpp"
#include "lichen/dataset.hpp"
#include "lichen/error.hpp"
#include "lichen/eval.hpp"
#include "lichen/image.hpp"
#include "lichen/mask.hpp"
#include "lichen/monitor.hpp"
#include "lichen/quality.hpp"
#include "lichen/rng.hpp"
#include "lichen/scoring.hpp"
#include "lichen/splits.hpp"
#include "lichen/synth.hpp"
#include "lichen/timeutil.hpp"

#endif  // LICHEN_LICHEN_HPP_
