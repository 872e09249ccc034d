// Copyright 2026 The camtrap-eval Authors. All Rights Reserved.
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

#ifndef CAMTRAP_CAMTRAP_HPP_
#define CAMTRAP_CAMTRAP_HPP_

#include "camtrap/dataset.hpp"
#include "camtrap/detections.hpp"
#include "camtrap/detsim.hpp"
#include "camtrap/ecology.hpp"
#include "camtrap/errors.hpp"
#include "camtrap/evaluation.hpp"
#include "camtrap/geometry.hpp"
#include "camtrap/matching.hpp"
#include "camtrap/render.hpp"
#include "camtrap/rng.hpp"
#include "camtrap/splits.hpp"

#endif  // CAMTRAP_CAMTRAP_HPP_
