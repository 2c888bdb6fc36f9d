// SPDX-License-Identifier: Apache-2.0
//
// moveant: movable-antenna wideband multi-user MIMO simulation
// Copyright (C) 2026 The moveant authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "moveant/array_geometry.hpp"
#include "moveant/channel_model.hpp"
#include "moveant/config.hpp"
#include "moveant/experiment.hpp"
#include "moveant/io.hpp"
#include "moveant/pso_optimizer.hpp"
#include "moveant/random.hpp"
#include "moveant/rate_metrics.hpp"
#include "moveant/scenario.hpp"
