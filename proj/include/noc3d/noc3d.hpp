// Copyright 2026 The noc3d Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Umbrella header.

#pragma once

#include "noc3d/anneal.hpp"
#include "noc3d/area_kernel.hpp"
#include "noc3d/corpus.hpp"
#include "noc3d/error.hpp"
#include "noc3d/exact_baseline.hpp"
#include "noc3d/floorplan_sa.hpp"
#include "noc3d/io.hpp"
#include "noc3d/layer_assign.hpp"
#include "noc3d/model.hpp"
#include "noc3d/net_route.hpp"
#include "noc3d/objective.hpp"
#include "noc3d/pipeline.hpp"
#include "noc3d/render.hpp"
#include "noc3d/rng.hpp"
#include "noc3d/simplex.hpp"
#include "noc3d/tsv_count.hpp"
#include "noc3d/vlink_sa.hpp"
