// Copyright 2026 The VKS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "vks/components.hpp"
#include "vks/config.hpp"
#include "vks/eval.hpp"
#include "vks/features.hpp"
#include "vks/image.hpp"
#include "vks/io.hpp"
#include "vks/kde.hpp"
#include "vks/maxflow.hpp"
#include "vks/model.hpp"
#include "vks/mrf.hpp"
#include "vks/parallel.hpp"
#include "vks/pipeline.hpp"
#include "vks/synth.hpp"
#include "vks/variance.hpp"
