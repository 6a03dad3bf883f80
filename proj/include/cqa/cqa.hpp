// Copyright 2026 The cqa Authors
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

// Umbrella header for the library (everything except the command line).

#pragma once

#include "cqa/attack.hpp"
#include "cqa/codegen.hpp"
#include "cqa/constant.hpp"
#include "cqa/datalog/engine.hpp"
#include "cqa/datalog/ir.hpp"
#include "cqa/datalog/text.hpp"
#include "cqa/datalog/validate.hpp"
#include "cqa/dot.hpp"
#include "cqa/error.hpp"
#include "cqa/eval.hpp"
#include "cqa/fd.hpp"
#include "cqa/garbage.hpp"
#include "cqa/generator.hpp"
#include "cqa/graph.hpp"
#include "cqa/longcycle.hpp"
#include "cqa/mgraph.hpp"
#include "cqa/model.hpp"
#include "cqa/pipeline.hpp"
#include "cqa/plan.hpp"
#include "cqa/saturation.hpp"
#include "cqa/text.hpp"
