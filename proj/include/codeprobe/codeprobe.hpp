// Copyright 2026 The codeprobe Authors
//
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

#pragma once

#include "codeprobe/cli.hpp"
#include "codeprobe/corpus.hpp"
#include "codeprobe/csv.hpp"
#include "codeprobe/embedstore.hpp"
#include "codeprobe/error.hpp"
#include "codeprobe/lexer.hpp"
#include "codeprobe/mutator.hpp"
#include "codeprobe/probe.hpp"
#include "codeprobe/report.hpp"
#include "codeprobe/rng.hpp"
#include "codeprobe/structure.hpp"
#include "codeprobe/synth.hpp"
#include "codeprobe/taskgen.hpp"
#include "codeprobe/tasks.hpp"
