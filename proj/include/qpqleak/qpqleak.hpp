// Copyright 2026 The qpqleak Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qpqleak/analytics.hpp"
#include "qpqleak/attacks.hpp"
#include "qpqleak/config.hpp"
#include "qpqleak/distillation.hpp"
#include "qpqleak/harness.hpp"
#include "qpqleak/protocol.hpp"
#include "qpqleak/random.hpp"
