// Copyright 2026 The subjidx Authors
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

#ifndef SUBJIDX_SUBJIDX_HPP_
#define SUBJIDX_SUBJIDX_HPP_

#include "subjidx/distfit.hpp"
#include "subjidx/error.hpp"
#include "subjidx/ingest.hpp"
#include "subjidx/metrics.hpp"
#include "subjidx/model.hpp"
#include "subjidx/synthgen.hpp"
#include "subjidx/text.hpp"
#include "subjidx/typology.hpp"

#endif  // SUBJIDX_SUBJIDX_HPP_
