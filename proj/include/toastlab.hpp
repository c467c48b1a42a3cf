// Copyright 2026 The Toastlab Authors.
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

#ifndef TOASTLAB_TOASTLAB_HPP_
#define TOASTLAB_TOASTLAB_HPP_

#include "toastlab/error.hpp"
#include "toastlab/folner.hpp"
#include "toastlab/graph.hpp"
#include "toastlab/io.hpp"
#include "toastlab/level_sets.hpp"
#include "toastlab/matching.hpp"
#include "toastlab/metric.hpp"
#include "toastlab/oracles.hpp"
#include "toastlab/orientation.hpp"
#include "toastlab/rational.hpp"
#include "toastlab/report.hpp"
#include "toastlab/toast.hpp"
#include "toastlab/tree.hpp"

#endif  // TOASTLAB_TOASTLAB_HPP_
